// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/config.hpp"
#include "forge/scoring.hpp"

namespace forge {

/// The [experiment] section.
///
/// Every cell continues pretraining from a base model trained with NTP on
/// general data alone (one base per seed). The base's held-out general CE is
/// the forgetting reference.
///
/// Recipes choose the domain corpus:
///   noisy     raw synthetic domain corpus
///   pipeline  classify -> clean -> dedup
///   mined     pipeline plus tail-upsampling weights from the mine stage
struct ExperimentOptions {
  std::vector<Mode> modes{Mode::ntp, Mode::rho1, Mode::mucpt};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<std::string> recipes{"noisy"};
  std::size_t base_steps = 4000;
  double base_lr_max = 0.4;
  double base_lr_min = 0.2;
  std::size_t base_eval_every = 0;  // 0: only at the end

  nlohmann::json to_json() const;
};

ExperimentOptions experiment_options(const Config& c);

struct CellResult {
  std::string recipe;
  Mode mode = Mode::ntp;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double heldout_domain_ce = 0.0;
  double heldout_general_ce = 0.0;
  double qa_accuracy = 0.0;
  /// Held-out general CE of this seed's base model.
  double base_general_ce = 0.0;
};

struct MetricStats {
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single value.
  double sd = 0.0;
};

struct Aggregate {
  std::string recipe;
  Mode mode = Mode::ntp;
  std::size_t n = 0;
  std::size_t n_ok = 0;
  MetricStats heldout_domain_ce;
  MetricStats heldout_general_ce;
  MetricStats qa_accuracy;
  MetricStats base_general_ce;
  /// mean general CE / mean base general CE - 1.
  double forgetting = 0.0;
};

struct ExperimentResult {
  /// Recipe-major, then mode, then seed, as configured.
  std::vector<CellResult> cells;
  std::vector<Aggregate> aggregates;
  std::size_t failed = 0;
  nlohmann::json summary;
};

MetricStats stats(const std::vector<double>& xs);

/// Runs the full matrix under out_dir. Cell failures are recorded, not thrown.
ExperimentResult run_experiment(const Config& c);

/// One row per cell, then one aggregate row (seed "mean", *_sd columns set)
/// per (mode, recipe).
std::string comparison_csv(const ExperimentResult& result);

}  // namespace forge
