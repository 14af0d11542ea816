// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "forge/classifier.hpp"
#include "forge/cleaner.hpp"
#include "forge/config.hpp"
#include "forge/dedup.hpp"
#include "forge/evalqa.hpp"
#include "forge/refmodel.hpp"
#include "forge/scoring.hpp"
#include "forge/synth.hpp"
#include "forge/trainer.hpp"

namespace forge {

// Typed views of the config. Out-of-range values raise ConfigError.
SynthConfig synth_config(const Config& c);
ClassifierTrainConfig classifier_config(const Config& c);
CleanConfig clean_config(const Config& c);
DedupParams dedup_params(const Config& c);
Lambdas rm_lambdas(const Config& c);
ScoreParams score_params(const Config& c);
/// [train] plus mode/alpha/eps/rho from [score] and the global seed.
TrainConfig train_config(const Config& c);
EvalConfig eval_config(const Config& c);
HttpJudgeConfig judge_config(const Config& c);

struct MineParams {
  double tau = 0.5;
  double gamma = 0.5;
  double cap = 3.0;
  double recency_boost = 1.5;

  nlohmann::json to_json() const;
};
MineParams mine_params(const Config& c);

/// Loads an n-gram JSON model or a TinyLM binary, by content.
std::unique_ptr<CeSource> load_ce_source(const std::filesystem::path& path);

std::map<std::string, double> read_weights(const std::filesystem::path& path);

/// Mean MUCPT weight (or RHO1 keep rate) over tokens inside and outside the
/// noise spans recorded by the synthetic generator. Positions follow
/// encode_document, so the trailing EOS counts as clean.
struct NoiseSplit {
  double noise_mean = 0.0;
  double clean_mean = 0.0;
  std::size_t noise_tokens = 0;
  std::size_t clean_tokens = 0;
};
/// `use_selection` averages the 0/1 selection flag instead of the weight.
NoiseSplit noise_split(std::span<const Document> docs, std::span<const TokenScoreRecord> records,
                       bool use_selection);

// Pipeline stages. Each reads its inputs from the config (defaults under
// out_dir), writes its outputs atomically, and writes a JSON report that
// embeds the effective configuration. The report is also returned.
namespace stages {

nlohmann::json synth(const Config& c);
nlohmann::json classify_train(const Config& c);
nlohmann::json classify_score(const Config& c);
nlohmann::json clean(const Config& c);
nlohmann::json dedup(const Config& c);
nlohmann::json mine(const Config& c);
/// Builds the vocabulary, the reference model on the seed set and the n-gram
/// proxy used as the model-side CE source during scoring.
nlohmann::json rm_train(const Config& c);
/// Per-document arrays of reference-model CE.
nlohmann::json rm_score(const Config& c);
nlohmann::json score(const Config& c);
nlohmann::json train(const Config& c);
nlohmann::json eval(const Config& c);

}  // namespace stages

}  // namespace forge
