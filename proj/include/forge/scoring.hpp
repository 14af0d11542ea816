// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"
#include "forge/refmodel.hpp"

namespace forge {

enum class Mode { ntp, rho1, mucpt };

/// "NTP", "RHO1", "MUCPT".
std::string_view to_string(Mode m);
/// Case-insensitive; throws InvalidArgument on anything else.
Mode mode_from_string(std::string_view s);

/// w_t = alpha / max(ce_rm_t, eps).
std::vector<double> mucpt_weights(std::span<const double> ce_rm, double alpha, double eps);

/// Marks the ceil(rho * n) largest excess losses (ce_model - ce_rm); ties go
/// to the smaller position.
std::vector<bool> rho1_select(std::span<const double> ce_model, std::span<const double> ce_rm, double rho);

struct TokenScoreRecord {
  std::string doc_id;
  std::size_t position = 0;
  double ce_model = 0.0;
  double ce_rm = 0.0;
  double weight = 1.0;
  bool selected = true;
  Mode mode = Mode::ntp;
  double alpha = 1.0;

  nlohmann::json to_json() const;
  static TokenScoreRecord from_json(const nlohmann::json& j);
  bool operator==(const TokenScoreRecord&) const = default;
};

/// NTP and MUCPT: sum(w * ce) / n. RHO1: mean ce over selected tokens.
double domain_batch_loss(std::span<const double> ce_model, std::span<const TokenScoreRecord> records);

struct ScoreParams {
  Mode mode = Mode::ntp;
  double alpha = 1.0;
  double eps = 0.05;
  double rho = 0.6;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Records for one document given both CE arrays.
std::vector<TokenScoreRecord> score_sequence(const std::string& doc_id, std::span<const double> ce_model,
                                             std::span<const double> ce_rm, const ScoreParams& params);

/// One record per scored token (tokens + EOS) of every document, in input
/// document order. Both sources must share a vocabulary.
std::vector<TokenScoreRecord> score_corpus(std::span<const Document> docs, const CeSource& rm,
                                           const CeSource& model, const ScoreParams& params);

std::string scores_to_jsonl(std::span<const TokenScoreRecord> records);
void write_scores(const std::filesystem::path& path, std::span<const TokenScoreRecord> records);
std::vector<TokenScoreRecord> read_scores(const std::filesystem::path& path);

}  // namespace forge
