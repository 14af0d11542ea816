// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "forge/io.hpp"
#include "forge/parallel.hpp"

namespace forge {

using nlohmann::json;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::ntp: return "NTP";
    case Mode::rho1: return "RHO1";
    case Mode::mucpt: return "MUCPT";
  }
  return "";
}

Mode mode_from_string(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "NTP") return Mode::ntp;
  if (up == "RHO1" || up == "RHO-1") return Mode::rho1;
  if (up == "MUCPT") return Mode::mucpt;
  throw InvalidArgument("unknown scoring mode: " + std::string(s));
}

std::vector<double> mucpt_weights(std::span<const double> ce_rm, double alpha, double eps) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("mucpt_weights: alpha must be > 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("mucpt_weights: eps must be > 0");
  std::vector<double> w(ce_rm.size());
  for (std::size_t i = 0; i < ce_rm.size(); ++i) {
    if (!std::isfinite(ce_rm[i])) throw InvalidArgument("mucpt_weights: non-finite ce_rm");
    w[i] = alpha / std::max(ce_rm[i], eps);
  }
  return w;
}

std::vector<bool> rho1_select(std::span<const double> ce_model, std::span<const double> ce_rm, double rho) {
  if (ce_model.size() != ce_rm.size()) throw InvalidArgument("rho1_select: length mismatch");
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("rho1_select: rho must lie in (0,1]");
  const std::size_t n = ce_model.size();
  std::vector<double> excess(n);
  for (std::size_t i = 0; i < n; ++i) excess[i] = ce_model[i] - ce_rm[i];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return excess[a] > excess[b]; });
  const auto k = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n) - 1e-12));
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < std::min(k, n); ++i) mask[order[i]] = true;
  return mask;
}

json TokenScoreRecord::to_json() const {
  return {{"doc_id", doc_id}, {"position", position}, {"ce_model", ce_model},
          {"ce_rm", ce_rm},   {"weight", weight},     {"selected", selected},
          {"mode", std::string(forge::to_string(mode))}, {"alpha", alpha}};
}

TokenScoreRecord TokenScoreRecord::from_json(const json& j) {
  TokenScoreRecord r;
  try {
    r.doc_id = j.at("doc_id").get<std::string>();
    r.position = j.at("position").get<std::size_t>();
    r.ce_model = j.at("ce_model").get<double>();
    r.ce_rm = j.at("ce_rm").get<double>();
    r.weight = j.at("weight").get<double>();
    r.selected = j.at("selected").get<bool>();
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    r.alpha = j.at("alpha").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("score record: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("score record: ") + e.what());
  }
  return r;
}

double domain_batch_loss(std::span<const double> ce_model, std::span<const TokenScoreRecord> records) {
  if (ce_model.size() != records.size()) throw InvalidArgument("domain_batch_loss: length mismatch");
  if (records.empty()) throw InvalidArgument("domain_batch_loss: empty batch");
  const Mode mode = records.front().mode;
  for (const auto& r : records) {
    if (r.mode != mode) throw InvalidArgument("domain_batch_loss: records mix modes");
  }
  double sum = 0.0;
  if (mode == Mode::rho1) {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!records[i].selected) continue;
      sum += ce_model[i];
      ++kept;
    }
    if (kept == 0) throw InvalidArgument("domain_batch_loss: no selected tokens");
    return sum / static_cast<double>(kept);
  }
  for (std::size_t i = 0; i < records.size(); ++i) sum += records[i].weight * ce_model[i];
  return sum / static_cast<double>(records.size());
}

void ScoreParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("score: alpha must be > 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("score: eps must be > 0");
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("score: rho must lie in (0,1]");
}

json ScoreParams::to_json() const {
  return {{"mode", std::string(to_string(mode))}, {"alpha", alpha}, {"eps", eps}, {"rho", rho}};
}

std::vector<TokenScoreRecord> score_sequence(const std::string& doc_id, std::span<const double> ce_model,
                                             std::span<const double> ce_rm, const ScoreParams& params) {
  if (ce_model.size() != ce_rm.size()) throw InvalidArgument("score_sequence: length mismatch");
  const std::size_t n = ce_rm.size();
  std::vector<TokenScoreRecord> out(n);
  std::vector<double> weights(n, 1.0);
  std::vector<bool> selected(n, true);
  if (params.mode == Mode::mucpt) weights = mucpt_weights(ce_rm, params.alpha, params.eps);
  if (params.mode == Mode::rho1) {
    selected = rho1_select(ce_model, ce_rm, params.rho);
    for (std::size_t i = 0; i < n; ++i) weights[i] = selected[i] ? 1.0 : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {doc_id, i, ce_model[i], ce_rm[i], weights[i], selected[i], params.mode, params.alpha};
  }
  return out;
}

std::vector<TokenScoreRecord> score_corpus(std::span<const Document> docs, const CeSource& rm,
                                           const CeSource& model, const ScoreParams& params) {
  params.validate();
  if (!(rm.vocab() == model.vocab())) throw InvalidArgument("score_corpus: reference and model vocabularies differ");
  std::vector<std::vector<TokenScoreRecord>> per_doc(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    const TokenIds ids = encode_document(rm.vocab(), docs[i].text);
    per_doc[i] = score_sequence(docs[i].id, model.nll(ids), rm.nll(ids), params);
  });
  std::vector<TokenScoreRecord> out;
  for (auto& recs : per_doc) out.insert(out.end(), recs.begin(), recs.end());
  return out;
}

std::string scores_to_jsonl(std::span<const TokenScoreRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

void write_scores(const std::filesystem::path& path, std::span<const TokenScoreRecord> records) {
  io::write_atomic(path, scores_to_jsonl(records));
}

std::vector<TokenScoreRecord> read_scores(const std::filesystem::path& path) {
  std::vector<TokenScoreRecord> out;
  for (const auto& j : io::read_jsonl(path)) out.push_back(TokenScoreRecord::from_json(j));
  return out;
}

}  // namespace forge
