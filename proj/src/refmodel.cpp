// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/refmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "forge/io.hpp"

namespace forge {

using nlohmann::json;

namespace {

constexpr int kIdBits = 21;
constexpr std::uint64_t kMaxVocab = std::uint64_t{1} << kIdBits;

constexpr std::uint64_t pack(std::uint64_t a, std::uint64_t b) { return (a << kIdBits) | b; }
constexpr std::uint64_t pack(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return (a << (2 * kIdBits)) | (b << kIdBits) | c;
}
constexpr std::uint64_t field(std::uint64_t key, int i) { return (key >> (i * kIdBits)) & (kMaxVocab - 1); }

std::uint64_t lookup(const std::unordered_map<std::uint64_t, std::uint64_t>& m, std::uint64_t key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

template <std::size_t N>
json sorted_entries(const std::unordered_map<std::uint64_t, std::uint64_t>& m) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items(m.begin(), m.end());
  std::sort(items.begin(), items.end());
  json out = json::array();
  for (const auto& [key, count] : items) {
    json row = json::array();
    for (std::size_t i = N; i-- > 0;) row.push_back(field(key, static_cast<int>(i)));
    row.push_back(count);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

void Lambdas::validate() const {
  const std::array<double, 4> v{l2, l1, l0, lu};
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("lambdas must be finite and non-negative");
  }
  if (std::abs(l2 + l1 + l0 + lu - 1.0) > 1e-9) throw InvalidArgument("lambdas must sum to 1");
}

json Lambdas::to_json() const { return json::array({l2, l1, l0, lu}); }

NGramLM::NGramLM(Vocab vocab, Lambdas lambdas) : vocab_(std::move(vocab)), lambdas_(lambdas) {
  lambdas_.validate();
  if (vocab_.size() >= kMaxVocab) throw InvalidArgument("NGramLM: vocabulary too large");
  unigram_.assign(vocab_.size(), 0);
}

void NGramLM::check_id(TokenId id) const {
  if (id >= vocab_.size()) throw InvalidArgument("NGramLM: token id out of range");
}

void NGramLM::add_sequence(std::span<const TokenId> ids) {
  TokenId u = Vocab::kBos;
  TokenId v = Vocab::kBos;
  for (TokenId w : ids) {
    check_id(w);
    ++unigram_[w];
    ++total_;
    ++bigram_[pack(v, w)];
    ++bigram_ctx_[v];
    ++trigram_[pack(u, v, w)];
    ++trigram_ctx_[pack(u, v)];
    u = v;
    v = w;
  }
}

double NGramLM::prob(TokenId u, TokenId v, TokenId w) const {
  check_id(u);
  check_id(v);
  check_id(w);
  double mass = lambdas_.lu / static_cast<double>(vocab_.size());
  double weight = lambdas_.lu;
  if (const auto ctx = lookup(trigram_ctx_, pack(u, v)); ctx > 0) {
    mass += lambdas_.l2 * static_cast<double>(lookup(trigram_, pack(u, v, w))) / static_cast<double>(ctx);
    weight += lambdas_.l2;
  }
  if (const auto ctx = lookup(bigram_ctx_, v); ctx > 0) {
    mass += lambdas_.l1 * static_cast<double>(lookup(bigram_, pack(v, w))) / static_cast<double>(ctx);
    weight += lambdas_.l1;
  }
  if (total_ > 0) {
    mass += lambdas_.l0 * static_cast<double>(unigram_[w]) / static_cast<double>(total_);
    weight += lambdas_.l0;
  }
  if (weight <= 0.0) {
    // Only undefined components carry weight: fall back to the unigram estimate.
    return total_ > 0 ? static_cast<double>(unigram_[w]) / static_cast<double>(total_)
                      : 1.0 / static_cast<double>(vocab_.size());
  }
  const bool all_defined = weight == lambdas_.lu + lambdas_.l2 + lambdas_.l1 + lambdas_.l0;
  return all_defined ? mass : mass / weight;
}

std::vector<double> NGramLM::nll(std::span<const TokenId> ids) const {
  std::vector<double> out;
  out.reserve(ids.size());
  TokenId u = Vocab::kBos;
  TokenId v = Vocab::kBos;
  for (TokenId w : ids) {
    out.push_back(-std::log(prob(u, v, w)));
    u = v;
    v = w;
  }
  return out;
}

json NGramLM::to_json() const {
  return {{"format", "forge-ngram"},
          {"version", 1},
          {"order", kOrder},
          {"lambdas", lambdas_.to_json()},
          {"vocab", vocab_.to_json()},
          {"unigram", unigram_},
          {"bigram", sorted_entries<2>(bigram_)},
          {"trigram", sorted_entries<3>(trigram_)}};
}

NGramLM NGramLM::from_json(const json& j) {
  try {
    if (j.at("format") != "forge-ngram" || j.at("version") != 1 || j.at("order") != kOrder) {
      throw FormatError("ngram model: unsupported format or version");
    }
    const auto& l = j.at("lambdas");
    NGramLM lm(Vocab::from_json(j.at("vocab")),
               {l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>(), l.at(3).get<double>()});
    auto uni = j.at("unigram").get<std::vector<std::uint64_t>>();
    if (uni.size() != lm.vocab_.size()) throw FormatError("ngram model: unigram table size mismatch");
    lm.unigram_ = std::move(uni);
    for (auto c : lm.unigram_) lm.total_ += c;
    for (const auto& row : j.at("bigram")) {
      const auto v = row.at(0).get<std::uint64_t>();
      const auto w = row.at(1).get<std::uint64_t>();
      const auto c = row.at(2).get<std::uint64_t>();
      lm.check_id(static_cast<TokenId>(v));
      lm.check_id(static_cast<TokenId>(w));
      lm.bigram_[pack(v, w)] = c;
      lm.bigram_ctx_[v] += c;
    }
    for (const auto& row : j.at("trigram")) {
      const auto u = row.at(0).get<std::uint64_t>();
      const auto v = row.at(1).get<std::uint64_t>();
      const auto w = row.at(2).get<std::uint64_t>();
      const auto c = row.at(3).get<std::uint64_t>();
      lm.check_id(static_cast<TokenId>(u));
      lm.check_id(static_cast<TokenId>(v));
      lm.check_id(static_cast<TokenId>(w));
      lm.trigram_[pack(u, v, w)] = c;
      lm.trigram_ctx_[pack(u, v)] += c;
    }
    return lm;
  } catch (const json::exception& e) {
    throw FormatError(std::string("ngram model: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("ngram model: ") + e.what());
  }
}

void NGramLM::save(const std::filesystem::path& path) const { io::write_json(path, to_json()); }

NGramLM NGramLM::load(const std::filesystem::path& path) {
  io::require_exists(path, "reference model");
  return from_json(io::read_json(path));
}

NGramLM train_rm(std::span<const Document> seed_docs, const Vocab& vocab, const Lambdas& lambdas) {
  if (seed_docs.empty()) throw InvalidArgument("train_rm: empty seed set");
  NGramLM lm(vocab, lambdas);
  for (const auto& d : seed_docs) lm.add_sequence(encode_document(vocab, d.text));
  return lm;
}

std::vector<double> rm_nll(const NGramLM& lm, std::span<const TokenId> ids) { return lm.nll(ids); }

double perplexity(const CeSource& lm, std::span<const TokenIds> sequences) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : sequences) {
    for (double ce : lm.nll(s)) sum += ce;
    n += s.size();
  }
  if (n == 0) throw InvalidArgument("perplexity: no tokens to score");
  return std::exp(sum / static_cast<double>(n));
}

double perplexity(const CeSource& lm, std::span<const Document> docs) {
  std::vector<TokenIds> seqs;
  seqs.reserve(docs.size());
  for (const auto& d : docs) seqs.push_back(encode_document(lm.vocab(), d.text));
  return perplexity(lm, std::span<const TokenIds>(seqs));
}

}  // namespace forge
