// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"

namespace forge {

/// Anything that assigns a per-token cross-entropy (nats) to an encoded
/// document. Input is the scored sequence (tokens + EOS); the BOS context is
/// implicit. Output has the same length as the input.
class CeSource {
 public:
  virtual ~CeSource() = default;
  virtual const Vocab& vocab() const = 0;
  virtual std::vector<double> nll(std::span<const TokenId> ids) const = 0;
};

/// Interpolation weights (trigram, bigram, unigram, uniform).
struct Lambdas {
  double l2 = 0.5;
  double l1 = 0.3;
  double l0 = 0.15;
  double lu = 0.05;

  void validate() const;
  nlohmann::json to_json() const;
  bool operator==(const Lambdas&) const = default;
};

/// Order-3 count model with fixed-weight linear interpolation.
///
/// When a context has never been seen, its maximum-likelihood term is
/// undefined and the remaining weights are renormalized, so every
/// conditional distribution still sums to one.
class NGramLM : public CeSource {
 public:
  static constexpr int kOrder = 3;

  NGramLM(Vocab vocab, Lambdas lambdas);

  /// Accumulates counts for one scored sequence (tokens + EOS).
  void add_sequence(std::span<const TokenId> ids);

  /// p(w | u v); u, v may be BOS.
  double prob(TokenId u, TokenId v, TokenId w) const;

  const Vocab& vocab() const override { return vocab_; }
  std::vector<double> nll(std::span<const TokenId> ids) const override;

  const Lambdas& lambdas() const { return lambdas_; }
  std::uint64_t total_tokens() const { return total_; }

  nlohmann::json to_json() const;
  static NGramLM from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static NGramLM load(const std::filesystem::path& path);

 private:
  void check_id(TokenId id) const;

  Vocab vocab_;
  Lambdas lambdas_;
  std::vector<std::uint64_t> unigram_;
  std::uint64_t total_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> bigram_;
  std::unordered_map<std::uint64_t, std::uint64_t> bigram_ctx_;
  std::unordered_map<std::uint64_t, std::uint64_t> trigram_;
  std::unordered_map<std::uint64_t, std::uint64_t> trigram_ctx_;
};

/// Counts every document as BOS BOS tokens EOS. Throws on an empty seed set.
NGramLM train_rm(std::span<const Document> seed_docs, const Vocab& vocab, const Lambdas& lambdas = {});

/// Per-token CE over tokens + EOS.
std::vector<double> rm_nll(const NGramLM& lm, std::span<const TokenId> ids);

/// exp(mean CE) over every scored token. Throws when there are none.
double perplexity(const CeSource& lm, std::span<const TokenIds> sequences);
double perplexity(const CeSource& lm, std::span<const Document> docs);

}  // namespace forge
