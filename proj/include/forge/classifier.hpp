// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"

namespace forge {

/// Hashed n-gram counts: feature index -> count. Ordered for determinism.
using SparseVector = std::map<std::uint32_t, double>;

/// Each n-gram of an order in `orders` is hashed into [0, dim). `dim` must be
/// a power of two.
SparseVector featurize(std::span<const std::string> tokens, std::size_t dim, std::uint64_t seed,
                       std::span<const int> orders);

/// Hashed logistic-regression domain classifier.
struct ClassifierModel {
  std::size_t dim = std::size_t{1} << 18;
  std::vector<double> weights;
  double bias = 0.0;
  std::uint64_t hash_seed = 0;
  std::vector<int> ngram_orders{1, 2};

  /// Zero weights of size `dim`.
  static ClassifierModel zeros(std::size_t dim, std::uint64_t hash_seed, std::vector<int> orders = {1, 2});

  double logit(const SparseVector& features) const;
  SparseVector features(std::string_view text) const;

  void save(const std::filesystem::path& path) const;
  static ClassifierModel load(const std::filesystem::path& path);
  std::string serialize() const;
  static ClassifierModel deserialize(std::string_view bytes);

  bool operator==(const ClassifierModel&) const = default;
};

struct ClassifierTrainConfig {
  std::size_t dim = std::size_t{1} << 18;
  double lr = 0.1;
  std::size_t epochs = 3;
  std::vector<int> ngram_orders{1, 2};
  std::uint64_t hash_seed = 0x5eed;

  nlohmann::json to_json() const;
};

struct ClassifierTrainResult {
  ClassifierModel model;
  /// Mean log-loss over the whole training set after each epoch.
  std::vector<double> epoch_loss;
  double train_accuracy = 0.0;
};

/// Logistic regression by shuffled SGD. Examples are put into a canonical
/// order first, so the result does not depend on input order.
ClassifierTrainResult train_classifier(std::span<const Document> pos, std::span<const Document> neg,
                                       const ClassifierTrainConfig& config, std::uint64_t seed);

/// Probability that `doc` is in-domain.
double score(const ClassifierModel& model, const Document& doc);
double score_text(const ClassifierModel& model, std::string_view text);

/// Sampling weight from classifier confidence: 0 below t_drop, 1 at or above
/// t_full, linear in between.
double route(double p, double t_drop, double t_full);

}  // namespace forge
