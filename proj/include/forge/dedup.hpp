// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"

namespace forge {

using ShingleSet = std::set<std::uint64_t>;

/// Hashes of every contiguous k-token window. Sequences shorter than k yield
/// the single hash of the whole sequence.
ShingleSet shingle(std::span<const std::string> tokens, std::size_t k);

/// |A ∩ B| / |A ∪ B| over exact k-shingle sets; 1 when both are empty.
double exact_jaccard(std::span<const std::string> a, std::span<const std::string> b, std::size_t k);
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

struct MinHashParams {
  std::size_t num_hashes = 128;
  std::size_t shingle_k = 5;
  std::uint64_t seed = 0x6d696e68;

  bool operator==(const MinHashParams&) const = default;
};

struct MinHashSignature {
  std::string doc_id;
  std::vector<std::uint64_t> sig;
  MinHashParams params;
};

/// Component i is the minimum over shingles of the i-th seeded hash.
MinHashSignature minhash(const ShingleSet& shingles, const MinHashParams& params, std::string doc_id = {});

/// Fraction of equal components. Throws when parameters differ.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

/// Banded LSH index over MinHash signatures (num_hashes = bands * rows).
class LshIndex {
 public:
  LshIndex(MinHashParams params, std::size_t bands, std::size_t rows);

  /// Not thread-safe; build with a single writer, then query concurrently.
  void insert(const MinHashSignature& sig);
  /// Ids of every indexed signature that shares at least one full band.
  std::set<std::string> candidates(const MinHashSignature& sig) const;

  std::size_t size() const { return ids_.size(); }
  std::size_t bands() const { return bands_; }
  std::size_t rows() const { return rows_; }

 private:
  std::uint64_t band_key(const MinHashSignature& sig, std::size_t band) const;
  void check(const MinHashSignature& sig) const;

  MinHashParams params_;
  std::size_t bands_;
  std::size_t rows_;
  std::vector<std::string> ids_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::size_t>>> buckets_;
};

struct DedupParams {
  MinHashParams minhash;
  std::size_t bands = 16;
  std::size_t rows = 8;
  double threshold = 0.8;

  void validate() const;
  nlohmann::json to_json() const;
};

struct DedupCluster {
  std::string keeper;
  /// Sorted member ids, keeper included.
  std::vector<std::string> members;
  /// Estimated Jaccard of each member against the keeper (1 for the keeper).
  std::vector<double> est_jaccard;

  nlohmann::json to_json() const;
};

struct DedupResult {
  /// Sorted ids of the documents to keep.
  std::vector<std::string> kept_ids;
  /// Clusters with two or more members, ordered by keeper id.
  std::vector<DedupCluster> clusters;
};

/// LSH candidates verified by estimated Jaccard >= threshold, merged by
/// union-find; each cluster keeps its lexicographically smallest id.
DedupResult dedup_corpus(std::span<const Document> docs, const DedupParams& params);

}  // namespace forge
