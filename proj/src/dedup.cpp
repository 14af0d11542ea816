// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/dedup.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "forge/hash.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"

namespace forge {

using nlohmann::json;

namespace {

constexpr std::uint64_t kShingleSeed = 0x7368696e676c65ULL;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index becomes the root, so roots are deterministic.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ShingleSet shingle(std::span<const std::string> tokens, std::size_t k) {
  if (k == 0) throw InvalidArgument("shingle: k must be >= 1");
  ShingleSet out;
  if (tokens.size() < k) {
    out.insert(hash_tokens(tokens, kShingleSeed));
    return out;
  }
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) out.insert(hash_tokens(tokens.subspan(i, k), kShingleSeed));
  return out;
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double exact_jaccard(std::span<const std::string> a, std::span<const std::string> b, std::size_t k) {
  if (a.empty() && b.empty()) return 1.0;
  return exact_jaccard(shingle(a, k), shingle(b, k));
}

MinHashSignature minhash(const ShingleSet& shingles, const MinHashParams& params, std::string doc_id) {
  if (shingles.empty()) throw InvalidArgument("minhash: empty shingle set");
  if (params.num_hashes == 0) throw InvalidArgument("minhash: num_hashes must be >= 1");
  MinHashSignature out{std::move(doc_id), std::vector<std::uint64_t>(params.num_hashes), params};
  for (std::size_t i = 0; i < params.num_hashes; ++i) {
    const std::uint64_t salt = derive_seed(params.seed, i);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t s : shingles) best = std::min(best, mix64(s ^ salt));
    out.sig[i] = best;
  }
  return out;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (!(a.params == b.params) || a.sig.size() != b.sig.size()) {
    throw InvalidArgument("estimate_jaccard: signatures built with different parameters");
  }
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.sig.size(); ++i) equal += a.sig[i] == b.sig[i] ? 1 : 0;
  return static_cast<double>(equal) / static_cast<double>(a.sig.size());
}

LshIndex::LshIndex(MinHashParams params, std::size_t bands, std::size_t rows)
    : params_(params), bands_(bands), rows_(rows), buckets_(bands) {
  if (bands == 0 || rows == 0 || bands * rows != params.num_hashes) {
    throw InvalidArgument("LshIndex: num_hashes must equal bands * rows");
  }
}

void LshIndex::check(const MinHashSignature& sig) const {
  if (!(sig.params == params_) || sig.sig.size() != params_.num_hashes) {
    throw InvalidArgument("LshIndex: signature parameters do not match the index");
  }
}

std::uint64_t LshIndex::band_key(const MinHashSignature& sig, std::size_t band) const {
  std::uint64_t h = mix64(band + 1);
  for (std::size_t r = 0; r < rows_; ++r) h = mix64(h ^ sig.sig[band * rows_ + r]);
  return h;
}

void LshIndex::insert(const MinHashSignature& sig) {
  check(sig);
  const std::size_t idx = ids_.size();
  ids_.push_back(sig.doc_id);
  for (std::size_t b = 0; b < bands_; ++b) buckets_[b][band_key(sig, b)].push_back(idx);
}

std::set<std::string> LshIndex::candidates(const MinHashSignature& sig) const {
  check(sig);
  std::set<std::string> out;
  for (std::size_t b = 0; b < bands_; ++b) {
    auto it = buckets_[b].find(band_key(sig, b));
    if (it == buckets_[b].end()) continue;
    for (std::size_t idx : it->second) out.insert(ids_[idx]);
  }
  return out;
}

void DedupParams::validate() const {
  if (minhash.shingle_k == 0) throw InvalidArgument("dedup: shingle_k must be >= 1");
  if (bands == 0 || rows == 0 || bands * rows != minhash.num_hashes) {
    throw InvalidArgument("dedup: num_hashes must equal bands * rows");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("dedup: threshold must lie in (0,1]");
}

json DedupParams::to_json() const {
  return {{"num_hashes", minhash.num_hashes}, {"shingle_k", minhash.shingle_k}, {"seed", minhash.seed},
          {"bands", bands},                   {"rows", rows},                   {"threshold", threshold}};
}

json DedupCluster::to_json() const {
  return {{"keeper", keeper}, {"members", members}, {"est_jaccard", est_jaccard}};
}

DedupResult dedup_corpus(std::span<const Document> docs, const DedupParams& params) {
  params.validate();

  // Work in id order so the result does not depend on input order.
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return docs[a].id < docs[b].id; });

  std::vector<MinHashSignature> sigs(docs.size());
  parallel_for(order.size(), [&](std::size_t i) {
    const auto& d = docs[order[i]];
    sigs[i] = minhash(shingle(tokenize(d.text), params.minhash.shingle_k), params.minhash, d.id);
  });

  LshIndex index(params.minhash, params.bands, params.rows);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    index.insert(sigs[i]);
    pos.emplace(sigs[i].doc_id, i);
  }

  UnionFind uf(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    for (const auto& other : index.candidates(sigs[i])) {
      const std::size_t j = pos.at(other);
      if (j <= i) continue;
      if (estimate_jaccard(sigs[i], sigs[j]) >= params.threshold) uf.unite(i, j);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < sigs.size(); ++i) groups[uf.find(i)].push_back(i);

  DedupResult result;
  for (const auto& [root, members] : groups) {
    // Root is the smallest index, i.e. the smallest id.
    result.kept_ids.push_back(sigs[root].doc_id);
    if (members.size() < 2) continue;
    DedupCluster c;
    c.keeper = sigs[root].doc_id;
    for (std::size_t m : members) {
      c.members.push_back(sigs[m].doc_id);
      c.est_jaccard.push_back(m == root ? 1.0 : estimate_jaccard(sigs[root], sigs[m]));
    }
    result.clusters.push_back(std::move(c));
  }
  std::sort(result.kept_ids.begin(), result.kept_ids.end());
  return result;
}

}  // namespace forge
