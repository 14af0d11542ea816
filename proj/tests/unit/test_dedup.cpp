// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/dedup.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

// Jaccard over space-joined k-windows; independent of the hashed shingles.
double oracle_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t k) {
  auto grams = [k](const std::vector<std::string>& t) {
    std::set<std::string> s;
    if (t.size() < k) {
      s.insert(test::join(t));
      return s;
    }
    for (std::size_t i = 0; i + k <= t.size(); ++i) {
      s.insert(test::join(std::vector<std::string>(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i + k))));
    }
    return s;
  };
  const auto sa = grams(a), sb = grams(b);
  std::vector<std::string> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  const double uni = static_cast<double>(sa.size() + sb.size() - inter.size());
  return uni == 0 ? 1.0 : static_cast<double>(inter.size()) / uni;
}

}  // namespace

TEST_SUITE("dedup") {
  TEST_CASE("exact jaccard on a small case") {
    const std::vector<std::string> a{"a", "b", "c", "d"}, b{"a", "b", "c", "e"};
    // 2-shingles: {ab, bc, cd} vs {ab, bc, ce}
    CHECK(exact_jaccard(a, b, 2) == doctest::Approx(2.0 / 4.0));
    CHECK(exact_jaccard(a, a, 2) == 1.0);
    CHECK(exact_jaccard(std::vector<std::string>{"x"}, std::vector<std::string>{"x"}, 5) == 1.0);
  }

  TEST_CASE("property: exact jaccard matches the string oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = test::random_words(rng, rng.below(15), 4);
      const auto b = test::random_words(rng, rng.below(15), 4);
      const std::size_t k = 1 + rng.below(4);
      CHECK(exact_jaccard(a, b, k) == doctest::Approx(oracle_jaccard(a, b, k)).epsilon(1e-12));
    }
  }

  TEST_CASE("minhash of identical sets agrees everywhere") {
    Rng rng(32);
    const auto a = test::random_words(rng, 50, 100);
    const MinHashParams p;
    CHECK(estimate_jaccard(minhash(shingle(a, 5), p), minhash(shingle(a, 5), p)) == 1.0);
    MinHashParams other = p;
    other.seed += 1;
    CHECK_THROWS_AS(estimate_jaccard(minhash(shingle(a, 5), p), minhash(shingle(a, 5), other)), InvalidArgument);
  }

  TEST_CASE("minhash estimate is close to the exact value") {
    Rng rng(33);
    auto a = test::random_words(rng, 200, 5000);
    auto b = a;
    for (std::size_t i = 0; i < 200; i += 20) b[i] = "zz" + std::to_string(i);
    const double exact = exact_jaccard(a, b, 5);
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 40; ++s) {
      const MinHashParams p{128, 5, s};
      mean += estimate_jaccard(minhash(shingle(a, 5), p), minhash(shingle(b, 5), p)) / 40.0;
    }
    CHECK(std::abs(mean - exact) < 0.03);
  }

  TEST_CASE("lsh finds near duplicates and not strangers") {
    Rng rng(34);
    const auto a = test::random_words(rng, 200, 5000);
    auto b = a;
    b[100] = "changed";
    const auto c = test::random_words(rng, 200, 5000);
    const MinHashParams p;
    LshIndex index(p, 16, 8);
    index.insert(minhash(shingle(a, 5), p, "a"));
    index.insert(minhash(shingle(c, 5), p, "c"));
    const auto cand = index.candidates(minhash(shingle(b, 5), p, "b"));
    CHECK(cand.count("a") == 1);
    CHECK(cand.count("c") == 0);
    CHECK_THROWS(LshIndex(p, 10, 10));
  }

  TEST_CASE("dedup keeps the smallest id of each cluster") {
    Rng rng(35);
    const auto base = test::random_words(rng, 120, 5000);
    auto near = base;
    near[60] = "tweak";
    std::vector<Document> docs{test::doc("m", test::join(base)), test::doc("b", test::join(near)),
                               test::doc("z", test::join(test::random_words(rng, 120, 5000)))};
    const auto r = dedup_corpus(docs, DedupParams{});
    CHECK(r.kept_ids == std::vector<std::string>{"b", "z"});
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0].keeper == "b");
    CHECK(r.clusters[0].members == std::vector<std::string>{"b", "m"});
  }

  TEST_CASE("dedup is input-order independent") {
    Rng rng(36);
    std::vector<Document> docs;
    for (int i = 0; i < 30; ++i) {
      auto w = test::random_words(rng, 80, 300);
      docs.push_back(test::doc("d" + std::to_string(i), test::join(w)));
      if (i % 5 == 0) {
        w[10] = "edit";
        docs.push_back(test::doc("c" + std::to_string(i), test::join(w)));
      }
    }
    const auto a = dedup_corpus(docs, DedupParams{});
    std::reverse(docs.begin(), docs.end());
    const auto b = dedup_corpus(docs, DedupParams{});
    CHECK(a.kept_ids == b.kept_ids);
    CHECK(a.clusters.size() == 6);
  }

  TEST_CASE("params validation") {
    DedupParams p;
    p.bands = 3;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    DedupParams t;
    t.threshold = 1.5;
    CHECK_THROWS_AS(t.validate(), InvalidArgument);
  }
}
