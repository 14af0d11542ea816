// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <doctest.h>

#include "forge/classifier.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

std::vector<Document> docs_from(Rng& rng, const std::vector<std::string>& words, std::size_t n, const std::string& p) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    for (int k = 0; k < 12; ++k) t += words[rng.below(words.size())] + " ";
    out.push_back(test::doc(p + std::to_string(i), t));
  }
  return out;
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("routing is piecewise linear") {
    CHECK(route(0.1, 0.3, 0.8) == 0.0);
    CHECK(route(0.3, 0.3, 0.8) == doctest::Approx(0.0));
    CHECK(route(0.55, 0.3, 0.8) == doctest::Approx(0.5));
    CHECK(route(0.8, 0.3, 0.8) == 1.0);
    CHECK(route(0.99, 0.3, 0.8) == 1.0);
  }

  TEST_CASE("featurize counts hashed n-grams") {
    const Tokens t{"a", "b", "a", "b"};
    const std::vector<int> orders{1, 2};
    const auto f = featurize(t, 1 << 12, 9, orders);
    double total = 0;
    for (const auto& [_, c] : f) total += c;
    CHECK(total == 4 + 3);
    for (const auto& [k, _] : f) CHECK(k < (1u << 12));
  }

  TEST_CASE("separable data is learned; input order does not matter") {
    Rng rng(41);
    const std::vector<std::string> music{"song", "album", "singer", "chorus", "melody", "concert", "lyrics"};
    const std::vector<std::string> other{"tax", "river", "engine", "protein", "senate", "glacier", "bond"};
    auto pos = docs_from(rng, music, 60, "p");
    auto neg = docs_from(rng, other, 60, "n");
    ClassifierTrainConfig cfg;
    cfg.dim = 1 << 12;
    const auto a = train_classifier(pos, neg, cfg, 1);
    CHECK(a.train_accuracy == 1.0);
    CHECK(a.epoch_loss.back() < a.epoch_loss.front());
    CHECK(score_text(a.model, "singer album chorus melody lyrics") > 0.8);
    CHECK(score_text(a.model, "senate tax bond river glacier") < 0.2);

    std::reverse(pos.begin(), pos.end());
    std::reverse(neg.begin(), neg.end());
    const auto b = train_classifier(pos, neg, cfg, 1);
    CHECK(a.model == b.model);
  }

  TEST_CASE("model round trip") {
    test::TempDir tmp;
    auto m = ClassifierModel::zeros(1 << 8, 5);
    m.weights[3] = 0.5;
    m.bias = -0.25;
    m.save(tmp / "c.bin");
    CHECK(ClassifierModel::load(tmp / "c.bin") == m);
    CHECK_THROWS(ClassifierModel::deserialize("garbage"));
  }
}
