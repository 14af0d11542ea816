// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/scoring.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_SUITE("scoring") {
  TEST_CASE("mucpt weight is alpha over the floored RM loss") {
    const std::vector<double> ce{0.5, 2.0, 0.01, 0.05};
    const auto w = mucpt_weights(ce, 2.0, 0.05);
    CHECK(w[0] == doctest::Approx(4.0));
    CHECK(w[1] == doctest::Approx(1.0));
    CHECK(w[2] == doctest::Approx(40.0));  // floored at eps
    CHECK(w[3] == doctest::Approx(40.0));
  }

  TEST_CASE("property: per-token loss identity") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const double alpha = rng.uniform(0.1, 4.0);
      const double eps = 0.05;
      const double ce_rm = rng.uniform(eps, 10.0);
      const double ce_model = rng.uniform(0.0, 10.0);
      const ScoreParams p{Mode::mucpt, alpha, eps, 0.6};
      const auto rec = score_sequence("d", std::vector<double>{ce_model}, std::vector<double>{ce_rm}, p);
      const double loss = domain_batch_loss(std::vector<double>{ce_model}, rec);
      CHECK(std::abs(loss - alpha * ce_model / ce_rm) <= 1e-12 * std::max(1.0, loss));
      // At the reference loss the token costs exactly alpha.
      const auto same = score_sequence("d", std::vector<double>{ce_rm}, std::vector<double>{ce_rm}, p);
      CHECK(std::abs(domain_batch_loss(std::vector<double>{ce_rm}, same) - alpha) <= 1e-12 * alpha);
    }
  }

  TEST_CASE("rho1 keeps the largest excess losses") {
    const std::vector<double> model{3.0, 1.0, 2.0, 5.0, 2.0};
    const std::vector<double> rm{1.0, 1.0, 1.0, 1.0, 1.0};
    // excess 2,0,1,4,1; ceil(.6*5)=3 -> positions 3, 0, then the first of the tied 1s.
    CHECK(rho1_select(model, rm, 0.6) == std::vector<bool>{true, false, true, true, false});
    CHECK(rho1_select(model, rm, 1.0) == std::vector<bool>(5, true));
  }

  TEST_CASE("property: rho1 selects ceil(rho n) tokens dominating the rest") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + rng.below(40);
      std::vector<double> m(n), r(n);
      for (std::size_t i = 0; i < n; ++i) {
        m[i] = std::round(rng.uniform(0, 6) * 4) / 4;  // quantized to create ties
        r[i] = std::round(rng.uniform(0, 6) * 4) / 4;
      }
      const double rho = rng.uniform(0.05, 1.0);
      const auto sel = rho1_select(m, r, rho);
      const auto k = static_cast<std::size_t>(std::count(sel.begin(), sel.end(), true));
      CHECK(k == static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n))));
      double min_kept = 1e300, max_dropped = -1e300;
      for (std::size_t i = 0; i < n; ++i) {
        if (sel[i]) {
          min_kept = std::min(min_kept, m[i] - r[i]);
        } else {
          max_dropped = std::max(max_dropped, m[i] - r[i]);
        }
      }
      CHECK(min_kept >= max_dropped);
    }
  }

  TEST_CASE("batch loss per mode") {
    const std::vector<double> ce{1.0, 2.0, 3.0};
    const std::vector<double> rm{1.0, 4.0, 0.5};
    auto ntp = score_sequence("d", ce, rm, {Mode::ntp, 1.0, 0.05, 0.6});
    CHECK(domain_batch_loss(ce, ntp) == doctest::Approx(2.0));
    auto mu = score_sequence("d", ce, rm, {Mode::mucpt, 1.0, 0.05, 0.6});
    CHECK(domain_batch_loss(ce, mu) == doctest::Approx((1.0 + 0.5 + 6.0) / 3.0));
    // excess 0, -2, 2.5; ceil(.6*3)=2 keeps positions 0 and 2.
    auto rho = score_sequence("d", ce, rm, {Mode::rho1, 1.0, 0.05, 0.6});
    CHECK(domain_batch_loss(ce, rho) == doctest::Approx(2.0));
  }

  TEST_CASE("mode strings") {
    CHECK(mode_from_string("MuCPT") == Mode::mucpt);
    CHECK(to_string(Mode::rho1) == "RHO1");
    CHECK_THROWS_AS(mode_from_string("sft"), InvalidArgument);
  }

  TEST_CASE("params validation") {
    CHECK_THROWS_AS((ScoreParams{Mode::mucpt, 0.0, 0.05, 0.6}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ScoreParams{Mode::mucpt, 1.0, 0.0, 0.6}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ScoreParams{Mode::rho1, 1.0, 0.05, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ScoreParams{Mode::rho1, 1.0, 0.05, 1.5}).validate(), InvalidArgument);
  }

  TEST_CASE("score corpus covers every token and round trips") {
    const std::vector<Document> seed{test::doc("s", "a b c a b")};
    const Vocab v = build_vocab(seed, 16);
    const NGramLM rm = train_rm(seed, v);
    const std::vector<Document> docs{test::doc("x", "a b"), test::doc("y", "c c c")};
    const auto recs = score_corpus(docs, rm, rm, {Mode::mucpt, 2.0, 0.05, 0.6});
    REQUIRE(recs.size() == 3 + 4);
    CHECK(recs[0].doc_id == "x");
    CHECK(recs[3].doc_id == "y");
    CHECK(recs[3].position == 0);
    for (const auto& r : recs) CHECK(r.weight == doctest::Approx(2.0 / std::max(r.ce_rm, 0.05)));

    test::TempDir tmp;
    write_scores(tmp / "s.jsonl", recs);
    CHECK(read_scores(tmp / "s.jsonl") == recs);
  }
}
