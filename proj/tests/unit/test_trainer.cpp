// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/trainer.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

TrainConfig schedule(std::size_t steps, double lr_max, double lr_min, double warmup) {
  TrainConfig c;
  c.steps = steps;
  c.lr_max = lr_max;
  c.lr_min = lr_min;
  c.warmup_frac = warmup;
  return c;
}

std::vector<Document> toy_corpus(std::uint64_t seed, std::size_t n, const std::string& prefix) {
  Rng rng(seed);
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back(test::doc(prefix + std::to_string(i), test::join(test::random_words(rng, 5 + rng.below(10), 12))));
  }
  return docs;
}

std::vector<Window> toy_batch(const TinyLM& m, Rng& rng, std::size_t n) {
  std::vector<Window> batch;
  const auto v = m.vocab().size();
  for (std::size_t i = 0; i < n; ++i) {
    Window w;
    for (std::size_t k = 0; k < m.config().context; ++k) w.context.push_back(static_cast<TokenId>(rng.below(v)));
    w.target = static_cast<TokenId>(rng.below(v));
    w.weight = rng.uniform(0.2, 3.0);
    batch.push_back(w);
  }
  return batch;
}

}  // namespace

TEST_SUITE("trainer") {
  TEST_CASE("schedule: warmup, peak, cosine midpoint and floor") {
    const auto c = schedule(20000, 6e-5, 3e-5, 0.0005);
    const std::size_t w = 10;  // ceil(0.0005 * 20000)
    CHECK(lr_at(c, 0) == 0.0);
    CHECK(std::abs(lr_at(c, w / 2) - 3e-5) < 1e-18);
    CHECK(lr_at(c, w) == 6e-5);
    CHECK(std::abs(lr_at(c, w + (20000 - w) / 2) - 4.5e-5) < 1e-15);
    CHECK(lr_at(c, 20000) == 3e-5);
    CHECK_THROWS_AS(lr_at(c, 20001), InvalidArgument);
  }

  TEST_CASE("property: schedule stays in range and decays monotonically") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const double hi = rng.uniform(1e-5, 1.0);
      const auto c = schedule(10 + rng.below(5000), hi, hi * rng.uniform(0.01, 1.0), rng.uniform(0.0, 0.2));
      const auto w = static_cast<std::size_t>(std::ceil(c.warmup_frac * static_cast<double>(c.steps)));
      double prev = lr_at(c, w);
      for (std::size_t s = w + 1; s <= c.steps; ++s) {
        const double lr = lr_at(c, s);
        CHECK(lr <= prev + 1e-15);
        CHECK(lr >= c.lr_min - 1e-15);
        prev = lr;
      }
      for (std::size_t s = 0; s < w; ++s) CHECK(lr_at(c, s) <= c.lr_max);
    }
  }

  TEST_CASE("gradient check over every parameter group") {
    const Vocab v({"a", "b", "c", "d", "e"});
    TinyLMConfig mc;
    mc.context = 3;
    mc.embed = 4;
    mc.hidden = 6;
    mc.output_init = 0.3;
    const TinyLM m(v, mc, 42);
    Rng rng(1);
    const auto batch = toy_batch(m, rng, 6);
    CHECK(grad_check(m, batch, 1e-4, 7, 120) <= 1e-4);
  }

  TEST_CASE("grad check catches a wrong gradient") {
    const Vocab v({"a", "b", "c"});
    TinyLMConfig mc;
    mc.context = 2;
    mc.embed = 3;
    mc.hidden = 4;
    mc.output_init = 0.3;
    const TinyLM m(v, mc, 1);
    Rng rng(2);
    const auto batch = toy_batch(m, rng, 4);
    const GradientFn wrong = [](const TinyLM& model, std::span<const Window> b, Gradients& g) {
      batch_gradient(model, b, g);
      for (auto& x : g.b1) x *= 1.5;
    };
    CHECK(grad_check(m, batch, 1e-4, 3, 100, wrong) > 1e-2);
  }

  TEST_CASE("serialization round trip") {
    test::TempDir tmp;
    TinyLMConfig mc;
    mc.output_init = 0.1;
    const TinyLM m(Vocab({"x", "y"}), mc, 5);
    m.save(tmp / "m.bin");
    CHECK(TinyLM::load(tmp / "m.bin") == m);
    CHECK_THROWS(TinyLM::from_bytes("NOTAMODEL"));
  }

  TEST_CASE("training lowers held-out CE and is deterministic") {
    const auto dom = toy_corpus(1, 40, "d");
    const auto gen = toy_corpus(2, 40, "g");
    const Vocab v = build_vocab(dom, 64);
    TrainConfig c;
    c.steps = 200;
    c.eval_every = 100;
    c.batch_size = 8;
    c.seed = 3;
    const TrainData data{dom, {}, gen, dom, gen, nullptr, nullptr};
    const auto a = train(c, data, v);
    const auto b = train(c, data, v);
    CHECK(a.model == b.model);
    REQUIRE(a.history.size() >= 2);
    CHECK(a.history.back().heldout_domain_ce < std::log(static_cast<double>(v.size())));
    CHECK(a.history.back().heldout_domain_ce == doctest::Approx(mean_ce(a.model, dom)).epsilon(1e-12));
  }

  TEST_CASE("mucpt with ce_rm equal to alpha reproduces ntp bit for bit") {
    const auto dom = toy_corpus(4, 30, "d");
    const auto gen = toy_corpus(5, 30, "g");
    const Vocab v = build_vocab(dom, 64);
    TrainConfig c;
    c.steps = 150;
    c.eval_every = 50;
    c.batch_size = 8;
    c.seed = 11;
    const double alpha = 1.7;
    std::vector<TokenScoreRecord> recs;
    for (const auto& d : dom) {
      const auto n = encode_document(v, d.text).size();
      const std::vector<double> flat(n, alpha);
      const auto r = score_sequence(d.id, flat, flat, {Mode::mucpt, alpha, 0.05, 0.6});
      recs.insert(recs.end(), r.begin(), r.end());
    }
    const auto ntp = train(c, {dom, {}, gen, dom, gen, nullptr, nullptr}, v);
    c.mode = Mode::mucpt;
    c.alpha = alpha;
    const auto mu = train(c, {dom, recs, gen, dom, gen, nullptr, nullptr}, v);
    CHECK(mu.model == ntp.model);
    REQUIRE(mu.history.size() == ntp.history.size());
    for (std::size_t i = 0; i < mu.history.size(); ++i) CHECK(mu.history[i].train_loss == ntp.history[i].train_loss);
  }

  TEST_CASE("mismatched score records are rejected") {
    const auto dom = toy_corpus(6, 5, "d");
    const Vocab v = build_vocab(dom, 64);
    TrainConfig c;
    c.steps = 5;
    c.mode = Mode::mucpt;
    c.general_mix_ratio = 0.0;
    CHECK_THROWS_AS(train(c, {dom, {}, {}, {}, {}, nullptr, nullptr}, v), InvalidArgument);
  }

  TEST_CASE("continuing from an init model") {
    const auto dom = toy_corpus(7, 20, "d");
    const Vocab v = build_vocab(dom, 64);
    TrainConfig c;
    c.steps = 30;
    c.general_mix_ratio = 0.0;
    c.eval_every = 30;
    const auto first = train(c, {dom, {}, {}, dom, {}, nullptr, nullptr}, v);
    const auto second = train(c, {dom, {}, {}, dom, {}, nullptr, &first.model}, v);
    CHECK_FALSE(second.model == first.model);
    TrainConfig other = c;
    other.model.hidden = c.model.hidden + 1;
    CHECK_THROWS(train(other, {dom, {}, {}, dom, {}, nullptr, &first.model}, v));
  }

  TEST_CASE("context padding") {
    const TokenIds ids{5, 6, 7};
    CHECK(context_at(ids, 0, 2) == std::vector<TokenId>{Vocab::kBos, Vocab::kBos});
    CHECK(context_at(ids, 2, 3) == std::vector<TokenId>{Vocab::kBos, 5, 6});
  }
}
