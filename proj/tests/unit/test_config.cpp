// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/config.hpp"
#include "forge/io.hpp"
#include "forge/pipeline.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_SUITE("config") {
  TEST_CASE("parse sections, globals and comments") {
    const auto c = Config::parse("seed = 7\n; note\n[train]\nsteps = 10\n# hash comment\n"
                                 "[score]\nmode = mucpt\nalpha=1.5\n");
    CHECK(c.seed() == 7);
    CHECK(c.get_double("score", "alpha", 0) == 1.5);
    CHECK(c.get_string("score", "mode", "") == "mucpt");
    CHECK(c.out_dir() == "forge_out");
  }

  TEST_CASE("strictness") {
    CHECK_THROWS_AS(Config::parse("[train]\nsteps = 1\nstep = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("[nosuch]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("[train]\nsteps = 1\nsteps = 2\n"), ConfigError);
    const auto c = Config::parse("[train]\nsteps = ten\nlr_max = 1e-3x\n");
    CHECK_THROWS_AS(c.get_size("train", "steps", 1), ConfigError);
    CHECK_THROWS_AS(c.get_double("train", "lr_max", 1), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/forge.conf"), ConfigError);
    Config d;
    CHECK_THROWS_AS(d.set("train", "bogus", "1"), ConfigError);
  }

  TEST_CASE("lists and paths") {
    Config c;
    c.set("", "out_dir", "/tmp/x");
    c.set("experiment", "seeds", " 1, 2 ,,3 ");
    CHECK(c.get_doubles("experiment", "seeds", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.path("train", "model", "train/model.bin") == std::filesystem::path("/tmp/x/train/model.bin"));
    c.set("train", "model", "m.bin");
    CHECK(c.path("train", "model", "train/model.bin") == std::filesystem::path("m.bin"));
    CHECK(c.optional_path("train", "init").empty());
  }

  TEST_CASE("property: canonical ini round trips") {
    Rng rng(51);
    const auto& schema = Config::schema();
    for (int trial = 0; trial < 30; ++trial) {
      Config c;
      for (int i = 0; i < 8; ++i) {
        auto it = schema.begin();
        std::advance(it, static_cast<long>(rng.below(schema.size())));
        const auto& keys = it->second;
        c.set(it->first, keys[rng.below(keys.size())], "v" + std::to_string(rng.below(100)));
      }
      CHECK(Config::parse(c.to_ini()).to_json() == c.to_json());
    }
  }

  TEST_CASE("typed views validate values") {
    CHECK_THROWS_AS(train_config(Config::parse("[train]\nlr_min = 0\n")), ConfigError);
    CHECK_THROWS_AS(score_params(Config::parse("[score]\nmode = sft\n")), ConfigError);
    CHECK_THROWS_AS(rm_lambdas(Config::parse("[rm]\nlambdas = 0.5, 0.5\n")), ConfigError);
    CHECK_THROWS_AS(dedup_params(Config::parse("[dedup]\nbands = 7\n")), ConfigError);
    const auto t = train_config(Config::parse("seed = 4\n[score]\nmode = rho1\nrho = 0.5\n[train]\nhidden = 16\n"));
    CHECK(t.mode == Mode::rho1);
    CHECK(t.rho == 0.5);
    CHECK(t.seed == 4);
    CHECK(t.model.hidden == 16);
  }
}

TEST_SUITE("pipeline") {
  TEST_CASE("stages chain on default paths") {
    test::TempDir tmp;
    auto c = Config::parse(
        "seed = 3\n[synth]\nn_artists = 8\nn_songs = 24\nn_domain_docs = 80\nn_general_docs = 40\n"
        "n_seed_docs = 30\nn_heldout_domain = 10\nn_heldout_general = 10\nn_qa = 12\ndup_rate = 0.1\n"
        "junk_rate = 0.05\n[classify]\ndim = 1024\n[score]\nmode = mucpt\nalpha = 2\n"
        "[train]\nsteps = 40\neval_every = 20\nbatch_size = 8\n");
    c.set("", "out_dir", tmp.path().string());

    stages::synth(c);
    stages::classify_train(c);
    stages::classify_score(c);
    stages::clean(c);
    const auto dd = stages::dedup(c);
    CHECK(dd["outputs"].contains("output"));
    CHECK(dd["n_kept"].get<std::size_t>() <= dd["n_in"].get<std::size_t>());
    stages::mine(c);
    stages::rm_train(c);
    stages::rm_score(c);
    stages::score(c);
    stages::train(c);
    const auto ev = stages::eval(c);

    const auto kept = read_corpus(tmp / "dedup/kept.jsonl");
    CHECK_FALSE(kept.empty());
    for (const auto& d : kept) {
      CHECK(d.flags.has(Flag::cleaned));
      CHECK(d.flags.has(Flag::deduped));
      CHECK(d.flags.has(Flag::domain));
    }
    CHECK(std::filesystem::exists(tmp / "train/model.bin"));
    CHECK(std::filesystem::exists(tmp / "eval/report.json"));
    CHECK(ev["result"]["accuracy"].get<double>() >= 0.0);
    CHECK(io::read_json(tmp / "score/report.json")["stage"] == "score");
  }

  TEST_CASE("missing inputs surface as MissingInput") {
    test::TempDir tmp;
    Config c;
    c.set("", "out_dir", tmp.path().string());
    CHECK_THROWS_AS(stages::clean(c), MissingInput);
    CHECK_THROWS_AS(stages::train(c), MissingInput);
    CHECK_THROWS_AS(stages::eval(c), MissingInput);
  }
}
