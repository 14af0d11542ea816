// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"
#include "forge/rng.hpp"

namespace forge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

const std::vector<std::string> kRecipes{"noisy", "pipeline", "mined"};

struct RecipeData {
  std::vector<Document> domain;
  std::optional<std::map<std::string, double>> weights;
  std::string error;
};

// Runs classify -> clean -> dedup (and mine for "mined") under dir, reading
// the shared synthetic data.
RecipeData prepare_pipeline(const Config& c, const fs::path& data, const fs::path& dir, bool with_weights) {
  Config rc = c;
  rc.set("", "out_dir", dir.string());
  rc.set("classify", "pos", (data / "seed.jsonl").string());
  rc.set("classify", "neg", (data / "general.jsonl").string());
  rc.set("classify", "input", (data / "domain.jsonl").string());
  for (const char* k : {"model", "output", "report"}) rc.set("classify", k, "");
  for (const char* k : {"input", "output", "report", "summary"}) rc.set("clean", k, "");
  for (const char* k : {"input", "output", "clusters", "report"}) rc.set("dedup", k, "");
  stages::classify_train(rc);
  stages::classify_score(rc);
  stages::clean(rc);
  const json d = stages::dedup(rc);
  RecipeData out;
  out.domain = read_corpus(d["outputs"]["output"].get<std::string>());
  if (with_weights) {
    rc.set("mine", "anchors", (data / "anchors.json").string());
    rc.set("mine", "kb", (data / "kb.json").string());
    for (const char* k : {"input", "classifier", "matches", "graph", "weights"}) rc.set("mine", k, "");
    const json m = stages::mine(rc);
    out.weights = read_weights(m["outputs"]["weights"].get<std::string>());
  }
  return out;
}

json stats_json(const MetricStats& s) { return {{"mean", s.mean}, {"sd", s.sd}}; }

}  // namespace

json ExperimentOptions::to_json() const {
  json m = json::array();
  for (Mode mode : modes) m.push_back(std::string(to_string(mode)));
  return {{"modes", m},
          {"seeds", seeds},
          {"recipes", recipes},
          {"base_steps", base_steps},
          {"base_lr_max", base_lr_max},
          {"base_lr_min", base_lr_min},
          {"base_eval_every", base_eval_every}};
}

ExperimentOptions experiment_options(const Config& c) {
  ExperimentOptions o;
  const std::string sec = "experiment";
  if (c.has(sec, "modes")) {
    o.modes.clear();
    for (const auto& m : c.get_list(sec, "modes", {})) {
      try {
        o.modes.push_back(mode_from_string(m));
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("experiment: ") + e.what());
      }
    }
  }
  if (c.has(sec, "seeds")) {
    o.seeds.clear();
    for (double s : c.get_doubles(sec, "seeds", {})) {
      if (s < 0 || s != std::floor(s)) throw ConfigError("experiment: seeds must be non-negative integers");
      o.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  o.recipes = c.get_list(sec, "recipes", o.recipes);
  for (const auto& r : o.recipes) {
    if (std::find(kRecipes.begin(), kRecipes.end(), r) == kRecipes.end()) {
      throw ConfigError("experiment: unknown recipe '" + r + "' (noisy, pipeline, mined)");
    }
  }
  o.base_steps = c.get_size(sec, "base_steps", o.base_steps);
  o.base_lr_max = c.get_double(sec, "base_lr_max", o.base_lr_max);
  o.base_lr_min = c.get_double(sec, "base_lr_min", o.base_lr_min);
  o.base_eval_every = c.get_size(sec, "base_eval_every", o.base_eval_every);
  if (o.modes.empty() || o.seeds.empty() || o.recipes.empty()) {
    throw ConfigError("experiment: modes, seeds and recipes must be non-empty");
  }
  if (o.base_steps == 0) throw ConfigError("experiment: base_steps must be >= 1");
  if (!(o.base_lr_min > 0.0 && o.base_lr_min <= o.base_lr_max)) {
    throw ConfigError("experiment: need 0 < base_lr_min <= base_lr_max");
  }
  return o;
}

MetricStats stats(const std::vector<double>& xs) {
  MetricStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

ExperimentResult run_experiment(const Config& c) {
  const ExperimentOptions opts = experiment_options(c);
  const TrainConfig train_base = train_config(c);
  const ScoreParams score_base = score_params(c);
  const EvalConfig ec = eval_config(c);
  const fs::path out = c.out_dir();

  // Shared inputs: synthetic data, vocabulary, reference model and proxy.
  Config sc = c;
  sc.set("synth", "out", "");
  stages::synth(sc);
  const fs::path data = out / "data";
  Config rc = sc;
  for (const char* k : {"corpora", "output"}) rc.set("vocab", k, "");
  for (const char* k : {"seed_docs", "model", "proxy_corpora", "proxy", "report"}) rc.set("rm", k, "");
  stages::rm_train(rc);
  const Vocab vocab = Vocab::load(out / "vocab.json");
  const NGramLM rm = NGramLM::load(out / "rm/rm.json");
  const NGramLM proxy = NGramLM::load(out / "rm/proxy.json");
  const auto general = read_corpus(data / "general.jsonl");
  const auto heldout_domain = read_corpus(data / "heldout_domain.jsonl");
  const auto heldout_general = read_corpus(data / "heldout_general.jsonl");
  const auto qa = read_qa(data / "qa.jsonl");
  std::unique_ptr<JudgeClient> judge;
  if (ec.use_judge) judge = std::make_unique<HttpJudgeClient>(judge_config(c));

  // Base models: NTP on general data alone, one per seed.
  struct Base {
    std::optional<TinyLM> model;
    double general_ce = std::numeric_limits<double>::quiet_NaN();
    std::string error;
  };
  std::vector<Base> bases(opts.seeds.size());
  parallel_for(opts.seeds.size(), [&](std::size_t i) {
    try {
      TrainConfig tc = train_base;
      tc.mode = Mode::ntp;
      tc.general_mix_ratio = 1.0;
      tc.steps = opts.base_steps;
      tc.lr_max = opts.base_lr_max;
      tc.lr_min = opts.base_lr_min;
      tc.eval_every = opts.base_eval_every ? opts.base_eval_every : opts.base_steps;
      tc.seed = derive_seed(opts.seeds[i], 0x62617365);
      TrainData td{{}, {}, general, heldout_domain, heldout_general, nullptr, nullptr};
      auto res = train(tc, td, vocab);
      const fs::path dir = out / "base" / ("seed" + std::to_string(opts.seeds[i]));
      res.model.save(dir / "model.bin");
      io::write_atomic(dir / "metrics.csv", metrics_to_csv(res.history));
      bases[i].general_ce = res.history.back().heldout_general_ce;
      bases[i].model = std::move(res.model);
    } catch (const std::exception& e) {
      bases[i].error = std::string("base model: ") + e.what();
    }
  });

  // Per recipe: domain corpus, then one score file per mode.
  std::map<std::string, RecipeData> recipe_data;
  std::map<std::pair<std::string, Mode>, std::vector<TokenScoreRecord>> scores;
  std::map<std::pair<std::string, Mode>, std::string> score_errors;
  json noise = json::object();
  for (const auto& recipe : opts.recipes) {
    RecipeData& rd = recipe_data[recipe];
    try {
      if (recipe == "noisy") {
        rd.domain = read_corpus(data / "domain.jsonl");
      } else {
        rd = prepare_pipeline(c, data, out / "recipes" / recipe, recipe == "mined");
      }
    } catch (const std::exception& e) {
      rd.error = std::string("recipe ") + recipe + ": " + e.what();
      continue;
    }
    for (Mode mode : opts.modes) {
      try {
        ScoreParams sp = score_base;
        sp.mode = mode;
        auto recs = score_corpus(rd.domain, rm, proxy, sp);
        write_scores(out / "scores" / recipe / (lower(to_string(mode)) + ".jsonl"), recs);
        const auto split = noise_split(rd.domain, recs, mode == Mode::rho1);
        noise[recipe][std::string(to_string(mode))] = {{"noise_mean", split.noise_mean},
                                                       {"clean_mean", split.clean_mean},
                                                       {"noise_tokens", split.noise_tokens},
                                                       {"clean_tokens", split.clean_tokens}};
        scores[{recipe, mode}] = std::move(recs);
      } catch (const std::exception& e) {
        score_errors[{recipe, mode}] = std::string("scoring: ") + e.what();
      }
    }
  }

  ExperimentResult result;
  for (const auto& recipe : opts.recipes) {
    for (Mode mode : opts.modes) {
      for (auto seed : opts.seeds) {
        CellResult cell;
        cell.recipe = recipe;
        cell.mode = mode;
        cell.seed = seed;
        result.cells.push_back(std::move(cell));
      }
    }
  }
  parallel_for(result.cells.size(), [&](std::size_t i) {
    CellResult& cell = result.cells[i];
    const std::size_t si = i % opts.seeds.size();
    const Base& base = bases[si];
    cell.base_general_ce = base.general_ce;
    const RecipeData& rd = recipe_data.at(cell.recipe);
    const auto key = std::make_pair(cell.recipe, cell.mode);
    if (!base.error.empty() || !rd.error.empty() || score_errors.count(key)) {
      cell.error = !base.error.empty() ? base.error : !rd.error.empty() ? rd.error : score_errors.at(key);
      return;
    }
    try {
      TrainConfig tc = train_base;
      tc.mode = cell.mode;
      tc.seed = cell.seed;
      TrainData td{rd.domain,      scores.at(key),
                   general,        heldout_domain,
                   heldout_general, rd.weights ? &*rd.weights : nullptr,
                   &*base.model};
      auto res = train(tc, td, vocab);
      const fs::path dir =
          out / "runs" / cell.recipe / lower(to_string(cell.mode)) / ("seed" + std::to_string(cell.seed));
      res.model.save(dir / "model.bin");
      io::write_atomic(dir / "metrics.csv", metrics_to_csv(res.history));
      const auto report = evaluate(ModelAnswerSource(res.model, ec.max_answer_len), qa, ec, judge.get());
      io::write_json(dir / "eval.json", report.to_json());
      cell.heldout_domain_ce = res.history.back().heldout_domain_ce;
      cell.heldout_general_ce = res.history.back().heldout_general_ce;
      cell.qa_accuracy = report.accuracy;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  json agg_json = json::array();
  for (const auto& recipe : opts.recipes) {
    for (Mode mode : opts.modes) {
      Aggregate a;
      a.recipe = recipe;
      a.mode = mode;
      std::vector<double> dom, gen, acc, base_gen;
      for (const auto& cell : result.cells) {
        if (cell.recipe != recipe || cell.mode != mode) continue;
        ++a.n;
        if (!cell.ok) continue;
        ++a.n_ok;
        dom.push_back(cell.heldout_domain_ce);
        gen.push_back(cell.heldout_general_ce);
        acc.push_back(cell.qa_accuracy);
        base_gen.push_back(cell.base_general_ce);
      }
      a.heldout_domain_ce = stats(dom);
      a.heldout_general_ce = stats(gen);
      a.qa_accuracy = stats(acc);
      a.base_general_ce = stats(base_gen);
      a.forgetting = a.n_ok ? a.heldout_general_ce.mean / a.base_general_ce.mean - 1.0 : 0.0;
      agg_json.push_back({{"recipe", recipe},
                          {"mode", std::string(to_string(mode))},
                          {"n", a.n},
                          {"n_ok", a.n_ok},
                          {"heldout_domain_ce", stats_json(a.heldout_domain_ce)},
                          {"heldout_general_ce", stats_json(a.heldout_general_ce)},
                          {"qa_accuracy", stats_json(a.qa_accuracy)},
                          {"base_general_ce", stats_json(a.base_general_ce)},
                          {"forgetting", a.forgetting}});
      result.aggregates.push_back(a);
    }
  }
  json failures = json::array();
  for (const auto& cell : result.cells) {
    if (cell.ok) continue;
    ++result.failed;
    failures.push_back({{"recipe", cell.recipe},
                        {"mode", std::string(to_string(cell.mode))},
                        {"seed", cell.seed},
                        {"error", cell.error}});
  }

  json train_cfg = train_base.to_json();
  train_cfg.erase("mode");
  train_cfg.erase("seed");
  result.summary = {{"experiment", opts.to_json()},
                    {"train", train_cfg},
                    {"score", score_base.to_json()},
                    {"eval", ec.to_json()},
                    {"seed", c.seed()},
                    {"config", c.to_json()},
                    {"aggregates", agg_json},
                    {"noise_split", noise},
                    {"failures", failures}};
  io::write_atomic(out / "comparison.csv", comparison_csv(result));
  io::write_json(out / "summary.json", result.summary);
  return result;
}

std::string comparison_csv(const ExperimentResult& result) {
  std::string out =
      "mode,recipe,seed,status,heldout_domain_ce,heldout_domain_ce_sd,heldout_general_ce,heldout_general_ce_sd,"
      "qa_accuracy,qa_accuracy_sd\n";
  for (const auto& c : result.cells) {
    out += std::string(to_string(c.mode)) + "," + c.recipe + "," + std::to_string(c.seed) + ",";
    if (c.ok) {
      out += "ok," + fmt(c.heldout_domain_ce) + ",," + fmt(c.heldout_general_ce) + ",," + fmt(c.qa_accuracy) + ",\n";
    } else {
      out += "failed,,,,,,\n";
    }
  }
  for (const auto& a : result.aggregates) {
    out += std::string(to_string(a.mode)) + "," + a.recipe + ",mean,";
    if (a.n_ok == 0) {
      out += "failed,,,,,,\n";
      continue;
    }
    out += (a.n_ok == a.n ? std::string("ok") : "partial " + std::to_string(a.n_ok) + "/" + std::to_string(a.n));
    out += "," + fmt(a.heldout_domain_ce.mean) + "," + fmt(a.heldout_domain_ce.sd) + "," +
           fmt(a.heldout_general_ce.mean) + "," + fmt(a.heldout_general_ce.sd) + "," + fmt(a.qa_accuracy.mean) + "," +
           fmt(a.qa_accuracy.sd) + "\n";
  }
  return out;
}

}  // namespace forge
