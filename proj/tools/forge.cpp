// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

// forge: stage-by-stage corpus pipeline and objective comparison driver.
//
// Exit codes: 0 ok, 1 experiment finished with failed cells, 2 missing
// input, 3 configuration error, 4 any other failure.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/config.hpp"
#include "forge/experiment.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kMissingInput = 2;
constexpr int kConfigError = 3;
constexpr int kFailure = 4;

// A command-line option that overrides one config key when given.
struct Override {
  std::string section;
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

class Overrides {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& section, const std::string& key,
           const std::string& help) {
    auto o = std::make_unique<Override>();
    o->section = section;
    o->key = key;
    o->option = app->add_option(flag, o->value, help);
    items_.push_back(std::move(o));
  }

  void apply(forge::Config& config) const {
    for (const auto& o : items_) {
      if (o->option->count() > 0) config.set(o->section, o->key, o->value);
    }
  }

 private:
  std::vector<std::unique_ptr<Override>> items_;
};

void print_outputs(const nlohmann::json& report) {
  std::cout << report.value("stage", std::string("stage")) << ":";
  if (report.contains("outputs")) {
    for (const auto& [k, v] : report["outputs"].items()) std::cout << " " << k << "=" << v.get<std::string>();
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: domain corpus pipeline and token-weighted pretraining experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides overrides;
  app.add_option("--config", config_path, "Pipeline config file (INI: key = value, [section] blocks)");
  overrides.add(&app, "--seed", "", "seed", "Global seed");
  overrides.add(&app, "--out-dir", "", "out_dir", "Root for default stage inputs and outputs");
  overrides.add(&app, "--threads", "", "threads", "Worker threads for per-document loops");

  std::function<nlohmann::json(const forge::Config&)> stage;

  auto* synth = app.add_subcommand("synth", "Generate the synthetic corpus, KB, QA set and anchors");
  overrides.add(synth, "--noise-rate", "synth", "noise_rate", "Fraction of domain docs with boilerplate");
  synth->callback([&] { stage = forge::stages::synth; });

  auto* classify = app.add_subcommand("classify", "Train or apply the domain classifier");
  classify->require_subcommand(1);
  auto* classify_train = classify->add_subcommand("train", "Fit the classifier on positive and negative docs");
  overrides.add(classify_train, "--pos", "classify", "pos", "Positive (in-domain) corpus");
  overrides.add(classify_train, "--neg", "classify", "neg", "Negative corpus");
  overrides.add(classify_train, "--model", "classify", "model", "Output model file");
  overrides.add(classify_train, "--epochs", "classify", "epochs", "SGD epochs");
  classify_train->callback([&] { stage = forge::stages::classify_train; });
  auto* classify_score = classify->add_subcommand("score", "Score and route a corpus");
  overrides.add(classify_score, "--model", "classify", "model", "Classifier model file");
  overrides.add(classify_score, "--input", "classify", "input", "Corpus to score");
  overrides.add(classify_score, "--output", "classify", "output", "Kept documents");
  overrides.add(classify_score, "--t-drop", "classify", "t_drop", "Drop below this confidence");
  overrides.add(classify_score, "--t-full", "classify", "t_full", "Full weight at or above this confidence");
  classify_score->callback([&] { stage = forge::stages::classify_score; });

  auto* clean = app.add_subcommand("clean", "Normalize, language-gate, quality-gate and mask a corpus");
  overrides.add(clean, "--input", "clean", "input", "Input corpus");
  overrides.add(clean, "--output", "clean", "output", "Kept documents");
  overrides.add(clean, "--q-min", "clean", "q_min", "Minimum quality score");
  clean->callback([&] { stage = forge::stages::clean; });

  auto* dedup = app.add_subcommand("dedup", "MinHash/LSH near-duplicate removal");
  overrides.add(dedup, "--input", "dedup", "input", "Input corpus");
  overrides.add(dedup, "--output", "dedup", "output", "Kept documents");
  overrides.add(dedup, "--threshold", "dedup", "threshold", "Estimated Jaccard threshold");
  dedup->callback([&] { stage = forge::stages::dedup; });

  auto* mine = app.add_subcommand("mine", "Anchor matching, tri-graph and tail-upsampling weights");
  overrides.add(mine, "--input", "mine", "input", "Input corpus");
  overrides.add(mine, "--anchors", "mine", "anchors", "Anchors JSON");
  overrides.add(mine, "--tau", "mine", "tau", "Classifier confidence gate");
  overrides.add(mine, "--gamma", "mine", "gamma", "Upsampling exponent");
  overrides.add(mine, "--cap", "mine", "cap", "Upsampling cap");
  mine->callback([&] { stage = forge::stages::mine; });

  auto* rm = app.add_subcommand("rm", "Reference model");
  rm->require_subcommand(1);
  auto* rm_train = rm->add_subcommand("train", "Build the vocabulary and train the n-gram reference model");
  overrides.add(rm_train, "--seed-docs", "rm", "seed_docs", "Clean seed corpus");
  overrides.add(rm_train, "--model", "rm", "model", "Output model file");
  rm_train->callback([&] { stage = forge::stages::rm_train; });
  auto* rm_score = rm->add_subcommand("score", "Per-token reference CE for a corpus");
  overrides.add(rm_score, "--model", "rm", "model", "Reference model file");
  overrides.add(rm_score, "--input", "rm", "score_input", "Corpus to score");
  overrides.add(rm_score, "--output", "rm", "score_output", "Output JSON-lines");
  rm_score->callback([&] { stage = forge::stages::rm_score; });

  auto* score = app.add_subcommand("score", "Token weights for one objective");
  overrides.add(score, "--mode", "score", "mode", "ntp, rho1 or mucpt");
  overrides.add(score, "--alpha", "score", "alpha", "MUCPT scale");
  overrides.add(score, "--eps", "score", "eps", "Floor on the reference CE");
  overrides.add(score, "--rho", "score", "rho", "RHO-1 keep fraction");
  overrides.add(score, "--input", "score", "input", "Corpus to score");
  overrides.add(score, "--rm", "score", "rm", "Reference model");
  overrides.add(score, "--model-ce", "score", "model_ce", "Model-side CE source (n-gram JSON or TinyLM)");
  overrides.add(score, "--output", "score", "output", "Score records");
  score->callback([&] { stage = forge::stages::score; });

  auto* train = app.add_subcommand("train", "Train the tiny LM on mixed domain/general batches");
  overrides.add(train, "--mode", "score", "mode", "Objective; must match the score file");
  overrides.add(train, "--domain", "train", "domain", "Domain corpus");
  overrides.add(train, "--scores", "train", "scores", "Score records for the domain corpus");
  overrides.add(train, "--weights", "train", "weights", "Per-document sampling weights");
  overrides.add(train, "--init", "train", "init", "Continue from this model");
  overrides.add(train, "--steps", "train", "steps", "Optimizer steps");
  overrides.add(train, "--lr-max", "train", "lr_max", "Peak learning rate");
  overrides.add(train, "--lr-min", "train", "lr_min", "Final learning rate");
  overrides.add(train, "--mix", "train", "general_mix_ratio", "General share of each batch");
  overrides.add(train, "--model", "train", "model", "Output model file");
  train->callback([&] { stage = forge::stages::train; });

  auto* eval = app.add_subcommand("eval", "Closed-book QA agreement scoring");
  overrides.add(eval, "--qa", "eval", "qa", "QA items");
  overrides.add(eval, "--model", "eval", "model", "TinyLM model");
  overrides.add(eval, "--answers", "eval", "answers", "Answers file {id, prediction} instead of a model");
  overrides.add(eval, "--judge-url", "eval", "judge_url", "Judge endpoint base URL (enables the judge)");
  eval->callback([&] { stage = forge::stages::eval; });

  bool is_experiment = false;
  auto* experiment = app.add_subcommand("experiment", "Objective x recipe x seed comparison");
  overrides.add(experiment, "--modes", "experiment", "modes", "Comma-separated objectives");
  overrides.add(experiment, "--seeds", "experiment", "seeds", "Comma-separated seeds");
  overrides.add(experiment, "--recipes", "experiment", "recipes", "noisy, pipeline, mined");
  experiment->callback([&] { is_experiment = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    forge::Config config;
    if (!config_path.empty()) {
      if (!std::filesystem::exists(config_path)) throw forge::ConfigError("config file not found: " + config_path);
      config = forge::Config::load(config_path);
    }
    overrides.apply(config);
    if (eval->count() > 0 && config.has("eval", "judge_url")) config.set("eval", "use_judge", "true");
    const std::size_t threads = config.threads();
    if (threads == 0) throw forge::ConfigError("threads must be >= 1");
    forge::set_num_threads(threads);

    if (is_experiment) {
      const auto result = forge::run_experiment(config);
      std::cout << forge::comparison_csv(result);
      if (result.failed > 0) {
        std::cerr << "forge: " << result.failed << " of " << result.cells.size() << " experiment cells failed\n";
        return kPartial;
      }
      return kOk;
    }
    print_outputs(stage(config));
    return kOk;
  } catch (const forge::MissingInput& e) {
    std::cerr << "forge: missing input: " << e.what() << "\n";
    return kMissingInput;
  } catch (const forge::ConfigError& e) {
    std::cerr << "forge: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kFailure;
  }
}
