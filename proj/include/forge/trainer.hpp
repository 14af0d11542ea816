// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"
#include "forge/refmodel.hpp"
#include "forge/scoring.hpp"

namespace forge {

struct TinyLMConfig {
  std::size_t context = 4;
  std::size_t embed = 32;
  std::size_t hidden = 64;
  /// Std-dev of the output-layer init. Zero gives uniform predictions at step 0.
  double output_init = 0.0;

  nlohmann::json to_json() const;
};

/// Parameter-shaped buffer. Layout matches TinyLM.
struct Gradients {
  std::vector<double> embedding;  // V x d
  std::vector<double> w1;         // h x (m*d)
  std::vector<double> b1;         // h
  std::vector<double> w2;         // V x h
  std::vector<double> b2;         // V

  void zero();
  std::array<std::span<double>, 5> groups();
};

/// Fixed-window feed-forward LM: concatenated context embeddings, one tanh
/// hidden layer, softmax output.
class TinyLM : public CeSource {
 public:
  TinyLM(Vocab vocab, TinyLMConfig config, std::uint64_t seed);

  struct Cache {
    std::vector<TokenId> context;
    std::vector<double> x;       // m*d
    std::vector<double> hidden;  // h, after tanh
    std::vector<double> probs;   // V
    TokenId target = 0;
  };

  /// -ln softmax(logits)[target]; fills `cache` when given.
  double forward_nll(std::span<const TokenId> context, TokenId target, Cache* cache = nullptr) const;
  std::vector<double> probabilities(std::span<const TokenId> context) const;

  /// Adds the gradient of (weight * ce) to `grads`.
  void backward(const Cache& cache, double weight, Gradients& grads) const;

  Gradients zero_gradients() const;
  /// params -= lr * grads
  void apply(const Gradients& grads, double lr);

  const Vocab& vocab() const override { return vocab_; }
  std::vector<double> nll(std::span<const TokenId> ids) const override;

  const TinyLMConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_parameters() const;
  std::array<std::span<double>, 5> groups();
  std::array<std::span<const double>, 5> groups() const;
  static constexpr std::array<const char*, 5> kGroupNames{"embedding", "w1", "b1", "w2", "b2"};

  bool operator==(const TinyLM& other) const;

  std::string to_bytes() const;
  static TinyLM from_bytes(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static TinyLM load(const std::filesystem::path& path);

 private:
  Vocab vocab_;
  TinyLMConfig config_;
  std::uint64_t seed_;
  Gradients p_;
};

/// The m ids preceding position t of `ids`, padded on the left with BOS.
std::vector<TokenId> context_at(std::span<const TokenId> ids, std::size_t t, std::size_t m);

enum class Rho1Scope { document, batch };

struct TrainConfig {
  std::size_t steps = 2000;
  std::size_t batch_size = 32;
  double lr_max = 0.2;
  double lr_min = 0.1;
  double warmup_frac = 0.0005;
  double general_mix_ratio = 0.2;
  Mode mode = Mode::ntp;
  double alpha = 1.0;
  double eps = 0.05;
  double rho = 0.6;
  Rho1Scope rho1_scope = Rho1Scope::document;
  std::uint64_t seed = 0;
  std::size_t eval_every = 500;
  TinyLMConfig model;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Warmup over W = ceil(warmup_frac * T) steps, then cosine decay to lr_min.
double lr_at(const TrainConfig& config, std::size_t step);

/// One (context, target) example with its loss weight.
struct Window {
  std::vector<TokenId> context;
  TokenId target = 0;
  double weight = 1.0;
  double ce_rm = 0.0;
  bool selected = true;
};

struct MetricsRow {
  std::size_t step = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  /// NaN when not evaluated at this step.
  double heldout_domain_ce = 0.0;
  double heldout_general_ce = 0.0;
};

struct TrainData {
  /// Domain documents and their score records (joined by doc id and position).
  std::span<const Document> domain_docs;
  std::span<const TokenScoreRecord> scores;
  std::span<const Document> general_docs;
  std::span<const Document> heldout_domain;
  std::span<const Document> heldout_general;
  /// Optional sampling multiplicity per domain doc id (rounded, at least 1).
  const std::map<std::string, double>* doc_weights = nullptr;
  /// Continue from these parameters instead of a fresh init. Its vocabulary
  /// and shape must match.
  const TinyLM* init = nullptr;
};

struct TrainResult {
  TinyLM model;
  std::vector<MetricsRow> history;
  std::size_t domain_windows_drawn = 0;
  std::size_t general_windows_drawn = 0;
};

TrainResult train(const TrainConfig& config, const TrainData& data, const Vocab& vocab);

/// Mean per-token CE of `model` over the documents (tokens + EOS).
double mean_ce(const TinyLM& model, std::span<const Document> docs);

std::string metrics_to_csv(std::span<const MetricsRow> rows);

using GradientFn = std::function<void(const TinyLM&, std::span<const Window>, Gradients&)>;

/// Analytic gradient of sum(weight * ce) over the batch.
void batch_gradient(const TinyLM& model, std::span<const Window> batch, Gradients& grads);

/// Max relative error between `grad_fn` and central differences over at
/// least `n_coords` coordinates drawn from every parameter group. Relative
/// error is |a - n| / max(|a|, |n|, 1e-7).
double grad_check(const TinyLM& model, std::span<const Window> batch, double delta, std::uint64_t seed,
                  std::size_t n_coords = 100, const GradientFn& grad_fn = batch_gradient);

/// Greedy decoding from the prompt until EOS or max_len tokens; ties go to
/// the smaller id. Returns the generated tokens joined by spaces.
std::string closed_book_answer(const TinyLM& model, std::span<const std::string> prompt_tokens, std::size_t max_len);

}  // namespace forge
