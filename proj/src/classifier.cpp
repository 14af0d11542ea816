// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include "forge/hash.hpp"
#include "forge/io.hpp"
#include "forge/rng.hpp"

namespace forge {

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

namespace {

constexpr std::string_view kMagic = "FORGECLS";
constexpr std::uint32_t kVersion = 1;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw FormatError("classifier model: truncated file");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw FormatError("classifier model: truncated file");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void require_pow2(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) throw InvalidArgument("classifier: dim must be a power of two");
}

}  // namespace

SparseVector featurize(std::span<const std::string> tokens, std::size_t dim, std::uint64_t seed,
                       std::span<const int> orders) {
  require_pow2(dim);
  const std::uint64_t mask = dim - 1;
  SparseVector out;
  for (int n : orders) {
    if (n < 1) throw InvalidArgument("classifier: n-gram orders must be >= 1");
    const auto order = static_cast<std::size_t>(n);
    if (tokens.size() < order) continue;
    const std::uint64_t order_seed = derive_seed(seed, order);
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      const auto idx = static_cast<std::uint32_t>(hash_tokens(tokens.subspan(i, order), order_seed) & mask);
      out[idx] += 1.0;
    }
  }
  return out;
}

ClassifierModel ClassifierModel::zeros(std::size_t dim, std::uint64_t hash_seed, std::vector<int> orders) {
  require_pow2(dim);
  ClassifierModel m;
  m.dim = dim;
  m.weights.assign(dim, 0.0);
  m.hash_seed = hash_seed;
  m.ngram_orders = std::move(orders);
  return m;
}

// Features enter the linear score L2-normalized, so document length does not
// scale the logit.
double ClassifierModel::logit(const SparseVector& features) const {
  double norm2 = 0.0;
  double dot = 0.0;
  for (const auto& [idx, v] : features) {
    norm2 += v * v;
    dot += weights[idx] * v;
  }
  if (norm2 == 0.0) return bias;
  return dot / std::sqrt(norm2) + bias;
}

SparseVector ClassifierModel::features(std::string_view text) const {
  const Tokens toks = tokenize(text);
  return featurize(toks, dim, hash_seed, ngram_orders);
}

std::string ClassifierModel::serialize() const {
  std::string out(kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, dim);
  put<std::uint64_t>(out, hash_seed);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ngram_orders.size()));
  for (int o : ngram_orders) put<std::int32_t>(out, o);
  put<double>(out, bias);
  for (double w : weights) put<double>(out, w);
  return out;
}

ClassifierModel ClassifierModel::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.take(kMagic.size()) != kMagic) throw FormatError("classifier model: bad magic");
  if (r.get<std::uint32_t>() != kVersion) throw FormatError("classifier model: unsupported version");
  ClassifierModel m;
  m.dim = r.get<std::uint64_t>();
  require_pow2(m.dim);
  m.hash_seed = r.get<std::uint64_t>();
  const auto n_orders = r.get<std::uint32_t>();
  m.ngram_orders.clear();
  for (std::uint32_t i = 0; i < n_orders; ++i) m.ngram_orders.push_back(r.get<std::int32_t>());
  m.bias = r.get<double>();
  m.weights.resize(m.dim);
  for (auto& w : m.weights) w = r.get<double>();
  if (!r.done()) throw FormatError("classifier model: trailing bytes");
  return m;
}

void ClassifierModel::save(const std::filesystem::path& path) const { io::write_atomic(path, serialize()); }

ClassifierModel ClassifierModel::load(const std::filesystem::path& path) {
  io::require_exists(path, "classifier model");
  return deserialize(io::read_text(path));
}

nlohmann::json ClassifierTrainConfig::to_json() const {
  return {{"dim", dim}, {"lr", lr}, {"epochs", epochs}, {"ngram_orders", ngram_orders}, {"hash_seed", hash_seed}};
}

ClassifierTrainResult train_classifier(std::span<const Document> pos, std::span<const Document> neg,
                                       const ClassifierTrainConfig& config, std::uint64_t seed) {
  if (pos.empty() || neg.empty()) throw InvalidArgument("train_classifier: both classes must be non-empty");
  if (config.lr <= 0.0) throw InvalidArgument("train_classifier: lr must be > 0");

  struct Example {
    const Document* doc;
    double label;
    SparseVector x;
  };
  std::vector<Example> examples;
  examples.reserve(pos.size() + neg.size());
  for (const auto& d : pos) examples.push_back({&d, 1.0, {}});
  for (const auto& d : neg) examples.push_back({&d, 0.0, {}});
  std::sort(examples.begin(), examples.end(), [](const Example& a, const Example& b) {
    if (a.doc->id != b.doc->id) return a.doc->id < b.doc->id;
    if (a.label != b.label) return a.label < b.label;
    return a.doc->text < b.doc->text;
  });

  ClassifierTrainResult result;
  result.model = ClassifierModel::zeros(config.dim, config.hash_seed, config.ngram_orders);
  auto& model = result.model;
  for (auto& e : examples) e.x = model.features(e.doc->text);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto mean_loss = [&] {
    double loss = 0.0;
    for (const auto& e : examples) {
      const double z = model.logit(e.x);
      // log(1 + exp(-z)) for y=1, log(1 + exp(z)) for y=0, computed stably.
      const double s = e.label > 0.5 ? -z : z;
      loss += s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    }
    return loss / static_cast<double>(examples.size());
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(seed, epoch));
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t idx : order) {
      const auto& e = examples[idx];
      double norm2 = 0.0;
      for (const auto& [_, v] : e.x) norm2 += v * v;
      const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
      const double g = sigmoid(model.logit(e.x)) - e.label;
      for (const auto& [i, v] : e.x) model.weights[i] -= config.lr * g * v * inv;
      model.bias -= config.lr * g;
    }
    result.epoch_loss.push_back(mean_loss());
  }

  std::size_t correct = 0;
  for (const auto& e : examples) {
    const bool predicted = model.logit(e.x) >= 0.0;
    if (predicted == (e.label > 0.5)) ++correct;
  }
  result.train_accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
  return result;
}

double score_text(const ClassifierModel& model, std::string_view text) {
  return sigmoid(model.logit(model.features(text)));
}

double score(const ClassifierModel& model, const Document& doc) { return score_text(model, doc.text); }

double route(double p, double t_drop, double t_full) {
  if (!(t_drop >= 0.0 && t_drop < t_full && t_full <= 1.0)) {
    throw InvalidArgument("route: thresholds must satisfy 0 <= t_drop < t_full <= 1");
  }
  if (p < t_drop) return 0.0;
  if (p >= t_full) return 1.0;
  return (p - t_drop) / (t_full - t_drop);
}

}  // namespace forge
