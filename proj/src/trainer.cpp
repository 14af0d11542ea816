// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>

#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"

namespace forge {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'F', 'O', 'R', 'G', 'E', 'T', 'L', 'M'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    T v{};
    take(&v, sizeof(T));
    return v;
  }
  void take(void* dst, std::size_t n) {
    if (pos_ + n > bytes_.size()) throw FormatError("model file truncated");
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

json TinyLMConfig::to_json() const {
  return {{"context", context}, {"embed", embed}, {"hidden", hidden}, {"output_init", output_init}};
}

void Gradients::zero() {
  for (auto g : groups()) std::fill(g.begin(), g.end(), 0.0);
}

std::array<std::span<double>, 5> Gradients::groups() { return {embedding, w1, b1, w2, b2}; }

TinyLM::TinyLM(Vocab vocab, TinyLMConfig config, std::uint64_t seed)
    : vocab_(std::move(vocab)), config_(config), seed_(seed) {
  if (config_.context == 0 || config_.embed == 0 || config_.hidden == 0) {
    throw InvalidArgument("TinyLM: context, embed and hidden must be >= 1");
  }
  p_ = zero_gradients();
  Rng rng(derive_seed(seed, 0x746c6d));
  for (double& v : p_.embedding) v = 0.1 * rng.normal();
  const double w1_scale = 1.0 / std::sqrt(static_cast<double>(config_.context * config_.embed));
  for (double& v : p_.w1) v = w1_scale * rng.normal();
  if (config_.output_init > 0.0) {
    for (double& v : p_.w2) v = config_.output_init * rng.normal();
  }
}

Gradients TinyLM::zero_gradients() const {
  const std::size_t v = vocab_.size();
  const std::size_t md = config_.context * config_.embed;
  Gradients g;
  g.embedding.assign(v * config_.embed, 0.0);
  g.w1.assign(config_.hidden * md, 0.0);
  g.b1.assign(config_.hidden, 0.0);
  g.w2.assign(v * config_.hidden, 0.0);
  g.b2.assign(v, 0.0);
  return g;
}

std::size_t TinyLM::num_parameters() const {
  const std::size_t v = vocab_.size();
  const std::size_t md = config_.context * config_.embed;
  return v * config_.embed + (md * config_.hidden + config_.hidden) + (config_.hidden * v + v);
}

std::array<std::span<double>, 5> TinyLM::groups() { return p_.groups(); }

std::array<std::span<const double>, 5> TinyLM::groups() const {
  return {p_.embedding, p_.w1, p_.b1, p_.w2, p_.b2};
}

double TinyLM::forward_nll(std::span<const TokenId> context, TokenId target, Cache* cache) const {
  const std::size_t m = config_.context;
  const std::size_t d = config_.embed;
  const std::size_t h = config_.hidden;
  const std::size_t v = vocab_.size();
  if (context.size() != m) throw InvalidArgument("forward_nll: context length must equal the model's context width");
  if (target >= v) throw InvalidArgument("forward_nll: target id out of range");

  std::vector<double> x(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    if (context[i] >= v) throw InvalidArgument("forward_nll: context id out of range");
    std::copy_n(p_.embedding.begin() + static_cast<std::ptrdiff_t>(context[i] * d), d,
                x.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  std::vector<double> a(h);
  for (std::size_t j = 0; j < h; ++j) {
    const double* row = p_.w1.data() + j * m * d;
    double z = p_.b1[j];
    for (std::size_t k = 0; k < m * d; ++k) z += row[k] * x[k];
    a[j] = std::tanh(z);
  }
  std::vector<double> logits(v);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t o = 0; o < v; ++o) {
    const double* row = p_.w2.data() + o * h;
    double z = p_.b2[o];
    for (std::size_t j = 0; j < h; ++j) z += row[j] * a[j];
    logits[o] = z;
    max_logit = std::max(max_logit, z);
  }
  double sum = 0.0;
  for (std::size_t o = 0; o < v; ++o) sum += std::exp(logits[o] - max_logit);
  const double log_z = max_logit + std::log(sum);
  const double ce = log_z - logits[target];

  if (cache != nullptr) {
    cache->context.assign(context.begin(), context.end());
    cache->x = std::move(x);
    cache->hidden = std::move(a);
    cache->probs.resize(v);
    for (std::size_t o = 0; o < v; ++o) cache->probs[o] = std::exp(logits[o] - log_z);
    cache->target = target;
  }
  return ce;
}

std::vector<double> TinyLM::probabilities(std::span<const TokenId> context) const {
  Cache c;
  forward_nll(context, 0, &c);
  return c.probs;
}

void TinyLM::backward(const Cache& cache, double weight, Gradients& grads) const {
  if (weight == 0.0) return;
  const std::size_t m = config_.context;
  const std::size_t d = config_.embed;
  const std::size_t h = config_.hidden;
  const std::size_t v = vocab_.size();

  std::vector<double> da(h, 0.0);
  for (std::size_t o = 0; o < v; ++o) {
    const double g = weight * (cache.probs[o] - (o == cache.target ? 1.0 : 0.0));
    grads.b2[o] += g;
    double* grow = grads.w2.data() + o * h;
    const double* prow = p_.w2.data() + o * h;
    for (std::size_t j = 0; j < h; ++j) {
      grow[j] += g * cache.hidden[j];
      da[j] += g * prow[j];
    }
  }
  std::vector<double> dx(m * d, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    const double dz = da[j] * (1.0 - cache.hidden[j] * cache.hidden[j]);
    grads.b1[j] += dz;
    double* grow = grads.w1.data() + j * m * d;
    const double* prow = p_.w1.data() + j * m * d;
    for (std::size_t k = 0; k < m * d; ++k) {
      grow[k] += dz * cache.x[k];
      dx[k] += dz * prow[k];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double* erow = grads.embedding.data() + cache.context[i] * d;
    for (std::size_t k = 0; k < d; ++k) erow[k] += dx[i * d + k];
  }
}

void TinyLM::apply(const Gradients& grads, double lr) {
  const std::array<std::span<const double>, 5> g{grads.embedding, grads.w1, grads.b1, grads.w2, grads.b2};
  auto params = groups();
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (g[k].size() != params[k].size()) throw InvalidArgument("apply: gradient shape mismatch");
    for (std::size_t i = 0; i < g[k].size(); ++i) params[k][i] -= lr * g[k][i];
  }
}

std::vector<double> TinyLM::nll(std::span<const TokenId> ids) const {
  std::vector<double> out(ids.size());
  for (std::size_t t = 0; t < ids.size(); ++t) out[t] = forward_nll(context_at(ids, t, config_.context), ids[t]);
  return out;
}

bool TinyLM::operator==(const TinyLM& other) const {
  if (!(vocab_ == other.vocab_) || seed_ != other.seed_ || config_.context != other.config_.context ||
      config_.embed != other.config_.embed || config_.hidden != other.config_.hidden) {
    return false;
  }
  const auto a = groups();
  const auto b = other.groups();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) return false;
    if (std::memcmp(a[k].data(), b[k].data(), a[k].size_bytes()) != 0) return false;
  }
  return true;
}

std::string TinyLM::to_bytes() const {
  std::string out(kMagic, sizeof kMagic);
  put(out, kModelVersion);
  put<std::uint64_t>(out, config_.context);
  put<std::uint64_t>(out, config_.embed);
  put<std::uint64_t>(out, config_.hidden);
  put(out, config_.output_init);
  put(out, seed_);
  const std::string vocab = vocab_.to_json().dump();
  put<std::uint64_t>(out, vocab.size());
  out += vocab;
  for (auto g : groups()) {
    put<std::uint64_t>(out, g.size());
    out.append(reinterpret_cast<const char*>(g.data()), g.size_bytes());
  }
  return out;
}

TinyLM TinyLM::from_bytes(std::string_view bytes) {
  Reader r(bytes);
  char magic[sizeof kMagic];
  r.take(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError("not a forge model file");
  if (r.get<std::uint32_t>() != kModelVersion) throw FormatError("unsupported model file version");
  TinyLMConfig cfg;
  cfg.context = r.get<std::uint64_t>();
  cfg.embed = r.get<std::uint64_t>();
  cfg.hidden = r.get<std::uint64_t>();
  cfg.output_init = r.get<double>();
  const auto seed = r.get<std::uint64_t>();
  std::string vocab(r.get<std::uint64_t>(), '\0');
  r.take(vocab.data(), vocab.size());
  Vocab v;
  try {
    v = Vocab::from_json(json::parse(vocab));
  } catch (const json::exception& e) {
    throw FormatError(std::string("model vocabulary: ") + e.what());
  }
  TinyLM lm(std::move(v), cfg, seed);
  for (auto g : lm.groups()) {
    if (r.get<std::uint64_t>() != g.size()) throw FormatError("model parameter shape mismatch");
    r.take(g.data(), g.size_bytes());
  }
  if (!r.done()) throw FormatError("trailing bytes in model file");
  return lm;
}

void TinyLM::save(const std::filesystem::path& path) const { io::write_atomic(path, to_bytes()); }

TinyLM TinyLM::load(const std::filesystem::path& path) {
  io::require_exists(path, "model file");
  return from_bytes(io::read_text(path));
}

std::vector<TokenId> context_at(std::span<const TokenId> ids, std::size_t t, std::size_t m) {
  std::vector<TokenId> ctx(m, Vocab::kBos);
  for (std::size_t i = 0; i < m; ++i) {
    // ctx[m-1] is ids[t-1], ctx[0] is ids[t-m].
    const std::size_t back = m - i;
    if (t >= back) ctx[i] = ids[t - back];
  }
  return ctx;
}

void TrainConfig::validate() const {
  if (steps == 0) throw InvalidArgument("train: steps must be >= 1");
  if (batch_size == 0) throw InvalidArgument("train: batch_size must be >= 1");
  if (!(lr_min > 0.0 && lr_min <= lr_max) || !std::isfinite(lr_max)) {
    throw InvalidArgument("train: need 0 < lr_min <= lr_max");
  }
  if (!(warmup_frac >= 0.0 && warmup_frac < 0.5)) throw InvalidArgument("train: warmup_frac must lie in [0, 0.5)");
  if (!(general_mix_ratio >= 0.0 && general_mix_ratio <= 1.0)) {
    throw InvalidArgument("train: general_mix_ratio must lie in [0,1]");
  }
  ScoreParams{mode, alpha, eps, rho}.validate();
  if (eval_every == 0) throw InvalidArgument("train: eval_every must be >= 1");
}

json TrainConfig::to_json() const {
  return {{"steps", steps},
          {"batch_size", batch_size},
          {"lr_max", lr_max},
          {"lr_min", lr_min},
          {"warmup_frac", warmup_frac},
          {"general_mix_ratio", general_mix_ratio},
          {"mode", std::string(to_string(mode))},
          {"alpha", alpha},
          {"eps", eps},
          {"rho", rho},
          {"rho1_scope", rho1_scope == Rho1Scope::batch ? "batch" : "document"},
          {"seed", seed},
          {"eval_every", eval_every},
          {"model", model.to_json()}};
}

double lr_at(const TrainConfig& config, std::size_t step) {
  config.validate();
  const std::size_t total = config.steps;
  if (step > total) throw InvalidArgument("lr_at: step beyond the schedule");
  const auto warmup = static_cast<std::size_t>(std::ceil(config.warmup_frac * static_cast<double>(total)));
  if (step == warmup) return config.lr_max;
  if (step < warmup) return config.lr_max * (static_cast<double>(step) / static_cast<double>(warmup));
  const double progress = static_cast<double>(step - warmup) / static_cast<double>(total - warmup);
  return config.lr_min + 0.5 * (config.lr_max - config.lr_min) * (1.0 + std::cos(std::numbers::pi * progress));
}

namespace {

struct Sequence {
  TokenIds ids;
  std::vector<double> weight;
  std::vector<double> ce_rm;
  std::vector<bool> selected;
};

struct Slot {
  std::uint32_t seq;
  std::uint32_t pos;
};

class Sampler {
 public:
  Sampler(std::vector<Slot> slots, std::uint64_t seed) : slots_(std::move(slots)), seed_(seed) {}
  bool empty() const { return slots_.empty(); }
  Slot next() {
    if (pos_ == slots_.size()) {
      Rng rng(derive_seed(seed_, epoch_++));
      rng.shuffle(std::span<Slot>(slots_));
      pos_ = 0;
    }
    return slots_[pos_++];
  }

 private:
  std::vector<Slot> slots_;
  std::uint64_t seed_;
  std::uint64_t epoch_ = 0;
  std::size_t pos_ = 0;
};

std::vector<Slot> all_slots(const std::vector<Sequence>& seqs, const std::vector<std::size_t>& multiplicity) {
  std::vector<Slot> out;
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    for (std::size_t rep = 0; rep < multiplicity[s]; ++rep) {
      for (std::size_t t = 0; t < seqs[s].ids.size(); ++t) {
        out.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)});
      }
    }
  }
  return out;
}

std::vector<Sequence> domain_sequences(const TrainConfig& config, const TrainData& data, const Vocab& vocab) {
  std::unordered_map<std::string, std::vector<const TokenScoreRecord*>> by_doc;
  for (const auto& r : data.scores) {
    if (r.mode != config.mode) {
      throw InvalidArgument("train: score records are " + std::string(to_string(r.mode)) + " but the config mode is " +
                            std::string(to_string(config.mode)));
    }
    by_doc[r.doc_id].push_back(&r);
  }
  const bool unscored_ok = data.scores.empty() && config.mode == Mode::ntp;
  std::vector<Sequence> out;
  for (const auto& doc : data.domain_docs) {
    Sequence s;
    s.ids = encode_document(vocab, doc.text);
    const std::size_t n = s.ids.size();
    s.weight.assign(n, 1.0);
    s.ce_rm.assign(n, 0.0);
    s.selected.assign(n, true);
    if (!unscored_ok) {
      auto it = by_doc.find(doc.id);
      if (it == by_doc.end()) throw InvalidArgument("train: no score records for document " + doc.id);
      auto recs = it->second;
      std::sort(recs.begin(), recs.end(),
                [](const TokenScoreRecord* a, const TokenScoreRecord* b) { return a->position < b->position; });
      if (recs.size() != n) throw InvalidArgument("train: score records do not cover document " + doc.id);
      for (std::size_t t = 0; t < n; ++t) {
        if (recs[t]->position != t) throw InvalidArgument("train: score positions do not match document " + doc.id);
        s.weight[t] = recs[t]->weight;
        s.ce_rm[t] = recs[t]->ce_rm;
        s.selected[t] = recs[t]->selected;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

double mean_ce(const TinyLM& model, std::span<const Document> docs) {
  std::vector<double> sums(docs.size(), 0.0);
  std::vector<std::size_t> counts(docs.size(), 0);
  parallel_for(docs.size(), [&](std::size_t i) {
    const TokenIds ids = encode_document(model.vocab(), docs[i].text);
    for (double ce : model.nll(ids)) sums[i] += ce;
    counts[i] = ids.size();
  });
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    sum += sums[i];
    n += counts[i];
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(n);
}

TrainResult train(const TrainConfig& config, const TrainData& data, const Vocab& vocab) {
  config.validate();
  const std::size_t b = config.batch_size;
  const auto n_general = static_cast<std::size_t>(std::llround(config.general_mix_ratio * static_cast<double>(b)));
  const std::size_t n_domain = b - n_general;

  std::vector<Sequence> domain = domain_sequences(config, data, vocab);
  std::vector<std::size_t> domain_mult(domain.size(), 1);
  if (data.doc_weights != nullptr) {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      auto it = data.doc_weights->find(data.domain_docs[i].id);
      if (it != data.doc_weights->end()) {
        domain_mult[i] = static_cast<std::size_t>(std::max<long long>(1, std::llround(it->second)));
      }
    }
  }
  std::vector<Sequence> general;
  for (const auto& doc : data.general_docs) {
    Sequence s;
    s.ids = encode_document(vocab, doc.text);
    s.weight.assign(s.ids.size(), 1.0);
    general.push_back(std::move(s));
  }

  Sampler domain_sampler(all_slots(domain, domain_mult), derive_seed(config.seed, 0x646f6d));
  Sampler general_sampler(all_slots(general, std::vector<std::size_t>(general.size(), 1)),
                          derive_seed(config.seed, 0x67656e));
  if (n_domain > 0 && domain_sampler.empty()) throw InvalidArgument("train: empty domain corpus");
  if (n_general > 0 && general_sampler.empty()) throw InvalidArgument("train: empty general corpus");

  TrainResult result{TinyLM(vocab, config.model, derive_seed(config.seed, 0x696e6974)), {}, 0, 0};
  if (data.init != nullptr) {
    const auto& c = data.init->config();
    if (!(data.init->vocab() == vocab) || c.context != config.model.context || c.embed != config.model.embed ||
        c.hidden != config.model.hidden) {
      throw InvalidArgument("train: init model does not match the vocabulary or model shape");
    }
    result.model = *data.init;
  }
  TinyLM& model = result.model;
  Gradients grads = model.zero_gradients();
  const std::size_t m = config.model.context;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<TinyLM::Cache> caches(b);
  std::vector<double> ce(b);
  std::vector<double> weight(b);
  std::vector<double> ce_rm(n_domain);
  std::vector<bool> selected(n_domain);

  for (std::size_t step = 1; step <= config.steps; ++step) {
    for (std::size_t i = 0; i < b; ++i) {
      const bool is_general = i < n_general;
      const Slot slot = is_general ? general_sampler.next() : domain_sampler.next();
      const Sequence& seq = is_general ? general[slot.seq] : domain[slot.seq];
      ce[i] = model.forward_nll(context_at(seq.ids, slot.pos, m), seq.ids[slot.pos], &caches[i]);
      weight[i] = seq.weight[slot.pos];
      if (!is_general) {
        ce_rm[i - n_general] = seq.ce_rm[slot.pos];
        selected[i - n_general] = seq.selected[slot.pos];
      }
    }
    result.general_windows_drawn += n_general;
    result.domain_windows_drawn += n_domain;

    if (config.mode == Mode::rho1 && n_domain > 0) {
      if (config.rho1_scope == Rho1Scope::batch) {
        selected = rho1_select(std::span<const double>(ce).subspan(n_general), ce_rm, config.rho);
      }
      const auto kept = static_cast<std::size_t>(std::count(selected.begin(), selected.end(), true));
      const double w = kept == 0 ? 0.0 : static_cast<double>(n_domain) / static_cast<double>(kept);
      for (std::size_t i = 0; i < n_domain; ++i) weight[n_general + i] = selected[i] ? w : 0.0;
    }

    double loss = 0.0;
    grads.zero();
    const double inv_b = 1.0 / static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i) {
      loss += weight[i] * ce[i];
      model.backward(caches[i], weight[i] * inv_b, grads);
    }
    loss *= inv_b;
    const double lr = lr_at(config, step);
    model.apply(grads, lr);

    MetricsRow row{step, lr, loss, nan, nan};
    if (step % config.eval_every == 0 || step == config.steps) {
      row.heldout_domain_ce = mean_ce(model, data.heldout_domain);
      row.heldout_general_ce = mean_ce(model, data.heldout_general);
    }
    result.history.push_back(row);
  }
  return result;
}

std::string metrics_to_csv(std::span<const MetricsRow> rows) {
  std::string out = "step,lr,train_loss,heldout_domain_ce,heldout_general_ce\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + "," + format_double(r.lr) + "," + format_double(r.train_loss) + "," +
           format_double(r.heldout_domain_ce) + "," + format_double(r.heldout_general_ce) + "\n";
  }
  return out;
}

void batch_gradient(const TinyLM& model, std::span<const Window> batch, Gradients& grads) {
  TinyLM::Cache cache;
  for (const auto& w : batch) {
    model.forward_nll(w.context, w.target, &cache);
    model.backward(cache, w.weight, grads);
  }
}

double grad_check(const TinyLM& model, std::span<const Window> batch, double delta, std::uint64_t seed,
                  std::size_t n_coords, const GradientFn& grad_fn) {
  if (!(delta > 0.0)) throw InvalidArgument("grad_check: delta must be > 0");
  if (batch.empty()) throw InvalidArgument("grad_check: empty batch");
  Gradients analytic = model.zero_gradients();
  grad_fn(model, batch, analytic);
  auto agroups = analytic.groups();

  TinyLM probe = model;
  auto pgroups = probe.groups();
  auto objective = [&]() {
    double f = 0.0;
    for (const auto& w : batch) f += w.weight * probe.forward_nll(w.context, w.target);
    return f;
  };

  std::set<TokenId> used;
  for (const auto& w : batch) used.insert(w.context.begin(), w.context.end());
  const std::vector<TokenId> rows(used.begin(), used.end());
  const std::size_t d = model.config().embed;

  Rng rng(seed);
  const std::size_t per_group = (n_coords + pgroups.size() - 1) / pgroups.size();
  double worst = 0.0;
  for (std::size_t g = 0; g < pgroups.size(); ++g) {
    for (std::size_t k = 0; k < per_group; ++k) {
      std::size_t idx = 0;
      if (g == 0) {
        // Embedding rows outside the batch have an exact zero gradient.
        idx = rows[rng.below(rows.size())] * d + rng.below(d);
      } else {
        idx = rng.below(pgroups[g].size());
      }
      const double saved = pgroups[g][idx];
      pgroups[g][idx] = saved + delta;
      const double plus = objective();
      pgroups[g][idx] = saved - delta;
      const double minus = objective();
      pgroups[g][idx] = saved;
      const double numeric = (plus - minus) / (2.0 * delta);
      const double a = agroups[g][idx];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-7});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

std::string closed_book_answer(const TinyLM& model, std::span<const std::string> prompt_tokens,
                               std::size_t max_len) {
  TokenIds ids = encode(model.vocab(), prompt_tokens);
  const std::size_t prompt_len = ids.size();
  std::string answer;
  for (std::size_t k = 0; k < max_len; ++k) {
    const auto probs = model.probabilities(context_at(ids, ids.size(), model.config().context));
    const auto best = static_cast<TokenId>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (best == Vocab::kEos) break;
    ids.push_back(best);
  }
  for (std::size_t i = prompt_len; i < ids.size(); ++i) {
    if (!answer.empty()) answer += ' ';
    answer += model.vocab().token(ids[i]);
  }
  return answer;
}

}  // namespace forge
