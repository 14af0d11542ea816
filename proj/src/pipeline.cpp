// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "forge/io.hpp"
#include "forge/miner.hpp"
#include "forge/parallel.hpp"

namespace forge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Validation failures of configured values are configuration errors.
template <typename Fn>
auto as_config_error(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json stage_report(std::string_view stage, const Config& c, json params, json inputs, json outputs) {
  return {{"stage", stage},
          {"seed", c.seed()},
          {"config", std::move(params)},
          {"inputs", std::move(inputs)},
          {"outputs", std::move(outputs)}};
}

std::vector<Document> load_docs(const fs::path& path) {
  io::require_exists(path, "corpus");
  return read_corpus(path);
}

std::vector<Document> load_many(const std::vector<fs::path>& paths) {
  std::vector<Document> all;
  for (const auto& p : paths) {
    auto docs = load_docs(p);
    all.insert(all.end(), std::make_move_iterator(docs.begin()), std::make_move_iterator(docs.end()));
  }
  return all;
}

std::vector<fs::path> path_list(const Config& c, const std::string& section, const std::string& key,
                                const std::vector<std::string>& fallback) {
  // An empty value falls back to the defaults, like Config::path.
  std::vector<fs::path> out;
  for (const auto& p : c.get_list(section, key, {})) out.emplace_back(p);
  if (out.empty()) {
    for (const auto& p : fallback) out.push_back(c.out_dir() / p);
  }
  return out;
}

json paths_json(const std::vector<fs::path>& paths) {
  json j = json::array();
  for (const auto& p : paths) j.push_back(p.generic_string());
  return j;
}

SyntheticKB load_kb(const fs::path& path) {
  io::require_exists(path, "knowledge base");
  return SyntheticKB::from_json(io::read_json(path));
}

}  // namespace

SynthConfig synth_config(const Config& c) {
  SynthConfig s;
  const std::string sec = "synth";
  s.n_artists = c.get_size(sec, "n_artists", s.n_artists);
  s.n_songs = c.get_size(sec, "n_songs", s.n_songs);
  s.n_domain_docs = c.get_size(sec, "n_domain_docs", s.n_domain_docs);
  s.n_general_docs = c.get_size(sec, "n_general_docs", s.n_general_docs);
  s.n_seed_docs = c.get_size(sec, "n_seed_docs", s.n_seed_docs);
  s.n_heldout_domain = c.get_size(sec, "n_heldout_domain", s.n_heldout_domain);
  s.n_heldout_general = c.get_size(sec, "n_heldout_general", s.n_heldout_general);
  s.n_qa = c.get_size(sec, "n_qa", s.n_qa);
  s.noise_rate = c.get_double(sec, "noise_rate", s.noise_rate);
  s.spam_rate = c.get_double(sec, "spam_rate", s.spam_rate);
  s.popular_fraction = c.get_double(sec, "popular_fraction", s.popular_fraction);
  s.zipf_exponent = c.get_double(sec, "zipf_exponent", s.zipf_exponent);
  s.min_sentences = c.get_size(sec, "min_sentences", s.min_sentences);
  s.max_sentences = c.get_size(sec, "max_sentences", s.max_sentences);
  s.dup_rate = c.get_double(sec, "dup_rate", s.dup_rate);
  s.junk_rate = c.get_double(sec, "junk_rate", s.junk_rate);
  as_config_error("synth", [&] { s.validate(); });
  return s;
}

ClassifierTrainConfig classifier_config(const Config& c) {
  ClassifierTrainConfig k;
  k.dim = c.get_size("classify", "dim", k.dim);
  k.lr = c.get_double("classify", "lr", k.lr);
  k.epochs = c.get_size("classify", "epochs", k.epochs);
  k.hash_seed = c.get_u64("classify", "hash_seed", k.hash_seed);
  if (c.has("classify", "ngram_orders")) {
    k.ngram_orders.clear();
    for (double o : c.get_doubles("classify", "ngram_orders", {})) {
      if (o < 1 || o != std::floor(o)) throw ConfigError("classify: ngram_orders must be positive integers");
      k.ngram_orders.push_back(static_cast<int>(o));
    }
  }
  if (k.dim == 0 || (k.dim & (k.dim - 1)) != 0) throw ConfigError("classify: dim must be a power of two");
  if (!(k.lr > 0.0)) throw ConfigError("classify: lr must be > 0");
  if (k.epochs == 0) throw ConfigError("classify: epochs must be >= 1");
  if (k.ngram_orders.empty()) throw ConfigError("classify: ngram_orders is empty");
  return k;
}

CleanConfig clean_config(const Config& c) {
  CleanConfig k;
  if (c.has("clean", "lang_allowlist")) {
    const auto langs = c.get_list("clean", "lang_allowlist", {});
    k.lang_allowlist = {langs.begin(), langs.end()};
  }
  k.q_min = c.get_double("clean", "q_min", k.q_min);
  if (!(k.q_min >= 0.0 && k.q_min <= 1.0)) throw ConfigError("clean: q_min must lie in [0,1]");
  return k;
}

DedupParams dedup_params(const Config& c) {
  DedupParams p;
  p.minhash.shingle_k = c.get_size("dedup", "shingle_k", p.minhash.shingle_k);
  p.minhash.num_hashes = c.get_size("dedup", "num_hashes", p.minhash.num_hashes);
  p.minhash.seed = c.get_u64("dedup", "minhash_seed", p.minhash.seed);
  p.bands = c.get_size("dedup", "bands", p.bands);
  p.rows = c.get_size("dedup", "rows", p.rows);
  p.threshold = c.get_double("dedup", "threshold", p.threshold);
  as_config_error("dedup", [&] { p.validate(); });
  return p;
}

Lambdas rm_lambdas(const Config& c) {
  Lambdas l;
  if (c.has("rm", "lambdas")) {
    const auto v = c.get_doubles("rm", "lambdas", {});
    if (v.size() != 4) throw ConfigError("rm: lambdas needs four values (trigram, bigram, unigram, uniform)");
    l = {v[0], v[1], v[2], v[3]};
  }
  as_config_error("rm", [&] { l.validate(); });
  return l;
}

ScoreParams score_params(const Config& c) {
  ScoreParams p;
  p.mode = as_config_error("score", [&] { return mode_from_string(c.get_string("score", "mode", "ntp")); });
  p.alpha = c.get_double("score", "alpha", p.alpha);
  p.eps = c.get_double("score", "eps", p.eps);
  p.rho = c.get_double("score", "rho", p.rho);
  as_config_error("score", [&] { p.validate(); });
  return p;
}

TrainConfig train_config(const Config& c) {
  TrainConfig t;
  const std::string sec = "train";
  const ScoreParams sp = score_params(c);
  t.mode = sp.mode;
  t.alpha = sp.alpha;
  t.eps = sp.eps;
  t.rho = sp.rho;
  t.seed = c.seed();
  t.steps = c.get_size(sec, "steps", t.steps);
  t.batch_size = c.get_size(sec, "batch_size", t.batch_size);
  t.lr_max = c.get_double(sec, "lr_max", t.lr_max);
  t.lr_min = c.get_double(sec, "lr_min", t.lr_min);
  t.warmup_frac = c.get_double(sec, "warmup_frac", t.warmup_frac);
  t.general_mix_ratio = c.get_double(sec, "general_mix_ratio", t.general_mix_ratio);
  t.eval_every = c.get_size(sec, "eval_every", t.eval_every);
  const auto scope = c.get_string(sec, "rho1_scope", "document");
  if (scope == "document") {
    t.rho1_scope = Rho1Scope::document;
  } else if (scope == "batch") {
    t.rho1_scope = Rho1Scope::batch;
  } else {
    throw ConfigError("train: rho1_scope must be 'document' or 'batch'");
  }
  t.model.context = c.get_size(sec, "context", t.model.context);
  t.model.embed = c.get_size(sec, "embed", t.model.embed);
  t.model.hidden = c.get_size(sec, "hidden", t.model.hidden);
  t.model.output_init = c.get_double(sec, "output_init", t.model.output_init);
  if (t.model.context == 0 || t.model.embed == 0 || t.model.hidden == 0) {
    throw ConfigError("train: context, embed and hidden must be >= 1");
  }
  as_config_error("train", [&] { t.validate(); });
  return t;
}

EvalConfig eval_config(const Config& c) {
  EvalConfig e;
  e.use_judge = c.get_bool("eval", "use_judge", e.use_judge);
  e.judge_concurrency = c.get_size("eval", "judge_concurrency", e.judge_concurrency);
  e.max_answer_len = c.get_size("eval", "max_answer_len", e.max_answer_len);
  if (e.judge_concurrency == 0) throw ConfigError("eval: judge_concurrency must be >= 1");
  return e;
}

HttpJudgeConfig judge_config(const Config& c) {
  HttpJudgeConfig j;
  j.base_url = c.get_string("eval", "judge_url", "");
  j.path = c.get_string("eval", "judge_path", j.path);
  j.model = c.get_string("eval", "judge_model", j.model);
  j.token_env = c.get_string("eval", "judge_token_env", j.token_env);
  j.timeout = std::chrono::milliseconds(c.get_size("eval", "judge_timeout_ms", 30000));
  j.retries = static_cast<int>(c.get_size("eval", "judge_retries", 2));
  j.backoff = std::chrono::milliseconds(c.get_size("eval", "judge_backoff_ms", 500));
  if (const auto p = c.optional_path("eval", "judge_prompt"); !p.empty()) {
    io::require_exists(p, "judge prompt");
    j.prompt_template = io::read_text(p);
  }
  return j;
}

json MineParams::to_json() const {
  return {{"tau", tau}, {"gamma", gamma}, {"cap", cap}, {"recency_boost", recency_boost}};
}

MineParams mine_params(const Config& c) {
  MineParams m;
  m.tau = c.get_double("mine", "tau", m.tau);
  m.gamma = c.get_double("mine", "gamma", m.gamma);
  m.cap = c.get_double("mine", "cap", m.cap);
  m.recency_boost = c.get_double("mine", "recency_boost", m.recency_boost);
  if (!(m.tau >= 0.0 && m.tau <= 1.0)) throw ConfigError("mine: tau must lie in [0,1]");
  if (!(m.gamma >= 0.0)) throw ConfigError("mine: gamma must be >= 0");
  if (!(m.cap >= 1.0)) throw ConfigError("mine: cap must be >= 1");
  if (!(m.recency_boost >= 1.0)) throw ConfigError("mine: recency_boost must be >= 1");
  return m;
}

std::unique_ptr<CeSource> load_ce_source(const fs::path& path) {
  io::require_exists(path, "model");
  const std::string bytes = io::read_text(path);
  if (bytes.rfind("FORGETLM", 0) == 0) return std::make_unique<TinyLM>(TinyLM::from_bytes(bytes));
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw FormatError("model: neither a TinyLM binary nor JSON: " + path.string());
  return std::make_unique<NGramLM>(NGramLM::from_json(j));
}

std::map<std::string, double> read_weights(const fs::path& path) {
  io::require_exists(path, "weights file");
  const json j = io::read_json(path);
  std::map<std::string, double> out;
  try {
    for (const auto& [k, v] : j.at("weights").items()) out[k] = v.get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("weights file: ") + e.what());
  }
  return out;
}

NoiseSplit noise_split(std::span<const Document> docs, std::span<const TokenScoreRecord> records,
                       bool use_selection) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> spans;
  for (const auto& d : docs) {
    if (d.meta.contains("noise_start") && d.meta.contains("noise_end")) {
      spans[d.id] = {d.meta["noise_start"].get<std::size_t>(), d.meta["noise_end"].get<std::size_t>()};
    }
  }
  NoiseSplit s;
  double noise_sum = 0.0;
  double clean_sum = 0.0;
  for (const auto& r : records) {
    const double v = use_selection ? (r.selected ? 1.0 : 0.0) : r.weight;
    auto it = spans.find(r.doc_id);
    if (it != spans.end() && r.position >= it->second.first && r.position < it->second.second) {
      noise_sum += v;
      ++s.noise_tokens;
    } else {
      clean_sum += v;
      ++s.clean_tokens;
    }
  }
  if (s.noise_tokens) s.noise_mean = noise_sum / static_cast<double>(s.noise_tokens);
  if (s.clean_tokens) s.clean_mean = clean_sum / static_cast<double>(s.clean_tokens);
  return s;
}

namespace stages {

json synth(const Config& c) {
  const SynthConfig sc = synth_config(c);
  const fs::path dir = c.path("synth", "out", "data");
  const auto corpus = generate_synthetic(sc, c.seed());
  write_corpus(dir / "domain.jsonl", corpus.domain_docs);
  write_corpus(dir / "general.jsonl", corpus.general_docs);
  write_corpus(dir / "seed.jsonl", corpus.seed_docs);
  write_corpus(dir / "heldout_domain.jsonl", corpus.heldout_domain);
  write_corpus(dir / "heldout_general.jsonl", corpus.heldout_general);
  write_qa(dir / "qa.jsonl", corpus.qa);
  io::write_json(dir / "kb.json", corpus.kb.to_json());
  io::write_json(dir / "anchors.json", kb_anchors_json(corpus.kb));
  std::size_t noisy = 0;
  for (const auto& d : corpus.domain_docs) noisy += d.meta.contains("noise_start") ? 1 : 0;
  json report = stage_report("synth", c, sc.to_json(), json::object(), {{"dir", dir.generic_string()}});
  report["counts"] = {{"domain", corpus.domain_docs.size()},
                      {"general", corpus.general_docs.size()},
                      {"seed", corpus.seed_docs.size()},
                      {"heldout_domain", corpus.heldout_domain.size()},
                      {"heldout_general", corpus.heldout_general.size()},
                      {"qa", corpus.qa.size()},
                      {"noisy_domain", noisy}};
  io::write_json(dir / "report.json", report);
  return report;
}

json classify_train(const Config& c) {
  const auto kc = classifier_config(c);
  const fs::path pos_path = c.path("classify", "pos", "data/seed.jsonl");
  const fs::path neg_path = c.path("classify", "neg", "data/general.jsonl");
  const fs::path model_path = c.path("classify", "model", "classify/model.bin");
  const auto pos = load_docs(pos_path);
  const auto neg = load_docs(neg_path);
  const auto result = as_config_error("classify", [&] { return train_classifier(pos, neg, kc, c.seed()); });
  result.model.save(model_path);
  json report = stage_report("classify_train", c, kc.to_json(),
                             {{"pos", pos_path.generic_string()}, {"neg", neg_path.generic_string()}},
                             {{"model", model_path.generic_string()}});
  report["epoch_loss"] = result.epoch_loss;
  report["train_accuracy"] = result.train_accuracy;
  io::write_json(model_path.parent_path() / "train_report.json", report);
  return report;
}

json classify_score(const Config& c) {
  const double t_drop = c.get_double("classify", "t_drop", 0.3);
  const double t_full = c.get_double("classify", "t_full", 0.8);
  as_config_error("classify", [&] { return route(0.5, t_drop, t_full); });
  const fs::path model_path = c.path("classify", "model", "classify/model.bin");
  const fs::path in_path = c.path("classify", "input", "data/domain.jsonl");
  const fs::path out_path = c.path("classify", "output", "classify/kept.jsonl");
  const fs::path report_path = c.path("classify", "report", "classify/report.json");
  io::require_exists(model_path, "classifier model");
  const auto model = ClassifierModel::load(model_path);
  auto docs = load_docs(in_path);

  std::vector<double> p(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) { p[i] = score(model, docs[i]); });
  std::vector<Document> kept;
  double p_sum = 0.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    p_sum += p[i];
    const double w = route(p[i], t_drop, t_full);
    if (w <= 0.0) continue;
    Document d = docs[i];
    d.meta["classifier_p"] = p[i];
    d.meta["route_weight"] = w;
    d.flags.set(Flag::domain);
    kept.push_back(std::move(d));
  }
  write_corpus(out_path, kept);
  json params{{"t_drop", t_drop}, {"t_full", t_full}};
  json report = stage_report("classify_score", c, params,
                             {{"model", model_path.generic_string()}, {"input", in_path.generic_string()}},
                             {{"output", out_path.generic_string()}});
  report["n_in"] = docs.size();
  report["n_kept"] = kept.size();
  report["mean_p"] = docs.empty() ? 0.0 : p_sum / static_cast<double>(docs.size());
  io::write_json(report_path, report);
  return report;
}

json clean(const Config& c) {
  const auto cc = clean_config(c);
  const fs::path in_path = c.path("clean", "input", "classify/kept.jsonl");
  const fs::path out_path = c.path("clean", "output", "clean/cleaned.jsonl");
  const fs::path sidecar = c.path("clean", "report", "clean/report.jsonl");
  const fs::path summary_path = c.path("clean", "summary", "clean/summary.json");
  const fs::path lexicon_path = c.optional_path("clean", "lexicon");
  BoilerplateLexicon custom;
  if (!lexicon_path.empty()) custom = BoilerplateLexicon::load(lexicon_path);
  const BoilerplateLexicon& lexicon = lexicon_path.empty() ? BoilerplateLexicon::builtin() : custom;

  const auto docs = load_docs(in_path);
  std::vector<CleanOutcome> outcomes(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) { outcomes[i] = clean_document(docs[i], cc, lexicon); });

  std::vector<Document> kept;
  std::vector<json> rows;
  std::map<std::string, std::size_t> dropped;
  std::map<std::string, std::size_t> pii;
  for (auto& o : outcomes) {
    rows.push_back(o.report.to_json());
    for (const auto& [k, n] : o.report.pii_counts) pii[k] += n;
    if (o.report.dropped) {
      ++dropped[std::string(to_string(*o.report.reason))];
    } else {
      kept.push_back(std::move(o.doc));
    }
  }
  write_corpus(out_path, kept);
  io::write_atomic(sidecar, io::to_jsonl(rows));
  json params = cc.to_json();
  params["lexicon"] = lexicon_path.empty() ? "builtin" : lexicon_path.generic_string();
  params["lexicon_version"] = lexicon.version();
  json report = stage_report("clean", c, params, {{"input", in_path.generic_string()}},
                             {{"output", out_path.generic_string()}, {"report", sidecar.generic_string()}});
  report["n_in"] = docs.size();
  report["n_kept"] = kept.size();
  report["dropped"] = dropped;
  report["pii_counts"] = pii;
  io::write_json(summary_path, report);
  return report;
}

json dedup(const Config& c) {
  const auto params = dedup_params(c);
  const fs::path in_path = c.path("dedup", "input", "clean/cleaned.jsonl");
  const fs::path out_path = c.path("dedup", "output", "dedup/kept.jsonl");
  const fs::path clusters_path = c.path("dedup", "clusters", "dedup/clusters.json");
  const fs::path report_path = c.path("dedup", "report", "dedup/report.json");
  const auto docs = load_docs(in_path);
  const auto result = dedup_corpus(docs, params);

  std::set<std::string> keep(result.kept_ids.begin(), result.kept_ids.end());
  std::vector<Document> kept;
  for (const auto& d : docs) {
    if (keep.count(d.id) == 0) continue;
    Document k = d;
    k.flags.set(Flag::deduped);
    kept.push_back(std::move(k));
  }
  write_corpus(out_path, kept);
  json clusters = json::array();
  for (const auto& cl : result.clusters) clusters.push_back(cl.to_json());
  io::write_json(clusters_path, {{"clusters", clusters}});
  json report = stage_report("dedup", c, params.to_json(), {{"input", in_path.generic_string()}},
                             {{"output", out_path.generic_string()}, {"clusters", clusters_path.generic_string()}});
  report["n_in"] = docs.size();
  report["n_kept"] = kept.size();
  report["n_clusters"] = result.clusters.size();
  io::write_json(report_path, report);
  return report;
}

json mine(const Config& c) {
  const auto mp = mine_params(c);
  const fs::path in_path = c.path("mine", "input", "dedup/kept.jsonl");
  const fs::path anchors_path = c.path("mine", "anchors", "data/anchors.json");
  const fs::path kb_path = c.path("mine", "kb", "data/kb.json");
  const fs::path clf_path = c.path("mine", "classifier", "classify/model.bin");
  const fs::path matches_path = c.path("mine", "matches", "mine/matches.jsonl");
  const fs::path graph_path = c.path("mine", "graph", "mine/trigraph.json");
  const fs::path weights_path = c.path("mine", "weights", "mine/weights.json");

  const auto docs = load_docs(in_path);
  io::require_exists(anchors_path, "anchors file");
  const auto anchors = AnchorSet::load(anchors_path);
  const auto kb = load_kb(kb_path);
  io::require_exists(clf_path, "classifier model");
  const auto clf = ClassifierModel::load(clf_path);

  std::vector<std::vector<AnchorMatch>> per_doc(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    const Tokens toks = tokenize(docs[i].text);
    per_doc[i] = filter_matches(find_anchors(docs[i].id, toks, anchors, score(clf, docs[i])), mp.tau);
  });
  std::vector<AnchorMatch> matches;
  std::vector<json> rows;
  for (const auto& ms : per_doc) {
    for (const auto& m : ms) {
      matches.push_back(m);
      rows.push_back(m.to_json());
    }
  }
  const TriGraph graph = as_config_error("mine", [&] { return build_trigraph(matches, kb); });
  auto weights = upsample_weights(graph, mp.gamma, mp.cap);
  apply_recency_boost(weights, graph, kb, mp.recency_boost, mp.cap);

  io::write_atomic(matches_path, io::to_jsonl(rows));
  io::write_json(graph_path, graph.summary_json());
  io::write_json(weights_path, {{"weights", weights}, {"params", mp.to_json()}});
  std::size_t upsampled = 0;
  for (const auto& [_, w] : weights) upsampled += w > 1.0 ? 1 : 0;
  json report = stage_report("mine", c, mp.to_json(),
                             {{"input", in_path.generic_string()},
                              {"anchors", anchors_path.generic_string()},
                              {"kb", kb_path.generic_string()},
                              {"classifier", clf_path.generic_string()}},
                             {{"matches", matches_path.generic_string()},
                              {"graph", graph_path.generic_string()},
                              {"weights", weights_path.generic_string()}});
  report["n_docs"] = docs.size();
  report["n_matches"] = matches.size();
  report["n_matched_docs"] = graph.docs.size();
  report["n_upsampled_docs"] = upsampled;
  io::write_json(weights_path.parent_path() / "report.json", report);
  return report;
}

json rm_train(const Config& c) {
  const auto lambdas = rm_lambdas(c);
  const std::size_t v_max = c.get_size("vocab", "v_max", 8192);
  if (v_max < 4) throw ConfigError("vocab: v_max must be >= 4");
  const auto vocab_corpora =
      path_list(c, "vocab", "corpora", {"data/domain.jsonl", "data/general.jsonl", "data/seed.jsonl"});
  const auto proxy_corpora = path_list(c, "rm", "proxy_corpora", {"data/domain.jsonl", "data/general.jsonl"});
  const fs::path vocab_path = c.path("vocab", "output", "vocab.json");
  const fs::path seed_path = c.path("rm", "seed_docs", "data/seed.jsonl");
  const fs::path model_path = c.path("rm", "model", "rm/rm.json");
  const fs::path proxy_path = c.path("rm", "proxy", "rm/proxy.json");
  const fs::path report_path = c.path("rm", "report", "rm/report.json");

  const Vocab vocab = build_vocab(load_many(vocab_corpora), v_max);
  vocab.save(vocab_path);
  const auto seed_docs = load_docs(seed_path);
  const NGramLM rm = train_rm(seed_docs, vocab, lambdas);
  rm.save(model_path);
  const NGramLM proxy = train_rm(load_many(proxy_corpora), vocab, lambdas);
  proxy.save(proxy_path);

  json params{{"lambdas", lambdas.to_json()}, {"v_max", v_max}};
  json report = stage_report("rm_train", c, params,
                             {{"vocab_corpora", paths_json(vocab_corpora)},
                              {"seed_docs", seed_path.generic_string()},
                              {"proxy_corpora", paths_json(proxy_corpora)}},
                             {{"vocab", vocab_path.generic_string()},
                              {"model", model_path.generic_string()},
                              {"proxy", proxy_path.generic_string()}});
  report["vocab_size"] = vocab.size();
  report["seed_tokens"] = rm.total_tokens();
  report["seed_perplexity"] = perplexity(rm, seed_docs);
  io::write_json(report_path, report);
  return report;
}

json rm_score(const Config& c) {
  const fs::path model_path = c.path("rm", "model", "rm/rm.json");
  const fs::path in_path = c.path("rm", "score_input", "data/domain.jsonl");
  const fs::path out_path = c.path("rm", "score_output", "rm/ce.jsonl");
  io::require_exists(model_path, "reference model");
  const auto rm = NGramLM::load(model_path);
  const auto docs = load_docs(in_path);
  std::vector<json> rows(docs.size());
  std::vector<double> sums(docs.size(), 0.0);
  std::vector<std::size_t> counts(docs.size(), 0);
  parallel_for(docs.size(), [&](std::size_t i) {
    const auto ce = rm.nll(encode_document(rm.vocab(), docs[i].text));
    for (double v : ce) sums[i] += v;
    counts[i] = ce.size();
    rows[i] = {{"doc_id", docs[i].id}, {"ce_rm", ce}};
  });
  io::write_atomic(out_path, io::to_jsonl(rows));
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    sum += sums[i];
    n += counts[i];
  }
  json report = stage_report("rm_score", c, {{"lambdas", rm.lambdas().to_json()}},
                             {{"model", model_path.generic_string()}, {"input", in_path.generic_string()}},
                             {{"output", out_path.generic_string()}});
  report["n_docs"] = docs.size();
  report["n_tokens"] = n;
  report["mean_ce"] = n ? sum / static_cast<double>(n) : 0.0;
  io::write_json(out_path.parent_path() / "score_report.json", report);
  return report;
}

json score(const Config& c) {
  const auto params = score_params(c);
  const fs::path in_path = c.path("score", "input", "dedup/kept.jsonl");
  const fs::path rm_path = c.path("score", "rm", "rm/rm.json");
  const fs::path model_path = c.path("score", "model_ce", "rm/proxy.json");
  const fs::path out_path = c.path("score", "output", "score/scores.jsonl");
  const fs::path report_path = c.path("score", "report", "score/report.json");
  const auto docs = load_docs(in_path);
  io::require_exists(rm_path, "reference model");
  const auto rm = NGramLM::load(rm_path);
  const auto model = load_ce_source(model_path);
  const auto records = score_corpus(docs, rm, *model, params);
  write_scores(out_path, records);

  double w_sum = 0.0;
  std::size_t selected = 0;
  for (const auto& r : records) {
    w_sum += r.weight;
    selected += r.selected ? 1 : 0;
  }
  json report = stage_report("score", c, params.to_json(),
                             {{"input", in_path.generic_string()},
                              {"rm", rm_path.generic_string()},
                              {"model_ce", model_path.generic_string()}},
                             {{"output", out_path.generic_string()}});
  report["n_records"] = records.size();
  report["mean_weight"] = records.empty() ? 0.0 : w_sum / static_cast<double>(records.size());
  report["n_selected"] = selected;
  const auto split = noise_split(docs, records, params.mode == Mode::rho1);
  if (split.noise_tokens > 0) {
    report["noise_split"] = {{"noise_mean", split.noise_mean},
                             {"clean_mean", split.clean_mean},
                             {"noise_tokens", split.noise_tokens},
                             {"clean_tokens", split.clean_tokens}};
  }
  io::write_json(report_path, report);
  return report;
}

json train(const Config& c) {
  const TrainConfig tc = train_config(c);
  const fs::path domain_path = c.path("train", "domain", "dedup/kept.jsonl");
  const fs::path general_path = c.path("train", "general", "data/general.jsonl");
  const fs::path hd_path = c.path("train", "heldout_domain", "data/heldout_domain.jsonl");
  const fs::path hg_path = c.path("train", "heldout_general", "data/heldout_general.jsonl");
  const fs::path vocab_path = c.path("train", "vocab", "vocab.json");
  const fs::path model_path = c.path("train", "model", "train/model.bin");
  const fs::path metrics_path = c.path("train", "metrics", "train/metrics.csv");
  const fs::path report_path = c.path("train", "report", "train/report.json");
  // An explicitly empty value disables scores (NTP only), weights and init.
  const bool no_scores = c.has("train", "scores") && c.get_string("train", "scores", "").empty();
  const fs::path scores_path = no_scores ? fs::path() : c.path("train", "scores", "score/scores.jsonl");
  const fs::path weights_path = c.optional_path("train", "weights");
  const fs::path init_path = c.optional_path("train", "init");

  io::require_exists(vocab_path, "vocabulary");
  const Vocab vocab = Vocab::load(vocab_path);
  const auto domain = tc.general_mix_ratio < 1.0 ? load_docs(domain_path) : std::vector<Document>{};
  const auto general = tc.general_mix_ratio > 0.0 ? load_docs(general_path) : std::vector<Document>{};
  const auto heldout_domain = load_docs(hd_path);
  const auto heldout_general = load_docs(hg_path);
  std::vector<TokenScoreRecord> scores;
  if (!scores_path.empty() && !domain.empty()) {
    io::require_exists(scores_path, "score file");
    scores = read_scores(scores_path);
  }
  std::map<std::string, double> weights;
  if (!weights_path.empty()) weights = read_weights(weights_path);
  std::optional<TinyLM> init;
  if (!init_path.empty()) {
    io::require_exists(init_path, "init model");
    init = TinyLM::load(init_path);
  }

  TrainData data{domain, scores, general, heldout_domain, heldout_general,
                 weights_path.empty() ? nullptr : &weights, init ? &*init : nullptr};
  const auto result = forge::train(tc, data, vocab);
  result.model.save(model_path);
  io::write_atomic(metrics_path, metrics_to_csv(result.history));

  json inputs{{"domain", domain_path.generic_string()},
              {"scores", scores_path.generic_string()},
              {"general", general_path.generic_string()},
              {"heldout_domain", hd_path.generic_string()},
              {"heldout_general", hg_path.generic_string()},
              {"weights", weights_path.generic_string()},
              {"init", init_path.generic_string()},
              {"vocab", vocab_path.generic_string()}};
  json report = stage_report("train", c, tc.to_json(), inputs,
                             {{"model", model_path.generic_string()}, {"metrics", metrics_path.generic_string()}});
  const auto& last = result.history.back();
  report["final"] = {{"step", last.step},
                     {"train_loss", fmt(last.train_loss)},
                     {"heldout_domain_ce", fmt(last.heldout_domain_ce)},
                     {"heldout_general_ce", fmt(last.heldout_general_ce)}};
  report["domain_windows_drawn"] = result.domain_windows_drawn;
  report["general_windows_drawn"] = result.general_windows_drawn;
  report["num_parameters"] = result.model.num_parameters();
  io::write_json(report_path, report);
  return report;
}

json eval(const Config& c) {
  const EvalConfig ec = eval_config(c);
  const fs::path qa_path = c.path("eval", "qa", "data/qa.jsonl");
  const fs::path answers_path = c.optional_path("eval", "answers");
  const fs::path model_path = c.path("eval", "model", "train/model.bin");
  const fs::path report_path = c.path("eval", "report", "eval/report.json");
  const fs::path summary_path = c.path("eval", "summary", "eval/summary.csv");

  io::require_exists(qa_path, "QA file");
  const auto items = read_qa(qa_path);
  std::unique_ptr<JudgeClient> judge;
  json params = ec.to_json();
  if (ec.use_judge) {
    auto jc = judge_config(c);
    params["judge_url"] = jc.base_url;
    params["judge_model"] = jc.model;
    judge = std::make_unique<HttpJudgeClient>(std::move(jc));
  }

  EvalReport report;
  json inputs{{"qa", qa_path.generic_string()}};
  if (!answers_path.empty()) {
    const auto source = FileAnswerSource::load(answers_path);
    report = evaluate(source, items, ec, judge.get());
    inputs["answers"] = answers_path.generic_string();
  } else {
    io::require_exists(model_path, "model");
    const auto model = TinyLM::load(model_path);
    report = evaluate(ModelAnswerSource(model, ec.max_answer_len), items, ec, judge.get());
    inputs["model"] = model_path.generic_string();
  }
  json out = stage_report("eval", c, params, inputs,
                          {{"report", report_path.generic_string()}, {"summary", summary_path.generic_string()}});
  out["result"] = report.to_json();
  io::write_json(report_path, out);
  io::write_atomic(summary_path, report.summary_csv());
  return out;
}

}  // namespace stages

}  // namespace forge
