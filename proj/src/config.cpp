// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/config.hpp"

#include <algorithm>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "forge/common.hpp"
#include "forge/io.hpp"

namespace forge {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& Config::schema() {
  static const std::map<std::string, std::vector<std::string>> kSchema{
      {"", {"seed", "out_dir", "threads"}},
      {"synth",
       {"out", "n_artists", "n_songs", "n_domain_docs", "n_general_docs", "n_seed_docs", "n_heldout_domain",
        "n_heldout_general", "n_qa", "noise_rate", "spam_rate", "popular_fraction", "zipf_exponent", "min_sentences",
        "max_sentences", "dup_rate", "junk_rate"}},
      {"vocab", {"corpora", "v_max", "output"}},
      {"classify",
       {"pos", "neg", "model", "input", "output", "report", "dim", "lr", "epochs", "hash_seed", "ngram_orders",
        "t_drop", "t_full"}},
      {"clean", {"input", "output", "report", "summary", "lexicon", "lang_allowlist", "q_min"}},
      {"dedup",
       {"input", "output", "clusters", "report", "shingle_k", "num_hashes", "minhash_seed", "bands", "rows",
        "threshold"}},
      {"mine",
       {"input", "anchors", "kb", "classifier", "tau", "gamma", "cap", "recency_boost", "matches", "graph",
        "weights"}},
      {"rm",
       {"seed_docs", "vocab", "lambdas", "model", "proxy_corpora", "proxy", "score_input", "score_output",
        "report"}},
      {"score", {"input", "vocab", "rm", "model_ce", "mode", "alpha", "eps", "rho", "output", "report"}},
      {"train",
       {"domain", "scores", "general", "heldout_domain", "heldout_general", "weights", "init", "vocab", "model",
        "metrics", "report", "steps", "batch_size", "lr_max", "lr_min", "warmup_frac", "general_mix_ratio",
        "rho1_scope", "eval_every", "context", "embed", "hidden", "output_init"}},
      {"eval",
       {"qa", "model", "answers", "report", "summary", "max_answer_len", "use_judge", "judge_url", "judge_path",
        "judge_model", "judge_token_env", "judge_timeout_ms", "judge_retries", "judge_backoff_ms",
        "judge_concurrency", "judge_prompt"}},
      {"experiment",
       {"modes", "seeds", "recipes", "base_steps", "base_lr_max", "base_lr_min", "base_eval_every",
        "keep_scores"}},
  };
  return kSchema;
}

Config Config::parse(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config config;
  const auto& sections = schema();
  for (const auto& [name, node] : tree) {
    const bool is_section = !node.empty() || (node.data().empty() && sections.count(name) > 0 && !name.empty());
    if (!is_section) {
      config.set("", name, trim(node.data()));
      continue;
    }
    if (sections.count(name) == 0 || name.empty()) throw ConfigError("config: unknown section [" + name + "]");
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("config: nested key under [" + name + "]");
      config.set(name, key, trim(leaf.data()));
    }
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  return parse(io::read_text(path));
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  const auto& sections = schema();
  auto it = sections.find(section);
  if (it == sections.end()) throw ConfigError("config: unknown section [" + section + "]");
  if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
    throw ConfigError("config: unknown key '" + qualified(section, key) + "'");
  }
  values_[section][key] = std::move(value);
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  auto s = values_.find(section);
  if (s == values_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& def) const {
  const auto* v = find(section, key);
  return v ? *v : def;
}

double Config::get_double(const std::string& section, const std::string& key, double def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used == v->size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + qualified(section, key) + "' is not a number: " + *v);
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  try {
    std::size_t used = 0;
    if (!v->empty() && (*v)[0] != '-') {
      const auto n = std::stoull(*v, &used, 0);
      if (used == v->size()) return n;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + qualified(section, key) + "' is not a non-negative integer: " + *v);
}

std::size_t Config::get_size(const std::string& section, const std::string& key, std::size_t def) const {
  return static_cast<std::size_t>(get_u64(section, key, def));
}

bool Config::get_bool(const std::string& section, const std::string& key, bool def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("config: '" + qualified(section, key) + "' is not a boolean: " + *v);
}

std::vector<std::string> Config::get_list(const std::string& section, const std::string& key,
                                          const std::vector<std::string>& def) const {
  const auto* v = find(section, key);
  if (!v) return def;
  std::vector<std::string> out;
  std::string_view rest = *v;
  while (true) {
    const auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& def) const {
  if (!has(section, key)) return def;
  std::vector<double> out;
  for (const auto& item : get_list(section, key, {})) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("config: '" + qualified(section, key) + "' has a non-numeric item: " + item);
    }
  }
  return out;
}

std::filesystem::path Config::path(const std::string& section, const std::string& key,
                                   const std::filesystem::path& fallback) const {
  const auto* v = find(section, key);
  if (v && !v->empty()) return *v;
  return out_dir() / fallback;
}

std::filesystem::path Config::optional_path(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  return v ? std::filesystem::path(*v) : std::filesystem::path();
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [section, kv] : values_) {
    auto& dst = j[section.empty() ? "global" : section];
    for (const auto& [k, v] : kv) dst[k] = v;
  }
  return j;
}

std::string Config::to_ini() const {
  std::string out;
  if (auto g = values_.find(""); g != values_.end()) {
    for (const auto& [k, v] : g->second) out += k + " = " + v + "\n";
  }
  for (const auto& [section, kv] : values_) {
    if (section.empty()) continue;
    out += "\n[" + section + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace forge
