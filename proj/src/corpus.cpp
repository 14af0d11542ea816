// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/corpus.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_set>

#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/unicode.hpp"

namespace forge {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Source, std::string_view>, 7> kSourceNames{{
    {Source::book, "book"},
    {Source::common_crawl, "common_crawl"},
    {Source::instruction, "instruction"},
    {Source::paper, "paper"},
    {Source::wiki, "wiki"},
    {Source::mined, "mined"},
    {Source::synthetic, "synthetic"},
}};

constexpr std::array<std::pair<Flag, std::string_view>, 4> kFlagNames{{
    {Flag::cleaned, "cleaned"},
    {Flag::masked, "masked"},
    {Flag::deduped, "deduped"},
    {Flag::domain, "domain"},
}};

}  // namespace

std::string_view to_string(Source s) {
  for (const auto& [src, name] : kSourceNames) {
    if (src == s) return name;
  }
  return "synthetic";
}

Source source_from_string(std::string_view s) {
  for (const auto& [src, name] : kSourceNames) {
    if (name == s) return src;
  }
  throw FormatError("unknown document source: " + std::string(s));
}

std::vector<std::string> Flags::names() const {
  std::vector<std::string> out;
  for (const auto& [f, name] : kFlagNames) {
    if (has(f)) out.emplace_back(name);
  }
  return out;
}

Flags Flags::from_names(const std::vector<std::string>& names) {
  Flags flags;
  for (const auto& n : names) {
    bool known = false;
    for (const auto& [f, name] : kFlagNames) {
      if (name == n) {
        flags.set(f);
        known = true;
      }
    }
    if (!known) throw FormatError("unknown document flag: " + n);
  }
  return flags;
}

json to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["source"] = std::string(to_string(doc.source));
  j["text"] = doc.text;
  j["lang"] = doc.lang;
  j["meta"] = doc.meta;
  j["flags"] = doc.flags.names();
  return j;
}

Document document_from_json(const json& j) {
  static const std::set<std::string> kFields{"id", "source", "text", "lang", "meta", "flags"};
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kFields.contains(key)) throw FormatError("unexpected document field: " + key);
  }
  for (const auto& key : kFields) {
    if (!j.contains(key)) throw FormatError("missing document field: " + key);
  }
  Document doc;
  try {
    doc.id = j.at("id").get<std::string>();
    doc.source = source_from_string(j.at("source").get<std::string>());
    doc.text = j.at("text").get<std::string>();
    doc.lang = j.at("lang").get<std::string>();
    doc.flags = Flags::from_names(j.at("flags").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad document field: ") + e.what());
  }
  doc.meta = j.at("meta");
  if (!doc.meta.is_object()) throw FormatError("document meta must be an object");
  for (const auto& [key, value] : doc.meta.items()) {
    if (value.is_structured()) throw FormatError("document meta must be flat: " + key);
  }
  return doc;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  io::require_exists(path, "corpus");
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for (const auto& row : io::read_jsonl(path)) {
    docs.push_back(document_from_json(row));
    if (!seen.insert(docs.back().id).second) {
      throw FormatError("duplicate document id in " + path.string() + ": " + docs.back().id);
    }
  }
  return docs;
}

std::string corpus_to_jsonl(std::span<const Document> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, std::span<const Document> docs) {
  io::write_atomic(path, corpus_to_jsonl(docs));
}

Tokens tokenize(std::string_view text) {
  const std::u32string cps = unicode::to_u32(unicode::lower_nfc(text));
  Tokens out;
  std::u32string run;
  auto flush = [&] {
    if (!run.empty()) {
      out.push_back(unicode::to_utf8(run));
      run.clear();
    }
  };
  for (char32_t cp : cps) {
    if (unicode::is_word(cp)) {
      run.push_back(cp);
      continue;
    }
    flush();
    if (unicode::is_space(cp) || unicode::is_control(cp)) continue;
    out.push_back(unicode::to_utf8(cp));
  }
  flush();
  return out;
}

Vocab::Vocab(std::vector<std::string> surface) {
  tokens_.reserve(surface.size() + 3);
  tokens_.emplace_back(kUnkToken);
  tokens_.emplace_back(kBosToken);
  tokens_.emplace_back(kEosToken);
  for (auto& t : surface) {
    if (t == kUnkToken || t == kBosToken || t == kEosToken) {
      throw InvalidArgument("special token in vocabulary surface list: " + t);
    }
    tokens_.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

const std::string& Vocab::token(TokenId id) const {
  if (id >= tokens_.size()) throw InvalidArgument("token id out of range: " + std::to_string(id));
  return tokens_[id];
}

TokenId Vocab::id(std::string_view token) const { return find(token).value_or(kUnk); }

std::optional<TokenId> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

json Vocab::to_json() const {
  return json{{"version", 1}, {"tokens", tokens_}};
}

Vocab Vocab::from_json(const json& j) {
  if (!j.is_object() || j.value("version", 0) != 1 || !j.contains("tokens")) {
    throw FormatError("vocab: expected {version: 1, tokens: [...]}");
  }
  auto tokens = j.at("tokens").get<std::vector<std::string>>();
  if (tokens.size() < 3 || tokens[kUnk] != kUnkToken || tokens[kBos] != kBosToken ||
      tokens[kEos] != kEosToken) {
    throw FormatError("vocab: specials must occupy ids 0,1,2");
  }
  tokens.erase(tokens.begin(), tokens.begin() + 3);
  return Vocab(std::move(tokens));
}

void Vocab::save(const std::filesystem::path& path) const { io::write_json(path, to_json()); }

Vocab Vocab::load(const std::filesystem::path& path) { return from_json(io::read_json(path)); }

Vocab build_vocab(std::span<const Document> corpus, std::size_t v_max) {
  if (v_max < 4) throw InvalidArgument("build_vocab: v_max must be >= 4");
  if (corpus.empty()) throw InvalidArgument("empty corpus");

  std::vector<Tokens> per_doc(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) { per_doc[i] = tokenize(corpus[i].text); });

  std::map<std::string, std::uint64_t> counts;
  for (const auto& toks : per_doc) {
    for (const auto& t : toks) ++counts[t];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t keep = std::min(ranked.size(), v_max - 3);
  std::vector<std::string> surface;
  surface.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) surface.push_back(ranked[i].first);
  return Vocab(std::move(surface));
}

TokenIds encode(const Vocab& vocab, std::span<const std::string> tokens) {
  TokenIds ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return ids;
}

Tokens decode(const Vocab& vocab, std::span<const TokenId> ids) {
  Tokens out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(vocab.token(id));
  return out;
}

TokenIds encode_document(const Vocab& vocab, std::string_view text) {
  const Tokens toks = tokenize(text);
  TokenIds ids = encode(vocab, toks);
  ids.push_back(Vocab::kEos);
  return ids;
}

}  // namespace forge
