// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/common.hpp"

namespace forge {

enum class Source { book, common_crawl, instruction, paper, wiki, mined, synthetic };

std::string_view to_string(Source s);
Source source_from_string(std::string_view s);

/// Pipeline markers carried by a document.
enum class Flag : std::uint8_t { cleaned = 1, masked = 2, deduped = 4, domain = 8 };

class Flags {
 public:
  Flags() = default;
  bool has(Flag f) const { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  void set(Flag f) { bits_ |= static_cast<std::uint8_t>(f); }
  void clear(Flag f) { bits_ &= static_cast<std::uint8_t>(~static_cast<std::uint8_t>(f)); }
  std::vector<std::string> names() const;
  static Flags from_names(const std::vector<std::string>& names);
  bool operator==(const Flags&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

struct Document {
  std::string id;
  Source source = Source::synthetic;
  std::string text;
  std::string lang = "und";
  /// Flat map: values are JSON scalars only.
  nlohmann::json meta = nlohmann::json::object();
  Flags flags;

  bool operator==(const Document&) const = default;
};

nlohmann::json to_json(const Document& doc);
/// Rejects missing or extra fields, unknown enum values, and nested meta.
Document document_from_json(const nlohmann::json& j);

/// Reads a corpus file; ids must be unique.
std::vector<Document> read_corpus(const std::filesystem::path& path);
std::string corpus_to_jsonl(std::span<const Document> docs);
void write_corpus(const std::filesystem::path& path, std::span<const Document> docs);

/// Lowercased, NFC-normalized word/punctuation split. Letter and digit runs
/// form single tokens; every other non-space codepoint is its own token.
Tokens tokenize(std::string_view text);

class Vocab {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";

  /// `surface` must not contain special tokens or duplicates.
  explicit Vocab(std::vector<std::string> surface = {});

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(TokenId id) const;
  /// Returns kUnk for out-of-vocabulary tokens.
  TokenId id(std::string_view token) const;
  std::optional<TokenId> find(std::string_view token) const;

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

  nlohmann::json to_json() const;
  static Vocab from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Specials plus the top (v_max - 3) surface tokens by frequency, ties broken
/// lexicographically.
Vocab build_vocab(std::span<const Document> corpus, std::size_t v_max = 8192);

TokenIds encode(const Vocab& vocab, std::span<const std::string> tokens);
Tokens decode(const Vocab& vocab, std::span<const TokenId> ids);

/// tokenize + encode + trailing EOS: the scored sequence for a document.
TokenIds encode_document(const Vocab& vocab, std::string_view text);

}  // namespace forge
