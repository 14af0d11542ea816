// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"

namespace forge {

/// NFC; drops control characters other than \n and \t; any run of three or
/// more blank lines becomes a single blank line. Idempotent.
std::string normalize_text(std::string_view text);

struct LanguageGuess {
  std::string lang;
  double confidence = 0.0;
};

/// Script-ratio heuristic over letter codepoints: Han >= 0.3 -> "zh",
/// Latin >= 0.6 -> "en", otherwise "und".
LanguageGuess detect_language(std::string_view text);

/// Multi-token boilerplate phrases matched on tokenized text.
class BoilerplateLexicon {
 public:
  /// Parses the plain-text asset format: one phrase per line, '#' comments.
  static BoilerplateLexicon parse(std::string_view text);
  static BoilerplateLexicon load(const std::filesystem::path& path);
  /// The lexicon shipped in assets/boilerplate_lexicon.txt.
  static const BoilerplateLexicon& builtin();

  /// Non-overlapping phrase occurrences, scanned left to right, longest first.
  std::size_t count_hits(std::span<const std::string> tokens) const;
  const std::vector<Tokens>& phrases() const { return phrases_; }
  int version() const { return version_; }

 private:
  std::vector<Tokens> phrases_;
  int version_ = 0;
};

struct QualityBreakdown {
  double letter_ratio = 0.0;
  double unique_lines = 0.0;
  double boilerplate = 0.0;
  double length = 0.0;
  double total() const { return (letter_ratio + unique_lines + boilerplate + length) / 4.0; }
};

/// Four sub-scores in [0,1]; trailing whitespace on lines and at the end of
/// the text does not affect any of them.
QualityBreakdown quality_breakdown(std::string_view text, const BoilerplateLexicon& lexicon);
double quality_score(std::string_view text, const BoilerplateLexicon& lexicon = BoilerplateLexicon::builtin());

enum class PiiType { email, phone, id };
std::string_view placeholder(PiiType t);
std::string_view to_string(PiiType t);

struct PiiSpan {
  std::size_t begin = 0;  // byte offsets into the input
  std::size_t end = 0;
  PiiType type = PiiType::email;
};

/// Non-overlapping spans in increasing order.
std::vector<PiiSpan> find_pii(std::string_view text);

struct MaskResult {
  std::string text;
  std::map<std::string, std::size_t> counts;
};

/// Replaces e-mail addresses, phone numbers and 15/18-digit ID numbers with
/// [EMAIL], [PHONE], [ID]. Placeholders never match again, so this is
/// idempotent.
MaskResult mask_pii(std::string_view text);

enum class DropReason { lang, quality, empty };
std::string_view to_string(DropReason r);

struct CleanReport {
  std::string doc_id;
  std::string lang;
  double lang_confidence = 0.0;
  double quality = 0.0;
  std::map<std::string, std::size_t> pii_counts;
  bool dropped = false;
  std::optional<DropReason> reason;

  nlohmann::json to_json() const;
};

struct CleanConfig {
  std::set<std::string> lang_allowlist{"en", "zh"};
  double q_min = 0.4;

  nlohmann::json to_json() const;
};

struct CleanOutcome {
  Document doc;
  CleanReport report;
};

/// normalize -> language id -> quality -> PII masking. The document is
/// dropped iff it is empty, its language is outside the allowlist, or its
/// quality is below q_min (reason reported in that precedence).
CleanOutcome clean_document(const Document& doc, const CleanConfig& config,
                            const BoilerplateLexicon& lexicon = BoilerplateLexicon::builtin());

}  // namespace forge
