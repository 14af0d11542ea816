// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/cleaner.hpp"

#include <algorithm>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "forge/assets.hpp"
#include "forge/io.hpp"
#include "forge/unicode.hpp"

namespace forge {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      return lines;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
}

std::u32string rstrip(std::u32string s) {
  while (!s.empty() && unicode::is_space(s.back())) s.pop_back();
  return s;
}

bool is_blank(std::string_view line) {
  for (char32_t cp : unicode::to_u32(line)) {
    if (!unicode::is_space(cp)) return false;
  }
  return true;
}

bool ascii_alnum(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string normalize_text(std::string_view text) {
  std::u32string kept;
  for (char32_t cp : unicode::to_u32(text)) {
    if (unicode::is_control(cp) && cp != U'\n' && cp != U'\t') continue;
    kept.push_back(cp);
  }
  const std::string composed = unicode::nfc(unicode::to_utf8(kept));

  std::string out;
  const auto lines = split_lines(composed);
  std::size_t i = 0;
  bool first = true;
  auto emit = [&](std::string_view line) {
    if (!first) out += '\n';
    out += line;
    first = false;
  };
  while (i < lines.size()) {
    if (!is_blank(lines[i])) {
      emit(lines[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < lines.size() && is_blank(lines[j])) ++j;
    if (j - i > 2) {
      emit("");
    } else {
      for (std::size_t k = i; k < j; ++k) emit(lines[k]);
    }
    i = j;
  }
  return out;
}

LanguageGuess detect_language(std::string_view text) {
  std::size_t letters = 0;
  std::size_t han = 0;
  std::size_t latin = 0;
  for (char32_t cp : unicode::to_u32(unicode::nfc(text))) {
    if (!unicode::is_letter(cp)) continue;
    ++letters;
    if (unicode::is_han(cp)) ++han;
    else if (unicode::is_latin(cp)) ++latin;
  }
  if (letters == 0) return {"und", 0.0};
  const double n = static_cast<double>(letters);
  const double han_ratio = static_cast<double>(han) / n;
  const double latin_ratio = static_cast<double>(latin) / n;
  if (han_ratio >= 0.3) return {"zh", han_ratio};
  if (latin_ratio >= 0.6) return {"en", latin_ratio};
  return {"und", 1.0 - han_ratio - latin_ratio};
}

BoilerplateLexicon BoilerplateLexicon::parse(std::string_view text) {
  BoilerplateLexicon lex;
  for (auto line : split_lines(text)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first);
    if (line.starts_with('#')) {
      constexpr std::string_view kTag = "version:";
      const auto at = line.find(kTag);
      if (at != std::string_view::npos) lex.version_ = std::stoi(std::string(line.substr(at + kTag.size())));
      continue;
    }
    Tokens phrase = tokenize(line);
    if (!phrase.empty()) lex.phrases_.push_back(std::move(phrase));
  }
  std::stable_sort(lex.phrases_.begin(), lex.phrases_.end(),
                   [](const Tokens& a, const Tokens& b) { return a.size() > b.size(); });
  return lex;
}

BoilerplateLexicon BoilerplateLexicon::load(const std::filesystem::path& path) {
  return parse(io::read_text(path));
}

const BoilerplateLexicon& BoilerplateLexicon::builtin() {
  static const BoilerplateLexicon lex = parse(assets::kBoilerplateLexicon);
  return lex;
}

std::size_t BoilerplateLexicon::count_hits(std::span<const std::string> tokens) const {
  std::size_t hits = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (const auto& p : phrases_) {
      if (i + p.size() <= tokens.size() && std::equal(p.begin(), p.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        matched = p.size();
        break;
      }
    }
    if (matched > 0) {
      ++hits;
      i += matched;
    } else {
      ++i;
    }
  }
  return hits;
}

QualityBreakdown quality_breakdown(std::string_view text, const BoilerplateLexicon& lexicon) {
  QualityBreakdown q;

  std::vector<std::u32string> lines;
  for (auto line : split_lines(text)) lines.push_back(rstrip(unicode::to_u32(line)));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::size_t codepoints = 0;
  std::size_t letters = 0;
  std::size_t content_lines = 0;
  std::size_t duplicates = 0;
  std::unordered_set<std::u32string> seen;
  for (const auto& line : lines) {
    codepoints += line.size();
    for (char32_t cp : line) letters += unicode::is_letter(cp) ? 1 : 0;
    if (line.empty()) continue;
    ++content_lines;
    if (!seen.insert(line).second) ++duplicates;
  }
  if (codepoints > 0) q.letter_ratio = static_cast<double>(letters) / static_cast<double>(codepoints);
  if (content_lines > 0) {
    q.unique_lines = 1.0 - static_cast<double>(duplicates) / static_cast<double>(content_lines);
  }

  const Tokens toks = tokenize(text);
  if (!toks.empty()) {
    const double n = static_cast<double>(toks.size());
    const double per_100 = 100.0 * static_cast<double>(lexicon.count_hits(toks)) / n;
    q.boilerplate = 1.0 - std::min(1.0, per_100);
    q.length = std::min(1.0, n / 50.0);
  }
  return q;
}

double quality_score(std::string_view text, const BoilerplateLexicon& lexicon) {
  return quality_breakdown(text, lexicon).total();
}

std::string_view placeholder(PiiType t) {
  switch (t) {
    case PiiType::email: return "[EMAIL]";
    case PiiType::phone: return "[PHONE]";
    case PiiType::id: return "[ID]";
  }
  return "";
}

std::string_view to_string(PiiType t) {
  switch (t) {
    case PiiType::email: return "EMAIL";
    case PiiType::phone: return "PHONE";
    case PiiType::id: return "ID";
  }
  return "";
}

std::vector<PiiSpan> find_pii(std::string_view text) {
  static const std::regex kEmail(R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,})");
  std::vector<PiiSpan> spans;
  for (auto it = std::cregex_iterator(text.data(), text.data() + text.size(), kEmail); it != std::cregex_iterator();
       ++it) {
    const auto b = static_cast<std::size_t>(it->position(0));
    spans.push_back({b, b + static_cast<std::size_t>(it->length(0)), PiiType::email});
  }

  // Digit runs: phone numbers may carry a leading '+', groups separated by at
  // most two characters from " -.()"; ID numbers are bare 15- or 18-digit
  // runs (the 18th may be X).
  auto inside_email = [&](std::size_t pos) {
    return std::any_of(spans.begin(), spans.end(), [&](const PiiSpan& s) {
      return s.type == PiiType::email && pos >= s.begin && pos < s.end;
    });
  };
  auto is_sep = [](char c) { return c == ' ' || c == '-' || c == '.' || c == '(' || c == ')'; };

  std::vector<PiiSpan> digit_spans;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const bool opener = (c == '+' || c == '(') && i + 1 < text.size() && ascii_digit(text[i + 1]);
    if (!(ascii_digit(c) || opener) || inside_email(i) || (i > 0 && ascii_alnum(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = opener ? i + 1 : i;
    std::size_t digits = 0;
    std::size_t last_digit_end = j;
    std::size_t seps = 0;
    bool separated = opener;
    while (j < text.size() && !inside_email(j)) {
      if (ascii_digit(text[j])) {
        // Only separators between two digits count; trailing ones are not part of the run.
        separated = separated || seps > 0;
        ++digits;
        last_digit_end = j + 1;
        seps = 0;
      } else if (is_sep(text[j]) && seps < 2) {
        ++seps;
      } else {
        break;
      }
      ++j;
    }
    std::size_t end = last_digit_end;
    bool x_check = false;
    if (!separated && digits == 17 && end < text.size() && (text[end] == 'X' || text[end] == 'x')) {
      ++end;
      x_check = true;
    }
    const bool bounded = end >= text.size() || !ascii_alnum(text[end]);
    if (bounded) {
      const bool bare = !separated && last_digit_end - i == digits;
      if (bare && (digits == 15 || digits == 18 || x_check)) {
        digit_spans.push_back({i, end, PiiType::id});
      } else if (digits >= 7 && digits <= 15) {
        digit_spans.push_back({i, last_digit_end, PiiType::phone});
      }
    }
    i = std::max(end, i + 1);
  }
  spans.insert(spans.end(), digit_spans.begin(), digit_spans.end());
  std::sort(spans.begin(), spans.end(), [](const PiiSpan& a, const PiiSpan& b) { return a.begin < b.begin; });
  return spans;
}

MaskResult mask_pii(std::string_view text) {
  MaskResult r;
  std::size_t pos = 0;
  for (const auto& s : find_pii(text)) {
    r.text.append(text.substr(pos, s.begin - pos));
    r.text.append(placeholder(s.type));
    ++r.counts[std::string(to_string(s.type))];
    pos = s.end;
  }
  r.text.append(text.substr(pos));
  return r;
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::lang: return "lang";
    case DropReason::quality: return "quality";
    case DropReason::empty: return "empty";
  }
  return "";
}

json CleanReport::to_json() const {
  json j{{"doc_id", doc_id},
         {"lang", lang},
         {"lang_confidence", lang_confidence},
         {"quality", quality},
         {"pii_counts", pii_counts},
         {"dropped", dropped}};
  j["reason"] = reason ? json(std::string(forge::to_string(*reason))) : json(nullptr);
  return j;
}

json CleanConfig::to_json() const {
  return {{"lang_allowlist", lang_allowlist}, {"q_min", q_min}};
}

CleanOutcome clean_document(const Document& doc, const CleanConfig& config, const BoilerplateLexicon& lexicon) {
  CleanOutcome out;
  out.doc = doc;
  auto& report = out.report;
  report.doc_id = doc.id;

  const std::string normalized = normalize_text(doc.text);
  const auto lang = detect_language(normalized);
  report.lang = lang.lang;
  report.lang_confidence = lang.confidence;
  report.quality = quality_score(normalized, lexicon);

  const MaskResult masked = mask_pii(normalized);
  report.pii_counts = masked.counts;

  if (is_blank(normalized)) {
    report.reason = DropReason::empty;
  } else if (!config.lang_allowlist.contains(report.lang)) {
    report.reason = DropReason::lang;
  } else if (report.quality < config.q_min) {
    report.reason = DropReason::quality;
  }
  report.dropped = report.reason.has_value();

  out.doc.text = masked.text;
  out.doc.lang = report.lang;
  out.doc.flags.set(Flag::cleaned);
  out.doc.flags.set(Flag::masked);
  return out;
}

}  // namespace forge
