// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/synth.hpp"
#include "forge/trainer.hpp"

namespace forge {

/// Lowercase, NFC, punctuation to spaces, collapsed whitespace, leading
/// articles (the, a, an) removed.
std::string normalize_answer(std::string_view text);

/// 1 when the normalized strings are equal or the normalized gold occurs as a
/// contiguous token run inside the normalized prediction.
int agreement(std::string_view prediction, std::string_view gold);

enum class Scorer { normalized, judge };
std::string_view to_string(Scorer s);

struct JudgeOutcome {
  /// Set on success.
  std::optional<bool> agree;
  std::string error;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual JudgeOutcome query(const std::string& question, const std::string& gold,
                             const std::string& prediction) = 0;
};

struct HttpJudgeConfig {
  /// e.g. "http://localhost:8080" or "https://api.example.com".
  std::string base_url;
  std::string path = "/v1/chat/completions";
  std::string model = "judge";
  /// Environment variable holding the bearer token; unset means no auth header.
  std::string token_env = "FORGE_JUDGE_TOKEN";
  std::chrono::milliseconds timeout{30000};
  int retries = 2;
  std::chrono::milliseconds backoff{500};
  /// Template with {question}, {gold} and {prediction} placeholders.
  std::string prompt_template;
};

/// Chat-completions style JSON over HTTP(S). Never invents a verdict: any
/// transport, status or parse problem after the retries is a failure.
class HttpJudgeClient : public JudgeClient {
 public:
  explicit HttpJudgeClient(HttpJudgeConfig config);
  JudgeOutcome query(const std::string& question, const std::string& gold, const std::string& prediction) override;

 private:
  HttpJudgeConfig config_;
};

std::string render_judge_prompt(std::string_view tmpl, std::string_view question, std::string_view gold,
                                std::string_view prediction);

/// Reads the verdict from a response body: choices[0].message.content or a
/// top-level "verdict" string. The first word must be agree/yes or
/// disagree/no.
std::optional<bool> parse_judge_reply(std::string_view body);

class AnswerSource {
 public:
  virtual ~AnswerSource() = default;
  /// nullopt when the source has no prediction for the item.
  virtual std::optional<std::string> answer(const QAItem& item) const = 0;
};

class ModelAnswerSource : public AnswerSource {
 public:
  ModelAnswerSource(const TinyLM& model, std::size_t max_len = 4) : model_(model), max_len_(max_len) {}
  std::optional<std::string> answer(const QAItem& item) const override;

 private:
  const TinyLM& model_;
  std::size_t max_len_;
};

/// JSON-lines {id, prediction}.
class FileAnswerSource : public AnswerSource {
 public:
  explicit FileAnswerSource(std::map<std::string, std::string> answers) : answers_(std::move(answers)) {}
  static FileAnswerSource load(const std::filesystem::path& path);
  std::optional<std::string> answer(const QAItem& item) const override;

 private:
  std::map<std::string, std::string> answers_;
};

class KbAnswerSource : public AnswerSource {
 public:
  explicit KbAnswerSource(const SyntheticKB& kb) : kb_(kb) {}
  std::optional<std::string> answer(const QAItem& item) const override { return kb_lookup_answer(kb_, item); }

 private:
  const SyntheticKB& kb_;
};

struct ItemResult {
  std::string id;
  Stratum stratum = Stratum::popular;
  std::string gold;
  std::string prediction;
  int verdict = 0;
  Scorer scorer = Scorer::normalized;
  bool missing = false;
  /// Set when the judge failed and the normalized scorer was used instead.
  std::string judge_error;

  nlohmann::json to_json() const;
};

struct StratumStats {
  std::size_t n = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::map<std::string, StratumStats> per_stratum;
  /// Ordered by item id.
  std::vector<ItemResult> items;
  std::size_t missing = 0;
  std::size_t judge_fallbacks = 0;

  nlohmann::json to_json() const;
  std::string summary_csv() const;
};

struct EvalConfig {
  bool use_judge = false;
  std::size_t judge_concurrency = 4;
  std::size_t max_answer_len = 4;

  nlohmann::json to_json() const;
};

/// Throws on an empty item list. `judge` is consulted only when
/// config.use_judge is set.
EvalReport evaluate(const AnswerSource& source, std::span<const QAItem> items, const EvalConfig& config = {},
                    JudgeClient* judge = nullptr);

}  // namespace forge
