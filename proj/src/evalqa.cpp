// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/evalqa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "forge/assets.hpp"
#include "forge/io.hpp"
#include "forge/parallel.hpp"
#include "forge/unicode.hpp"

namespace forge {

using nlohmann::json;

namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::u32string cur;
  for (char32_t cp : unicode::to_u32(unicode::lower_nfc(text))) {
    if (unicode::is_space(cp) || unicode::is_punct_or_symbol(cp) || unicode::is_control(cp)) {
      if (!cur.empty()) out.push_back(unicode::to_utf8(cur));
      cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) out.push_back(unicode::to_utf8(cur));
  return out;
}

std::vector<std::string> normalized_words(std::string_view text) {
  auto w = words(text);
  std::size_t skip = 0;
  while (skip < w.size() && (w[skip] == "the" || w[skip] == "a" || w[skip] == "an")) ++skip;
  w.erase(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(skip));
  return w;
}

std::string join(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string normalize_answer(std::string_view text) { return join(normalized_words(text)); }

int agreement(std::string_view prediction, std::string_view gold) {
  const auto p = normalized_words(prediction);
  const auto g = normalized_words(gold);
  if (p == g) return 1;
  if (g.empty() || g.size() > p.size()) return 0;
  return std::search(p.begin(), p.end(), g.begin(), g.end()) != p.end() ? 1 : 0;
}

std::string_view to_string(Scorer s) { return s == Scorer::judge ? "judge" : "normalized"; }

std::string render_judge_prompt(std::string_view tmpl, std::string_view question, std::string_view gold,
                                std::string_view prediction) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        const auto key = tmpl.substr(i + 1, close - i - 1);
        if (key == "question" || key == "gold" || key == "prediction") {
          out += key == "question" ? question : key == "gold" ? gold : prediction;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::optional<bool> parse_judge_reply(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  std::string text;
  if (j.contains("verdict") && j["verdict"].is_string()) {
    text = j["verdict"].get<std::string>();
  } else if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& c = j["choices"][0];
    if (!c.contains("message") || !c["message"].contains("content") || !c["message"]["content"].is_string()) {
      return std::nullopt;
    }
    text = c["message"]["content"].get<std::string>();
  } else {
    return std::nullopt;
  }
  const auto w = words(text);
  if (w.empty()) return std::nullopt;
  if (w.front() == "agree" || w.front() == "yes") return true;
  if (w.front() == "disagree" || w.front() == "no") return false;
  return std::nullopt;
}

HttpJudgeClient::HttpJudgeClient(HttpJudgeConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw ConfigError("judge: base_url is required");
  if (config_.prompt_template.empty()) config_.prompt_template = std::string(assets::kJudgePrompt);
}

JudgeOutcome HttpJudgeClient::query(const std::string& question, const std::string& gold,
                                    const std::string& prediction) {
  const json request{
      {"model", config_.model},
      {"temperature", 0},
      {"messages",
       {{{"role", "user"}, {"content", render_judge_prompt(config_.prompt_template, question, gold, prediction)}}}}};
  httplib::Headers headers;
  if (const char* token = std::getenv(config_.token_env.c_str()); token != nullptr && *token != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1 << (attempt - 1)));
    try {
      httplib::Client client(config_.base_url);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      auto res = client.Post(config_.path, headers, request.dump(), "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP status " + std::to_string(res->status);
        continue;
      }
      if (auto verdict = parse_judge_reply(res->body)) return {verdict, ""};
      last_error = "unparseable judge reply";
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  return {std::nullopt, last_error};
}

std::optional<std::string> ModelAnswerSource::answer(const QAItem& item) const {
  const Tokens prompt = tokenize(item.prompt.empty() ? item.question : item.prompt);
  return closed_book_answer(model_, prompt, max_len_);
}

FileAnswerSource FileAnswerSource::load(const std::filesystem::path& path) {
  io::require_exists(path, "answers file");
  std::map<std::string, std::string> answers;
  for (const auto& j : io::read_jsonl(path)) {
    try {
      answers[j.at("id").get<std::string>()] = j.at("prediction").get<std::string>();
    } catch (const json::exception& e) {
      throw FormatError(std::string("answers file: ") + e.what());
    }
  }
  return FileAnswerSource(std::move(answers));
}

std::optional<std::string> FileAnswerSource::answer(const QAItem& item) const {
  auto it = answers_.find(item.id);
  if (it == answers_.end()) return std::nullopt;
  return it->second;
}

json ItemResult::to_json() const {
  json j{{"id", id},           {"stratum", std::string(forge::to_string(stratum))},
         {"gold", gold},       {"prediction", prediction},
         {"verdict", verdict}, {"scorer", std::string(forge::to_string(scorer))},
         {"missing", missing}};
  if (!judge_error.empty()) j["judge_error"] = judge_error;
  return j;
}

json EvalReport::to_json() const {
  json strata = json::object();
  for (const auto& [name, s] : per_stratum) {
    strata[name] = {{"n", s.n}, {"correct", s.correct}, {"accuracy", s.accuracy}};
  }
  json rows = json::array();
  for (const auto& it : items) rows.push_back(it.to_json());
  return {{"n", n},
          {"accuracy", accuracy},
          {"per_stratum", strata},
          {"missing", missing},
          {"judge_fallbacks", judge_fallbacks},
          {"items", rows}};
}

std::string EvalReport::summary_csv() const {
  std::size_t correct = 0;
  for (const auto& it : items) correct += static_cast<std::size_t>(it.verdict);
  std::string out = "stratum,n,correct,accuracy\n";
  out += "overall," + std::to_string(n) + "," + std::to_string(correct) + "," + format_double(accuracy) + "\n";
  for (const auto& [name, s] : per_stratum) {
    out += name + "," + std::to_string(s.n) + "," + std::to_string(s.correct) + "," + format_double(s.accuracy) + "\n";
  }
  return out;
}

json EvalConfig::to_json() const {
  return {{"use_judge", use_judge}, {"judge_concurrency", judge_concurrency}, {"max_answer_len", max_answer_len}};
}

EvalReport evaluate(const AnswerSource& source, std::span<const QAItem> items, const EvalConfig& config,
                    JudgeClient* judge) {
  if (items.empty()) throw InvalidArgument("evaluate: no QA items");
  std::vector<const QAItem*> sorted;
  for (const auto& it : items) sorted.push_back(&it);
  std::sort(sorted.begin(), sorted.end(), [](const QAItem* a, const QAItem* b) { return a->id < b->id; });

  std::vector<ItemResult> results(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    const QAItem& q = *sorted[i];
    ItemResult& r = results[i];
    r.id = q.id;
    r.stratum = q.stratum;
    r.gold = q.gold;
    const auto pred = source.answer(q);
    r.missing = !pred.has_value();
    r.prediction = pred.value_or("");
    r.verdict = r.missing ? 0 : agreement(r.prediction, r.gold);
  });

  if (config.use_judge && judge != nullptr) {
    // Bounded in-flight requests; each worker pulls the next unjudged item.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < results.size(); i = next++) {
        ItemResult& r = results[i];
        if (r.missing) continue;
        JudgeOutcome out;
        try {
          out = judge->query(sorted[i]->question, r.gold, r.prediction);
        } catch (const std::exception& e) {
          out.error = e.what();
        }
        if (out.agree.has_value()) {
          r.verdict = *out.agree ? 1 : 0;
          r.scorer = Scorer::judge;
        } else {
          r.judge_error = out.error.empty() ? "judge failure" : out.error;
        }
      }
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(config.judge_concurrency, results.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  EvalReport report;
  report.n = results.size();
  std::size_t correct = 0;
  for (const auto& r : results) {
    auto& s = report.per_stratum[std::string(to_string(r.stratum))];
    ++s.n;
    s.correct += static_cast<std::size_t>(r.verdict);
    correct += static_cast<std::size_t>(r.verdict);
    report.missing += r.missing ? 1 : 0;
    report.judge_fallbacks += r.judge_error.empty() ? 0 : 1;
  }
  for (auto& [_, s] : report.per_stratum) s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.n);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);
  report.items = std::move(results);
  return report;
}

}  // namespace forge
