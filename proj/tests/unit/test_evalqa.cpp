// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <thread>

#include <doctest.h>
#include <httplib.h>

#include "forge/common.hpp"
#include "forge/evalqa.hpp"
#include "forge/io.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

QAItem item(const std::string& id, const std::string& gold, Stratum s = Stratum::popular) {
  QAItem q;
  q.id = id;
  q.question = "Who sang " + id + "?";
  q.gold = gold;
  q.stratum = s;
  q.prompt = id + " was sung by";
  return q;
}

// Agrees iff the prediction is non-empty and fails every `fail_every`-th call.
class StubJudge : public JudgeClient {
 public:
  explicit StubJudge(int fail_every = 0) : fail_every_(fail_every) {}
  JudgeOutcome query(const std::string&, const std::string&, const std::string& prediction) override {
    const int n = ++calls_;
    if (fail_every_ > 0 && n % fail_every_ == 0) return {std::nullopt, "stub failure"};
    return {!prediction.empty(), ""};
  }
  std::atomic<int> calls_{0};

 private:
  int fail_every_;
};

// Minimal chat-completions endpoint on a loopback port.
class JudgeServer {
 public:
  explicit JudgeServer(int fail_first) : fail_first_(fail_first) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      if (hits_++ < fail_first_) {
        res.status = 503;
        return;
      }
      const auto body = nlohmann::json::parse(req.body);
      const std::string prompt = body["messages"].back()["content"];
      const bool agree = prompt.find("Predicted answer: Ann Lee") != std::string::npos;
      res.set_content(nlohmann::json{{"choices", {{{"message", {{"content", agree ? "AGREE" : "DISAGREE"}}}}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~JudgeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int fail_first_;
  std::atomic<int> hits_{0};
};

}  // namespace

TEST_SUITE("evalqa") {
  TEST_CASE("answer normalization") {
    CHECK(normalize_answer("  The  Blue-Rain! ") == "blue rain");
    CHECK(normalize_answer("An Apple") == "apple");
    CHECK(normalize_answer("theory") == "theory");
  }

  TEST_CASE("agreement is equality or contained token run") {
    CHECK(agreement("Ann Lee", "ann lee") == 1);
    CHECK(agreement("it was Ann Lee, I think", "Ann Lee") == 1);
    CHECK(agreement("Annabel Lee", "Ann Lee") == 0);
    CHECK(agreement("", "Ann Lee") == 0);
  }

  TEST_CASE("evaluate with stratum breakdown and missing answers") {
    const std::vector<QAItem> items{item("q2", "Bo Chen", Stratum::even_sampled), item("q1", "Ann Lee"),
                                    item("q3", "Red Sky")};
    const FileAnswerSource src({{"q1", "ann lee"}, {"q2", "someone"}});
    const auto r = evaluate(src, items);
    CHECK(r.n == 3);
    CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
    CHECK(r.missing == 1);
    CHECK(r.items.front().id == "q1");
    CHECK(r.per_stratum.at("popular").n == 2);
    CHECK(r.per_stratum.at("popular").correct == 1);
    CHECK(r.per_stratum.at("even_sampled").accuracy == 0.0);
    CHECK_THROWS(evaluate(src, std::vector<QAItem>{}));
  }

  TEST_CASE("judge verdicts with fallback on failure") {
    const std::vector<QAItem> items{item("a", "x"), item("b", "y"), item("c", "z"), item("d", "w")};
    const FileAnswerSource src({{"a", "x"}, {"b", "nope"}, {"c", "z"}, {"d", "w"}});
    StubJudge judge(2);
    EvalConfig cfg;
    cfg.use_judge = true;
    cfg.judge_concurrency = 1;
    const auto r = evaluate(src, items, cfg, &judge);
    CHECK(r.judge_fallbacks == 2);
    std::size_t judged = 0;
    for (const auto& it : r.items) judged += it.scorer == Scorer::judge;
    CHECK(judged == 2);
  }

  TEST_CASE("judge reply parsing") {
    CHECK(parse_judge_reply(R"({"verdict": "agree"})") == true);
    CHECK(parse_judge_reply(R"({"choices":[{"message":{"content":"Disagree. The answer is wrong."}}]})") == false);
    CHECK(parse_judge_reply(R"({"choices":[{"message":{"content":"maybe"}}]})") == std::nullopt);
    CHECK(parse_judge_reply("not json") == std::nullopt);
  }

  TEST_CASE("http judge retries then succeeds") {
    JudgeServer server(1);
    HttpJudgeConfig cfg;
    cfg.base_url = server.url();
    cfg.retries = 2;
    cfg.backoff = std::chrono::milliseconds(1);
    cfg.timeout = std::chrono::milliseconds(2000);
    HttpJudgeClient client(cfg);
    const auto ok = client.query("Who sang Blue Rain?", "Ann Lee", "Ann Lee");
    CHECK(ok.agree == true);
    CHECK(server.hits() == 2);
    CHECK(client.query("Who sang Blue Rain?", "Ann Lee", "Bo Chen").agree == false);
  }

  TEST_CASE("http judge never invents a verdict") {
    JudgeServer server(100);
    HttpJudgeConfig cfg;
    cfg.base_url = server.url();
    cfg.retries = 1;
    cfg.backoff = std::chrono::milliseconds(1);
    HttpJudgeClient client(cfg);
    const auto r = client.query("q", "g", "p");
    CHECK_FALSE(r.agree.has_value());
    CHECK_FALSE(r.error.empty());
    CHECK_THROWS_AS(HttpJudgeClient(HttpJudgeConfig{}), ConfigError);
  }

  TEST_CASE("prompt rendering") {
    CHECK(render_judge_prompt("Q={question} G={gold} P={prediction}", "q", "g", "p") == "Q=q G=g P=p");
  }
}
