// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <tuple>

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/refmodel.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {

// Brute-force interpolated trigram over surface strings, written from the
// definition: each order's ML estimate is used only when its context was seen,
// and the weights of the orders in use are renormalized.
class OracleLM {
 public:
  OracleLM(const std::vector<std::vector<std::string>>& seqs, std::size_t vocab_size, std::array<double, 4> l)
      : v_(static_cast<double>(vocab_size)), l_(l) {
    for (const auto& s : seqs) {
      std::string u = "<s>", v = "<s>";
      for (const auto& w : s) {
        uni_[w] += 1;
        total_ += 1;
        bi_[{v, w}] += 1;
        bi_ctx_[v] += 1;
        tri_[{u, v, w}] += 1;
        tri_ctx_[{u, v}] += 1;
        u = v;
        v = w;
      }
    }
  }

  double prob(const std::string& u, const std::string& v, const std::string& w) const {
    double num = l_[3] / v_, den = l_[3];
    if (auto it = tri_ctx_.find({u, v}); it != tri_ctx_.end()) {
      num += l_[0] * get(tri_, {u, v, w}) / it->second;
      den += l_[0];
    }
    if (auto it = bi_ctx_.find(v); it != bi_ctx_.end()) {
      num += l_[1] * get(bi_, {v, w}) / it->second;
      den += l_[1];
    }
    num += l_[2] * get(uni_, w) / total_;
    den += l_[2];
    return num / den;
  }

 private:
  template <typename M>
  static double get(const M& m, const typename M::key_type& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }

  double v_;
  std::array<double, 4> l_;
  double total_ = 0;
  std::map<std::string, double> uni_;
  std::map<std::pair<std::string, std::string>, double> bi_;
  std::map<std::string, double> bi_ctx_;
  std::map<std::tuple<std::string, std::string, std::string>, double> tri_;
  std::map<std::pair<std::string, std::string>, double> tri_ctx_;
};

NGramLM fixture_lm(Lambdas l = {}) {
  const std::vector<Document> seed{test::doc("a", "the cat sat"), test::doc("b", "the dog sat")};
  return train_rm(seed, Vocab({"the", "cat", "sat", "dog"}), l);
}

std::vector<double> nll_of(const NGramLM& lm, const std::string& text) {
  return lm.nll(encode_document(lm.vocab(), text));
}

}  // namespace

TEST_SUITE("refmodel") {
  // Counts over [the cat sat </s>], [the dog sat </s>]: 8 tokens, V = 7.
  TEST_CASE("hand-computed fixture") {
    const NGramLM lm = fixture_lm();
    const auto ce = nll_of(lm, "the cat sat");
    REQUIRE(ce.size() == 4);
    // p(the|<s><s>) = .5*1 + .3*1 + .15*2/8 + .05/7
    CHECK(ce[0] == doctest::Approx(-std::log(0.5 + 0.3 + 0.15 * 2.0 / 8.0 + 0.05 / 7.0)).epsilon(1e-12));
    // p(cat|<s> the) = .5*1/2 + .3*1/2 + .15*1/8 + .05/7
    CHECK(ce[1] == doctest::Approx(-std::log(0.25 + 0.15 + 0.15 / 8.0 + 0.05 / 7.0)).epsilon(1e-12));
    // p(sat|the cat) and p(</s>|cat sat) both see a certain continuation.
    CHECK(ce[2] == doctest::Approx(-std::log(0.8 + 0.15 * 2.0 / 8.0 + 0.05 / 7.0)).epsilon(1e-12));
    CHECK(ce[3] == doctest::Approx(-std::log(0.8 + 0.15 * 2.0 / 8.0 + 0.05 / 7.0)).epsilon(1e-12));
  }

  TEST_CASE("unseen trigram context renormalizes the remaining weights") {
    const NGramLM lm = fixture_lm();
    const auto& v = lm.vocab();
    // Context (<s>, cat) never occurs; bigram context "cat" does but not "cat the".
    const double p = lm.prob(Vocab::kBos, v.id("cat"), v.id("the"));
    CHECK(std::abs(p - (0.15 * 2.0 / 8.0 + 0.05 / 7.0) / 0.5) < 1e-15);
  }

  TEST_CASE("unigram-only weights give the unigram distribution") {
    const NGramLM lm = fixture_lm({0, 0, 1, 0});
    const auto ce = nll_of(lm, "cat");
    CHECK(std::abs(ce[0] - std::log(8.0)) < 1e-12);
    CHECK(std::abs(ce[1] - std::log(4.0)) < 1e-12);  // </s> has count 2
  }

  TEST_CASE("conditional distributions sum to one") {
    const NGramLM lm = fixture_lm();
    const auto n = static_cast<TokenId>(lm.vocab().size());
    for (TokenId u = 0; u < n; ++u) {
      for (TokenId v = 0; v < n; ++v) {
        double s = 0.0;
        for (TokenId w = 0; w < n; ++w) s += lm.prob(u, v, w);
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("property: matches the brute-force oracle on random corpora") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Document> docs;
      std::vector<std::vector<std::string>> seqs;
      for (int i = 0; i < 6; ++i) {
        auto words = test::random_words(rng, 1 + rng.below(12), 6);
        docs.push_back(test::doc("d" + std::to_string(i), test::join(words)));
        words.push_back("</s>");
        seqs.push_back(words);
      }
      const Vocab vocab = build_vocab(docs, 64);
      const Lambdas l{rng.uniform(), rng.uniform(), rng.uniform(), 0.01 + rng.uniform()};
      const double z = l.l2 + l.l1 + l.l0 + l.lu;
      const Lambdas ln{l.l2 / z, l.l1 / z, l.l0 / z, l.lu / z};
      const NGramLM lm = train_rm(docs, vocab, ln);
      const OracleLM oracle(seqs, vocab.size(), {ln.l2, ln.l1, ln.l0, ln.lu});

      const auto probe = test::random_words(rng, 10, 7);  // w6 is out of vocabulary
      const TokenIds ids = encode_document(vocab, test::join(probe));
      const auto ce = lm.nll(ids);
      std::string u = "<s>", v = "<s>";
      for (std::size_t t = 0; t < ids.size(); ++t) {
        const std::string w = vocab.token(ids[t]);
        CHECK(std::abs(ce[t] + std::log(oracle.prob(u, v, w))) < 1e-12);
        u = v;
        v = w;
      }
    }
  }

  TEST_CASE("perplexity is exp of the mean CE") {
    const NGramLM lm = fixture_lm();
    const std::vector<Document> docs{test::doc("x", "the cat sat"), test::doc("y", "dog")};
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : docs) {
      for (double c : nll_of(lm, d.text)) {
        sum += c;
        ++n;
      }
    }
    CHECK(perplexity(lm, docs) == doctest::Approx(std::exp(sum / n)).epsilon(1e-12));
  }

  TEST_CASE("json round trip preserves every probability") {
    test::TempDir tmp;
    const NGramLM lm = fixture_lm();
    lm.save(tmp / "rm.json");
    const NGramLM back = NGramLM::load(tmp / "rm.json");
    CHECK(back.lambdas() == lm.lambdas());
    CHECK(nll_of(back, "the dog sat the cat") == nll_of(lm, "the dog sat the cat"));
  }

  TEST_CASE("invalid lambdas and empty seed sets are rejected") {
    CHECK_THROWS_AS(Lambdas({0.5, 0.5, 0.5, 0.5}).validate(), InvalidArgument);
    CHECK_THROWS_AS(Lambdas({1.2, -0.2, 0.0, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS(train_rm({}, Vocab({"a"})));
  }
}
