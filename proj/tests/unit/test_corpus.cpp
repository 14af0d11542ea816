// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/corpus.hpp"
#include "forge/io.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_SUITE("corpus") {
  TEST_CASE("tokenize splits words, digits and punctuation") {
    CHECK(tokenize("Jay Chou's 2001 album!") == Tokens{"jay", "chou", "'", "s", "2001", "album", "!"});
    CHECK(tokenize("  \t\n ").empty());
    CHECK(tokenize("a-b") == Tokens{"a", "-", "b"});
  }

  TEST_CASE("tokenize lowercases and composes") {
    // "e" + combining acute composes to a single codepoint before splitting.
    CHECK(tokenize("CAFE\xcc\x81") == tokenize("caf\xc3\xa9"));
    CHECK(tokenize("caf\xc3\xa9").size() == 1);
  }

  TEST_CASE("vocab ranks by frequency then lexicographically") {
    const std::vector<Document> docs{test::doc("a", "b a c a"), test::doc("b", "c d")};
    const Vocab v = build_vocab(docs, 6);
    // a:2 c:2 b:1 d:1 -> keep a, c, b (3 slots after specials).
    CHECK(v.tokens() == std::vector<std::string>{"<unk>", "<s>", "</s>", "a", "c", "b"});
    CHECK(v.id("d") == Vocab::kUnk);
    CHECK(v.find("d") == std::nullopt);
    CHECK(encode_document(v, "a d") == TokenIds{3, Vocab::kUnk, Vocab::kEos});
  }

  TEST_CASE("vocab rejects specials and duplicates") {
    CHECK_THROWS_AS(Vocab({"<s>"}), InvalidArgument);
    CHECK_THROWS_AS(Vocab({"x", "x"}), InvalidArgument);
    CHECK_THROWS_AS(build_vocab({}, 10), InvalidArgument);
  }

  TEST_CASE("vocab json round trip") {
    const Vocab v({"x", "y"});
    CHECK(Vocab::from_json(v.to_json()) == v);
  }

  TEST_CASE("document json round trip and strictness") {
    Document d = test::doc("d1", "hello\nworld");
    d.source = Source::wiki;
    d.meta["k"] = 3;
    d.flags.set(Flag::cleaned);
    d.flags.set(Flag::domain);
    CHECK(document_from_json(to_json(d)) == d);

    auto extra = to_json(d);
    extra["bogus"] = 1;
    CHECK_THROWS_AS(document_from_json(extra), FormatError);
    auto missing = to_json(d);
    missing.erase("lang");
    CHECK_THROWS_AS(document_from_json(missing), FormatError);
    auto nested = to_json(d);
    nested["meta"]["deep"] = nlohmann::json::object();
    CHECK_THROWS_AS(document_from_json(nested), FormatError);
    auto bad_source = to_json(d);
    bad_source["source"] = "tweet";
    CHECK_THROWS(document_from_json(bad_source));
  }

  TEST_CASE("corpus files round trip; duplicate ids rejected") {
    test::TempDir tmp;
    const std::vector<Document> docs{test::doc("a", "one"), test::doc("b", "two")};
    write_corpus(tmp / "c.jsonl", docs);
    CHECK(read_corpus(tmp / "c.jsonl") == docs);

    const std::vector<Document> dup{test::doc("a", "one"), test::doc("a", "two")};
    io::write_atomic(tmp / "dup.jsonl", corpus_to_jsonl(dup));
    CHECK_THROWS(read_corpus(tmp / "dup.jsonl"));
  }

  TEST_CASE("flags") {
    Flags f;
    f.set(Flag::deduped);
    f.set(Flag::masked);
    CHECK(f.has(Flag::masked));
    CHECK_FALSE(f.has(Flag::cleaned));
    CHECK(Flags::from_names(f.names()) == f);
    f.clear(Flag::masked);
    CHECK_FALSE(f.has(Flag::masked));
  }

  TEST_CASE("property: encode then decode is identity on in-vocabulary text") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const auto words = test::random_words(rng, 1 + rng.below(30), 20);
      const std::vector<Document> docs{test::doc("x", test::join(words))};
      const Vocab v = build_vocab(docs, 100);
      const TokenIds ids = encode(v, words);
      CHECK(decode(v, ids) == words);
    }
  }
}
