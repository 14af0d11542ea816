// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "forge/cleaner.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_SUITE("cleaner") {
  TEST_CASE("normalize drops controls and squeezes blank lines") {
    CHECK(normalize_text("a\x01" "b\tc") == "ab\tc");
    CHECK(normalize_text("x\n\n\n\n\ny") == "x\n\ny");
    CHECK(normalize_text("x\n\ny") == "x\n\ny");
    CHECK(normalize_text("e\xcc\x81") == "\xc3\xa9");
  }

  TEST_CASE("property: normalize is idempotent") {
    Rng rng(21);
    const std::vector<std::string> pieces{"a", "B", " ", "\n", "\n\n\n", "\t", "\x02", "e\xcc\x81", "\xe5\x91\xa8", "!"};
    for (int trial = 0; trial < 300; ++trial) {
      std::string s;
      const auto n = rng.below(20);
      for (std::size_t i = 0; i < n; ++i) s += pieces[rng.below(pieces.size())];
      const auto once = normalize_text(s);
      CHECK(normalize_text(once) == once);
    }
  }

  TEST_CASE("language by script ratio") {
    CHECK(detect_language("The quick brown fox jumps").lang == "en");
    CHECK(detect_language("\xe5\x91\xa8\xe6\x9d\xb0\xe4\xbc\xa6\xe7\x9a\x84\xe6\xad\x8c").lang == "zh");
    CHECK(detect_language("\xd0\x9f\xd1\x80\xd0\xb8\xd0\xb2\xd0\xb5\xd1\x82 \xd0\xbc\xd0\xb8\xd1\x80").lang == "und");
    CHECK(detect_language("12345 !!!").lang == "und");
  }

  TEST_CASE("pii masking") {
    const auto r = mask_pii("mail bob.smith@example.co.uk or call +1 (555) 010-9999; id 11010519491231002X, ok");
    CHECK(r.text == "mail [EMAIL] or call [PHONE]; id [ID], ok");
    CHECK(r.counts.at("EMAIL") == 1);
    CHECK(r.counts.at("PHONE") == 1);
    CHECK(r.counts.at("ID") == 1);
    // Years and short numbers stay.
    CHECK(mask_pii("released in 2001 with 12 songs").text == "released in 2001 with 12 songs");
    CHECK(mask_pii("id 123456789012345 end").text == "id [ID] end");
  }

  TEST_CASE("property: masking is idempotent") {
    Rng rng(22);
    const std::vector<std::string> pieces{"x ", "a@b.com ", "555-123-4567 ", "123456789012345678 ", "2001 ",
                                          "+86 138 0013 8000 ", "word", ". "};
    for (int trial = 0; trial < 200; ++trial) {
      std::string s;
      for (std::size_t i = 0, n = rng.below(10); i < n; ++i) s += pieces[rng.below(pieces.size())];
      const auto once = mask_pii(s).text;
      const auto twice = mask_pii(once);
      CHECK(twice.text == once);
      CHECK(twice.counts.empty());
    }
  }

  TEST_CASE("quality scores") {
    const std::string good =
        "Jay Chou released the album Fantasy in 2001.\nIt mixed R&B with classical piano.\n"
        "Critics praised the songwriting and the arrangements.";
    const std::string junk = "$$$ ### 123 !!!\n$$$ ### 123 !!!\n$$$ ### 123 !!!";
    CHECK(quality_score(good) > 0.6);
    CHECK(quality_score(junk) < quality_score(good));
    CHECK(quality_score(good + "  \n  ") == quality_score(good));
    const auto b = quality_breakdown(good, BoilerplateLexicon::builtin());
    for (double x : {b.letter_ratio, b.unique_lines, b.boilerplate, b.length}) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }

  TEST_CASE("boilerplate lexicon") {
    const auto lex = BoilerplateLexicon::parse("# version: 3\nclick here\nsubscribe now to\n\n");
    CHECK(lex.phrases().size() == 2);
    CHECK(lex.version() == 3);
    CHECK(lex.count_hits(tokenize("please click here and click here")) == 2);
    CHECK(lex.count_hits(tokenize("subscribe now to the channel")) == 1);
    CHECK_FALSE(BoilerplateLexicon::builtin().phrases().empty());
  }

  TEST_CASE("clean document drop precedence") {
    CleanConfig cfg;
    auto empty = clean_document(test::doc("e", " \n "), cfg);
    CHECK(empty.report.dropped);
    CHECK(empty.report.reason == DropReason::empty);
    auto foreign = clean_document(test::doc("f", "\xd0\x9f\xd1\x80\xd0\xb8\xd0\xb2\xd0\xb5\xd1\x82 \xd0\xbc\xd0\xb8\xd1\x80"), cfg);
    CHECK(foreign.report.reason == DropReason::lang);
    cfg.q_min = 1.0;
    auto strict = clean_document(test::doc("q", "Some ordinary english text."), cfg);
    CHECK(strict.report.reason == DropReason::quality);

    CleanConfig ok;
    ok.q_min = 0.0;
    auto kept = clean_document(test::doc("k", "Reach me at a@b.com for tickets."), ok);
    CHECK_FALSE(kept.report.dropped);
    CHECK(kept.doc.text == "Reach me at [EMAIL] for tickets.");
    CHECK(kept.doc.flags.has(Flag::cleaned));
    CHECK(kept.doc.flags.has(Flag::masked));
  }
}
