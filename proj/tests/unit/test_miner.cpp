// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "forge/common.hpp"
#include "forge/miner.hpp"
#include "forge/synth.hpp"

using namespace forge;

namespace {

SyntheticKB tiny_kb() {
  SyntheticKB kb;
  kb.artists = {{"Ann Lee", "Taipei", 2005, 1}, {"Bo Chen", "Hong Kong", 2012, 2}};
  kb.songs = {{"Blue Rain", 0, 2010, "pop"}, {"Red Sky", 0, 2015, "rock"}, {"Night Train", 1, 2020, "r&b"}};
  return kb;
}

AnchorMatch song(const std::string& doc, const std::string& title) {
  AnchorMatch m;
  m.doc_id = doc;
  m.anchor = title;
  m.kind = AnchorKind::song;
  return m;
}

}  // namespace

TEST_SUITE("miner") {
  TEST_CASE("longest alias wins, then leftmost") {
    const AnchorSet set({{AnchorKind::song, "Blue Rain", {"Blue Rain"}},
                         {AnchorKind::song, "Blue Rain Forever", {"Blue Rain Forever"}},
                         {AnchorKind::singer, "Ann Lee", {"Ann Lee", "Annie"}}});
    const auto toks = tokenize("Annie sang Blue Rain Forever, then blue rain.");
    const auto m = find_anchors("d", toks, set, 0.9);
    REQUIRE(m.size() == 3);
    CHECK(m[0].anchor == "Ann Lee");
    CHECK(m[0].kind == AnchorKind::singer);
    CHECK(m[1].anchor == "Blue Rain Forever");
    CHECK(m[1].start == 2);
    CHECK(m[1].end == 5);
    CHECK(m[2].anchor == "Blue Rain");
    CHECK(m[2].classifier_p == 0.9);
  }

  TEST_CASE("confidence gate") {
    std::vector<AnchorMatch> ms{song("a", "x"), song("b", "y")};
    ms[0].classifier_p = 0.4;
    ms[1].classifier_p = 0.6;
    const auto kept = filter_matches(ms, 0.5);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].doc_id == "b");
  }

  TEST_CASE("match json round trip") {
    auto m = song("d", "Red Sky");
    m.start = 3;
    m.end = 5;
    m.classifier_p = 0.25;
    CHECK(AnchorMatch::from_json(m.to_json()) == m);
  }

  TEST_CASE("trigraph edges and tail upsampling") {
    const auto kb = tiny_kb();
    // Blue Rain in 4 docs, Red Sky in 1, Night Train in 3: median song-doc degree 3.
    std::vector<AnchorMatch> ms{song("d1", "Blue Rain"), song("d2", "Blue Rain"), song("d3", "Blue Rain"),
                                song("d4", "Blue Rain"), song("d5", "Red Sky"),   song("d6", "Night Train"),
                                song("d7", "Night Train"), song("d1", "Night Train")};
    AnchorMatch singer;
    singer.doc_id = "d8";
    singer.anchor = "Bo Chen";
    singer.kind = AnchorKind::singer;
    ms.push_back(singer);

    const TriGraph g = build_trigraph(ms, kb);
    CHECK(g.song_doc.size() == 8);
    // Singer-doc edges come from song matches through the KB plus the direct match.
    CHECK(g.singer_doc.size() == 9);
    const auto w = upsample_weights(g, 0.5, 3.0);
    CHECK(w.at("d5") == doctest::Approx(std::sqrt(3.0)));
    CHECK(w.at("d1") == 1.0);  // most-covered matched song is Blue Rain
    CHECK(w.at("d6") == 1.0);
    CHECK(w.at("d8") == 1.0);  // no song match

    auto capped = upsample_weights(g, 4.0, 3.0);
    CHECK(capped.at("d5") == 3.0);

    auto boosted = w;
    apply_recency_boost(boosted, g, kb, 1.5, 3.0);
    CHECK(boosted.at("d6") == 1.5);
    CHECK(boosted.at("d5") == w.at("d5"));
  }

  TEST_CASE("invalid upsampling parameters") {
    const TriGraph g;
    CHECK_THROWS_AS(upsample_weights(g, -1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(upsample_weights(g, 1.0, 0.5), InvalidArgument);
  }
}
