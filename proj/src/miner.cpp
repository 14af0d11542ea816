// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/miner.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "forge/io.hpp"

namespace forge {

using nlohmann::json;

std::string_view to_string(AnchorKind k) { return k == AnchorKind::song ? "song" : "singer"; }

namespace {

AnchorKind kind_from_string(std::string_view s) {
  if (s == "song") return AnchorKind::song;
  if (s == "singer") return AnchorKind::singer;
  throw FormatError("unknown anchor kind: " + std::string(s));
}

}  // namespace

AnchorSet::AnchorSet(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    for (const auto& alias : anchors_[i].aliases) {
      Tokens toks = tokenize(alias);
      if (toks.empty()) continue;
      aliases_.push_back({i, toks});
      by_first_[toks.front()].push_back({i, std::move(toks)});
    }
  }
  for (auto& [_, list] : by_first_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Alias& a, const Alias& b) { return a.tokens.size() > b.tokens.size(); });
  }
}

AnchorSet AnchorSet::from_json(const json& j) {
  std::vector<Anchor> anchors;
  try {
    for (const auto& a : j.at("anchors")) {
      anchors.push_back({kind_from_string(a.at("kind").get<std::string>()), a.at("canonical").get<std::string>(),
                         a.at("aliases").get<std::vector<std::string>>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("anchors: ") + e.what());
  }
  return AnchorSet(std::move(anchors));
}

AnchorSet AnchorSet::load(const std::filesystem::path& path) {
  io::require_exists(path, "anchors file");
  return from_json(io::read_json(path));
}

const std::vector<AnchorSet::Alias>* AnchorSet::starting_with(const std::string& first) const {
  auto it = by_first_.find(first);
  return it == by_first_.end() ? nullptr : &it->second;
}

json AnchorMatch::to_json() const {
  return {{"doc_id", doc_id},
          {"anchor", anchor},
          {"kind", std::string(forge::to_string(kind))},
          {"span", {start, end}},
          {"classifier_p", classifier_p}};
}

AnchorMatch AnchorMatch::from_json(const json& j) {
  AnchorMatch m;
  try {
    m.doc_id = j.at("doc_id").get<std::string>();
    m.anchor = j.at("anchor").get<std::string>();
    m.kind = kind_from_string(j.at("kind").get<std::string>());
    m.start = j.at("span").at(0).get<std::size_t>();
    m.end = j.at("span").at(1).get<std::size_t>();
    m.classifier_p = j.at("classifier_p").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("anchor match: ") + e.what());
  }
  return m;
}

std::vector<AnchorMatch> find_anchors(const std::string& doc_id, std::span<const std::string> tokens,
                                      const AnchorSet& anchors, double classifier_p) {
  struct Hit {
    std::size_t start;
    std::size_t len;
    std::size_t anchor;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto* list = anchors.starting_with(tokens[i]);
    if (list == nullptr) continue;
    for (const auto& alias : *list) {
      const std::size_t n = alias.tokens.size();
      if (i + n > tokens.size()) continue;
      if (std::equal(alias.tokens.begin(), alias.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        hits.push_back({i, n, alias.anchor});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(b.len, a.start, a.anchor) < std::tie(a.len, b.start, b.anchor);
  });

  std::vector<bool> taken(tokens.size(), false);
  std::vector<AnchorMatch> out;
  for (const auto& h : hits) {
    if (std::any_of(taken.begin() + static_cast<std::ptrdiff_t>(h.start),
                    taken.begin() + static_cast<std::ptrdiff_t>(h.start + h.len), [](bool t) { return t; })) {
      continue;
    }
    std::fill(taken.begin() + static_cast<std::ptrdiff_t>(h.start),
              taken.begin() + static_cast<std::ptrdiff_t>(h.start + h.len), true);
    const auto& a = anchors.anchors()[h.anchor];
    out.push_back({doc_id, a.canonical, a.kind, h.start, h.start + h.len, classifier_p});
  }
  std::sort(out.begin(), out.end(), [](const AnchorMatch& a, const AnchorMatch& b) { return a.start < b.start; });
  return out;
}

std::vector<AnchorMatch> filter_matches(std::span<const AnchorMatch> matches, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("filter_matches: tau must lie in [0,1]");
  std::vector<AnchorMatch> out;
  for (const auto& m : matches) {
    if (m.classifier_p >= tau) out.push_back(m);
  }
  return out;
}

std::size_t TriGraph::song_index(const std::string& title) const {
  auto it = std::find(songs.begin(), songs.end(), title);
  if (it == songs.end()) throw InvalidArgument("trigraph: unknown song " + title);
  return static_cast<std::size_t>(it - songs.begin());
}

TriGraph build_trigraph(std::span<const AnchorMatch> matches, const SyntheticKB& kb) {
  TriGraph g;
  std::map<std::string, std::size_t> singer_idx;
  std::map<std::string, std::size_t> song_idx;
  for (const auto& a : kb.artists) {
    singer_idx.emplace(a.name, g.singers.size());
    g.singers.push_back(a.name);
  }
  for (std::size_t s = 0; s < kb.songs.size(); ++s) {
    song_idx.emplace(kb.songs[s].title, g.songs.size());
    g.songs.push_back(kb.songs[s].title);
    g.singer_song.emplace(kb.songs[s].artist_id, s);
  }

  std::set<std::string> unknown;
  std::set<std::string> doc_ids;
  for (const auto& m : matches) {
    const bool known = m.kind == AnchorKind::song ? song_idx.contains(m.anchor) : singer_idx.contains(m.anchor);
    if (!known) unknown.insert(std::string(to_string(m.kind)) + ":" + m.anchor);
    doc_ids.insert(m.doc_id);
  }
  if (!unknown.empty()) {
    std::string msg = "trigraph: matches reference entities missing from the KB:";
    for (const auto& u : unknown) msg += " " + u;
    throw InvalidArgument(msg);
  }
  g.docs.assign(doc_ids.begin(), doc_ids.end());
  std::map<std::string, std::size_t> doc_idx;
  for (std::size_t i = 0; i < g.docs.size(); ++i) doc_idx.emplace(g.docs[i], i);

  for (const auto& m : matches) {
    const std::size_t d = doc_idx.at(m.doc_id);
    if (m.kind == AnchorKind::song) {
      const std::size_t s = song_idx.at(m.anchor);
      g.song_doc.emplace(s, d);
      g.singer_doc.emplace(kb.songs[s].artist_id, d);
    } else {
      g.singer_doc.emplace(singer_idx.at(m.anchor), d);
    }
  }

  g.singer_degree.assign(g.singers.size(), 0);
  g.song_degree.assign(g.songs.size(), 0);
  g.doc_degree.assign(g.docs.size(), 0);
  for (const auto& [a, s] : g.singer_song) {
    ++g.singer_degree[a];
    ++g.song_degree[s];
  }
  for (const auto& [s, d] : g.song_doc) {
    ++g.song_degree[s];
    ++g.doc_degree[d];
  }
  for (const auto& [a, d] : g.singer_doc) {
    ++g.singer_degree[a];
    ++g.doc_degree[d];
  }
  return g;
}

namespace {

std::vector<std::size_t> song_doc_degrees(const TriGraph& g) {
  std::vector<std::size_t> deg(g.songs.size(), 0);
  for (const auto& [s, _] : g.song_doc) ++deg[s];
  return deg;
}

}  // namespace

json TriGraph::summary_json() const {
  const auto deg = song_doc_degrees(*this);
  std::map<std::size_t, std::size_t> histogram;
  std::size_t uncovered = 0;
  for (std::size_t d : deg) {
    ++histogram[d];
    if (d == 0) ++uncovered;
  }
  json hist = json::array();
  for (const auto& [d, n] : histogram) hist.push_back({d, n});
  return {{"version", 1},
          {"nodes", {{"singers", singers.size()}, {"songs", songs.size()}, {"docs", docs.size()}}},
          {"edges", {{"singer_song", singer_song.size()}, {"song_doc", song_doc.size()}, {"singer_doc", singer_doc.size()}}},
          {"song_doc_degree_histogram", hist},
          {"uncovered_songs", uncovered}};
}

std::map<std::string, double> upsample_weights(const TriGraph& graph, double gamma, double cap) {
  if (gamma < 0.0) throw InvalidArgument("upsample_weights: gamma must be >= 0");
  if (cap < 1.0) throw InvalidArgument("upsample_weights: cap must be >= 1");
  std::map<std::string, double> weights;
  const auto deg = song_doc_degrees(graph);
  std::vector<std::size_t> covered;
  for (std::size_t d : deg) {
    if (d > 0) covered.push_back(d);
  }
  if (covered.empty()) return weights;
  std::sort(covered.begin(), covered.end());
  const std::size_t n = covered.size();
  const double median = n % 2 == 1 ? static_cast<double>(covered[n / 2])
                                   : 0.5 * static_cast<double>(covered[n / 2 - 1] + covered[n / 2]);

  std::vector<std::size_t> max_deg(graph.docs.size(), 0);
  std::vector<bool> has_song(graph.docs.size(), false);
  for (const auto& [s, d] : graph.song_doc) {
    max_deg[d] = std::max(max_deg[d], deg[s]);
    has_song[d] = true;
  }
  for (std::size_t d = 0; d < graph.docs.size(); ++d) {
    double w = 1.0;
    const auto degree = static_cast<double>(max_deg[d]);
    if (has_song[d] && degree < median) {
      w = std::min(cap, std::pow(median / std::max(degree, 1.0), gamma));
      w = std::max(1.0, w);
    }
    weights.emplace(graph.docs[d], w);
  }
  return weights;
}

void apply_recency_boost(std::map<std::string, double>& weights, const TriGraph& graph, const SyntheticKB& kb,
                         double boost, double cap) {
  const int latest = kb.latest_year();
  std::vector<int> newest(graph.docs.size(), 0);
  for (const auto& [s, d] : graph.song_doc) newest[d] = std::max(newest[d], kb.songs.at(s).year);
  for (std::size_t d = 0; d < graph.docs.size(); ++d) {
    if (newest[d] != latest) continue;
    auto& w = weights[graph.docs[d]];
    w = std::min(cap, std::max({w, boost, 1.0}));
  }
}

}  // namespace forge
