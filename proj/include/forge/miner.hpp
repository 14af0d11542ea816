// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"
#include "forge/synth.hpp"

namespace forge {

enum class AnchorKind { song, singer };
std::string_view to_string(AnchorKind k);

struct Anchor {
  AnchorKind kind = AnchorKind::song;
  std::string canonical;
  std::vector<std::string> aliases;
};

/// Aliases pre-tokenized and indexed by first token.
class AnchorSet {
 public:
  explicit AnchorSet(std::vector<Anchor> anchors);
  static AnchorSet from_json(const nlohmann::json& j);
  static AnchorSet load(const std::filesystem::path& path);

  const std::vector<Anchor>& anchors() const { return anchors_; }

  struct Alias {
    std::size_t anchor;
    Tokens tokens;
  };
  /// Aliases whose first token is `first`, longest first.
  const std::vector<Alias>* starting_with(const std::string& first) const;
  const std::vector<Alias>& aliases() const { return aliases_; }

 private:
  std::vector<Anchor> anchors_;
  std::vector<Alias> aliases_;
  std::unordered_map<std::string, std::vector<Alias>> by_first_;
};

struct AnchorMatch {
  std::string doc_id;
  std::string anchor;
  AnchorKind kind = AnchorKind::song;
  /// Token range [start, end) in the tokenized document.
  std::size_t start = 0;
  std::size_t end = 0;
  double classifier_p = 0.0;

  nlohmann::json to_json() const;
  static AnchorMatch from_json(const nlohmann::json& j);
  bool operator==(const AnchorMatch&) const = default;
};

/// Exact alias matches. Overlaps resolve longest first, then leftmost;
/// results are ordered by start. `classifier_p` is attached to every match.
std::vector<AnchorMatch> find_anchors(const std::string& doc_id, std::span<const std::string> tokens,
                                      const AnchorSet& anchors, double classifier_p);

/// Order-preserving filter keeping matches with classifier_p >= tau.
std::vector<AnchorMatch> filter_matches(std::span<const AnchorMatch> matches, double tau);

/// Singer-song-document incidence structure.
struct TriGraph {
  std::vector<std::string> singers;
  std::vector<std::string> songs;
  std::vector<std::string> docs;
  /// Edge sets keyed by node indices, ordered.
  std::set<std::pair<std::size_t, std::size_t>> singer_song;
  std::set<std::pair<std::size_t, std::size_t>> song_doc;
  std::set<std::pair<std::size_t, std::size_t>> singer_doc;
  std::vector<std::size_t> singer_degree;  // singer-song + singer-doc
  std::vector<std::size_t> song_degree;    // singer-song + song-doc
  std::vector<std::size_t> doc_degree;     // song-doc + singer-doc

  std::size_t song_index(const std::string& title) const;
  nlohmann::json summary_json() const;
};

/// Song-doc edges from song matches; singer-doc edges from singer matches and
/// from the KB singer of every matched song. Parallel edges collapse.
TriGraph build_trigraph(std::span<const AnchorMatch> matches, const SyntheticKB& kb);

/// Tail upsampling: a document whose most-covered matched song has song-doc
/// degree d gets min(cap, (median / max(d,1))^gamma), never below 1. The
/// median runs over songs with at least one document.
std::map<std::string, double> upsample_weights(const TriGraph& graph, double gamma, double cap);

/// Raises documents whose newest matched song is from the KB's latest year to
/// at least `boost` (still capped at `cap`).
void apply_recency_boost(std::map<std::string, double>& weights, const TriGraph& graph, const SyntheticKB& kb,
                         double boost, double cap);

}  // namespace forge
