// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/corpus.hpp"

namespace forge {

struct Artist {
  std::string name;
  std::string origin;
  int debut_year = 0;
  /// 1 is the most popular.
  int popularity_rank = 0;
};

struct Song {
  std::string title;
  std::size_t artist_id = 0;
  int year = 0;
  std::string genre;
};

struct SyntheticKB {
  std::vector<Artist> artists;
  std::vector<Song> songs;
  std::vector<std::string> domain_templates;
  std::vector<std::string> general_templates;
  std::vector<std::string> noise_phrases;

  /// Checks song->artist references and that ranks permute 1..|artists|.
  void validate() const;
  nlohmann::json to_json() const;
  static SyntheticKB from_json(const nlohmann::json& j);
  int latest_year() const;
};

enum class Stratum { popular, even_sampled };

std::string_view to_string(Stratum s);
Stratum stratum_from_string(std::string_view s);

/// Short-form question with exactly one gold answer.
struct QAItem {
  std::string id;
  std::string question;
  std::string gold;
  Stratum stratum = Stratum::popular;
  /// Cloze prefix whose KB continuation is `gold`; used for closed-book probing.
  std::string prompt;
  /// Entity references into the KB, e.g. "artist:3", "song:17".
  std::vector<std::string> entities;

  bool operator==(const QAItem&) const = default;
};

nlohmann::json to_json(const QAItem& item);
QAItem qa_item_from_json(const nlohmann::json& j);
std::vector<QAItem> read_qa(const std::filesystem::path& path);
void write_qa(const std::filesystem::path& path, const std::vector<QAItem>& items);

/// Answers a QA item by direct KB lookup, independent of the generated text.
std::string kb_lookup_answer(const SyntheticKB& kb, const QAItem& item);

struct SynthConfig {
  std::size_t n_artists = 40;
  std::size_t n_songs = 160;
  std::size_t n_domain_docs = 2000;
  std::size_t n_general_docs = 1000;
  std::size_t n_seed_docs = 600;
  std::size_t n_heldout_domain = 200;
  std::size_t n_heldout_general = 200;
  /// Upper bound; a small roster may not fill the popular stratum.
  std::size_t n_qa = 100;
  double noise_rate = 0.3;
  /// Probability that a noisy document's boilerplate is preceded by a
  /// keyword-stuffing run of shuffled domain terms (part of the noise span).
  double spam_rate = 0.0;
  /// Fraction of QA items drawn from the most popular artists.
  double popular_fraction = 0.6;
  /// Exponent of the Zipf law that picks the artist of each domain document.
  double zipf_exponent = 1.1;
  std::size_t min_sentences = 3;
  std::size_t max_sentences = 6;
  /// Fraction of domain documents that are near-copies of an earlier one.
  double dup_rate = 0.0;
  /// Fraction of domain documents replaced by low-quality junk.
  double junk_rate = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
};

struct SyntheticCorpus {
  std::vector<Document> domain_docs;
  std::vector<Document> general_docs;
  /// Noise-free domain documents (same generator, no boilerplate) for reference-model training.
  std::vector<Document> seed_docs;
  std::vector<Document> heldout_domain;
  std::vector<Document> heldout_general;
  SyntheticKB kb;
  std::vector<QAItem> qa;
};

/// Deterministic in (config, seed). Noisy documents carry meta keys
/// noise_start / noise_end (token offsets, end exclusive) and noise_phrase
/// (an index into kb.noise_phrases).
SyntheticCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Anchor list (songs and singers with aliases) derived from the KB, in the
/// JSON layout read by the miner.
nlohmann::json kb_anchors_json(const SyntheticKB& kb);

}  // namespace forge
