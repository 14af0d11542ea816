// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string_view>

#include "forge/io.hpp"
#include "forge/rng.hpp"

namespace forge {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 20> kSyllables{
    "ka", "lo", "mi", "ra", "to", "su", "ne", "ri", "an", "do",
    "vi", "sa", "le", "mo", "ta", "ni", "ko", "ya", "ze", "lu"};

constexpr std::array<std::string_view, 20> kOrigins{
    "Taipei", "Seoul", "Lagos", "Lima",   "Oslo",  "Dublin", "Havana", "Nairobi", "Kyoto", "Lisbon",
    "Accra",  "Quito", "Hanoi", "Prague", "Tunis", "Manila", "Bogota", "Vienna",  "Cairo", "Busan"};

constexpr std::array<std::string_view, 8> kGenres{"pop",    "rock",       "folk",   "jazz",
                                                  "hiphop", "electronic", "ballad", "blues"};
constexpr std::array<std::string_view, 8> kAdjectives{"catchy", "gentle", "upbeat",  "haunting",
                                                      "bright", "dreamy", "soulful", "youthful"};
constexpr std::array<std::string_view, 4> kSeasons{"spring", "summer", "autumn", "winter"};

// Fact templates first, then filler. Placeholders are substituted verbatim.
constexpr std::array<std::string_view, 5> kFactTemplates{
    "Song {title} released in {year}.",
    "{title} was sung by {artist}.",
    "{title} counts as {genre} music.",
    "{artist} comes from {origin}.",
    "{artist} debuted in {debut}.",
};
constexpr std::array<std::string_view, 3> kFillerTemplates{
    "Fans love {title} because of its {adj} melody.",
    "{artist} toured across {origin} last {season}.",
    "Critics rate {title} highly.",
};

constexpr std::array<std::string_view, 6> kGeneralTemplates{
    "{gcity} lies near a {geo}.",
    "People in {gcity} often eat {food}.",
    "{Food} needs {ingredient} and salt.",
    "A {vehicle} can travel {num} kilometers per hour.",
    "The {animal} lives in the {habitat}.",
    "Children paint the {object} {color}.",
};
constexpr std::array<std::string_view, 8> kGeneralCities{"Riverton", "Lakeside",  "Hillford", "Portvale",
                                                         "Ashby",    "Brookfield", "Westmere", "Northgate"};
constexpr std::array<std::string_view, 6> kGeo{"river", "mountain", "forest", "lake", "desert", "coast"};
constexpr std::array<std::string_view, 6> kFood{"rice", "bread", "noodles", "soup", "dumplings", "salad"};
constexpr std::array<std::string_view, 6> kIngredients{"garlic", "ginger", "butter", "pepper", "onion", "herbs"};
constexpr std::array<std::string_view, 5> kVehicles{"train", "bus", "bicycle", "ferry", "truck"};
constexpr std::array<std::string_view, 6> kNumbers{"20", "40", "60", "80", "100", "120"};
constexpr std::array<std::string_view, 5> kAnimals{"fox", "owl", "deer", "otter", "heron"};
constexpr std::array<std::string_view, 4> kHabitats{"woods", "marsh", "meadow", "valley"};
constexpr std::array<std::string_view, 4> kObjects{"fence", "door", "boat", "wall"};
constexpr std::array<std::string_view, 5> kColors{"red", "blue", "green", "yellow", "white"};

// Boilerplate tails in the style of scraped article footers. None of their
// words occur in the fact or filler templates above.
constexpr std::array<std::string_view, 6> kNoisePhrases{
    "Click the border to bring up the video toolbar and scan the QR code to follow us to get more "
    "exciting content.",
    "Our address is: xxx, and phone is xxx.",
    "Scan the QR code to follow us for daily updates.",
    "Long press the image to subscribe and share with friends.",
    "Contact us via WeChat ID xxx for business cooperation.",
    "Call 400-820-8820 for ticket deals today.",
};

constexpr std::array<std::string_view, 3> kJunkLines{
    "BUY NOW!!! 50% OFF $$$ ###", "*** >>> http://x.example <<< ***", "$$$ ### 9999 ### $$$"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& xs) {
  return xs[rng.below(N)];
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& slots) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      const std::string key(tmpl.substr(i + 1, close - i - 1));
      auto it = slots.find(key);
      if (it == slots.end()) throw Error("synth: unbound template slot {" + key + "}");
      out += it->second;
      i = close + 1;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

std::string make_name(Rng& rng, std::size_t syllables) {
  std::string s;
  for (std::size_t i = 0; i < syllables; ++i) s += pick(rng, kSyllables);
  return capitalize(s);
}

Source pick_domain_source(Rng& rng) {
  // Source mix of a cleaned web-scale music corpus: crawl-dominated.
  const double u = rng.uniform();
  if (u < 0.79) return Source::common_crawl;
  if (u < 0.91) return Source::instruction;
  if (u < 0.97) return Source::paper;
  if (u < 0.99) return Source::book;
  return Source::wiki;
}

std::string doc_id(std::string_view prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", std::string(prefix).c_str(), i);
  return buf;
}

class Generator {
 public:
  Generator(const SynthConfig& config, std::uint64_t seed) : cfg_(config), seed_(seed) {}

  SyntheticCorpus run() {
    SyntheticCorpus out;
    build_kb(out.kb);
    build_zipf();

    Rng doc_rng(derive_seed(seed_, 2));
    out.domain_docs.reserve(cfg_.n_domain_docs);
    for (std::size_t i = 0; i < cfg_.n_domain_docs; ++i) {
      out.domain_docs.push_back(domain_doc(doc_rng, out.kb, doc_id("dom", i), true, out.domain_docs));
    }
    Rng seed_rng(derive_seed(seed_, 3));
    for (std::size_t i = 0; i < cfg_.n_seed_docs; ++i) {
      out.seed_docs.push_back(seed_doc(seed_rng, out.kb, doc_id("seed", i)));
    }
    Rng gen_rng(derive_seed(seed_, 4));
    for (std::size_t i = 0; i < cfg_.n_general_docs; ++i) {
      out.general_docs.push_back(general_doc(gen_rng, doc_id("gen", i)));
    }
    Rng hd_rng(derive_seed(seed_, 5));
    for (std::size_t i = 0; i < cfg_.n_heldout_domain; ++i) {
      out.heldout_domain.push_back(domain_doc(hd_rng, out.kb, doc_id("hdom", i), false, out.heldout_domain));
    }
    Rng hg_rng(derive_seed(seed_, 6));
    for (std::size_t i = 0; i < cfg_.n_heldout_general; ++i) {
      out.heldout_general.push_back(general_doc(hg_rng, doc_id("hgen", i)));
    }
    out.qa = build_qa(out.kb);
    return out;
  }

 private:
  void build_kb(SyntheticKB& kb) {
    Rng rng(derive_seed(seed_, 1));
    std::set<std::string> given_used;
    std::set<std::string> family_used;
    for (std::size_t i = 0; i < cfg_.n_artists; ++i) {
      std::string given;
      do {
        given = make_name(rng, 2);
      } while (!given_used.insert(given).second && given_used.size() < 400);
      std::string family;
      do {
        family = make_name(rng, 3);
      } while (!family_used.insert(family).second);
      Artist a;
      a.name = given + " " + family;
      a.origin = std::string(pick(rng, kOrigins));
      a.debut_year = 1975 + static_cast<int>(rng.below(46));
      kb.artists.push_back(std::move(a));
    }
    std::vector<int> ranks(cfg_.n_artists);
    for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<int>(i + 1);
    rng.shuffle(std::span<int>(ranks));
    for (std::size_t i = 0; i < ranks.size(); ++i) kb.artists[i].popularity_rank = ranks[i];

    for (std::size_t s = 0; s < cfg_.n_songs; ++s) {
      Song song;
      song.title = "t" + std::to_string(s + 1);
      song.artist_id = s < cfg_.n_artists ? s : static_cast<std::size_t>(rng.below(cfg_.n_artists));
      const int debut = kb.artists[song.artist_id].debut_year;
      song.year = debut + static_cast<int>(rng.below(static_cast<std::uint64_t>(2025 - debut)));
      song.genre = std::string(pick(rng, kGenres));
      kb.songs.push_back(std::move(song));
    }
    for (auto t : kFactTemplates) kb.domain_templates.emplace_back(t);
    for (auto t : kFillerTemplates) kb.domain_templates.emplace_back(t);
    for (auto t : kGeneralTemplates) kb.general_templates.emplace_back(t);
    for (auto t : kNoisePhrases) kb.noise_phrases.emplace_back(t);

    songs_by_artist_.assign(cfg_.n_artists, {});
    for (std::size_t s = 0; s < kb.songs.size(); ++s) songs_by_artist_[kb.songs[s].artist_id].push_back(s);
    artist_by_rank_.assign(cfg_.n_artists, 0);
    for (std::size_t a = 0; a < kb.artists.size(); ++a) {
      artist_by_rank_[static_cast<std::size_t>(kb.artists[a].popularity_rank - 1)] = a;
    }
  }

  void build_zipf() {
    zipf_cdf_.resize(cfg_.n_artists);
    double total = 0.0;
    for (std::size_t r = 0; r < cfg_.n_artists; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), cfg_.zipf_exponent);
      zipf_cdf_[r] = total;
    }
    for (auto& c : zipf_cdf_) c /= total;
  }

  std::size_t zipf_artist(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
    const auto rank = std::min<std::size_t>(static_cast<std::size_t>(it - zipf_cdf_.begin()), cfg_.n_artists - 1);
    return artist_by_rank_[rank];
  }

  std::map<std::string, std::string> artist_slots(Rng& rng, const SyntheticKB& kb, std::size_t a) const {
    const auto& artist = kb.artists[a];
    std::map<std::string, std::string> slots{
        {"artist", artist.name},
        {"origin", artist.origin},
        {"debut", std::to_string(artist.debut_year)},
        {"adj", std::string(pick(rng, kAdjectives))},
        {"season", std::string(pick(rng, kSeasons))},
    };
    const auto& songs = songs_by_artist_[a];
    if (!songs.empty()) {
      const auto& song = kb.songs[songs[rng.below(songs.size())]];
      slots["title"] = song.title;
      slots["year"] = std::to_string(song.year);
      slots["genre"] = song.genre;
    }
    return slots;
  }

  std::string sentence(Rng& rng, const SyntheticKB& kb, std::size_t a) const {
    auto slots = artist_slots(rng, kb, a);
    const bool has_song = slots.contains("title");
    std::string_view tmpl;
    for (;;) {
      const std::size_t n = kFactTemplates.size() + kFillerTemplates.size();
      const std::size_t k = rng.below(n);
      tmpl = k < kFactTemplates.size() ? kFactTemplates[k] : kFillerTemplates[k - kFactTemplates.size()];
      if (has_song || tmpl.find("{title}") == std::string_view::npos) break;
    }
    return capitalize(substitute(tmpl, slots));
  }

  std::string body(Rng& rng, const SyntheticKB& kb, std::size_t a) const {
    const std::size_t span = cfg_.max_sentences - cfg_.min_sentences + 1;
    const std::size_t n = cfg_.min_sentences + rng.below(span);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) text += ' ';
      text += sentence(rng, kb, a);
    }
    return text;
  }

  // Keyword stuffing: domain terms in random order, as in SEO spam.
  std::string keyword_spam(Rng& rng, const SyntheticKB& kb) const {
    const std::size_t n = 8 + rng.below(9);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) out += ' ';
      const auto& song = kb.songs[rng.below(kb.songs.size())];
      switch (rng.below(5)) {
        case 0: out += song.title; break;
        case 1: out += kb.artists[song.artist_id].name; break;
        case 2: out += std::to_string(song.year); break;
        case 3: out += song.genre; break;
        default: out += pick(rng, kAdjectives); break;
      }
    }
    return out;
  }

  Document domain_doc(Rng& rng, const SyntheticKB& kb, std::string id, bool training,
                      const std::vector<Document>& earlier) const {
    Document doc;
    doc.id = std::move(id);
    doc.lang = "en";
    if (training && !earlier.empty() && rng.bernoulli(cfg_.dup_rate)) {
      const auto& orig = earlier[rng.below(earlier.size())];
      doc.source = orig.source;
      doc.text = orig.text;
      doc.meta = orig.meta;
      doc.meta["dup_of"] = orig.id;
      return doc;
    }
    if (training && rng.bernoulli(cfg_.junk_rate)) {
      doc.source = Source::common_crawl;
      for (int i = 0; i < 5; ++i) {
        if (i > 0) doc.text += '\n';
        doc.text += pick(rng, kJunkLines);
      }
      doc.meta["junk"] = true;
      return doc;
    }
    const std::size_t a = zipf_artist(rng);
    doc.source = training ? pick_domain_source(rng) : Source::synthetic;
    doc.text = body(rng, kb, a);
    doc.meta["artist"] = kb.artists[a].name;
    if (training && rng.bernoulli(cfg_.noise_rate)) {
      const std::size_t k = rng.below(kNoisePhrases.size());
      const std::size_t start = tokenize(doc.text).size();
      if (rng.bernoulli(cfg_.spam_rate)) {
        doc.text += ' ';
        doc.text += keyword_spam(rng, kb);
        doc.meta["spam"] = true;
      }
      doc.text += ' ';
      doc.text += kNoisePhrases[k];
      doc.meta["noise_start"] = start;
      doc.meta["noise_end"] = tokenize(doc.text).size();
      doc.meta["noise_phrase"] = k;
    }
    return doc;
  }

  Document seed_doc(Rng& rng, const SyntheticKB& kb, std::string id) const {
    Document doc;
    doc.id = std::move(id);
    doc.lang = "en";
    doc.source = Source::wiki;
    const std::size_t a = zipf_artist(rng);
    doc.text = body(rng, kb, a);
    doc.meta["artist"] = kb.artists[a].name;
    return doc;
  }

  Document general_doc(Rng& rng, std::string id) const {
    Document doc;
    doc.id = std::move(id);
    doc.lang = "en";
    doc.source = Source::common_crawl;
    const std::size_t span = cfg_.max_sentences - cfg_.min_sentences + 1;
    const std::size_t n = cfg_.min_sentences + rng.below(span);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string food(pick(rng, kFood));
      std::map<std::string, std::string> slots{
          {"gcity", std::string(pick(rng, kGeneralCities))},
          {"geo", std::string(pick(rng, kGeo))},
          {"food", food},
          {"Food", capitalize(food)},
          {"ingredient", std::string(pick(rng, kIngredients))},
          {"vehicle", std::string(pick(rng, kVehicles))},
          {"num", std::string(pick(rng, kNumbers))},
          {"animal", std::string(pick(rng, kAnimals))},
          {"habitat", std::string(pick(rng, kHabitats))},
          {"object", std::string(pick(rng, kObjects))},
          {"color", std::string(pick(rng, kColors))},
      };
      if (i > 0) doc.text += ' ';
      doc.text += substitute(pick(rng, kGeneralTemplates), slots);
    }
    return doc;
  }

  enum class Fact { origin, debut, song_year };

  QAItem make_item(const SyntheticKB& kb, std::size_t a, Fact fact, std::size_t song_choice,
                   Stratum stratum) const {
    const auto& artist = kb.artists[a];
    QAItem item;
    item.stratum = stratum;
    item.entities.push_back("artist:" + std::to_string(a));
    switch (fact) {
      case Fact::origin:
        item.question = "Where does " + artist.name + " come from?";
        item.prompt = artist.name + " comes from";
        item.gold = artist.origin;
        break;
      case Fact::debut:
        item.question = "In which year did " + artist.name + " debut?";
        item.prompt = artist.name + " debuted in";
        item.gold = std::to_string(artist.debut_year);
        break;
      case Fact::song_year: {
        const auto s = songs_by_artist_[a][song_choice % songs_by_artist_[a].size()];
        const auto& song = kb.songs[s];
        item.question = "Which year was song " + song.title + " released?";
        item.prompt = "Song " + song.title + " released in";
        item.gold = std::to_string(song.year);
        item.entities.push_back("song:" + std::to_string(s));
        break;
      }
    }
    return item;
  }

  std::vector<QAItem> build_qa(const SyntheticKB& kb) const {
    Rng rng(derive_seed(seed_, 7));
    const auto n_pop = static_cast<std::size_t>(std::llround(cfg_.popular_fraction * static_cast<double>(cfg_.n_qa)));
    const std::size_t n_even = cfg_.n_qa - std::min(n_pop, cfg_.n_qa);

    std::set<std::string> used;
    std::vector<QAItem> items;
    auto add = [&](QAItem item) {
      if (!used.insert(item.question).second) return false;
      items.push_back(std::move(item));
      return true;
    };

    // Popular stratum: facts about the top fifth of artists by popularity.
    const std::size_t top = std::max<std::size_t>(1, cfg_.n_artists / 5);
    std::vector<QAItem> pool;
    for (std::size_t r = 0; r < top; ++r) {
      const std::size_t a = artist_by_rank_[r];
      pool.push_back(make_item(kb, a, Fact::origin, 0, Stratum::popular));
      pool.push_back(make_item(kb, a, Fact::debut, 0, Stratum::popular));
      for (std::size_t k = 0; k < songs_by_artist_[a].size(); ++k) {
        pool.push_back(make_item(kb, a, Fact::song_year, k, Stratum::popular));
      }
    }
    rng.shuffle(std::span<QAItem>(pool));
    std::size_t taken = 0;
    for (auto& item : pool) {
      if (taken == n_pop) break;
      if (add(std::move(item))) ++taken;
    }

    // Even stratum: evenly spaced popularity ranks over the whole roster.
    for (std::size_t i = 0; i < n_even; ++i) {
      const std::size_t rank = (i * cfg_.n_artists) / std::max<std::size_t>(n_even, 1);
      const std::size_t a = artist_by_rank_[rank % cfg_.n_artists];
      for (std::size_t attempt = 0; attempt < 3 + songs_by_artist_[a].size(); ++attempt) {
        const std::size_t f = (i + attempt) % 3;
        if (f == 2 && songs_by_artist_[a].empty()) continue;
        if (add(make_item(kb, a, static_cast<Fact>(f), i + attempt, Stratum::even_sampled))) break;
      }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "qa-%04zu", i);
      items[i].id = buf;
    }
    return items;
  }

  const SynthConfig& cfg_;
  std::uint64_t seed_;
  std::vector<std::vector<std::size_t>> songs_by_artist_;
  std::vector<std::size_t> artist_by_rank_;
  std::vector<double> zipf_cdf_;
};

}  // namespace

void SyntheticKB::validate() const {
  for (const auto& s : songs) {
    if (s.artist_id >= artists.size()) throw FormatError("kb: song " + s.title + " references a missing artist");
  }
  std::vector<int> ranks;
  for (const auto& a : artists) ranks.push_back(a.popularity_rank);
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] != static_cast<int>(i + 1)) throw FormatError("kb: popularity ranks are not a permutation");
  }
}

int SyntheticKB::latest_year() const {
  int y = 0;
  for (const auto& s : songs) y = std::max(y, s.year);
  return y;
}

json SyntheticKB::to_json() const {
  json j;
  j["version"] = 1;
  j["artists"] = json::array();
  for (const auto& a : artists) {
    j["artists"].push_back(
        {{"name", a.name}, {"origin", a.origin}, {"debut_year", a.debut_year}, {"popularity_rank", a.popularity_rank}});
  }
  j["songs"] = json::array();
  for (const auto& s : songs) {
    j["songs"].push_back({{"title", s.title}, {"artist_id", s.artist_id}, {"year", s.year}, {"genre", s.genre}});
  }
  j["templates"] = {{"domain", domain_templates}, {"general", general_templates}};
  j["noise_phrases"] = noise_phrases;
  return j;
}

SyntheticKB SyntheticKB::from_json(const json& j) {
  SyntheticKB kb;
  try {
    for (const auto& a : j.at("artists")) {
      kb.artists.push_back({a.at("name").get<std::string>(), a.at("origin").get<std::string>(),
                            a.at("debut_year").get<int>(), a.at("popularity_rank").get<int>()});
    }
    for (const auto& s : j.at("songs")) {
      kb.songs.push_back({s.at("title").get<std::string>(), s.at("artist_id").get<std::size_t>(),
                          s.at("year").get<int>(), s.at("genre").get<std::string>()});
    }
    kb.domain_templates = j.at("templates").at("domain").get<std::vector<std::string>>();
    kb.general_templates = j.at("templates").at("general").get<std::vector<std::string>>();
    kb.noise_phrases = j.at("noise_phrases").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("kb: ") + e.what());
  }
  kb.validate();
  return kb;
}

std::string_view to_string(Stratum s) { return s == Stratum::popular ? "popular" : "even_sampled"; }

Stratum stratum_from_string(std::string_view s) {
  if (s == "popular") return Stratum::popular;
  if (s == "even_sampled") return Stratum::even_sampled;
  throw FormatError("unknown QA stratum: " + std::string(s));
}

json to_json(const QAItem& item) {
  return json{{"id", item.id},
              {"question", item.question},
              {"gold", item.gold},
              {"stratum", std::string(to_string(item.stratum))},
              {"prompt", item.prompt},
              {"entities", item.entities}};
}

QAItem qa_item_from_json(const json& j) {
  QAItem item;
  try {
    item.id = j.at("id").get<std::string>();
    item.question = j.at("question").get<std::string>();
    item.gold = j.at("gold").get<std::string>();
    item.stratum = stratum_from_string(j.at("stratum").get<std::string>());
    item.prompt = j.value("prompt", std::string());
    item.entities = j.value("entities", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw FormatError(std::string("qa item: ") + e.what());
  }
  if (item.gold.empty()) throw FormatError("qa item " + item.id + " has an empty gold answer");
  return item;
}

std::vector<QAItem> read_qa(const std::filesystem::path& path) {
  io::require_exists(path, "QA file");
  std::vector<QAItem> items;
  for (const auto& row : io::read_jsonl(path)) items.push_back(qa_item_from_json(row));
  return items;
}

void write_qa(const std::filesystem::path& path, const std::vector<QAItem>& items) {
  std::vector<json> rows;
  for (const auto& i : items) rows.push_back(to_json(i));
  io::write_atomic(path, io::to_jsonl(rows));
}

std::string kb_lookup_answer(const SyntheticKB& kb, const QAItem& item) {
  std::size_t artist = SIZE_MAX;
  std::size_t song = SIZE_MAX;
  for (const auto& e : item.entities) {
    const auto colon = e.find(':');
    const auto kind = e.substr(0, colon);
    const auto idx = static_cast<std::size_t>(std::stoul(e.substr(colon + 1)));
    if (kind == "artist") artist = idx;
    if (kind == "song") song = idx;
  }
  if (song != SIZE_MAX) return std::to_string(kb.songs.at(song).year);
  if (artist == SIZE_MAX) return {};
  const auto& a = kb.artists.at(artist);
  if (item.question.starts_with("Where")) return a.origin;
  return std::to_string(a.debut_year);
}

void SynthConfig::validate() const {
  if (n_artists == 0 || n_songs == 0 || n_domain_docs == 0 || n_general_docs == 0) {
    throw InvalidArgument("synth: artist, song and document counts must be > 0");
  }
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw InvalidArgument("synth: noise_rate must lie in [0,1]");
  if (!(popular_fraction >= 0.0 && popular_fraction <= 1.0)) {
    throw InvalidArgument("synth: popular_fraction must lie in [0,1]");
  }
  if (!(spam_rate >= 0.0 && spam_rate <= 1.0)) throw InvalidArgument("synth: spam_rate must lie in [0,1]");
  if (!(dup_rate >= 0.0 && dup_rate <= 1.0) || !(junk_rate >= 0.0 && junk_rate <= 1.0)) {
    throw InvalidArgument("synth: dup_rate and junk_rate must lie in [0,1]");
  }
  if (min_sentences == 0 || min_sentences > max_sentences) {
    throw InvalidArgument("synth: need 1 <= min_sentences <= max_sentences");
  }
  if (zipf_exponent < 0.0) throw InvalidArgument("synth: zipf_exponent must be >= 0");
}

json SynthConfig::to_json() const {
  return json{{"n_artists", n_artists},
              {"n_songs", n_songs},
              {"n_domain_docs", n_domain_docs},
              {"n_general_docs", n_general_docs},
              {"n_seed_docs", n_seed_docs},
              {"n_heldout_domain", n_heldout_domain},
              {"n_heldout_general", n_heldout_general},
              {"n_qa", n_qa},
              {"noise_rate", noise_rate},
              {"popular_fraction", popular_fraction},
              {"zipf_exponent", zipf_exponent},
              {"min_sentences", min_sentences},
              {"max_sentences", max_sentences},
              {"spam_rate", spam_rate},
              {"dup_rate", dup_rate},
              {"junk_rate", junk_rate}};
}

SyntheticCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  Generator gen(config, seed);
  SyntheticCorpus out = gen.run();
  out.kb.validate();
  return out;
}

json kb_anchors_json(const SyntheticKB& kb) {
  json anchors = json::array();
  for (const auto& s : kb.songs) {
    anchors.push_back({{"kind", "song"}, {"canonical", s.title}, {"aliases", {s.title}}});
  }
  for (const auto& a : kb.artists) {
    const auto space = a.name.find(' ');
    anchors.push_back({{"kind", "singer"}, {"canonical", a.name}, {"aliases", {a.name, a.name.substr(space + 1)}}});
  }
  return json{{"version", 1}, {"anchors", anchors}};
}

}  // namespace forge
