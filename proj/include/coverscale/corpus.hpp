#pragma once

/** \file corpus.hpp
 *  \brief Track records, cover cliques and the dataset readers/writers.
 *
 * Formats handled here:
 *  - tracks.jsonl: one JSON object per line (canonical interchange)
 *  - SHS clique lists: '%<clique_id>,<name>' header lines followed by
 *    track lines whose first ',' or tab separated field is a track id
 *  - MXM bag-of-words: one '%' vocabulary line, then
 *    'track_id,mxm_id,idx:cnt,...' with 1-based vocabulary indices
 *  - duplicate id lists: one track id per line
 *
 * '#' starts a comment line in every text format.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverscale/error.hpp"
#include "coverscale/rng.hpp"
#include "coverscale/textnorm.hpp"

namespace coverscale {

/// Bag-of-words lyrics: term -> occurrence count (>= 1).
using Lyrics = std::map<std::string, std::uint32_t>;

struct TrackDocument {
  std::string track_id;
  std::string title;
  std::optional<std::string> pre_title;
  Lyrics lyrics;
  std::optional<std::string> clique_id;
  bool is_duplicate = false;
  std::optional<std::string> language;

  bool operator==(const TrackDocument&) const = default;
};

/// Ordered set of tracks with unique ids. Immutable after construction;
/// transformations return a new collection.
class TrackCollection {
 public:
  TrackCollection() = default;

  explicit TrackCollection(std::vector<TrackDocument> docs) {
    docs_.reserve(docs.size());
    for (auto& d : docs) add(std::move(d), 0);
  }

  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const TrackDocument& operator[](std::size_t i) const { return docs_[i]; }
  auto begin() const noexcept { return docs_.begin(); }
  auto end() const noexcept { return docs_.end(); }
  const std::vector<TrackDocument>& documents() const noexcept { return docs_; }

  const TrackDocument* find(std::string_view track_id) const {
    const auto it = by_id_.find(std::string(track_id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
  }

  /// Copy with `fn` applied to every document; invariants are re-checked.
  template <class Fn>
  TrackCollection transformed(Fn&& fn) const {
    std::vector<TrackDocument> copy = docs_;
    for (auto& d : copy) fn(d);
    return TrackCollection(std::move(copy));
  }

  bool operator==(const TrackCollection& other) const { return docs_ == other.docs_; }

 private:
  friend TrackCollection load_tracks_jsonl(std::istream& in);

  void add(TrackDocument doc, std::size_t line) {
    if (doc.track_id.empty()) throw Error(ErrorCode::MissingField, "empty track_id", line);
    for (const auto& [term, count] : doc.lyrics)
      if (count < 1 || term.empty())
        throw Error(ErrorCode::BadCount, "lyrics of " + doc.track_id + " has a zero count", line);
    if (doc.pre_title && doc.pre_title->size() > doc.title.size())
      throw Error(ErrorCode::InvalidArgument, "pre_title longer than title for " + doc.track_id,
                  line);
    if (!by_id_.emplace(doc.track_id, docs_.size()).second)
      throw Error(ErrorCode::DuplicateId, "track_id " + doc.track_id + " appears twice", line);
    docs_.push_back(std::move(doc));
  }

  std::vector<TrackDocument> docs_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// ---------------------------------------------------------------------------
// tracks.jsonl

inline TrackCollection load_tracks_jsonl(std::istream& in) {
  using nlohmann::json;
  TrackCollection out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Malformed, e.what(), line_no);
    }
    if (!obj.is_object()) throw Error(ErrorCode::Malformed, "line is not a JSON object", line_no);

    const auto required = [&](const char* key) -> std::string {
      const auto it = obj.find(key);
      if (it == obj.end() || it->is_null())
        throw Error(ErrorCode::MissingField, std::string("missing \"") + key + "\"", line_no);
      if (!it->is_string())
        throw Error(ErrorCode::Malformed, std::string("\"") + key + "\" must be a string", line_no);
      return it->get<std::string>();
    };
    const auto optional_string = [&](const char* key) -> std::optional<std::string> {
      const auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) return std::nullopt;
      if (!it->is_string())
        throw Error(ErrorCode::Malformed, std::string("\"") + key + "\" must be a string", line_no);
      return it->get<std::string>();
    };

    TrackDocument doc;
    doc.track_id = required("track_id");
    doc.title = required("title");
    doc.pre_title = optional_string("pre_title");
    doc.clique_id = optional_string("clique_id");
    doc.language = optional_string("language");
    if (const auto it = obj.find("is_duplicate"); it != obj.end() && !it->is_null()) {
      if (!it->is_boolean())
        throw Error(ErrorCode::Malformed, "\"is_duplicate\" must be a boolean", line_no);
      doc.is_duplicate = it->get<bool>();
    }
    if (const auto it = obj.find("lyrics"); it != obj.end() && !it->is_null()) {
      if (!it->is_object()) throw Error(ErrorCode::Malformed, "\"lyrics\" must be an object", line_no);
      for (const auto& [term, count] : it->items()) {
        if (!count.is_number_integer() || count.get<std::int64_t>() < 1 ||
            count.get<std::int64_t>() > UINT32_MAX)
          throw Error(ErrorCode::Malformed, "lyric count for '" + term + "' must be a positive integer",
                      line_no);
        doc.lyrics[term] = static_cast<std::uint32_t>(count.get<std::int64_t>());
      }
    }
    out.add(std::move(doc), line_no);
  }
  return out;
}

inline TrackCollection load_tracks_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_tracks_jsonl(in);
}

inline std::string to_json_line(const TrackDocument& doc) {
  nlohmann::ordered_json obj;
  obj["track_id"] = doc.track_id;
  obj["title"] = doc.title;
  if (doc.pre_title) obj["pre_title"] = *doc.pre_title;
  if (!doc.lyrics.empty()) {
    nlohmann::ordered_json lyr = nlohmann::ordered_json::object();
    for (const auto& [term, count] : doc.lyrics) lyr[term] = count;
    obj["lyrics"] = std::move(lyr);
  }
  if (doc.clique_id) obj["clique_id"] = *doc.clique_id;
  if (doc.is_duplicate) obj["is_duplicate"] = true;
  if (doc.language) obj["language"] = *doc.language;
  return obj.dump();
}

inline void write_tracks_jsonl(const TrackCollection& tracks, std::ostream& out) {
  for (const auto& doc : tracks) out << to_json_line(doc) << '\n';
}

inline void write_tracks_jsonl(const TrackCollection& tracks, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_tracks_jsonl(tracks, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Cliques

/// Ground-truth partition of track ids into cover cliques of size >= 2.
class CliqueMap {
 public:
  using Members = std::set<std::string>;

  CliqueMap() = default;

  /// Singleton (and empty) cliques are dropped, with a note appended to
  /// `warnings` when given. A track listed in two cliques is an error.
  explicit CliqueMap(std::map<std::string, Members> cliques,
                     std::vector<std::string>* warnings = nullptr) {
    for (auto& [id, members] : cliques) {
      if (members.size() < 2) {
        if (warnings) warnings->push_back("dropped clique " + id + " with fewer than 2 members");
        continue;
      }
      for (const auto& track : members) {
        const auto [it, inserted] = owner_.emplace(track, id);
        if (!inserted)
          throw Error(ErrorCode::Malformed,
                      "track " + track + " is in cliques " + it->second + " and " + id);
      }
      cliques_.emplace(id, std::move(members));
    }
  }

  const std::map<std::string, Members>& cliques() const noexcept { return cliques_; }
  std::size_t size() const noexcept { return cliques_.size(); }
  bool empty() const noexcept { return cliques_.empty(); }

  /// Clique id of a track, or nullptr when the track is in no clique.
  const std::string* clique_of(std::string_view track_id) const {
    const auto it = owner_.find(std::string(track_id));
    return it == owner_.end() ? nullptr : &it->second;
  }

  const Members* members(std::string_view clique_id) const {
    const auto it = cliques_.find(std::string(clique_id));
    return it == cliques_.end() ? nullptr : &it->second;
  }

  std::size_t track_count() const noexcept { return owner_.size(); }

  bool operator==(const CliqueMap& other) const { return cliques_ == other.cliques_; }

 private:
  std::map<std::string, Members> cliques_;
  std::unordered_map<std::string, std::string> owner_;
};

namespace detail {

inline std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline CliqueMap parse_shs_cliques(std::istream& in, std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, CliqueMap::Members> cliques;
  std::string* current = nullptr;
  std::string current_id;
  bool saw_content = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    saw_content = true;
    if (line.front() == '%') {
      const auto body = line.substr(1);
      current_id = std::string(detail::trim(body.substr(0, body.find(','))));
      if (current_id.empty()) throw Error(ErrorCode::Malformed, "clique line without an id", line_no);
      cliques[current_id];
      current = &current_id;
      continue;
    }
    if (current == nullptr)
      throw Error(ErrorCode::OrphanTrackLine, "track line before any '%' clique line", line_no);
    // Extra fields follow a comma, tab or the "<SEP>" of the published files.
    const auto track = detail::trim(line.substr(0, std::min(line.find_first_of(",\t"), line.find("<SEP>"))));
    if (track.empty()) throw Error(ErrorCode::Malformed, "track line without an id", line_no);
    cliques[current_id].emplace(track);
  }
  if (!saw_content) throw Error(ErrorCode::EmptyFile, "no clique or track lines");
  return CliqueMap(std::move(cliques), warnings);
}

inline CliqueMap parse_shs_cliques(const std::string& path,
                                   std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_shs_cliques(in, warnings);
}

inline void write_shs_cliques(const CliqueMap& cliques, std::ostream& out) {
  for (const auto& [id, members] : cliques.cliques()) {
    out << '%' << id << ",\n";
    for (const auto& track : members) out << track << '\n';
  }
}

/// Cliques implied by the clique_id field of the tracks themselves.
inline CliqueMap cliques_from_tracks(const TrackCollection& tracks,
                                     std::vector<std::string>* warnings = nullptr) {
  std::map<std::string, CliqueMap::Members> cliques;
  for (const auto& doc : tracks)
    if (doc.clique_id) cliques[*doc.clique_id].insert(doc.track_id);
  return CliqueMap(std::move(cliques), warnings);
}

/// Copy of `tracks` whose clique_id fields agree with `cliques`.
inline TrackCollection assign_cliques(const TrackCollection& tracks, const CliqueMap& cliques) {
  return tracks.transformed([&](TrackDocument& d) {
    const auto* id = cliques.clique_of(d.track_id);
    d.clique_id = id ? std::optional<std::string>(*id) : std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// MXM bag-of-words

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class Int>
bool parse_int(std::string_view s, Int& value) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

inline std::map<std::string, Lyrics> parse_mxm_bow(std::istream& in) {
  std::vector<std::string> vocab;
  bool have_vocab = false;
  std::map<std::string, Lyrics> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '%') {
      std::vector<std::string> words;
      for (auto w : detail::split(line.substr(1), ',')) words.emplace_back(detail::trim(w));
      // Concatenated train/test files repeat the same vocabulary line.
      if (have_vocab && words != vocab)
        throw Error(ErrorCode::Malformed, "second, different vocabulary line", line_no);
      vocab = std::move(words);
      have_vocab = true;
      continue;
    }
    if (!have_vocab) throw Error(ErrorCode::NoVocabulary, "data line before the '%' vocabulary line", line_no);
    const auto fields = detail::split(line, ',');
    if (fields.size() < 2) throw Error(ErrorCode::Malformed, "expected track_id,mxm_id,...", line_no);
    const auto track = detail::trim(fields[0]);
    if (track.empty()) throw Error(ErrorCode::Malformed, "empty track id", line_no);
    Lyrics bow;
    for (std::size_t f = 2; f < fields.size(); ++f) {
      const auto pair = detail::trim(fields[f]);
      const auto colon = pair.find(':');
      std::int64_t idx = 0;
      std::int64_t cnt = 0;
      if (colon == std::string_view::npos || !detail::parse_int(pair.substr(0, colon), idx) ||
          !detail::parse_int(pair.substr(colon + 1), cnt))
        throw Error(ErrorCode::Malformed, "bad idx:cnt pair '" + std::string(pair) + "'", line_no);
      if (idx < 1 || idx > static_cast<std::int64_t>(vocab.size()))
        throw Error(ErrorCode::IndexOutOfRange,
                    "vocabulary index " + std::to_string(idx) + " outside 1.." + std::to_string(vocab.size()),
                    line_no);
      if (cnt < 1 || cnt > UINT32_MAX) throw Error(ErrorCode::BadCount, "count must be >= 1", line_no);
      bow[vocab[static_cast<std::size_t>(idx - 1)]] += static_cast<std::uint32_t>(cnt);
    }
    out[std::string(track)] = std::move(bow);
  }
  if (!have_vocab) throw Error(ErrorCode::NoVocabulary, "no '%' vocabulary line");
  return out;
}

inline std::map<std::string, Lyrics> parse_mxm_bow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_mxm_bow(in);
}

/// Copy of `tracks` with lyrics replaced for every track present in `bow`.
inline TrackCollection attach_lyrics(const TrackCollection& tracks,
                                     const std::map<std::string, Lyrics>& bow,
                                     std::size_t* attached = nullptr) {
  std::size_t n = 0;
  auto out = tracks.transformed([&](TrackDocument& d) {
    if (const auto it = bow.find(d.track_id); it != bow.end()) {
      d.lyrics = it->second;
      ++n;
    }
  });
  if (attached) *attached = n;
  return out;
}

// ---------------------------------------------------------------------------
// Duplicates

inline std::set<std::string> load_id_list(std::istream& in) {
  std::set<std::string> ids;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = detail::trim(detail::strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    ids.emplace(line);
  }
  return ids;
}

inline std::set<std::string> load_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_id_list(in);
}

/// Flags exactly the listed tracks as duplicates. Ids not in the collection
/// are ignored and counted in `unknown`.
inline TrackCollection apply_duplicate_flags(const TrackCollection& tracks,
                                             const std::set<std::string>& dup_ids,
                                             std::size_t* unknown = nullptr) {
  std::size_t missing = 0;
  for (const auto& id : dup_ids)
    if (!tracks.find(id)) ++missing;
  if (unknown) *unknown = missing;
  return tracks.transformed([&](TrackDocument& d) { d.is_duplicate = dup_ids.count(d.track_id) > 0; });
}

/// Fills pre_title for every track.
inline TrackCollection fill_pre_titles(const TrackCollection& tracks, const Codebook& codebook) {
  return tracks.transformed([&](TrackDocument& d) { d.pre_title = preprocess_title(d.title, codebook); });
}

// ---------------------------------------------------------------------------
// Synthetic corpora

struct SynthParams {
  std::uint64_t seed = 42;
  std::size_t n_cliques = 200;
  std::pair<std::size_t, std::size_t> clique_size_range{5, 5};
  std::size_t vocab_size = 300;
  double parenthetical_rate = 0.4;
  double lyric_overlap = 0.8;

  void validate() const {
    if (n_cliques < 1) throw Error(ErrorCode::InvalidArgument, "n_cliques must be >= 1");
    if (clique_size_range.first < 2 || clique_size_range.second < clique_size_range.first)
      throw Error(ErrorCode::InvalidArgument, "clique_size_range needs 2 <= min <= max");
    if (vocab_size < 1) throw Error(ErrorCode::InvalidArgument, "vocab_size must be >= 1");
    if (!(parenthetical_rate >= 0.0 && parenthetical_rate <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "parenthetical_rate must lie in [0,1]");
    if (!(lyric_overlap >= 0.0 && lyric_overlap <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "lyric_overlap must lie in [0,1]");
  }
};

struct SynthCorpus {
  TrackCollection tracks;
  CliqueMap cliques;
};

namespace detail {

inline constexpr std::size_t kSynthMaxTitleWords = 3;
inline constexpr std::size_t kSynthLyricPool = 24;
inline constexpr std::uint32_t kSynthMaxLyricCount = 6;

/// Pronounceable pseudo-words built from consonant-vowel syllables,
/// enumerated in a fixed order; words whose stem collides with a codebook
/// keyword are skipped.
inline std::vector<std::string> synth_vocabulary(std::size_t size) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  const std::size_t syllables = consonants.size() * vowels.size();
  const auto syllable = [&](std::size_t i) {
    return std::string{consonants[i / vowels.size()], vowels[i % vowels.size()]};
  };
  std::vector<std::string> words;
  words.reserve(size);
  const auto& codebook = default_codebook();
  for (std::size_t length = 2; words.size() < size && length <= 3; ++length) {
    std::size_t total = 1;
    for (std::size_t l = 0; l < length; ++l) total *= syllables;
    for (std::size_t n = 0; n < total && words.size() < size; ++n) {
      std::string w;
      std::size_t rest = n;
      for (std::size_t l = 0; l < length; ++l) {
        w = syllable(rest % syllables) + w;
        rest /= syllables;
      }
      if (codebook.keywords().count(w) || codebook.matches_stem(stem(w))) continue;
      words.push_back(std::move(w));
    }
  }
  if (words.size() < size) throw Error(ErrorCode::InfeasibleParams, "vocab_size too large for the word generator");
  return words;
}

inline std::string capitalized(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

/// Distinct indices drawn uniformly from [0, n) excluding `taken`.
inline std::vector<std::size_t> draw_distinct(Rng& rng, std::size_t n, std::size_t count,
                                              std::set<std::size_t> taken = {}) {
  std::vector<std::size_t> picked;
  while (picked.size() < count && taken.size() < n) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    if (taken.insert(i).second) picked.push_back(i);
  }
  return picked;
}

inline std::string zero_padded(std::size_t value, std::size_t width) {
  auto s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace detail

/// Seeded synthetic corpus: each clique shares a distinct base title of 1-3
/// vocabulary words and a pool of lyric terms. All members carry the first
/// round(lyric_overlap * 24) pool terms; the rest of each member's 24 terms
/// are drawn independently. Non-first members receive a bracketed codebook
/// suffix with probability parenthetical_rate.
inline SynthCorpus synth_corpus(const SynthParams& params) {
  params.validate();
  const std::size_t v = params.vocab_size;
  {
    // distinct titles available: v + v^2 + v^3 (saturating)
    long double capacity = 0;
    long double power = 1;
    for (std::size_t l = 0; l < detail::kSynthMaxTitleWords; ++l) {
      power *= static_cast<long double>(v);
      capacity += power;
    }
    if (capacity < static_cast<long double>(params.n_cliques))
      throw Error(ErrorCode::InfeasibleParams,
                  "vocabulary of " + std::to_string(v) + " words cannot give " +
                      std::to_string(params.n_cliques) + " distinct base titles");
  }
  const auto vocab = detail::synth_vocabulary(v);
  const auto& suffix_words = default_codebook_keywords();

  Rng title_rng(params.seed, "synth.titles");
  Rng size_rng(params.seed, "synth.sizes");
  Rng lyric_rng(params.seed, "synth.lyrics");
  Rng suffix_rng(params.seed, "synth.suffixes");
  Rng id_rng(params.seed, "synth.ids");

  const std::size_t pool = std::min(detail::kSynthLyricPool, v);
  const auto shared = static_cast<std::size_t>(std::llround(params.lyric_overlap * static_cast<double>(pool)));

  struct Draft {
    std::string title;
    Lyrics lyrics;
    std::size_t clique;
  };
  std::vector<Draft> drafts;
  std::set<std::string> used_titles;
  for (std::size_t c = 0; c < params.n_cliques; ++c) {
    std::string base;
    do {
      const auto words = title_rng.between(1, detail::kSynthMaxTitleWords);
      base.clear();
      for (std::uint64_t w = 0; w < words; ++w) {
        if (!base.empty()) base += ' ';
        base += detail::capitalized(vocab[title_rng.below(v)]);
      }
    } while (!used_titles.insert(base).second);

    const auto core = detail::draw_distinct(lyric_rng, v, shared);
    const std::set<std::size_t> core_set(core.begin(), core.end());
    const auto members = static_cast<std::size_t>(
        size_rng.between(params.clique_size_range.first, params.clique_size_range.second));
    for (std::size_t m = 0; m < members; ++m) {
      Draft d{base, {}, c};
      auto terms = core;
      const auto extra = detail::draw_distinct(lyric_rng, v, pool - shared, core_set);
      terms.insert(terms.end(), extra.begin(), extra.end());
      for (auto t : terms)
        d.lyrics[vocab[t]] = static_cast<std::uint32_t>(lyric_rng.between(1, detail::kSynthMaxLyricCount));
      if (m > 0 && suffix_rng.bernoulli(params.parenthetical_rate)) {
        const auto n_words = suffix_rng.between(1, 2);
        const auto picks = detail::draw_distinct(suffix_rng, suffix_words.size(), n_words);
        std::string suffix;
        for (auto p : picks) {
          if (!suffix.empty()) suffix += ' ';
          suffix += detail::capitalized(suffix_words[p]);
        }
        d.title += " (" + suffix + ")";
      }
      drafts.push_back(std::move(d));
    }
  }

  // Track ids are a seeded permutation so that id order carries no clique
  // information (ties in ranking break by id).
  std::vector<std::size_t> perm(drafts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[id_rng.below(i)]);

  const std::size_t id_width = std::max<std::size_t>(6, std::to_string(drafts.size()).size());
  const std::size_t clique_width = std::max<std::size_t>(4, std::to_string(params.n_cliques).size());
  std::vector<TrackDocument> docs;
  std::map<std::string, CliqueMap::Members> cliques;
  docs.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    TrackDocument doc;
    doc.track_id = "TRSYN" + detail::zero_padded(perm[i], id_width);
    doc.title = std::move(drafts[i].title);
    doc.lyrics = std::move(drafts[i].lyrics);
    doc.clique_id = "C" + detail::zero_padded(drafts[i].clique, clique_width);
    cliques[*doc.clique_id].insert(doc.track_id);
    docs.push_back(std::move(doc));
  }
  return SynthCorpus{TrackCollection(std::move(docs)), CliqueMap(std::move(cliques))};
}

}  // namespace coverscale
