#pragma once

/** \file index.hpp
 *  \brief Immutable inverted index over one text field with classic tf-idf
 *  vector-space scoring.
 *
 * For a query with distinct terms Q and a document d:
 *
 *   score(q, d) = coord(q, d) * queryNorm(q)
 *                 * sum_{t in Q, t in d} sqrt(freq(t, d)) * idf(t)^2 * norm(d)
 *
 *   idf(t)       = max(0, 1 + ln(N / (df(t) + 1)))
 *   norm(d)      = 1 / sqrt(doc_len(d))
 *   coord(q, d)  = |{t in Q : t in d}| / |Q|
 *   queryNorm(q) = 1 / sqrt(sum_{t in Q} idf(t)^2)
 *
 * Hits are ordered by descending score, ties by ascending track id.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "coverscale/corpus.hpp"
#include "coverscale/error.hpp"
#include "coverscale/textnorm.hpp"

namespace coverscale {

enum class Field : std::uint8_t { Title = 0, PreTitle = 1, Lyrics = 2 };

constexpr std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::Title: return "title";
    case Field::PreTitle: return "pre_title";
    case Field::Lyrics: return "lyrics";
  }
  return "?";
}

inline Field parse_field(std::string_view name) {
  if (name == "title") return Field::Title;
  if (name == "pre_title" || name == "pre-title") return Field::PreTitle;
  if (name == "lyrics") return Field::Lyrics;
  throw Error(ErrorCode::InvalidArgument, "unknown field '" + std::string(name) + "'");
}

/// Term counts of one document for the given field. A missing pre_title
/// falls back to the raw title.
inline std::map<Term, std::uint32_t> field_terms(const TrackDocument& doc, Field field) {
  if (field == Field::Lyrics) return {doc.lyrics.begin(), doc.lyrics.end()};
  std::map<Term, std::uint32_t> counts;
  const std::string& text = (field == Field::PreTitle && doc.pre_title) ? *doc.pre_title : doc.title;
  for (auto& t : tokenize(text)) ++counts[std::move(t)];
  return counts;
}

inline double idf(std::uint64_t df, std::uint64_t n_docs) {
  if (n_docs < 1 || df > n_docs)
    throw Error(ErrorCode::InvalidArgument, "idf needs 0 <= df <= n_docs and n_docs >= 1");
  return std::max(0.0, 1.0 + std::log(static_cast<double>(n_docs) / static_cast<double>(df + 1)));
}

struct Posting {
  std::uint32_t doc;
  std::uint32_t freq;

  bool operator==(const Posting&) const = default;
};

struct ScoredHit {
  std::string track_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const ScoredHit&) const = default;
};

struct ResultList {
  std::string query_id;
  std::vector<ScoredHit> hits;
  std::size_t k_requested = 0;

  bool operator==(const ResultList&) const = default;
};

/// Rewrites ranks to 1..n in current order.
inline void renumber(ResultList& list) {
  for (std::size_t i = 0; i < list.hits.size(); ++i) list.hits[i].rank = i + 1;
}

class Index {
 public:
  static constexpr char kMagic[6] = {'C', 'S', 'I', 'D', 'X', '\0'};
  static constexpr std::uint16_t kVersion = 1;

  /// Builds the index; with threads > 1 documents are split into contiguous
  /// chunks whose partial postings are concatenated in chunk order.
  static Index build(const TrackCollection& tracks, Field field, unsigned threads = 1) {
    if (tracks.empty()) throw Error(ErrorCode::EmptyCollection, "cannot index an empty collection");
    Index idx;
    idx.field_ = field;
    const std::size_t n = tracks.size();
    if (n > UINT32_MAX) throw Error(ErrorCode::InvalidArgument, "too many documents");
    idx.doc_ids_.reserve(n);
    for (const auto& d : tracks) idx.doc_ids_.push_back(d.track_id);
    idx.doc_len_.assign(n, 0);

    using Partial = std::unordered_map<Term, std::vector<Posting>>;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<Partial> partials(workers);
    const auto work = [&](unsigned w) {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        std::uint64_t len = 0;
        for (auto& [term, freq] : field_terms(tracks[i], field)) {
          partials[w][term].push_back({static_cast<std::uint32_t>(i), freq});
          len += freq;
        }
        idx.doc_len_[i] = static_cast<std::uint32_t>(std::min<std::uint64_t>(len, UINT32_MAX));
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (auto& partial : partials)
      for (auto& [term, list] : partial) {
        auto& dest = idx.postings_[term];
        dest.insert(dest.end(), list.begin(), list.end());
      }
    idx.finish();
    return idx;
  }

  Field field() const noexcept { return field_; }
  std::size_t n_docs() const noexcept { return doc_ids_.size(); }
  std::size_t n_terms() const noexcept { return postings_.size(); }
  const std::string& doc_id(std::uint32_t ordinal) const { return doc_ids_.at(ordinal); }
  std::uint32_t doc_len(std::uint32_t ordinal) const { return doc_len_.at(ordinal); }

  std::optional<std::uint32_t> ordinal_of(std::string_view track_id) const {
    const auto it = ordinal_.find(std::string(track_id));
    if (it == ordinal_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Posting> postings(std::string_view term) const {
    const auto it = postings_.find(std::string(term));
    if (it == postings_.end()) return {};
    return it->second;
  }

  std::size_t df(std::string_view term) const { return postings(term).size(); }

  double idf_of(std::string_view term) const { return idf(df(term), n_docs()); }

  /// Term dictionary in ascending byte order.
  std::vector<std::string_view> terms() const {
    std::vector<std::string_view> out;
    out.reserve(postings_.size());
    for (const auto& [term, list] : postings_) out.push_back(term);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const Index& other) const {
    return field_ == other.field_ && doc_ids_ == other.doc_ids_ && doc_len_ == other.doc_len_ &&
           postings_ == other.postings_;
  }

  // -- binary snapshot ------------------------------------------------------
  // Little-endian. Header: magic[6] u16 version u8 field. Then u64 n_docs,
  // per doc (str id, u32 doc_len); u64 n_terms, per term in ascending order
  // (str term, u64 n_postings, n x (u32 doc, u32 freq)). str = u32 length +
  // bytes.

  void save(std::ostream& out) const {
    out.write(kMagic, sizeof(kMagic));
    put<std::uint16_t>(out, kVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(field_));
    put<std::uint64_t>(out, n_docs());
    for (std::size_t i = 0; i < n_docs(); ++i) {
      put_str(out, doc_ids_[i]);
      put<std::uint32_t>(out, doc_len_[i]);
    }
    const auto dict = terms();
    put<std::uint64_t>(out, dict.size());
    for (auto term : dict) {
      put_str(out, term);
      const auto& list = postings_.at(std::string(term));
      put<std::uint64_t>(out, list.size());
      for (const auto& p : list) {
        put<std::uint32_t>(out, p.doc);
        put<std::uint32_t>(out, p.freq);
      }
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing index snapshot");
  }

  static Index load(std::istream& in) {
    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
      throw Error(ErrorCode::BadSnapshot, "not an index snapshot");
    if (const auto version = get<std::uint16_t>(in); version != kVersion)
      throw Error(ErrorCode::BadSnapshot, "unsupported snapshot version " + std::to_string(version));
    Index idx;
    const auto field = get<std::uint8_t>(in);
    if (field > static_cast<std::uint8_t>(Field::Lyrics)) throw Error(ErrorCode::BadSnapshot, "bad field tag");
    idx.field_ = static_cast<Field>(field);
    const auto n = get<std::uint64_t>(in);
    if (n == 0 || n > UINT32_MAX) throw Error(ErrorCode::BadSnapshot, "bad document count");
    for (std::uint64_t i = 0; i < n; ++i) {
      idx.doc_ids_.push_back(get_str(in));
      idx.doc_len_.push_back(get<std::uint32_t>(in));
    }
    const auto n_terms = get<std::uint64_t>(in);
    for (std::uint64_t t = 0; t < n_terms; ++t) {
      auto term = get_str(in);
      const auto count = get<std::uint64_t>(in);
      if (count > n) throw Error(ErrorCode::BadSnapshot, "posting list longer than the collection");
      std::vector<Posting> list;
      list.reserve(count);
      for (std::uint64_t p = 0; p < count; ++p) {
        const auto doc = get<std::uint32_t>(in);
        const auto freq = get<std::uint32_t>(in);
        list.push_back({doc, freq});
      }
      if (!idx.postings_.emplace(std::move(term), std::move(list)).second)
        throw Error(ErrorCode::BadSnapshot, "repeated term");
    }
    idx.finish();
    idx.check_invariants();
    return idx;
  }

  /// Throws BadSnapshot when postings are unsorted, out of range, or do not
  /// add up to doc_len.
  void check_invariants() const {
    std::vector<std::uint64_t> sums(n_docs(), 0);
    for (const auto& [term, list] : postings_) {
      if (term.empty() || list.empty()) throw Error(ErrorCode::BadSnapshot, "empty term or posting list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].doc >= n_docs()) throw Error(ErrorCode::BadSnapshot, "ordinal out of range");
        if (i > 0 && list[i].doc <= list[i - 1].doc)
          throw Error(ErrorCode::BadSnapshot, "postings of '" + term + "' not strictly ascending");
        if (list[i].freq == 0) throw Error(ErrorCode::BadSnapshot, "zero term frequency");
        sums[list[i].doc] += list[i].freq;
      }
    }
    for (std::size_t d = 0; d < n_docs(); ++d)
      if (sums[d] != doc_len_[d]) throw Error(ErrorCode::BadSnapshot, "doc_len mismatch for " + doc_ids_[d]);
  }

 private:
  void finish() {
    ordinal_.clear();
    for (std::uint32_t i = 0; i < doc_ids_.size(); ++i)
      if (!ordinal_.emplace(doc_ids_[i], i).second)
        throw Error(ErrorCode::DuplicateId, "track_id " + doc_ids_[i] + " indexed twice");
  }

  template <class T>
  static void put(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }

  template <class T>
  static T get(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw Error(ErrorCode::BadSnapshot, "truncated snapshot");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
    return value;
  }

  static void put_str(std::ostream& out, std::string_view s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

  static std::string get_str(std::istream& in) {
    const auto len = get<std::uint32_t>(in);
    if (len > (1u << 24)) throw Error(ErrorCode::BadSnapshot, "string too long");
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw Error(ErrorCode::BadSnapshot, "truncated snapshot");
    return s;
  }

  Field field_ = Field::Title;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_len_;
  std::unordered_map<Term, std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::uint32_t> ordinal_;
};

namespace detail {

/// Per-thread accumulators sized to the largest index seen; only touched
/// slots are reset after each query.
struct SearchScratch {
  std::vector<double> sum;
  std::vector<std::uint32_t> matched;
  std::vector<std::uint32_t> touched;

  void ensure(std::size_t n) {
    if (sum.size() < n) {
      sum.resize(n, 0.0);
      matched.resize(n, 0);
    }
  }

  void reset() {
    for (auto d : touched) {
      sum[d] = 0.0;
      matched[d] = 0;
    }
    touched.clear();
  }
};

inline bool hit_before(const ScoredHit& a, const ScoredHit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.track_id < b.track_id;
}

// Scores within this relative distance of a group leader are the same score
// reached through different rounding (e.g. sqrt(4)/sqrt(4) vs 1/sqrt(1)).
inline constexpr double kTieTolerance = 1e-12;

/// Orders hits by score, snaps near-equal scores to their group leader so
/// that the id tie-break applies to them, and keeps the first k.
inline void top_k(std::vector<ScoredHit>& hits, std::size_t k) {
  std::sort(hits.begin(), hits.end(), hit_before);
  for (std::size_t g = 0; g < hits.size();) {
    const double leader = hits[g].score;
    std::size_t end = g + 1;
    while (end < hits.size() && leader - hits[end].score <= kTieTolerance * std::abs(leader)) {
      hits[end].score = leader;
      ++end;
    }
    if (end - g > 1)
      std::sort(hits.begin() + static_cast<std::ptrdiff_t>(g), hits.begin() + static_cast<std::ptrdiff_t>(end),
                hit_before);
    g = end;
  }
  if (hits.size() > k) hits.resize(k);
}

}  // namespace detail

/// Disjunctive tf-idf search. Repeated query terms count once.
inline ResultList search(const Index& index, std::span<const Term> query_terms, std::size_t k,
                         const std::optional<std::string>& exclude_id = std::nullopt) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  ResultList result;
  result.query_id = exclude_id.value_or("");
  result.k_requested = k;

  std::vector<Term> distinct(query_terms.begin(), query_terms.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty()) return result;

  const auto n = index.n_docs();
  double sum_sq = 0.0;
  std::vector<double> weights(distinct.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    weights[i] = index.idf_of(distinct[i]);
    sum_sq += weights[i] * weights[i];
  }
  const double query_norm = sum_sq > 0.0 ? 1.0 / std::sqrt(sum_sq) : 1.0;

  thread_local detail::SearchScratch scratch;
  scratch.ensure(n);
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const double w2 = weights[i] * weights[i];
    for (const auto& p : index.postings(distinct[i])) {
      if (scratch.matched[p.doc] == 0) scratch.touched.push_back(p.doc);
      scratch.sum[p.doc] += std::sqrt(static_cast<double>(p.freq)) * w2;
      ++scratch.matched[p.doc];
    }
  }

  const auto excluded = exclude_id ? index.ordinal_of(*exclude_id) : std::nullopt;
  const double n_query = static_cast<double>(distinct.size());
  result.hits.reserve(scratch.touched.size());
  for (auto d : scratch.touched) {
    if (excluded && *excluded == d) continue;
    const double coord = static_cast<double>(scratch.matched[d]) / n_query;
    const double norm = 1.0 / std::sqrt(static_cast<double>(index.doc_len(d)));
    result.hits.push_back({index.doc_id(d), coord * query_norm * scratch.sum[d] * norm, 0});
  }
  scratch.reset();

  detail::top_k(result.hits, k);
  renumber(result);
  return result;
}

inline ResultList search(const Index& index, std::initializer_list<Term> query_terms, std::size_t k,
                         const std::optional<std::string>& exclude_id = std::nullopt) {
  const std::vector<Term> terms(query_terms);
  return search(index, std::span<const Term>(terms), k, exclude_id);
}

}  // namespace coverscale
