#pragma once

/** \file eval.hpp
 *  \brief MAP@k against clique ground truth, title-similarity analysis and
 *  MAP@k curves.
 *
 * AP@k is normalized by the full relevant-set size |R|:
 *
 *   AP@k = (1/|R|) * sum_{i <= min(k, |hits|)} P(i) * rel(i)
 *
 * so AP@k never decreases with k and never exceeds the untruncated AP.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <unicode/utf8.h>

#include "coverscale/corpus.hpp"
#include "coverscale/detail/format.hpp"
#include "coverscale/error.hpp"
#include "coverscale/index.hpp"
#include "coverscale/rng.hpp"

namespace coverscale {

using RunResults = std::map<std::string, ResultList>;

struct EvalReport {
  std::size_t k = 0;
  double map_at_k = 0.0;
  std::map<std::string, double> per_query_ap;
  std::size_t n_queries = 0;
  bool excluded_duplicates = false;
};

inline nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["map_at_k"] = report.map_at_k;
  j["n_queries"] = report.n_queries;
  j["excluded_duplicates"] = report.excluded_duplicates;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [q, ap] : report.per_query_ap) per[q] = ap;
  j["per_query_ap"] = std::move(per);
  return j;
}

inline void write_per_query_csv(const EvalReport& report, std::ostream& out) {
  out << "query_id,ap\n";
  for (const auto& [q, ap] : report.per_query_ap) out << q << ',' << detail::format_double(ap) << '\n';
}

inline double average_precision_at_k(const ResultList& hits, const std::set<std::string>& relevant,
                                     std::size_t k) {
  if (relevant.empty()) throw Error(ErrorCode::EmptyRelevantSet, "query " + hits.query_id + " has no relevant documents");
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  const std::size_t depth = std::min(k, hits.hits.size());
  double sum = 0.0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.count(hits.hits[i].track_id) == 0) continue;
    ++found;
    sum += static_cast<double>(found) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(relevant.size());
}

/// Arithmetic mean, summed in ascending query-id order.
inline double mean_ap(const std::map<std::string, double>& per_query) {
  if (per_query.empty()) throw Error(ErrorCode::NoQueries, "no queries to average");
  double sum = 0.0;
  for (const auto& [q, ap] : per_query) sum += ap;
  return sum / static_cast<double>(per_query.size());
}

/// Scores a run against the cliques. relevant(q) = clique(q) minus q. With
/// exclude_duplicates, duplicate-flagged tracks leave both the result lists
/// (ranks compacted) and the relevant sets; queries left without relevant
/// documents are dropped.
inline EvalReport evaluate_run(const RunResults& results, const CliqueMap& cliques,
                               const TrackCollection& tracks, std::size_t k, bool exclude_duplicates) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  const auto is_dup = [&](const std::string& id) {
    const auto* doc = tracks.find(id);
    return doc != nullptr && doc->is_duplicate;
  };

  EvalReport report;
  report.k = k;
  report.excluded_duplicates = exclude_duplicates;
  for (const auto& [query, list] : results) {
    const auto* clique = cliques.clique_of(query);
    if (clique == nullptr) throw Error(ErrorCode::UnknownQuery, "query " + query + " is in no clique");
    std::set<std::string> relevant;
    for (const auto& member : *cliques.members(*clique))
      if (member != query && !(exclude_duplicates && is_dup(member))) relevant.insert(member);
    if (relevant.empty()) continue;

    if (exclude_duplicates) {
      ResultList filtered;
      filtered.query_id = list.query_id;
      filtered.k_requested = list.k_requested;
      for (const auto& hit : list.hits)
        if (!is_dup(hit.track_id)) filtered.hits.push_back(hit);
      renumber(filtered);
      report.per_query_ap[query] = average_precision_at_k(filtered, relevant, k);
    } else {
      report.per_query_ap[query] = average_precision_at_k(list, relevant, k);
    }
  }
  report.n_queries = report.per_query_ap.size();
  report.map_at_k = mean_ap(report.per_query_ap);
  return report;
}

/// MAP@k for each k of an ascending list, over the same run.
inline std::vector<std::pair<std::size_t, double>> map_curve(const RunResults& results, const CliqueMap& cliques,
                                                             const TrackCollection& tracks,
                                                             const std::vector<std::size_t>& ks,
                                                             bool exclude_duplicates = false) {
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1) throw Error(ErrorCode::InvalidK, "every k must be >= 1");
    if (i > 0 && ks[i] <= ks[i - 1]) throw Error(ErrorCode::InvalidArgument, "ks must be strictly ascending");
  }
  std::vector<std::pair<std::size_t, double>> curve;
  for (auto k : ks) curve.emplace_back(k, evaluate_run(results, cliques, tracks, k, exclude_duplicates).map_at_k);
  return curve;
}

// ---------------------------------------------------------------------------
// Title similarity

namespace detail {

inline std::vector<UChar32> code_points(std::string_view s) {
  std::vector<UChar32> out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto length = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : c);
  }
  return out;
}

}  // namespace detail

/// (|a| + |b| - D) / (|a| + |b|), D the edit distance with insertion and
/// deletion cost 1 and substitution cost 2, over code points. Two empty
/// strings have ratio 1.
inline double levenshtein_ratio(std::string_view a, std::string_view b) {
  const auto x = detail::code_points(a);
  const auto y = detail::code_points(b);
  const std::size_t total = x.size() + y.size();
  if (total == 0) return 1.0;
  std::vector<std::size_t> prev(y.size() + 1);
  std::vector<std::size_t> cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 2);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(total - prev[y.size()]) / static_cast<double>(total);
}

struct SimilarityHistogram {
  static constexpr std::size_t kBins = 20;

  std::array<std::uint64_t, kBins> within_counts{};
  std::array<std::uint64_t, kBins> across_counts{};

  static std::size_t bin_of(double ratio) {
    const auto b = static_cast<std::size_t>(std::max(0.0, ratio) * static_cast<double>(kBins));
    return std::min(b, kBins - 1);
  }
  static double bin_low(std::size_t b) { return static_cast<double>(b) / static_cast<double>(kBins); }
  static double bin_high(std::size_t b) { return static_cast<double>(b + 1) / static_cast<double>(kBins); }
};

/// Within-clique title pairs exhaustively, across-clique pairs by seeded
/// uniform sampling (with replacement) over clique members present in
/// `tracks`.
inline SimilarityHistogram clique_similarity_histogram(const TrackCollection& tracks, const CliqueMap& cliques,
                                                       std::size_t across_sample, std::uint64_t seed) {
  if (across_sample < 1) throw Error(ErrorCode::InvalidArgument, "across_sample must be >= 1");
  SimilarityHistogram hist;
  struct Member {
    const std::string* title;
    std::size_t clique;
  };
  std::vector<Member> pool;
  std::size_t clique_index = 0;
  std::size_t populated = 0;
  for (const auto& [id, members] : cliques.cliques()) {
    std::vector<const std::string*> titles;
    for (const auto& track : members)
      if (const auto* doc = tracks.find(track)) titles.push_back(&doc->title);
    for (std::size_t i = 0; i < titles.size(); ++i)
      for (std::size_t j = i + 1; j < titles.size(); ++j)
        ++hist.within_counts[SimilarityHistogram::bin_of(levenshtein_ratio(*titles[i], *titles[j]))];
    for (const auto* t : titles) pool.push_back({t, clique_index});
    if (!titles.empty()) ++populated;
    ++clique_index;
  }
  if (populated < 2) return hist;

  Rng rng(seed, "eval.across_pairs");
  for (std::size_t drawn = 0; drawn < across_sample;) {
    const auto& a = pool[rng.below(pool.size())];
    const auto& b = pool[rng.below(pool.size())];
    if (a.clique == b.clique) continue;
    ++hist.across_counts[SimilarityHistogram::bin_of(levenshtein_ratio(*a.title, *b.title))];
    ++drawn;
  }
  return hist;
}

inline void write_histogram_csv(const SimilarityHistogram& hist, std::ostream& out) {
  out << "bin_low,bin_high,within_count,across_count\n";
  for (std::size_t b = 0; b < SimilarityHistogram::kBins; ++b)
    out << detail::format_double(SimilarityHistogram::bin_low(b)) << ','
        << detail::format_double(SimilarityHistogram::bin_high(b)) << ',' << hist.within_counts[b] << ','
        << hist.across_counts[b] << '\n';
}

}  // namespace coverscale
