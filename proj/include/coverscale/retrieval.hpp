#pragma once

/** \file retrieval.hpp
 *  \brief Query construction from a track: title, preprocessed title and
 *  more-like-this lyrics queries.
 */

#include <algorithm>
#include <string>
#include <vector>

#include "coverscale/corpus.hpp"
#include "coverscale/error.hpp"
#include "coverscale/index.hpp"
#include "coverscale/textnorm.hpp"

namespace coverscale {

/// More-like-this term selection knobs.
struct MltParams {
  std::size_t max_query_terms = 12;
  std::uint32_t min_term_freq = 1;

  void validate() const {
    if (max_query_terms < 1) throw Error(ErrorCode::InvalidArgument, "max_query_terms must be >= 1");
    if (min_term_freq < 1) throw Error(ErrorCode::InvalidArgument, "min_term_freq must be >= 1");
  }
};

namespace detail {

inline void require_field(const Index& index, Field expected) {
  if (index.field() != expected)
    throw Error(ErrorCode::InvalidArgument, "index is over '" + std::string(to_string(index.field())) +
                                                "', query needs '" + std::string(to_string(expected)) + "'");
}

}  // namespace detail

/// Searches the track's (pre-processed) title, excluding the track itself.
/// When `preprocessed` is set and the track has no pre_title yet, the title
/// is preprocessed with `codebook` on the fly.
inline ResultList title_query(const Index& index, const TrackDocument& track, std::size_t k,
                              bool preprocessed, const Codebook& codebook = default_codebook()) {
  detail::require_field(index, preprocessed ? Field::PreTitle : Field::Title);
  const std::string text = !preprocessed       ? track.title
                           : track.pre_title ? *track.pre_title
                                             : preprocess_title(track.title, codebook);
  const auto terms = tokenize(text);
  if (terms.empty()) throw Error(ErrorCode::EmptyQuery, "title of " + track.track_id + " has no terms");
  auto result = search(index, terms, k, track.track_id);
  result.query_id = track.track_id;
  return result;
}

struct WeightedTerm {
  Term term;
  double weight;
};

/// Lyric terms ranked by count * idf, highest first, ties by term text.
inline std::vector<WeightedTerm> mlt_weighted_terms(const TrackDocument& track, const Index& index,
                                                    const MltParams& params = {}) {
  params.validate();
  detail::require_field(index, Field::Lyrics);
  if (track.lyrics.empty()) throw Error(ErrorCode::NoLyrics, track.track_id + " has no lyrics");
  std::vector<WeightedTerm> candidates;
  for (const auto& [term, count] : track.lyrics) {
    if (count < params.min_term_freq) continue;
    const auto df = index.df(term);
    if (df < 1) continue;
    candidates.push_back({term, static_cast<double>(count) * idf(df, index.n_docs())});
  }
  std::sort(candidates.begin(), candidates.end(), [](const WeightedTerm& a, const WeightedTerm& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
  if (candidates.size() > params.max_query_terms) candidates.resize(params.max_query_terms);
  return candidates;
}

inline std::vector<Term> mlt_select_terms(const TrackDocument& track, const Index& index,
                                          const MltParams& params = {}) {
  std::vector<Term> out;
  for (auto& wt : mlt_weighted_terms(track, index, params)) out.push_back(std::move(wt.term));
  return out;
}

/// Disjunctive query over the selected lyric terms.
inline ResultList lyrics_query(const Index& index, const TrackDocument& track, std::size_t k,
                               const MltParams& params = {}) {
  const auto terms = mlt_select_terms(track, index, params);
  auto result = search(index, terms, k, track.track_id);
  result.query_id = track.track_id;
  return result;
}

}  // namespace coverscale
