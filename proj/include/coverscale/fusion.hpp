#pragma once

/** \file fusion.hpp
 *  \brief Combining result lists across modalities.
 *
 * The text pipeline is
 *   fused       = merge_promote(title, relative_filter(lyrics, relative_h))
 *   audio_fused = audio_rerank(fused, distances, audio_h)
 * Both merge steps only reorder their primary list.
 */

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "coverscale/audiodist.hpp"
#include "coverscale/error.hpp"
#include "coverscale/index.hpp"

namespace coverscale {

struct FusionParams {
  double relative_h = 0.5;
  double audio_h = 0.1;

  void validate() const {
    if (!(relative_h >= 0.0 && relative_h <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "relative_h must lie in [0,1]");
    if (!(audio_h >= 0.0)) throw Error(ErrorCode::InvalidArgument, "audio_h must be >= 0");
  }
};

/// Keeps hits whose score gap to rank 1, relative to the rank-1 score, is at
/// most h. A zero top score keeps every hit.
inline ResultList relative_filter(const ResultList& results, double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw Error(ErrorCode::InvalidArgument, "h must lie in [0,1]");
  ResultList out;
  out.query_id = results.query_id;
  out.k_requested = results.k_requested;
  if (results.hits.empty()) return out;
  const double top = results.hits.front().score;
  for (const auto& hit : results.hits) {
    const double gap = top > 0.0 ? (top - hit.score) / top : 0.0;
    if (gap <= h) out.hits.push_back(hit);
  }
  renumber(out);
  return out;
}

/// Moves primary hits that also appear in `secondary` to the front, keeping
/// primary order within both blocks and primary scores throughout.
inline ResultList merge_promote(const ResultList& primary, const ResultList& secondary) {
  if (primary.query_id != secondary.query_id)
    throw Error(ErrorCode::QueryMismatch,
                "merging results of '" + primary.query_id + "' with '" + secondary.query_id + "'");
  std::unordered_set<std::string> common;
  for (const auto& hit : secondary.hits) common.insert(hit.track_id);

  ResultList out;
  out.query_id = primary.query_id;
  out.k_requested = primary.k_requested;
  out.hits.reserve(primary.hits.size());
  std::vector<ScoredHit> rest;
  for (const auto& hit : primary.hits) (common.count(hit.track_id) ? out.hits : rest).push_back(hit);
  out.hits.insert(out.hits.end(), rest.begin(), rest.end());
  renumber(out);
  return out;
}

/// Moves hits with a known distance below h to the front, nearest first
/// (ties by track id); the others keep their order. Unknown distances never
/// promote.
inline ResultList audio_rerank(const ResultList& results, const DistanceProvider& distances, double h) {
  if (!(h >= 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be >= 0");
  struct Promoted {
    double distance;
    const ScoredHit* hit;
  };
  std::vector<Promoted> promoted;
  std::vector<const ScoredHit*> rest;
  for (const auto& hit : results.hits) {
    const auto d = distances.lookup(results.query_id, hit.track_id);
    if (d && *d < 0.0)
      throw Error(ErrorCode::NegativeDistance, "negative distance for " + hit.track_id);
    if (d && *d < h)
      promoted.push_back({*d, &hit});
    else
      rest.push_back(&hit);
  }
  std::sort(promoted.begin(), promoted.end(), [](const Promoted& a, const Promoted& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.hit->track_id < b.hit->track_id;
  });

  ResultList out;
  out.query_id = results.query_id;
  out.k_requested = results.k_requested;
  out.hits.reserve(results.hits.size());
  for (const auto& p : promoted) out.hits.push_back(*p.hit);
  for (const auto* hit : rest) out.hits.push_back(*hit);
  renumber(out);
  return out;
}

}  // namespace coverscale
