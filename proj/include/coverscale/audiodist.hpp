#pragma once

/** \file audiodist.hpp
 *  \brief Sparse externally computed audio distances and candidate-pair
 *  export.
 *
 * distances.csv: header "query_id,candidate_id,distance", one pair per row.
 * pairs.csv:     header "query_id,candidate_id".
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coverscale/corpus.hpp"
#include "coverscale/error.hpp"
#include "coverscale/index.hpp"

namespace coverscale {

inline constexpr std::string_view kDistancesHeader = "query_id,candidate_id,distance";
inline constexpr std::string_view kPairsHeader = "query_id,candidate_id";

/// (query, candidate) -> distance >= 0. Absent pairs are unknown.
class DistanceProvider {
 public:
  /// Stores a distance, replacing an earlier one. Returns false when the
  /// pair was already present.
  bool set(const std::string& query_id, const std::string& candidate_id, double distance) {
    if (!(distance >= 0.0))
      throw Error(ErrorCode::NegativeDistance,
                  "distance for (" + query_id + ", " + candidate_id + ") must be >= 0");
    auto& row = table_[query_id];
    const auto [it, inserted] = row.insert_or_assign(candidate_id, distance);
    if (inserted) ++size_;
    return inserted;
  }

  std::optional<double> lookup(std::string_view query_id, std::string_view candidate_id) const {
    const auto row = table_.find(std::string(query_id));
    if (row == table_.end()) return std::nullopt;
    const auto it = row->second.find(std::string(candidate_id));
    if (it == row->second.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return size_; }

  /// All stored pairs in ascending (query, candidate) order.
  std::vector<std::pair<std::string, std::string>> pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(size_);
    for (const auto& [q, row] : table_)
      for (const auto& [c, d] : row) out.emplace_back(q, c);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, double>> table_;
  std::size_t size_ = 0;
};

inline DistanceProvider load_distances_csv(std::istream& in, std::size_t* overwritten = nullptr) {
  DistanceProvider provider;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t replaced = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_cr(raw));
    if (!header) {
      if (line != kDistancesHeader)
        throw Error(ErrorCode::BadHeader, "expected header '" + std::string(kDistancesHeader) + "'", line_no);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3) throw Error(ErrorCode::Malformed, "expected 3 fields", line_no);
    const auto query = detail::trim(fields[0]);
    const auto candidate = detail::trim(fields[1]);
    const auto text = detail::trim(fields[2]);
    double distance = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), distance);
    if (query.empty() || candidate.empty() || text.empty() || ec != std::errc{} ||
        ptr != text.data() + text.size() || std::isnan(distance))
      throw Error(ErrorCode::Malformed, "bad row '" + std::string(line) + "'", line_no);
    if (distance < 0.0)
      throw Error(ErrorCode::NegativeDistance, "negative distance " + std::string(text), line_no);
    if (!provider.set(std::string(query), std::string(candidate), distance)) ++replaced;
  }
  if (!header) throw Error(ErrorCode::BadHeader, "missing header");
  if (overwritten) *overwritten = replaced;
  return provider;
}

inline DistanceProvider load_distances_csv(const std::string& path, std::size_t* overwritten = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_distances_csv(in, overwritten);
}

/// Writes the top-min(k, |hits|) candidates of every query, queries in
/// ascending id order. Returns the number of rows written.
inline std::size_t export_candidate_pairs(const std::map<std::string, ResultList>& results, std::size_t k,
                                          std::ostream& out) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
  out << kPairsHeader << '\n';
  std::size_t rows = 0;
  for (const auto& [query, list] : results) {
    const auto n = std::min(k, list.hits.size());
    for (std::size_t i = 0; i < n; ++i) out << query << ',' << list.hits[i].track_id << '\n';
    rows += n;
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing candidate pairs");
  return rows;
}

inline std::size_t export_candidate_pairs(const std::map<std::string, ResultList>& results, std::size_t k,
                                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return export_candidate_pairs(results, k, out);
}

}  // namespace coverscale
