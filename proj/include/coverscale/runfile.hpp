#pragma once

// Saved runs: one hit per line, "query_id candidate_id rank score method",
// whitespace-delimited, queries in ascending id order. Scores are written
// in shortest round-trip form so a reloaded run is bit-identical.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "coverscale/detail/format.hpp"
#include "coverscale/error.hpp"
#include "coverscale/eval.hpp"
#include "coverscale/index.hpp"

namespace coverscale {

struct Run {
  std::string method;
  RunResults results;
};

inline void write_run(const RunResults& results, std::string_view method, std::ostream& out) {
  if (method.empty() || method.find_first_of(" \t\r\n") != std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "method name must be a single token");
  for (const auto& [query, list] : results)
    for (const auto& hit : list.hits)
      out << query << ' ' << hit.track_id << ' ' << hit.rank << ' ' << detail::format_double(hit.score) << ' '
          << method << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing run");
}

inline void write_run(const RunResults& results, std::string_view method, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_run(results, method, out);
}

inline Run read_run(std::istream& in) {
  Run run;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string query, candidate, rank_text, score_text, method, extra;
    if (!(fields >> query)) continue;
    if (!(fields >> candidate >> rank_text >> score_text >> method) || (fields >> extra))
      throw Error(ErrorCode::Malformed, "expected 'query_id candidate_id rank score method'", line_no);
    std::size_t rank = 0;
    double score = 0.0;
    const auto r = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), rank);
    const auto s = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (r.ec != std::errc{} || r.ptr != rank_text.data() + rank_text.size() || rank < 1 ||
        s.ec != std::errc{} || s.ptr != score_text.data() + score_text.size())
      throw Error(ErrorCode::Malformed, "bad rank or score", line_no);
    if (run.method.empty()) run.method = method;
    if (method != run.method)
      throw Error(ErrorCode::Malformed, "run mixes methods '" + run.method + "' and '" + method + "'", line_no);
    auto& list = run.results[query];
    list.query_id = query;
    if (rank != list.hits.size() + 1)
      throw Error(ErrorCode::Malformed, "ranks of " + query + " are not consecutive from 1", line_no);
    list.hits.push_back({candidate, score, rank});
    list.k_requested = list.hits.size();
  }
  return run;
}

inline Run read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_run(in);
}

}  // namespace coverscale
