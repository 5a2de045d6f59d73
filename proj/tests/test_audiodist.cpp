#include <sstream>

#include "gtest/gtest.h"

#include "coverscale/audiodist.hpp"
#include "coverscale/detail/format.hpp"
#include "coverscale/rng.hpp"
#include "test_support.hpp"

using namespace coverscale;

namespace {

ErrorCode load_error(const std::string& text, std::size_t* line = nullptr) {
  std::istringstream in(text);
  try {
    load_distances_csv(in);
  } catch (const Error& e) {
    if (line) *line = e.line();
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

ResultList list_of(const std::string& query, std::size_t n) {
  ResultList r;
  r.query_id = query;
  for (std::size_t i = 0; i < n; ++i) r.hits.push_back({query + "_c" + std::to_string(i), 1.0, i + 1});
  return r;
}

}  // namespace

TEST(Distances, LoadsRows) {
  std::istringstream in("query_id,candidate_id,distance\nq1,c1,0.05\nq1,c2,0.2\r\nq2,c1,0\n");
  const auto p = load_distances_csv(in);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.lookup("q1", "c1"), 0.05);
  EXPECT_EQ(p.lookup("q1", "c2"), 0.2);
  EXPECT_EQ(p.lookup("q2", "c1"), 0.0);
  EXPECT_EQ(p.lookup("q2", "c2"), std::nullopt);
  EXPECT_EQ(p.lookup("q9", "c1"), std::nullopt);
  // Lookups are directional.
  EXPECT_EQ(p.lookup("c1", "q1"), std::nullopt);
}

TEST(Distances, LaterRowsOverwrite) {
  std::istringstream in("query_id,candidate_id,distance\nq,c,0.5\nq,c,0.25\nq,d,1\n");
  std::size_t overwritten = 0;
  const auto p = load_distances_csv(in, &overwritten);
  EXPECT_EQ(overwritten, 1u);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.lookup("q", "c"), 0.25);
}

TEST(Distances, Errors) {
  std::size_t line = 0;
  EXPECT_EQ(load_error("query_id,candidate_id,distance\nq,c,0.1\nq,c,-0.5\n", &line), ErrorCode::NegativeDistance);
  EXPECT_EQ(line, 3u);
  EXPECT_EQ(load_error("q,c,distance\nq,c,0.1\n"), ErrorCode::BadHeader);
  EXPECT_EQ(load_error(""), ErrorCode::BadHeader);
  EXPECT_EQ(load_error("query_id,candidate_id,distance\nq,c\n"), ErrorCode::Malformed);
  EXPECT_EQ(load_error("query_id,candidate_id,distance\nq,c,near\n"), ErrorCode::Malformed);
  EXPECT_EQ(load_error("query_id,candidate_id,distance\nq,c,nan\n"), ErrorCode::Malformed);
  EXPECT_EQ(load_error("query_id,candidate_id,distance\n,c,0.1\n"), ErrorCode::Malformed);
  DistanceProvider p;
  EXPECT_THROW(p.set("q", "c", -1.0), Error);
}

TEST(CandidatePairs, RowCounts) {
  std::map<std::string, ResultList> results = {{"q1", list_of("q1", 150)}, {"q2", list_of("q2", 40)}};
  std::ostringstream out;
  EXPECT_EQ(export_candidate_pairs(results, 100, out), 140u);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "query_id,candidate_id");
  std::map<std::string, std::size_t> per_query;
  std::string last_query;
  while (std::getline(lines, line)) {
    const auto q = line.substr(0, line.find(','));
    EXPECT_GE(q, last_query);
    last_query = q;
    ++per_query[q];
  }
  EXPECT_EQ(per_query["q1"], 100u);
  EXPECT_EQ(per_query["q2"], 40u);
}

TEST(CandidatePairs, EmptyAndInvalidK) {
  std::ostringstream out;
  EXPECT_EQ(export_candidate_pairs({}, 100, out), 0u);
  EXPECT_EQ(out.str(), "query_id,candidate_id\n");
  try {
    export_candidate_pairs({}, 0, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidK);
  }
  EXPECT_THROW(export_candidate_pairs({}, 10, std::string("/nonexistent/dir/pairs.csv")), Error);
}

TEST(CandidatePairs, ProviderRoundTrip) {
  Rng rng(8, "test.audiodist");
  DistanceProvider p;
  for (int i = 0; i < 300; ++i)
    p.set("q" + std::to_string(rng.below(20)), "c" + std::to_string(rng.below(50)),
          static_cast<double>(rng.below(1000)) / 997.0);

  // Provider -> CSV -> provider.
  std::ostringstream csv;
  csv << kDistancesHeader << '\n';
  for (const auto& [q, c] : p.pairs()) csv << q << ',' << c << ',' << detail::format_double(*p.lookup(q, c)) << '\n';
  std::istringstream in(csv.str());
  const auto loaded = load_distances_csv(in);
  EXPECT_EQ(loaded.pairs(), p.pairs());
  for (const auto& [q, c] : p.pairs()) EXPECT_EQ(loaded.lookup(q, c), p.lookup(q, c));

  // Its pairs exported as result lists give back the same pair set.
  std::map<std::string, ResultList> results;
  for (const auto& [q, c] : loaded.pairs()) {
    auto& r = results[q];
    r.query_id = q;
    r.hits.push_back({c, 0.0, r.hits.size() + 1});
  }
  std::ostringstream out;
  const auto rows = export_candidate_pairs(results, 1000, out);
  EXPECT_EQ(rows, p.size());
  std::istringstream back(out.str());
  std::string line;
  std::getline(back, line);
  std::vector<std::pair<std::string, std::string>> exported;
  while (std::getline(back, line)) {
    const auto comma = line.find(',');
    exported.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  EXPECT_EQ(exported, p.pairs());
}

TEST(Distances, FileLoad) {
  testing_support::TempDir dir;
  const auto path = dir.write("d.csv", "query_id,candidate_id,distance\nq,c,0.01\n");
  EXPECT_EQ(load_distances_csv(path).lookup("q", "c"), 0.01);
  EXPECT_THROW(load_distances_csv(dir.file("missing.csv")), Error);
}
