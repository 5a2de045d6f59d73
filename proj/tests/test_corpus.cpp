#include <sstream>

#include "gtest/gtest.h"

#include "coverscale/corpus.hpp"
#include "test_support.hpp"

using namespace coverscale;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TrackDocument doc(std::string id, std::string title) {
  TrackDocument d;
  d.track_id = std::move(id);
  d.title = std::move(title);
  return d;
}

}  // namespace

// -- tracks.jsonl ----------------------------------------------------------

TEST(TracksJsonl, LoadsValidLines) {
  std::istringstream in(
      R"({"track_id":"T1","title":"Help!","lyrics":{"help":3,"me":1},"clique_id":"c1"})"
      "\n"
      R"({"track_id":"T2","title":"Yesterday","is_duplicate":true,"language":"en"})"
      "\n");
  const auto tracks = load_tracks_jsonl(in);
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks[0].track_id, "T1");
  EXPECT_EQ(tracks[0].lyrics, (Lyrics{{"help", 3}, {"me", 1}}));
  EXPECT_EQ(tracks[0].clique_id, "c1");
  EXPECT_FALSE(tracks[0].is_duplicate);
  EXPECT_TRUE(tracks[1].lyrics.empty());
  EXPECT_TRUE(tracks[1].is_duplicate);
  EXPECT_EQ(tracks[1].language, "en");
  EXPECT_EQ(tracks.find("T2"), &tracks[1]);
  EXPECT_EQ(tracks.find("T3"), nullptr);
}

TEST(TracksJsonl, EmptyFileGivesEmptyCollection) {
  std::istringstream in("");
  EXPECT_TRUE(load_tracks_jsonl(in).empty());
  std::istringstream blank("\n  \n");
  EXPECT_TRUE(load_tracks_jsonl(blank).empty());
}

TEST(TracksJsonl, MissingTrackIdReportsLine) {
  std::istringstream in("{\"track_id\":\"T1\",\"title\":\"a\"}\n{\"title\":\"x\"}\n");
  try {
    load_tracks_jsonl(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(TracksJsonl, Errors) {
  const auto load = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      load_tracks_jsonl(in);
    };
  };
  EXPECT_EQ(code_of(load("{\"track_id\":\"T1\"}\n")), ErrorCode::MissingField);
  EXPECT_EQ(code_of(load("{\"track_id\":\"\",\"title\":\"a\"}\n")), ErrorCode::MissingField);
  EXPECT_EQ(code_of(load("{\"track_id\":\"T1\",\"title\":\"a\"}\n{\"track_id\":\"T1\",\"title\":\"b\"}\n")),
            ErrorCode::DuplicateId);
  EXPECT_EQ(code_of(load("{not json\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("[1,2]\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("{\"track_id\":5,\"title\":\"a\"}\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("{\"track_id\":\"T\",\"title\":\"a\",\"lyrics\":{\"x\":0}}\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("{\"track_id\":\"T\",\"title\":\"a\",\"lyrics\":{\"x\":1.5}}\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("{\"track_id\":\"T\",\"title\":\"a\",\"is_duplicate\":\"yes\"}\n")),
            ErrorCode::Malformed);
  EXPECT_EQ(code_of(load("{\"track_id\":\"T\",\"title\":\"ab\",\"pre_title\":\"abc\"}\n")),
            ErrorCode::InvalidArgument);
}

TEST(TracksJsonl, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { load_tracks_jsonl(std::string("/nonexistent/tracks.jsonl")); }), ErrorCode::IoError);
}

TEST(TrackCollection, ConstructorEnforcesInvariants) {
  EXPECT_EQ(code_of([] { TrackCollection({doc("A", "x"), doc("A", "y")}); }), ErrorCode::DuplicateId);
  EXPECT_EQ(code_of([] { TrackCollection({doc("", "x")}); }), ErrorCode::MissingField);
  auto bad = doc("A", "x");
  bad.lyrics["w"] = 0;
  EXPECT_EQ(code_of([&] { TrackCollection({bad}); }), ErrorCode::BadCount);
}

TEST(TracksJsonl, RoundTrip) {
  const auto corpus = synth_corpus({.seed = 3, .n_cliques = 30, .clique_size_range = {2, 6}});
  auto tracks = fill_pre_titles(corpus.tracks, default_codebook());
  tracks = apply_duplicate_flags(tracks, {tracks[0].track_id, tracks[7].track_id});
  tracks = tracks.transformed([](TrackDocument& d) {
    if (d.track_id.back() == '3') d.language = "fr";
  });
  tracks = TrackCollection([&] {
    auto docs = tracks.documents();
    docs.push_back(doc("TUNI", "Ça plaît \"quoted\" \\ back"));
    return docs;
  }());

  std::ostringstream out;
  write_tracks_jsonl(tracks, out);
  std::istringstream in(out.str());
  const auto reloaded = load_tracks_jsonl(in);
  EXPECT_EQ(reloaded, tracks);

  std::ostringstream again;
  write_tracks_jsonl(reloaded, again);
  EXPECT_EQ(again.str(), out.str());
}

// -- SHS ---------------------------------------------------------------------

TEST(ShsCliques, Fixture) {
  std::istringstream in("%1,A\nT1\nT2\nT3\n%2,B\nT4\nT5");
  const auto cliques = parse_shs_cliques(in);
  const std::map<std::string, CliqueMap::Members> expected = {{"1", {"T1", "T2", "T3"}}, {"2", {"T4", "T5"}}};
  EXPECT_EQ(cliques.cliques(), expected);
  EXPECT_EQ(*cliques.clique_of("T4"), "2");
  EXPECT_EQ(cliques.clique_of("T9"), nullptr);
  EXPECT_EQ(cliques.track_count(), 5u);
}

TEST(ShsCliques, PublishedLayoutWithExtraFields) {
  std::istringstream in(
      "# comment\n"
      "%-1, The Song, 12345\r\n"
      "TRAAAAA128F1234567<SEP>AR1<SEP>1234\r\n"
      "TRBBBBB,ARX,9\n"
      "TRCCCCC\tARY\n"
      "\n"
      "%42,Other\n"
      "TRDDDDD\n"
      "TREEEEE\n");
  const auto cliques = parse_shs_cliques(in);
  ASSERT_NE(cliques.members("-1"), nullptr);
  EXPECT_EQ(*cliques.members("-1"), (CliqueMap::Members{"TRAAAAA128F1234567", "TRBBBBB", "TRCCCCC"}));
  EXPECT_EQ(*cliques.members("42"), (CliqueMap::Members{"TRDDDDD", "TREEEEE"}));
}

TEST(ShsCliques, SingletonsDroppedWithWarning) {
  std::istringstream in("%1,A\nT1\nT2\n%2,B\nT3\n%3,C\n");
  std::vector<std::string> warnings;
  const auto cliques = parse_shs_cliques(in, &warnings);
  EXPECT_EQ(cliques.size(), 1u);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_EQ(cliques.clique_of("T3"), nullptr);
}

TEST(ShsCliques, Errors) {
  const auto parse = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      parse_shs_cliques(in);
    };
  };
  EXPECT_EQ(code_of(parse("# only\n# comments\n")), ErrorCode::EmptyFile);
  EXPECT_EQ(code_of(parse("")), ErrorCode::EmptyFile);
  EXPECT_EQ(code_of(parse("T1\n%1,A\nT2\n")), ErrorCode::OrphanTrackLine);
  EXPECT_EQ(code_of(parse("%1,A\nT1\nT2\n%2,B\nT2\nT3\n")), ErrorCode::Malformed);
}

TEST(ShsCliques, PartitionProperty) {
  Rng rng(11, "test.shs");
  for (int iter = 0; iter < 200; ++iter) {
    std::ostringstream text;
    std::set<std::string> all;
    std::size_t next = 0;
    const auto n_cliques = rng.between(1, 12);
    for (std::uint64_t c = 0; c < n_cliques; ++c) {
      text << '%' << c << ",name " << c << '\n';
      const auto size = rng.between(1, 5);
      for (std::uint64_t m = 0; m < size; ++m) {
        const auto id = "T" + std::to_string(next++);
        text << id << (rng.bernoulli(0.5) ? ",extra" : "") << '\n';
      }
    }
    std::istringstream in(text.str());
    const auto cliques = parse_shs_cliques(in);
    std::size_t total = 0;
    std::set<std::string> distinct;
    for (const auto& [id, members] : cliques.cliques()) {
      EXPECT_GE(members.size(), 2u);
      total += members.size();
      distinct.insert(members.begin(), members.end());
    }
    EXPECT_EQ(total, distinct.size());
    EXPECT_EQ(total, cliques.track_count());

    // Write/parse round trip.
    std::ostringstream out;
    write_shs_cliques(cliques, out);
    if (!cliques.empty()) {
      std::istringstream back(out.str());
      EXPECT_EQ(parse_shs_cliques(back), cliques);
    }
  }
}

TEST(Cliques, FromTracksAndAssign) {
  auto a = doc("A", "x");
  a.clique_id = "c";
  auto b = doc("B", "y");
  b.clique_id = "c";
  auto c = doc("C", "z");
  c.clique_id = "lonely";
  const TrackCollection tracks({a, b, c, doc("D", "w")});
  std::vector<std::string> warnings;
  const auto cliques = cliques_from_tracks(tracks, &warnings);
  EXPECT_EQ(cliques.size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
  const auto assigned = assign_cliques(tracks, cliques);
  EXPECT_EQ(assigned[0].clique_id, "c");
  EXPECT_EQ(assigned[2].clique_id, std::nullopt);
  EXPECT_EQ(assigned[3].clique_id, std::nullopt);
}

// -- MXM ---------------------------------------------------------------------

TEST(MxmBow, Fixture) {
  std::istringstream in("# header\n%i,the,you\nTRA,9,1:3,3:1\n");
  const auto bow = parse_mxm_bow(in);
  ASSERT_EQ(bow.size(), 1u);
  EXPECT_EQ(bow.at("TRA"), (Lyrics{{"i", 3}, {"you", 1}}));
}

TEST(MxmBow, CommentOnlyBodyIsEmpty) {
  std::istringstream in("%i,the,you\n# nothing\n#\n");
  EXPECT_TRUE(parse_mxm_bow(in).empty());
}

TEST(MxmBow, RepeatedVocabularyAndPairs) {
  std::istringstream in("%a,b\nT1,1,1:1,1:2\n%a,b\nT2,2,2:4\n");
  const auto bow = parse_mxm_bow(in);
  EXPECT_EQ(bow.at("T1"), (Lyrics{{"a", 3}}));
  EXPECT_EQ(bow.at("T2"), (Lyrics{{"b", 4}}));
}

TEST(MxmBow, Errors) {
  const auto parse = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      parse_mxm_bow(in);
    };
  };
  EXPECT_EQ(code_of(parse("%i,the,you\nTRA,9,0:2\n")), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of(parse("%i,the,you\nTRA,9,4:2\n")), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of(parse("%i,the,you\nTRA,9,1:0\n")), ErrorCode::BadCount);
  EXPECT_EQ(code_of(parse("TRA,9,1:2\n")), ErrorCode::NoVocabulary);
  EXPECT_EQ(code_of(parse("# nothing\n")), ErrorCode::NoVocabulary);
  EXPECT_EQ(code_of(parse("%i,the\nTRA,9,1-2\n")), ErrorCode::Malformed);
  EXPECT_EQ(code_of(parse("%i,the\n%you,me\n")), ErrorCode::Malformed);
}

TEST(MxmBow, AttachLyrics) {
  const TrackCollection tracks({doc("TRA", "a"), doc("TRB", "b")});
  std::size_t attached = 0;
  const auto out = attach_lyrics(tracks, {{"TRA", {{"x", 2}}}, {"TRZ", {{"y", 1}}}}, &attached);
  EXPECT_EQ(attached, 1u);
  EXPECT_EQ(out[0].lyrics, (Lyrics{{"x", 2}}));
  EXPECT_TRUE(out[1].lyrics.empty());
}

// -- duplicates ---------------------------------------------------------------

TEST(Duplicates, ApplyFlags) {
  const TrackCollection tracks({doc("T1", "a"), doc("T2", "b"), doc("T3", "c")});
  std::size_t unknown = 99;
  auto flagged = apply_duplicate_flags(tracks, {"T2"}, &unknown);
  EXPECT_EQ(unknown, 0u);
  EXPECT_FALSE(flagged[0].is_duplicate);
  EXPECT_TRUE(flagged[1].is_duplicate);
  EXPECT_FALSE(flagged[2].is_duplicate);
  EXPECT_EQ(flagged[1].title, "b");

  EXPECT_EQ(apply_duplicate_flags(tracks, {}, &unknown), tracks);
  EXPECT_EQ(unknown, 0u);

  EXPECT_EQ(apply_duplicate_flags(tracks, {"T9"}, &unknown), tracks);
  EXPECT_EQ(unknown, 1u);
}

TEST(Duplicates, IdListFile) {
  testing_support::TempDir dir;
  const auto path = dir.write("dups.txt", "# msd duplicates\nT1\r\n\n  T2  \n");
  EXPECT_EQ(load_id_list(path), (std::set<std::string>{"T1", "T2"}));
}

// -- synthetic corpora ----------------------------------------------------------

TEST(Synth, SmallCorpusIsDeterministic) {
  const SynthParams p{.seed = 42, .n_cliques = 2, .clique_size_range = {2, 2}};
  const auto a = synth_corpus(p);
  const auto b = synth_corpus(p);
  EXPECT_EQ(a.tracks.size(), 4u);
  EXPECT_EQ(a.cliques.size(), 2u);
  EXPECT_EQ(a.tracks, b.tracks);
  EXPECT_EQ(a.cliques, b.cliques);

  std::ostringstream ja, jb;
  write_tracks_jsonl(a.tracks, ja);
  write_tracks_jsonl(b.tracks, jb);
  EXPECT_EQ(ja.str(), jb.str());
}

TEST(Synth, DifferentSeedsDiffer) {
  const auto a = synth_corpus({.seed = 1, .n_cliques = 20});
  const auto b = synth_corpus({.seed = 2, .n_cliques = 20});
  EXPECT_NE(a.tracks, b.tracks);
}

TEST(Synth, NoParentheticalsAtRateZero) {
  const auto c = synth_corpus({.seed = 5, .n_cliques = 50, .clique_size_range = {2, 6}, .parenthetical_rate = 0.0});
  for (const auto& d : c.tracks) EXPECT_EQ(d.title.find('('), std::string::npos) << d.title;
}

TEST(Synth, FullOverlapGivesIdenticalTermSets) {
  const auto c = synth_corpus({.seed = 9, .n_cliques = 30, .clique_size_range = {2, 5}, .lyric_overlap = 1.0});
  for (const auto& [id, members] : c.cliques.cliques()) {
    std::set<std::string> first;
    for (const auto& [t, n] : c.tracks.find(*members.begin())->lyrics) first.insert(t);
    for (const auto& m : members) {
      std::set<std::string> terms;
      for (const auto& [t, n] : c.tracks.find(m)->lyrics) terms.insert(t);
      EXPECT_EQ(terms, first);
    }
  }
}

TEST(Synth, StructuralProperties) {
  const SynthParams p{.seed = 42, .n_cliques = 200, .clique_size_range = {5, 5}};
  const auto c = synth_corpus(p);
  EXPECT_EQ(c.tracks.size(), 1000u);
  EXPECT_EQ(c.cliques.size(), 200u);

  const auto& cb = default_codebook();
  std::set<std::string> base_titles;
  std::size_t suffixed = 0;
  std::size_t non_first = 0;
  for (const auto& [id, members] : c.cliques.cliques()) {
    std::set<std::string> bases;
    for (const auto& m : members) {
      const auto* d = c.tracks.find(m);
      ASSERT_NE(d, nullptr);
      EXPECT_EQ(d->clique_id, id);
      EXPECT_EQ(d->lyrics.size(), 24u);
      const auto base = preprocess_title(d->title, cb);
      bases.insert(base);
      if (base != d->title) ++suffixed;
    }
    EXPECT_EQ(bases.size(), 1u) << "clique " << id;
    EXPECT_TRUE(base_titles.insert(*bases.begin()).second) << "base title reused: " << *bases.begin();
    non_first += members.size() - 1;
  }
  // Roughly parenthetical_rate of the non-first members carry a suffix.
  const double rate = static_cast<double>(suffixed) / static_cast<double>(non_first);
  EXPECT_NEAR(rate, 0.4, 0.08);
}

TEST(Synth, Errors) {
  EXPECT_EQ(code_of([] { synth_corpus({.n_cliques = 15, .vocab_size = 2}); }), ErrorCode::InfeasibleParams);
  EXPECT_EQ(code_of([] { synth_corpus({.clique_size_range = {1, 3}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { synth_corpus({.clique_size_range = {4, 3}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { synth_corpus({.parenthetical_rate = 1.5}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { synth_corpus({.lyric_overlap = -0.1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { synth_corpus({.n_cliques = 0}); }), ErrorCode::InvalidArgument);
  // Smallest feasible vocabulary: 2 + 4 + 8 >= 14 titles.
  EXPECT_NO_THROW(synth_corpus({.n_cliques = 14, .clique_size_range = {2, 2}, .vocab_size = 2}));
}
