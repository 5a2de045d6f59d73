#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "coverscale/rng.hpp"
#include "coverscale/textnorm.hpp"
#include "test_support.hpp"

using namespace coverscale;

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("All Along The Watchtower"), (std::vector<Term>{"all", "along", "the", "watchtower"}));
  EXPECT_EQ(tokenize("Be (1994 Digital Remastered Version)"),
            (std::vector<Term>{"be", "1994", "digital", "remastered", "version"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("!!! ... ---").empty());
}

TEST(Tokenize, UnicodeLettersAndDigits) {
  // Diacritics survive, only case is folded.
  EXPECT_EQ(tokenize("Café Déjà-Vu"), (std::vector<Term>{"café", "déjà", "vu"}));
  EXPECT_EQ(tokenize("ΣΊΣΥΦΟΣ"), (std::vector<Term>{"σίσυφοσ"}));
  // Simple folding leaves sharp s alone.
  EXPECT_EQ(tokenize("STRAßE"), (std::vector<Term>{"straße"}));
  // Arabic-Indic digits are Nd.
  EXPECT_EQ(tokenize("track ١٢٣"), (std::vector<Term>{"track", "١٢٣"}));
  EXPECT_EQ(tokenize("東京 Night"), (std::vector<Term>{"東京", "night"}));
}

TEST(Tokenize, InvalidUtf8SeparatesTerms) {
  const std::string bad = std::string("ab") + '\xff' + "cd";
  EXPECT_EQ(tokenize(bad), (std::vector<Term>{"ab", "cd"}));
}

TEST(Stem, Examples) {
  // Full Porter removes -er in step 4 after step 1b removed -ed.
  EXPECT_EQ(stem("remastered"), "remast");
  EXPECT_EQ(stem("remastered"), stem("remaster"));
  EXPECT_EQ(stem("live"), "live");
  EXPECT_EQ(stem("1994"), "1994");
  EXPECT_EQ(stem("café"), "café");
  EXPECT_EQ(stem(""), "");
}

TEST(Stem, MatchesReferenceVocabulary) {
  std::ifstream in(COVERSCALE_TEST_DATA "/porter_oracle.txt");
  ASSERT_TRUE(in) << "missing porter oracle data";
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word, expected;
    fields >> word >> expected;
    EXPECT_EQ(stem(word), expected) << word;
    ++checked;
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Codebook, DefaultHas34Keywords) {
  const auto& cb = default_codebook();
  EXPECT_EQ(cb.size(), 34u);
  EXPECT_EQ(default_codebook_keywords().size(), 34u);
  for (const auto& w : cb.keywords()) {
    EXPECT_FALSE(w.empty());
    EXPECT_TRUE(cb.matches_stem(stem(w))) << w;
  }
  // stemmed = { stem(w) : w in keywords }
  std::set<std::string> expected;
  for (const auto& w : cb.keywords()) expected.insert(stem(w));
  EXPECT_EQ(cb.stemmed(), expected);
}

TEST(Codebook, LoadLowercasesAndSkipsComments) {
  testing_support::TempDir dir;
  const auto path = dir.write("codebook.txt", "# descriptors\nLIVE\n\n  Remix \n");
  const auto cb = load_codebook(path);
  EXPECT_EQ(cb.keywords(), (std::set<std::string>{"live", "remix"}));
}

TEST(Codebook, RejectsMultiTermEntries) {
  testing_support::TempDir dir;
  const auto path = dir.write("codebook.txt", "live\nradio edit\n");
  try {
    load_codebook(path);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Malformed);
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(Codebook({""}), Error);
}

TEST(PreprocessTitle, Examples) {
  const auto& cb = default_codebook();
  EXPECT_EQ(preprocess_title("Be (1994 Digital Remastered Version)", cb), "Be");
  EXPECT_EQ(preprocess_title("Be  (1994 Digital Remastered Version)", cb), "Be");
  EXPECT_EQ(preprocess_title("Help!", cb), "Help!");
  EXPECT_EQ(preprocess_title("Mazurka (in C)", cb), "Mazurka (in C)");
}

TEST(PreprocessTitle, BracketHandling) {
  const auto& cb = default_codebook();
  EXPECT_EQ(preprocess_title("Song [Remix]", cb), "Song");
  EXPECT_EQ(preprocess_title("Song (Live [2004 Tour])", cb), "Song");
  EXPECT_EQ(preprocess_title("Song (feat. [Live] Band)", cb), "Song");  // nested: one outer span
  EXPECT_EQ(preprocess_title("Song (Live) (in C)", cb), "Song (in C)");
  EXPECT_EQ(preprocess_title("Song (Remixes) Part 2", cb), "Song Part 2");
  EXPECT_EQ(preprocess_title("(Live) Song", cb), "Song");
  EXPECT_EQ(preprocess_title("Song (Live", cb), "Song (Live");
  EXPECT_EQ(preprocess_title("Song (Live]", cb), "Song (Live]");
  EXPECT_EQ(preprocess_title("Song Live)", cb), "Song Live)");
  EXPECT_EQ(preprocess_title("  Song   Title  ", cb), "Song Title");
}

TEST(PreprocessTitle, StemmedMatch) {
  const auto& cb = default_codebook();
  EXPECT_EQ(preprocess_title("Song (Remixed)", cb), "Song");
  EXPECT_EQ(preprocess_title("Song (Covered by X)", cb), "Song");
  const Codebook custom({"acoustic"});
  EXPECT_EQ(preprocess_title("Song (Live)", custom), "Song (Live)");
  EXPECT_EQ(preprocess_title("Song (Acoustics)", custom), "Song");
}

namespace {

std::string random_title(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "Love", "Song", "Live", "remastered", "Version", "1994", "in", "C", "Blue", "Demo", "Édition",
      "(",    ")",    "[",    "]",          " ",       "  ",   "!", "Mix", "Night", "Café", "Take"};
  std::string out;
  const auto n = rng.between(0, 12);
  for (std::uint64_t i = 0; i < n; ++i) {
    out += pieces[rng.below(pieces.size())];
    if (rng.bernoulli(0.6)) out += ' ';
  }
  return out;
}

bool is_subsequence(const std::vector<Term>& needle, const std::vector<Term>& hay) {
  std::size_t i = 0;
  for (const auto& t : hay)
    if (i < needle.size() && needle[i] == t) ++i;
  return i == needle.size();
}

}  // namespace

TEST(PreprocessTitle, Properties) {
  const auto& cb = default_codebook();
  Rng rng(7, "test.titles");
  for (int iter = 0; iter < 5000; ++iter) {
    const auto title = random_title(rng);
    const auto once = preprocess_title(title, cb);
    SCOPED_TRACE("title='" + title + "'");
    EXPECT_EQ(preprocess_title(once, cb), once);
    EXPECT_LE(once.size(), title.size());
    EXPECT_TRUE(is_subsequence(tokenize(once), tokenize(title)));

    // No surviving bracketed span contains a codebook stem.
    std::vector<detail::Span> spans;
    if (detail::bracket_spans(once, spans) && once != title) {
      for (const auto& s : spans)
        for (const auto& t : tokenize(once.substr(s.begin + 1, s.end - s.begin - 2)))
          EXPECT_FALSE(cb.matches_stem(stem(t))) << t;
    }
  }
}
