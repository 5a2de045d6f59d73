#pragma once

/** \file textnorm.hpp
 *  \brief Tokenization, stemming and cover-descriptor removal for titles.
 *
 * Terms are maximal runs of Unicode letters and numbers (general categories
 * L* and N*), simple-case-folded. Everything else separates terms.
 */

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "coverscale/detail/porter.hpp"
#include "coverscale/error.hpp"

namespace coverscale {

using Term = std::string;

namespace detail {

inline bool is_term_char(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_L_MASK | U_GC_N_MASK)) != 0;
}

inline void append_utf8(std::string& out, UChar32 c) {
  std::uint8_t buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace detail

/// Splits UTF-8 text into case-folded alphanumeric terms. Invalid UTF-8
/// bytes act as separators.
inline std::vector<Term> tokenize(std::string_view text) {
  std::vector<Term> terms;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::string current;
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && detail::is_term_char(c)) {
      detail::append_utf8(current, u_foldCase(c, U_FOLD_CASE_DEFAULT));
    } else if (!current.empty()) {
      terms.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

/// Porter stem of a lowercase term. Terms that are not purely a-z are
/// returned unchanged.
inline Term stem(std::string_view term) {
  if (term.empty()) return Term{};
  const bool alphabetic =
      std::all_of(term.begin(), term.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  if (!alphabetic) return Term(term);
  return detail::PorterStemmer::stem(term);
}

/// Set of cover-descriptor keywords ("live", "remastered", ...) and their
/// stems. Immutable once built.
class Codebook {
 public:
  /// Keywords are case-folded; each must be a single non-empty term.
  explicit Codebook(const std::vector<std::string>& keywords) {
    for (const auto& raw : keywords) {
      const auto terms = tokenize(raw);
      if (terms.size() != 1)
        throw Error(ErrorCode::InvalidArgument,
                    "codebook keyword must be exactly one term: '" + raw + "'");
      stemmed_.insert(stem(terms.front()));
      keywords_.insert(terms.front());
    }
  }

  const std::set<std::string>& keywords() const noexcept { return keywords_; }
  const std::set<std::string>& stemmed() const noexcept { return stemmed_; }
  std::size_t size() const noexcept { return keywords_.size(); }

  bool matches_stem(std::string_view stemmed_term) const {
    return stemmed_.find(std::string(stemmed_term)) != stemmed_.end();
  }

 private:
  std::set<std::string> keywords_;
  std::set<std::string> stemmed_;
};

/// The 34 default keywords, in their canonical order.
inline const std::vector<std::string>& default_codebook_keywords() {
  static const std::vector<std::string> keywords = {
      // descriptors observed in cover titles
      "live", "cover", "ep", "studio", "acoustic", "remix", "remastered", "version", "remaster",
      "edit", "album", "demo", "reprise", "radio", "original", "single",
      // common additions
      "mix", "mono", "stereo", "instrumental", "karaoke", "unplugged", "session", "take", "bonus",
      "alternate", "rerecorded", "digital", "explicit", "clean", "deluxe", "anniversary",
      "tribute", "rework"};
  return keywords;
}

inline const Codebook& default_codebook() {
  static const Codebook codebook(default_codebook_keywords());
  return codebook;
}

/// Reads a codebook file: one keyword per line, '#' starts a comment line.
inline Codebook load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open codebook file " + path);
  std::vector<std::string> keywords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (tokenize(t).size() != 1)
      throw Error(ErrorCode::Malformed, "codebook entry must be one term: '" + std::string(t) + "'",
                  line_no);
    keywords.emplace_back(t);
  }
  return Codebook(keywords);
}

namespace detail {

struct Span {
  std::size_t begin;  // index of the opening bracket
  std::size_t end;    // one past the closing bracket
};

/// Outermost '()' / '[]' spans, or false when brackets are unbalanced or
/// mismatched.
inline bool bracket_spans(std::string_view title, std::vector<Span>& spans) {
  std::vector<char> expected;
  std::size_t open_at = 0;
  for (std::size_t i = 0; i < title.size(); ++i) {
    const char c = title[i];
    if (c == '(' || c == '[') {
      if (expected.empty()) open_at = i;
      expected.push_back(c == '(' ? ')' : ']');
    } else if (c == ')' || c == ']') {
      if (expected.empty() || expected.back() != c) return false;
      expected.pop_back();
      if (expected.empty()) spans.push_back({open_at, i + 1});
    }
  }
  return expected.empty();
}

}  // namespace detail

/// Removes bracketed spans that contain a codebook keyword (compared after
/// stemming), then collapses whitespace. Titles with unbalanced brackets are
/// returned untouched.
inline std::string preprocess_title(std::string_view title, const Codebook& codebook) {
  std::vector<detail::Span> spans;
  if (!detail::bracket_spans(title, spans)) return std::string(title);

  std::string kept;
  kept.reserve(title.size());
  std::size_t cursor = 0;
  for (const auto& span : spans) {
    const auto inner = title.substr(span.begin + 1, span.end - span.begin - 2);
    const auto terms = tokenize(inner);
    const bool descriptor = std::any_of(terms.begin(), terms.end(), [&](const Term& t) {
      return codebook.matches_stem(stem(t));
    });
    if (!descriptor) continue;
    kept.append(title.substr(cursor, span.begin - cursor));
    kept += ' ';
    cursor = span.end;
  }
  kept.append(title.substr(cursor));
  return detail::collapse_whitespace(kept);
}

}  // namespace coverscale
