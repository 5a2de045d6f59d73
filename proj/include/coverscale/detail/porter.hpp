#pragma once

// Porter (1980) suffix-stripping stemmer, original rule set.
//
// Operates on lowercase ASCII words. Within each step the first rule whose
// suffix matches decides the outcome, even when its condition fails.

#include <string>
#include <string_view>

namespace coverscale::detail {

class PorterStemmer {
 public:
  static std::string stem(std::string_view input) {
    PorterStemmer s{std::string(input)};
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5a();
    s.step5b();
    return std::move(s.w_);
  }

 private:
  explicit PorterStemmer(std::string w) : w_(std::move(w)) {}

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  static bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  }

  // y is a consonant at the start of a word or after a vowel.
  static bool is_consonant(std::string_view s, std::size_t i) {
    if (is_vowel_letter(s[i])) return false;
    if (s[i] == 'y') return i == 0 ? true : !is_consonant(s, i - 1);
    return true;
  }

  /// m in [C](VC){m}[V].
  static int measure(std::string_view s) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool cons = is_consonant(s, i);
      if (cons && prev_vowel) ++m;
      prev_vowel = !cons;
    }
    return m;
  }

  static bool contains_vowel(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!is_consonant(s, i)) return true;
    return false;
  }

  static bool ends_double_consonant(std::string_view s) {
    const auto n = s.size();
    return n >= 2 && s[n - 1] == s[n - 2] && is_consonant(s, n - 1);
  }

  // *o: stem ends consonant-vowel-consonant, final consonant not w, x or y.
  static bool ends_cvc(std::string_view s) {
    const auto n = s.size();
    if (n < 3) return false;
    const char last = s[n - 1];
    return is_consonant(s, n - 3) && !is_consonant(s, n - 2) && is_consonant(s, n - 1) &&
           last != 'w' && last != 'x' && last != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::string_view stem_without(std::string_view suffix) const {
    return std::string_view(w_).substr(0, w_.size() - suffix.size());
  }

  void replace_suffix(std::string_view suffix, std::string_view replacement) {
    w_.erase(w_.size() - suffix.size());
    w_ += replacement;
  }

  template <class Condition, std::size_t N>
  void apply_rules(const Rule (&rules)[N], Condition condition) {
    for (const Rule& r : rules) {
      if (!ends_with(r.suffix)) continue;
      if (condition(stem_without(r.suffix), r.suffix)) replace_suffix(r.suffix, r.replacement);
      return;
    }
  }

  void step1a() {
    static constexpr Rule rules[] = {{"sses", "ss"}, {"ies", "i"}, {"ss", "ss"}, {"s", ""}};
    apply_rules(rules, [](std::string_view, std::string_view) { return true; });
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_without("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    std::string_view removed;
    if (ends_with("ed") && contains_vowel(stem_without("ed")))
      removed = "ed";
    else if (ends_with("ing") && contains_vowel(stem_without("ing")))
      removed = "ing";
    else
      return;
    replace_suffix(removed, "");

    if (ends_with("at")) {
      w_ += 'e';
    } else if (ends_with("bl")) {
      w_ += 'e';
    } else if (ends_with("iz")) {
      w_ += 'e';
    } else if (ends_double_consonant(w_)) {
      const char last = w_.back();
      if (last != 'l' && last != 's' && last != 'z') w_.pop_back();
    } else if (measure(w_) == 1 && ends_cvc(w_)) {
      w_ += 'e';
    }
  }

  void step1c() {
    if (ends_with("y") && contains_vowel(stem_without("y"))) w_.back() = 'i';
  }

  static bool positive_measure(std::string_view stem, std::string_view) {
    return measure(stem) > 0;
  }

  void step2() {
    static constexpr Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    apply_rules(rules, positive_measure);
  }

  void step3() {
    static constexpr Rule rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_rules(rules, positive_measure);
  }

  void step4() {
    static constexpr Rule rules[] = {
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""},
        {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ion", ""},
        {"ou", ""},   {"ism", ""},  {"ate", ""},  {"iti", ""}, {"ous", ""}, {"ive", ""},
        {"ize", ""},
    };
    apply_rules(rules, [](std::string_view stem, std::string_view suffix) {
      if (measure(stem) <= 1) return false;
      if (suffix == "ion") return !stem.empty() && (stem.back() == 's' || stem.back() == 't');
      return true;
    });
  }

  void step5a() {
    if (!ends_with("e")) return;
    const auto stem = stem_without("e");
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w_.pop_back();
  }

  void step5b() {
    if (ends_with("ll") && measure(w_) > 1) w_.pop_back();
  }

  std::string w_;
};

}  // namespace coverscale::detail
