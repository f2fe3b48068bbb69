#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "negkw/error.hpp"

namespace negkw {

/// Sorted, duplicate-free list of tokens. Used for s(p) style word sets.
using WordSet = std::vector<std::string>;

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool valid_token(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t) {
    if (is_space(c)) return false;
    if (std::tolower(static_cast<unsigned char>(c)) != static_cast<unsigned char>(c)) return false;
  }
  return true;
}

}  // namespace detail

/// Normalized, non-empty token sequence. The atom of rules, queries and negatives.
class Keyword {
 public:
  explicit Keyword(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw Error(ErrorKind::MalformedKeyword, "keyword has no tokens");
    for (const auto& t : tokens_) {
      if (!detail::valid_token(t)) {
        throw Error(ErrorKind::MalformedKeyword, "invalid token '" + t + "'");
      }
    }
  }

  /// Lowercases and splits on whitespace. Hyphens and digits stay inside tokens.
  static Keyword parse(std::string_view raw) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && detail::is_space(raw[i])) ++i;
      std::size_t j = i;
      while (j < raw.size() && !detail::is_space(raw[j])) ++j;
      if (j > i) tokens.push_back(detail::lower(raw.substr(i, j - i)));
      i = j;
    }
    if (tokens.empty()) {
      throw Error(ErrorKind::MalformedKeyword, "empty keyword '" + std::string(raw) + "'");
    }
    return Keyword(std::move(tokens));
  }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  std::string str() const {
    std::string out;
    for (const auto& t : tokens_) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }

  friend auto operator<=>(const Keyword&, const Keyword&) = default;
  friend bool operator==(const Keyword&, const Keyword&) = default;

 private:
  std::vector<std::string> tokens_;
};

inline Keyword normalize(std::string_view raw) { return Keyword::parse(raw); }

struct KeywordHash {
  std::size_t operator()(const Keyword& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& t : k.tokens()) {
      h ^= std::hash<std::string>{}(t) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline WordSet make_word_set(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

/// s(p): the distinct tokens of p.
inline WordSet word_set(const Keyword& p) { return make_word_set(p.tokens()); }

/// w(p): every non-empty contiguous token run of p.
inline std::set<Keyword> subword_set(const Keyword& p) {
  std::set<Keyword> out;
  const auto& t = p.tokens();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j <= t.size(); ++j) {
      out.emplace(std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                           t.begin() + static_cast<std::ptrdiff_t>(j)));
    }
  }
  return out;
}

inline bool is_subset(const WordSet& small, const WordSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// True when `needle` occurs as a contiguous run inside `hay`.
inline bool contains_phrase(const Keyword& hay, const Keyword& needle) {
  const auto& h = hay.tokens();
  const auto& n = needle.tokens();
  return std::search(h.begin(), h.end(), n.begin(), n.end()) != h.end();
}

enum class MatchType { Exact = 0, Phrase = 1, Large = 2 };

inline const char* to_string(MatchType t) {
  switch (t) {
    case MatchType::Exact: return "exact";
    case MatchType::Phrase: return "phrase";
    case MatchType::Large: return "large";
  }
  return "?";
}

inline MatchType match_type_from_string(std::string_view s) {
  if (s == "exact") return MatchType::Exact;
  if (s == "phrase") return MatchType::Phrase;
  if (s == "large" || s == "broad") return MatchType::Large;
  throw Error(ErrorKind::Parse, "unknown match type '" + std::string(s) + "'");
}

struct NegativeKeyword {
  Keyword keyword;
  MatchType match_type;

  // Canonical order: match type first, then keyword.
  friend auto operator<=>(const NegativeKeyword& a, const NegativeKeyword& b) {
    if (auto c = a.match_type <=> b.match_type; c != 0) return c;
    return a.keyword <=> b.keyword;
  }
  friend bool operator==(const NegativeKeyword&, const NegativeKeyword&) = default;
};

inline NegativeKeyword exact_neg(Keyword k) { return {std::move(k), MatchType::Exact}; }
inline NegativeKeyword phrase_neg(Keyword k) { return {std::move(k), MatchType::Phrase}; }
inline NegativeKeyword large_neg(Keyword k) { return {std::move(k), MatchType::Large}; }

inline std::string render(const NegativeKeyword& n) {
  return n.keyword.str() + " (" + to_string(n.match_type) + ")";
}

inline bool neg_matches(const NegativeKeyword& neg, const Keyword& q) {
  switch (neg.match_type) {
    case MatchType::Exact: return neg.keyword == q;
    case MatchType::Phrase: return contains_phrase(q, neg.keyword);
    case MatchType::Large: return is_subset(word_set(neg.keyword), word_set(q));
  }
  return false;
}

using NegativeSet = std::set<NegativeKeyword>;

}  // namespace negkw
