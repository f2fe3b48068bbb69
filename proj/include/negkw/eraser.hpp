#pragma once

#include <string>
#include <variant>
#include <vector>

#include "negkw/keyword.hpp"

namespace negkw {

struct LargeEraser {
  WordSet words;  // sorted, unique, non-empty
  friend auto operator<=>(const LargeEraser&, const LargeEraser&) = default;
  friend bool operator==(const LargeEraser&, const LargeEraser&) = default;
};

struct ExactEraser {
  Keyword keyword;
  friend auto operator<=>(const ExactEraser&, const ExactEraser&) = default;
  friend bool operator==(const ExactEraser&, const ExactEraser&) = default;
};

/// A surrogate negative keyword: either a word set (large) or a keyword (exact).
class Eraser {
 public:
  static Eraser large(std::vector<std::string> words) {
    auto ws = make_word_set(std::move(words));
    if (ws.empty()) throw Error(ErrorKind::InvalidInput, "large eraser needs at least one word");
    Keyword{ws};  // validates tokens
    return Eraser(LargeEraser{std::move(ws)});
  }
  static Eraser exact(Keyword k) { return Eraser(ExactEraser{std::move(k)}); }

  bool is_large() const noexcept { return std::holds_alternative<LargeEraser>(value_); }
  bool is_exact() const noexcept { return !is_large(); }

  const WordSet& words() const { return std::get<LargeEraser>(value_).words; }
  const Keyword& keyword() const { return std::get<ExactEraser>(value_).keyword; }

  /// The negative keyword that implements this eraser on a campaign.
  NegativeKeyword as_negative() const {
    if (is_large()) return large_neg(Keyword(words()));
    return exact_neg(keyword());
  }

  std::string str() const {
    if (is_large()) {
      std::string out = "{";
      for (std::size_t i = 0; i < words().size(); ++i) out += (i ? ", " : "") + words()[i];
      return out + "} (large)";
    }
    return keyword().str() + " (exact)";
  }

  friend auto operator<=>(const Eraser&, const Eraser&) = default;
  friend bool operator==(const Eraser&, const Eraser&) = default;

 private:
  explicit Eraser(std::variant<LargeEraser, ExactEraser> v) : value_(std::move(v)) {}
  std::variant<LargeEraser, ExactEraser> value_;
};

inline bool erases(const Eraser& e, const Keyword& p) {
  if (e.is_large()) return is_subset(e.words(), word_set(p));
  return e.keyword() == p;
}

/// Keywords of `universe` erased by at least one of `erasers`.
template <typename Range>
std::set<Keyword> expand(const std::vector<Eraser>& erasers, const Range& universe) {
  std::set<Keyword> out;
  for (const Keyword& p : universe) {
    for (const auto& e : erasers) {
      if (erases(e, p)) {
        out.insert(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace negkw
