#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "negkw/account.hpp"

namespace negkw {

struct SyntheticSpec {
  std::size_t n = 100;
  std::size_t vocab = 40;
  std::size_t min_len = 1;
  std::size_t max_len = 3;
  std::size_t brands = 5;      // m
  std::size_t non_brands = 2;  // m'
  double brand_fraction = 0.3;
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  RuleSet rules;
  std::vector<Keyword> brands;
  std::vector<Keyword> non_brands;
};

inline std::string synth_token(std::size_t i) {
  static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
  std::string out;
  do {
    out += kOnsets[i % 14];
    i /= 14;
    out += kVowels[i % 5];
    i /= 5;
  } while (i > 0);
  return out;
}

/// Zipf-weighted token reuse, so that many keywords share words and large
/// erasers exist. Deterministic for a given spec.
inline SyntheticCorpus synthesize(const SyntheticSpec& spec) {
  if (spec.n == 0 || spec.vocab == 0 || spec.min_len == 0 || spec.min_len > spec.max_len) {
    throw Error(ErrorKind::InvalidInput, "synthetic spec needs n, vocab >= 1 and 1 <= min_len <= max_len");
  }
  if (spec.brand_fraction < 0.0 || spec.brand_fraction > 1.0) {
    throw Error(ErrorKind::InvalidInput, "brand_fraction must lie in [0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<double> cumulative(spec.vocab);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.vocab; ++i) cumulative[i] = total += 1.0 / static_cast<double>(i + 1);
  auto zipf = [&] {
    const double x = unit() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return synth_token(static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(spec.vocab) - 1)));
  };

  SyntheticCorpus out;
  for (std::size_t i = 0; i < spec.brands; ++i) out.brands.push_back(Keyword({"brand" + std::to_string(i)}));
  for (std::size_t i = 0; i < spec.non_brands; ++i) out.non_brands.push_back(Keyword({"other" + std::to_string(i)}));

  std::set<Keyword> seen;
  const std::size_t max_attempts = 200 * spec.n + 1000;
  std::size_t attempts = 0;
  while (out.rules.size() < spec.n) {
    if (++attempts > max_attempts) {
      throw Error(ErrorKind::Generator, "vocabulary too small for " + std::to_string(spec.n) + " distinct keywords");
    }
    const std::size_t len = spec.min_len + static_cast<std::size_t>(rng() % (spec.max_len - spec.min_len + 1));
    std::vector<std::string> words;
    const bool branded = !out.brands.empty() && unit() < spec.brand_fraction;
    if (branded) words.push_back(out.brands[rng() % out.brands.size()].tokens().front());
    const std::size_t want = std::min(len, spec.vocab) + (branded ? 1 : 0);
    while (words.size() < want) {
      auto w = zipf();
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
    Keyword k(std::move(words));
    if (!seen.insert(k).second) continue;
    const std::size_t id = out.rules.size();
    std::set<ItemId> items{ItemId("item-" + std::to_string(id))};
    if (rng() % 4 == 0) items.insert(ItemId("item-" + std::to_string(id + 1)));
    out.rules.add(Rule(std::move(k), Money::from_micros(100000 + static_cast<std::int64_t>(rng() % 900000)),
                       std::move(items)));
  }
  return out;
}

}  // namespace negkw
