#pragma once

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "negkw/negkw.hpp"

namespace negkw::testing {

inline std::string data_path(const std::string& name) { return std::string(NEGKW_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Keyword kw(const std::string& s) { return Keyword::parse(s); }

inline std::vector<Keyword> kws(std::initializer_list<const char*> xs) {
  std::vector<Keyword> out;
  for (const auto* x : xs) out.push_back(Keyword::parse(x));
  return out;
}

/// The 11-rule worked example with SB = {nike, adidas, garmin}, SNB = {reebok}.
inline BuildInput shop_input(BuildMode mode = BuildMode::Reduced) {
  BuildInput in{parse_rules(slurp(data_path("shop_rules.jsonl"))), parse_brands(slurp(data_path("shop_brands.txt"))),
                parse_brands(slurp(data_path("shop_non_brands.txt"))), {}, {}};
  in.config.mode = mode;
  return in;
}

inline Account shop_account(BuildMode mode = BuildMode::Reduced) { return build_account(shop_input(mode)); }

/// Name of the low-priority campaign whose group holds `k`.
inline std::string campaign_of(const Account& acc, const Keyword& k) {
  const auto* g = acc.group_of(k);
  return g ? g->campaign : std::string{};
}

inline Rule rule(const std::string& k, std::int64_t cpc = 1000000, const std::string& item = "Item1") {
  return Rule(Keyword::parse(k), Money::from_micros(cpc), {ItemId(item)});
}

inline SyntheticSpec matrix_spec(std::size_t n, std::uint64_t seed) {
  SyntheticSpec s;
  s.n = n;
  s.vocab = std::max<std::size_t>(12, n / 4);
  s.seed = seed;
  return s;
}

inline BuildInput synthetic_input(const SyntheticSpec& spec, BuildMode mode) {
  auto c = synthesize(spec);
  BuildInput in{std::move(c.rules), std::move(c.brands), std::move(c.non_brands), {}, {}};
  in.config.mode = mode;
  return in;
}

/// Random keywords over a small alphabet, so word sets overlap a lot.
inline std::vector<Keyword> random_keywords(std::mt19937_64& rng, std::size_t n, std::size_t alphabet,
                                            std::size_t max_len = 3) {
  std::set<Keyword> out;
  while (out.size() < n) {
    std::vector<std::string> t;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) t.push_back("w" + std::to_string(rng() % alphabet));
    out.insert(Keyword(std::move(t)));
  }
  return {out.begin(), out.end()};
}

inline std::set<Keyword> brute_image(const Eraser& e, const std::vector<Keyword>& universe) {
  std::set<Keyword> out;
  for (const auto& p : universe) {
    if (e.is_exact()) {
      if (p == e.keyword()) out.insert(p);
    } else {
      std::set<std::string> words(p.tokens().begin(), p.tokens().end());
      bool all = true;
      for (const auto& w : e.words()) all = all && words.count(w);
      if (all) out.insert(p);
    }
  }
  return out;
}

}  // namespace negkw::testing
