#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "negkw/account.hpp"
#include "negkw/simulate.hpp"

namespace negkw {

struct Counterexample {
  Keyword query;
  std::string expected;
  Disposition disposition;
  std::string campaign;
  std::string adgroup;
  std::string details;
};

struct PropertyResult {
  bool pass = true;
  bool vacuous = false;
  std::size_t checked = 0;
  std::vector<Counterexample> counterexamples;
};

struct Finding {
  enum class Severity { Error, Info };
  Severity severity = Severity::Error;
  std::string kind;
  std::string detail;
};

inline const char* to_string(Finding::Severity s) { return s == Finding::Severity::Error ? "error" : "info"; }

struct VerificationReport {
  PropertyResult property1;
  PropertyResult property2;
  PropertyResult property3;
  std::vector<Finding> structural;

  bool ok() const {
    return property1.pass && property2.pass && property3.pass &&
           std::none_of(structural.begin(), structural.end(),
                        [](const Finding& f) { return f.severity == Finding::Severity::Error; });
  }
};

namespace detail {

inline Counterexample counterexample(const Trajectory& t, std::string expected) {
  return {t.query, std::move(expected), t.disposition, t.campaign, t.adgroup, t.details};
}

inline const AdGroup* landing(const Account& acc, const Trajectory& t) {
  if (t.disposition != Disposition::Landed) return nullptr;
  const auto* c = acc.find_campaign(t.campaign);
  return c ? c->find_adgroup(t.adgroup) : nullptr;
}

inline bool contains_any_phrase(const Keyword& q, const std::vector<Keyword>& phrases) {
  return std::any_of(phrases.begin(), phrases.end(), [&](const Keyword& b) { return contains_phrase(q, b); });
}

/// SK tokens that occur in no brand, sorted.
inline std::vector<std::string> filler_pool(const Account& acc) {
  std::set<std::string> brand_tokens;
  for (const auto* list : {&acc.brands, &acc.non_brands}) {
    for (const auto& b : *list) brand_tokens.insert(b.tokens().begin(), b.tokens().end());
  }
  std::set<std::string> pool;
  for (const auto& g : acc.groups) {
    for (const auto& k : g.keywords) {
      for (const auto& t : k.tokens()) {
        if (!brand_tokens.count(t)) pool.insert(t);
      }
    }
  }
  return {pool.begin(), pool.end()};
}

inline std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline constexpr std::size_t kMaxAttempts = 64;

}  // namespace detail

/// Every keyword of SK lands in the AdGroup built for it.
inline PropertyResult verify_property1(const Account& acc, const std::vector<Keyword>& sk) {
  PropertyResult r;
  Simulator sim(acc);
  for (const auto& q : sk) {
    ++r.checked;
    const auto t = sim.simulate(q);
    const auto* a = detail::landing(acc, t);
    if (!a || a->tag.kind != AdGroupTag::Kind::RuleTarget || a->tag.keyword != q) {
      r.counterexamples.push_back(detail::counterexample(t, "adgroup for '" + q.str() + "'"));
    }
  }
  r.vacuous = sk.empty();
  r.pass = r.counterexamples.empty();
  return r;
}

inline PropertyResult verify_property1(const Account& acc) { return verify_property1(acc, acc.keywords()); }

/// Random queries holding exactly one sold brand land in that brand's AdGroup.
inline PropertyResult verify_property2(const Account& acc, std::size_t probes, std::uint64_t seed) {
  if (probes == 0) throw Error(ErrorKind::InvalidInput, "probes must be positive");
  PropertyResult r;
  if (acc.brands.empty()) {
    r.vacuous = true;
    return r;
  }
  const auto pool = detail::filler_pool(acc);
  if (pool.empty()) throw Error(ErrorKind::Generator, "no filler tokens outside brand names");
  const auto sk = acc.keywords();
  std::mt19937_64 rng(seed);
  Simulator sim(acc);
  for (std::size_t i = 0; i < probes; ++i) {
    for (std::size_t attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
      const Keyword& brand = acc.brands[detail::draw(rng, acc.brands.size())];
      std::vector<std::string> words;
      const std::size_t fillers = 1 + detail::draw(rng, 3);
      for (std::size_t f = 0; f < fillers; ++f) words.push_back(pool[detail::draw(rng, pool.size())]);
      const auto at = static_cast<std::ptrdiff_t>(detail::draw(rng, words.size() + 1));
      words.insert(words.begin() + at, brand.tokens().begin(), brand.tokens().end());
      Keyword q(std::move(words));
      if (std::binary_search(sk.begin(), sk.end(), q) || detail::contains_any_phrase(q, acc.non_brands)) continue;
      bool other = std::any_of(acc.brands.begin(), acc.brands.end(),
                               [&](const Keyword& b) { return b != brand && contains_phrase(q, b); });
      if (other) continue;
      ++r.checked;
      const auto t = sim.simulate(q);
      const auto* a = detail::landing(acc, t);
      if (!a || a->tag.kind != AdGroupTag::Kind::BrandTarget || a->tag.keyword != brand) {
        r.counterexamples.push_back(detail::counterexample(t, "brand adgroup '" + brand.str() + "'"));
      }
      break;
    }
  }
  r.pass = r.counterexamples.empty();
  return r;
}

/// Random brand-free queries outside SK land in the catch-all campaign.
inline PropertyResult verify_property3(const Account& acc, std::size_t probes, std::uint64_t seed) {
  if (probes == 0) throw Error(ErrorKind::InvalidInput, "probes must be positive");
  PropertyResult r;
  const auto pool = detail::filler_pool(acc);
  if (pool.empty()) throw Error(ErrorKind::Generator, "no filler tokens outside brand names");
  const auto sk = acc.keywords();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Simulator sim(acc);
  for (std::size_t i = 0; i < probes; ++i) {
    for (std::size_t attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
      std::vector<std::string> words;
      const std::size_t len = 1 + detail::draw(rng, 4);
      for (std::size_t f = 0; f < len; ++f) words.push_back(pool[detail::draw(rng, pool.size())]);
      Keyword q(std::move(words));
      if (std::binary_search(sk.begin(), sk.end(), q) || detail::contains_any_phrase(q, acc.brands) ||
          detail::contains_any_phrase(q, acc.non_brands)) {
        continue;
      }
      ++r.checked;
      const auto t = sim.simulate(q);
      const auto* a = detail::landing(acc, t);
      if (!a || a->tag.kind != AdGroupTag::Kind::CatchAll) {
        r.counterexamples.push_back(detail::counterexample(t, "catch-all"));
      }
      break;
    }
  }
  r.pass = r.counterexamples.empty();
  return r;
}

/// Limits, partition sanity, eraser strictness and campaign isolation.
inline std::vector<Finding> verify_structure(const Account& acc) {
  using S = Finding::Severity;
  std::vector<Finding> out;
  for (const auto& c : acc.campaigns) {
    if (c.negatives.size() > acc.limit) {
      out.push_back({S::Error, "limit", "campaign " + c.name + " has " + std::to_string(c.negatives.size()) +
                                            " negatives, limit " + std::to_string(acc.limit)});
    }
    for (const auto& a : c.adgroups) {
      if (a.negatives.size() > acc.limit) {
        out.push_back({S::Error, "limit", "adgroup " + c.name + "/" + a.name + " has " +
                                              std::to_string(a.negatives.size()) + " negatives, limit " +
                                              std::to_string(acc.limit)});
      }
    }
  }

  std::map<Keyword, std::string> owner;
  for (const auto& g : acc.groups) {
    if (!acc.find_campaign(g.campaign)) {
      out.push_back({S::Error, "partition", "group for missing campaign " + g.campaign});
    }
    for (const auto& k : g.keywords) {
      auto [it, fresh] = owner.emplace(k, g.campaign);
      if (!fresh) {
        out.push_back({S::Error, "partition", "'" + k.str() + "' is in " + it->second + " and " + g.campaign});
      }
    }
  }

  for (const auto& g : acc.groups) {
    for (const auto& e : g.erasers) {
      for (const auto& [k, home] : owner) {
        if (home == g.campaign || !erases(e, k)) continue;
        // Harmful only when the erased keyword's own campaign carries the eraser.
        const auto* hc = acc.find_campaign(home);
        const bool carried = hc && hc->negatives.count(e.as_negative());
        out.push_back({carried ? S::Error : S::Info, "strictness",
                       "eraser " + e.str() + " of " + g.campaign + " erases '" + k.str() + "' of " + home});
      }
    }
  }

  for (const auto* c : acc.low_priority()) {
    NegativeFilter f(c->negatives);
    for (const auto& [k, home] : owner) {
      const bool blocked = f.matches(k, word_set(k));
      if (home == c->name && blocked) {
        out.push_back({S::Error, "isolation", c->name + " blocks its own keyword '" + k.str() + "'"});
      } else if (home != c->name && !blocked) {
        out.push_back({S::Error, "isolation", c->name + " admits '" + k.str() + "' of " + home});
      }
    }
  }

  return out;
}

/// Traces of query shapes the properties leave undefined: a non-sold brand
/// alone, and two sold brands together.
inline std::vector<Finding> informational_findings(const Account& acc) {
  using S = Finding::Severity;
  std::vector<Finding> out;
  Simulator sim(acc);
  for (const auto& nb : acc.non_brands) {
    const auto t = sim.simulate(nb);
    out.push_back({S::Info, "non-sold-brand", "'" + nb.str() + "' -> " + to_string(t.disposition)});
  }
  for (std::size_t i = 0; i + 1 < acc.brands.size(); ++i) {
    std::vector<std::string> words = acc.brands[i].tokens();
    words.insert(words.end(), acc.brands[i + 1].tokens().begin(), acc.brands[i + 1].tokens().end());
    const auto t = sim.simulate(Keyword(std::move(words)));
    std::string where = t.campaign.empty() ? "" : " in " + t.campaign;
    out.push_back({S::Info, "multi-brand", "'" + t.query.str() + "' -> " + to_string(t.disposition) + where});
  }
  return out;
}

inline VerificationReport verify(const Account& acc, std::size_t probes, std::uint64_t seed) {
  VerificationReport r;
  r.property1 = verify_property1(acc);
  r.property2 = verify_property2(acc, probes, seed);
  r.property3 = verify_property3(acc, probes, seed);
  r.structural = verify_structure(acc);
  auto info = informational_findings(acc);
  r.structural.insert(r.structural.end(), info.begin(), info.end());
  return r;
}

}  // namespace negkw
