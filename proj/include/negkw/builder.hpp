#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "negkw/account.hpp"
#include "negkw/bounds.hpp"
#include "negkw/eraser_engine.hpp"

namespace negkw {

enum class BuildMode { Naive, Reduced };

inline const char* to_string(BuildMode m) { return m == BuildMode::Naive ? "naive" : "reduced"; }

inline BuildMode build_mode_from_string(std::string_view s) {
  if (s == "naive") return BuildMode::Naive;
  if (s == "reduced") return BuildMode::Reduced;
  throw Error(ErrorKind::InvalidInput, "unknown mode '" + std::string(s) + "'");
}

struct BuildConfig {
  BuildMode mode = BuildMode::Reduced;
  std::size_t max_words = 3;
  std::size_t max_image = 0;    // 0: ceil(sqrt(n))
  std::size_t target_size = 0;  // 0: ceil(sqrt(n))
  std::size_t limit = kDefaultLimit;
  ColoringOrder order = ColoringOrder::WeightThenNeighbourhood;
  Money default_bid{10000};

  EngineOptions engine() const { return {max_words, max_image, target_size, order}; }
};

struct BuildInput {
  RuleSet rules;
  std::vector<Keyword> brands;      // SB
  std::vector<Keyword> non_brands;  // SNB
  std::map<Keyword, ProductTree> brand_trees;
  BuildConfig config;
};

namespace detail {

inline void check_limit(const NegativeSet& negs, std::size_t limit, const std::string& where) {
  if (negs.size() > limit) {
    throw Error(ErrorKind::LimitExceeded, where + " needs " + std::to_string(negs.size()) +
                                              " negatives, limit is " + std::to_string(limit));
  }
}

}  // namespace detail

/// Rejects inputs the three-level structure cannot serve.
inline void validate(const BuildInput& in) {
  if (in.rules.empty()) throw Error(ErrorKind::InvalidInput, "no rules");
  if (in.config.limit == 0) throw Error(ErrorKind::InvalidInput, "limit must be positive");
  for (const auto& b : in.brands) {
    if (std::find(in.non_brands.begin(), in.non_brands.end(), b) != in.non_brands.end()) {
      throw Error(ErrorKind::InvalidInput, "brand '" + b.str() + "' is both sold and not sold");
    }
  }
  // SNB is a phrase negative on every campaign: such a keyword could never land.
  for (const auto& r : in.rules.rules()) {
    for (const auto& nb : in.non_brands) {
      if (contains_phrase(r.keyword, nb)) {
        throw Error(ErrorKind::InvalidInput,
                    "keyword '" + r.keyword.str() + "' contains non-sold brand '" + nb.str() + "'");
      }
    }
  }
}

inline ProductTree catch_all_tree(const BuildConfig& cfg) { return ProductTree::leaf(cfg.default_bid); }

/// High priority: blocks SK (exact) and every brand (phrase); one catch-all AdGroup.
inline Campaign build_c1(const BuildInput& in) {
  Campaign c;
  c.name = "C1";
  c.priority = Priority::High;
  c.tag = {CampaignTag::Kind::C1, 0};
  for (const auto& r : in.rules.rules()) c.negatives.insert(exact_neg(r.keyword));
  for (const auto& b : in.brands) c.negatives.insert(phrase_neg(b));
  for (const auto& b : in.non_brands) c.negatives.insert(phrase_neg(b));
  detail::check_limit(c.negatives, in.config.limit, "campaign C1");
  c.adgroups.push_back({"catch-all", {}, catch_all_tree(in.config), AdGroupTag::catch_all()});
  return c;
}

/// Medium priority: blocks SK (exact) and SNB (phrase); one AdGroup per sold brand.
/// Returns nothing when there are no sold brands.
inline std::optional<Campaign> build_c2(const BuildInput& in) {
  if (in.brands.empty()) return std::nullopt;
  Campaign c;
  c.name = "C2";
  c.priority = Priority::Medium;
  c.tag = {CampaignTag::Kind::C2, 0};
  for (const auto& r : in.rules.rules()) c.negatives.insert(exact_neg(r.keyword));
  for (const auto& b : in.non_brands) c.negatives.insert(phrase_neg(b));
  detail::check_limit(c.negatives, in.config.limit, "campaign C2");
  for (const auto& b : in.brands) {
    AdGroup a{b.str(), {}, catch_all_tree(in.config), AdGroupTag::brand(b)};
    if (auto it = in.brand_trees.find(b); it != in.brand_trees.end()) a.tree = it->second;
    for (const auto& other : in.brands) {
      if (other != b) a.negatives.insert(phrase_neg(other));
    }
    detail::check_limit(a.negatives, in.config.limit, "adgroup C2/" + a.name);
    c.adgroups.push_back(std::move(a));
  }
  return c;
}

/// The low-priority layer: the campaigns plus the partition they realise.
struct LowPriorityLayer {
  std::vector<Campaign> campaigns;
  std::vector<KeywordGroup> groups;
  std::optional<EraserPlan> plan;  // reduced mode only
};

/// Sorted SK cut into ceil(n / t) chunks whose sizes differ by at most one.
inline std::vector<std::vector<Keyword>> naive_partition(std::vector<Keyword> sk, std::size_t target) {
  std::sort(sk.begin(), sk.end());
  if (target == 0) target = std::max<std::size_t>(ceil_sqrt(sk.size()), 1);
  const std::size_t k = (sk.size() + target - 1) / target;
  std::vector<std::vector<Keyword>> parts(k);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t len = sk.size() / k + (i < sk.size() % k ? 1 : 0);
    parts[i].assign(sk.begin() + static_cast<std::ptrdiff_t>(pos),
                    sk.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return parts;
}

/// C3 campaign for group `index` (0-based) given every group's erasers.
inline Campaign make_c3(const BuildInput& in, const std::vector<KeywordGroup>& groups, std::size_t index) {
  const auto& grp = groups[index];
  Campaign c;
  c.name = grp.campaign;
  c.priority = Priority::Low;
  c.tag = {CampaignTag::Kind::C3, static_cast<int>(index) + 1};
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (j == index) continue;
    for (const auto& e : groups[j].erasers) c.negatives.insert(e.as_negative());
  }
  for (const auto& nb : in.non_brands) c.negatives.insert(phrase_neg(nb));
  detail::check_limit(c.negatives, in.config.limit, "campaign " + c.name);
  for (const auto& kw : grp.keywords) {
    const Rule* rule = in.rules.find(kw);
    AdGroup a{kw.str(), {}, ProductTree::leaf(rule ? rule->cpc : in.config.default_bid), AdGroupTag::rule(kw)};
    for (const auto& other : grp.keywords) {
      if (other != kw) a.negatives.insert(exact_neg(other));
    }
    detail::check_limit(a.negatives, in.config.limit, "adgroup " + c.name + "/" + a.name);
    c.adgroups.push_back(std::move(a));
  }
  return c;
}

inline LowPriorityLayer build_c3(const BuildInput& in) {
  LowPriorityLayer layer;
  const auto sk = in.rules.keywords();
  if (in.config.mode == BuildMode::Naive) {
    const auto parts = naive_partition(sk, in.config.target_size);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      KeywordGroup g{c3_name(static_cast<int>(i) + 1), parts[i], {}};
      for (const auto& k : parts[i]) g.erasers.push_back(Eraser::exact(k));
      layer.groups.push_back(std::move(g));
    }
  } else {
    auto plan = plan_erasers(sk, in.config.engine());
    for (std::size_t i = 0; i < plan.plan.groups.size(); ++i) {
      const auto& pg = plan.plan.groups[i];
      KeywordGroup g{c3_name(static_cast<int>(i) + 1), pg.keywords, pg.erasers};
      std::sort(g.erasers.begin(), g.erasers.end());
      layer.groups.push_back(std::move(g));
    }
    layer.plan = std::move(plan);
  }
  for (std::size_t i = 0; i < layer.groups.size(); ++i) layer.campaigns.push_back(make_c3(in, layer.groups, i));
  return layer;
}

inline Account build_account(const BuildInput& in) {
  validate(in);
  Account acc;
  acc.limit = in.config.limit;
  acc.brands = in.brands;
  acc.non_brands = in.non_brands;
  acc.campaigns.push_back(build_c1(in));
  if (auto c2 = build_c2(in)) acc.campaigns.push_back(std::move(*c2));
  auto layer = build_c3(in);
  for (auto& c : layer.campaigns) acc.campaigns.push_back(std::move(c));
  acc.groups = std::move(layer.groups);
  acc.canonicalize();
  return acc;
}

/// Naive-vs-reduced comparison, mirroring the NK / neras / ntrans / h columns.
struct ReductionStats {
  std::size_t n = 0;
  std::size_t neras = 0;
  std::size_t ntrans = 0;
  std::size_t covered = 0;
  std::size_t k = 0;
  std::vector<std::size_t> group_sizes;
  std::size_t nk_formula = 0;
  std::size_t total_negatives_naive = 0;
  std::size_t total_negatives_reduced = 0;
  double ratio = 0.0;  // reduced / naive
};

inline std::vector<std::size_t> group_sizes(const Account& acc) {
  std::vector<std::size_t> out;
  for (const auto& g : acc.groups) out.push_back(g.keywords.size());
  return out;
}

/// Builds the input both ways and compares literal negative counts.
inline ReductionStats reduction_stats(BuildInput in) {
  ReductionStats st;
  in.config.mode = BuildMode::Naive;
  const Account naive = build_account(in);
  in.config.mode = BuildMode::Reduced;
  validate(in);
  const auto layer = build_c3(in);
  const Account reduced = build_account(in);

  st.n = in.rules.size();
  st.neras = layer.plan->neras;
  st.ntrans = layer.plan->ntrans;
  st.covered = layer.plan->selected.covered.size();
  st.k = reduced.groups.size();
  st.group_sizes = group_sizes(reduced);
  st.nk_formula = nk_exact({st.n, in.brands.size(), in.non_brands.size(), group_sizes(naive)});
  st.total_negatives_naive = count_negatives(naive);
  st.total_negatives_reduced = count_negatives(reduced);
  st.ratio = st.total_negatives_naive
                 ? static_cast<double>(st.total_negatives_reduced) / static_cast<double>(st.total_negatives_naive)
                 : 0.0;
  return st;
}

}  // namespace negkw
