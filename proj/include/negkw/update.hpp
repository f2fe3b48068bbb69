#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "negkw/account.hpp"
#include "negkw/eraser_engine.hpp"
#include "negkw/simulate.hpp"

namespace negkw {

/// One atomic edit of an account. Replaying a log in order reproduces the
/// edited account exactly.
struct Change {
  enum class Op {
    AddCampaign,
    RemoveCampaign,
    AddCampaignNegative,
    RemoveCampaignNegative,
    AddAdGroup,
    RemoveAdGroup,
    AddAdGroupNegative,
    RemoveAdGroupNegative,
    SetGroup,
    RemoveGroup,
  };
  Op op;
  std::string campaign;
  std::string adgroup;
  std::optional<NegativeKeyword> negative;
  std::optional<Campaign> campaign_value;
  std::optional<AdGroup> adgroup_value;
  std::optional<KeywordGroup> group;

  friend bool operator==(const Change&, const Change&) = default;
};

inline const char* to_string(Change::Op op) {
  switch (op) {
    case Change::Op::AddCampaign: return "add-campaign";
    case Change::Op::RemoveCampaign: return "remove-campaign";
    case Change::Op::AddCampaignNegative: return "add-campaign-negative";
    case Change::Op::RemoveCampaignNegative: return "remove-campaign-negative";
    case Change::Op::AddAdGroup: return "add-adgroup";
    case Change::Op::RemoveAdGroup: return "remove-adgroup";
    case Change::Op::AddAdGroupNegative: return "add-adgroup-negative";
    case Change::Op::RemoveAdGroupNegative: return "remove-adgroup-negative";
    case Change::Op::SetGroup: return "set-group";
    case Change::Op::RemoveGroup: return "remove-group";
  }
  return "?";
}

inline Change::Op change_op_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Change::Op::RemoveGroup); ++i) {
    auto op = static_cast<Change::Op>(i);
    if (s == to_string(op)) return op;
  }
  throw Error(ErrorKind::Parse, "unknown change op '" + std::string(s) + "'");
}

namespace detail {

inline Campaign& campaign_or_throw(Account& acc, const std::string& name) {
  auto* c = acc.find_campaign(name);
  if (!c) throw Error(ErrorKind::InvalidInput, "no campaign '" + name + "'");
  return *c;
}

inline AdGroup& adgroup_or_throw(Campaign& c, const std::string& name) {
  auto* a = c.find_adgroup(name);
  if (!a) throw Error(ErrorKind::InvalidInput, "no adgroup '" + name + "' in " + c.name);
  return *a;
}

}  // namespace detail

inline void apply_change(Account& acc, const Change& ch) {
  using Op = Change::Op;
  switch (ch.op) {
    case Op::AddCampaign:
      if (acc.find_campaign(ch.campaign_value->name)) {
        throw Error(ErrorKind::InvalidInput, "campaign '" + ch.campaign_value->name + "' exists");
      }
      acc.campaigns.push_back(*ch.campaign_value);
      break;
    case Op::RemoveCampaign: {
      detail::campaign_or_throw(acc, ch.campaign);
      std::erase_if(acc.campaigns, [&](const Campaign& c) { return c.name == ch.campaign; });
      break;
    }
    case Op::AddCampaignNegative:
      detail::campaign_or_throw(acc, ch.campaign).negatives.insert(*ch.negative);
      break;
    case Op::RemoveCampaignNegative:
      detail::campaign_or_throw(acc, ch.campaign).negatives.erase(*ch.negative);
      break;
    case Op::AddAdGroup: {
      auto& c = detail::campaign_or_throw(acc, ch.campaign);
      if (c.find_adgroup(ch.adgroup_value->name)) {
        throw Error(ErrorKind::InvalidInput, "adgroup '" + ch.adgroup_value->name + "' exists in " + c.name);
      }
      c.adgroups.push_back(*ch.adgroup_value);
      break;
    }
    case Op::RemoveAdGroup: {
      auto& c = detail::campaign_or_throw(acc, ch.campaign);
      detail::adgroup_or_throw(c, ch.adgroup);
      std::erase_if(c.adgroups, [&](const AdGroup& a) { return a.name == ch.adgroup; });
      break;
    }
    case Op::AddAdGroupNegative:
      detail::adgroup_or_throw(detail::campaign_or_throw(acc, ch.campaign), ch.adgroup)
          .negatives.insert(*ch.negative);
      break;
    case Op::RemoveAdGroupNegative:
      detail::adgroup_or_throw(detail::campaign_or_throw(acc, ch.campaign), ch.adgroup)
          .negatives.erase(*ch.negative);
      break;
    case Op::SetGroup:
      if (auto* g = acc.find_group(ch.group->campaign)) {
        *g = *ch.group;
      } else {
        acc.groups.push_back(*ch.group);
      }
      break;
    case Op::RemoveGroup:
      std::erase_if(acc.groups, [&](const KeywordGroup& g) { return g.campaign == ch.campaign; });
      break;
  }
}

inline Account replay(Account acc, const std::vector<Change>& log) {
  for (const auto& ch : log) apply_change(acc, ch);
  acc.canonicalize();
  return acc;
}

struct BalanceAdvice {
  bool rebalance = false;
  std::string reason;
};

/// Recommends a full rebuild once the partition drifts far from sqrt(n) groups of sqrt(n).
inline BalanceAdvice check_balance(const Account& acc, double factor = 2.0) {
  std::size_t n = 0, largest = 0;
  for (const auto& g : acc.groups) {
    n += g.keywords.size();
    largest = std::max(largest, g.keywords.size());
  }
  if (n == 0) return {};
  const double bound = factor * std::sqrt(static_cast<double>(n));
  if (static_cast<double>(largest) > bound) {
    return {true, "largest group has " + std::to_string(largest) + " keywords, above " + std::to_string(bound)};
  }
  if (static_cast<double>(acc.groups.size()) > bound) {
    return {true, std::to_string(acc.groups.size()) + " groups, above " + std::to_string(bound)};
  }
  return {};
}

enum class Strategy { NewCampaign, MinNegatives };

inline const char* to_string(Strategy s) { return s == Strategy::NewCampaign ? "new-campaign" : "min-negatives"; }

inline Strategy strategy_from_string(std::string_view s) {
  if (s == "new-campaign") return Strategy::NewCampaign;
  if (s == "min-negatives") return Strategy::MinNegatives;
  throw Error(ErrorKind::InvalidInput, "unknown strategy '" + std::string(s) + "'");
}

struct UpdateOptions {
  Strategy strategy = Strategy::NewCampaign;
  std::size_t max_words = 3;
  double balance_factor = 2.0;
};

struct UpdateOutcome {
  Account account;
  RuleSet rules;
  std::vector<Change> log;
  bool rebalance_recommended = false;
  std::string reason;
  std::vector<std::string> notes;
};

namespace detail {

/// Applies edits to a working copy and records them.
class Editor {
 public:
  explicit Editor(Account acc) : acc_(std::move(acc)) {}

  Account& account() noexcept { return acc_; }
  std::vector<Change>& log() noexcept { return log_; }

  void add_campaign(Campaign c) { push({Change::Op::AddCampaign, c.name, {}, {}, std::move(c), {}, {}}); }
  void remove_campaign(const std::string& c) { push({Change::Op::RemoveCampaign, c, {}, {}, {}, {}, {}}); }
  void add_negative(const std::string& c, const NegativeKeyword& n) {
    if (!detail::campaign_or_throw(acc_, c).negatives.count(n)) {
      push({Change::Op::AddCampaignNegative, c, {}, n, {}, {}, {}});
    }
  }
  void remove_negative(const std::string& c, const NegativeKeyword& n) {
    if (detail::campaign_or_throw(acc_, c).negatives.count(n)) {
      push({Change::Op::RemoveCampaignNegative, c, {}, n, {}, {}, {}});
    }
  }
  void add_adgroup(const std::string& c, AdGroup a) {
    push({Change::Op::AddAdGroup, c, a.name, {}, {}, std::move(a), {}});
  }
  void remove_adgroup(const std::string& c, const std::string& a) {
    push({Change::Op::RemoveAdGroup, c, a, {}, {}, {}, {}});
  }
  void add_adgroup_negative(const std::string& c, const std::string& a, const NegativeKeyword& n) {
    if (!adgroup_or_throw(campaign_or_throw(acc_, c), a).negatives.count(n)) {
      push({Change::Op::AddAdGroupNegative, c, a, n, {}, {}, {}});
    }
  }
  void remove_adgroup_negative(const std::string& c, const std::string& a, const NegativeKeyword& n) {
    if (adgroup_or_throw(campaign_or_throw(acc_, c), a).negatives.count(n)) {
      push({Change::Op::RemoveAdGroupNegative, c, a, n, {}, {}, {}});
    }
  }
  void set_group(KeywordGroup g) {
    std::sort(g.keywords.begin(), g.keywords.end());
    std::sort(g.erasers.begin(), g.erasers.end());
    if (auto* cur = acc_.find_group(g.campaign); cur && *cur == g) return;
    push({Change::Op::SetGroup, g.campaign, {}, {}, {}, {}, std::move(g)});
  }
  void remove_group(const std::string& c) { push({Change::Op::RemoveGroup, c, {}, {}, {}, {}, {}}); }

  /// Makes campaign `c` carry exactly `want`.
  void sync_negatives(const std::string& c, const NegativeSet& want) {
    const NegativeSet have = campaign_or_throw(acc_, c).negatives;
    for (const auto& n : have) {
      if (!want.count(n)) remove_negative(c, n);
    }
    for (const auto& n : want) {
      if (!have.count(n)) add_negative(c, n);
    }
  }

  Account finish() {
    acc_.canonicalize();
    return std::move(acc_);
  }

 private:
  void push(Change ch) {
    apply_change(acc_, ch);
    log_.push_back(std::move(ch));
  }
  Account acc_;
  std::vector<Change> log_;
};

inline std::vector<const Campaign*> c3_campaigns(const Account& acc) { return acc.low_priority(); }

inline const Campaign* tagged(const Account& acc, CampaignTag::Kind kind) {
  for (const auto& c : acc.campaigns) {
    if (c.tag.kind == kind) return &c;
  }
  return nullptr;
}

inline int group_index(const Account& acc, const KeywordGroup& g) {
  const auto* c = acc.find_campaign(g.campaign);
  return c ? c->tag.group : 0;
}

/// Negative for the existing AdGroups of a group gaining `kw`: a single word of
/// `kw` as a large negative when that word occurs in no other group keyword,
/// else `kw` itself as exact.
inline NegativeKeyword sibling_blocker(const Keyword& kw, const std::vector<Keyword>& others) {
  for (const auto& w : kw.tokens()) {
    bool clash = false;
    for (const auto& o : others) {
      const auto& t = o.tokens();
      if (std::find(t.begin(), t.end(), w) != t.end()) {
        clash = true;
        break;
      }
    }
    if (!clash) return large_neg(Keyword({w}));
  }
  return exact_neg(kw);
}

inline NegativeSet non_brand_negatives(const Account& acc) {
  NegativeSet out;
  for (const auto& nb : acc.non_brands) out.insert(phrase_neg(nb));
  return out;
}

/// Campaign negatives for group `index` when every C3 campaign carries the
/// erasers of all other groups.
inline NegativeSet c3_negatives(const Account& acc, const std::vector<KeywordGroup>& groups, std::size_t index) {
  NegativeSet out = non_brand_negatives(acc);
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (j == index) continue;
    for (const auto& e : groups[j].erasers) out.insert(e.as_negative());
  }
  return out;
}

/// Ensures every C3 campaign blocks every keyword outside its own group. A
/// keyword that slipped through gets an exact eraser in its group, carried by
/// every other C3 campaign.
inline void restore_isolation(Editor& ed) {
  for (;;) {
    const Account& acc = ed.account();
    std::optional<Keyword> leak;
    for (const auto* c : c3_campaigns(acc)) {
      const auto* own = acc.find_group(c->name);
      NegativeFilter f(c->negatives);
      for (const auto& g : acc.groups) {
        if (&g == own) continue;
        for (const auto& p : g.keywords) {
          if (!f.matches(p, word_set(p))) {
            leak = p;
            break;
          }
        }
        if (leak) break;
      }
      if (leak) break;
    }
    if (!leak) return;
    KeywordGroup g = *acc.group_of(*leak);
    g.erasers.push_back(Eraser::exact(*leak));
    const std::string home = g.campaign;
    ed.set_group(std::move(g));
    for (const auto* c : c3_campaigns(ed.account())) {
      if (c->name != home) ed.add_negative(c->name, exact_neg(*leak));
    }
  }
}

inline void check_limits(const Account& acc) {
  for (const auto& c : acc.campaigns) {
    if (c.negatives.size() > acc.limit) {
      throw Error(ErrorKind::LimitExceeded, "campaign " + c.name + " needs " + std::to_string(c.negatives.size()) +
                                                " negatives, limit is " + std::to_string(acc.limit));
    }
    for (const auto& a : c.adgroups) {
      if (a.negatives.size() > acc.limit) {
        throw Error(ErrorKind::LimitExceeded, "adgroup " + c.name + "/" + a.name + " exceeds the limit");
      }
    }
  }
}

inline UpdateOutcome finish(Editor& ed, RuleSet rules, const UpdateOptions& opts, std::vector<std::string> notes) {
  UpdateOutcome out{ed.finish(), std::move(rules), std::move(ed.log()), false, {}, std::move(notes)};
  check_limits(out.account);
  auto advice = check_balance(out.account, opts.balance_factor);
  out.rebalance_recommended = advice.rebalance;
  out.reason = std::move(advice.reason);
  return out;
}

/// Inserts `kw` into an existing group whose campaign admits it.
inline void insert_into_group(Editor& ed, const std::string& campaign, const Rule& rule) {
  const Keyword& kw = rule.keyword;
  KeywordGroup g = *ed.account().find_group(campaign);
  for (const auto& a : ed.account().find_campaign(campaign)->adgroups) {
    ed.add_adgroup_negative(campaign, a.name, sibling_blocker(kw, g.keywords));
  }
  AdGroup fresh{kw.str(), {}, ProductTree::leaf(rule.cpc), AdGroupTag::rule(kw)};
  for (const auto& o : g.keywords) fresh.negatives.insert(exact_neg(o));
  ed.add_adgroup(campaign, std::move(fresh));
  g.keywords.push_back(kw);
  ed.set_group(std::move(g));
}

}  // namespace detail

/// Adds a rule with a local edit: into the smallest group whose campaign
/// already admits the keyword, or else per `opts.strategy`.
inline UpdateOutcome add_rule(const Account& account, const RuleSet& rules, const Rule& rule,
                              const UpdateOptions& opts = {}) {
  const Keyword& kw = rule.keyword;
  const auto sk = account.keywords();
  if (std::binary_search(sk.begin(), sk.end(), kw) || rules.contains(kw)) {
    throw Error(ErrorKind::DuplicateKeyword, "keyword '" + kw.str() + "' already has a rule");
  }
  for (const auto& nb : account.non_brands) {
    if (contains_phrase(kw, nb)) {
      throw Error(ErrorKind::InvalidInput, "keyword '" + kw.str() + "' contains non-sold brand '" + nb.str() + "'");
    }
  }
  RuleSet new_rules = rules;
  new_rules.add(rule);
  detail::Editor ed(account);
  std::vector<std::string> notes;

  for (auto kind : {CampaignTag::Kind::C1, CampaignTag::Kind::C2}) {
    if (const auto* c = detail::tagged(account, kind)) ed.add_negative(c->name, exact_neg(kw));
  }

  const WordSet kw_words = word_set(kw);
  const KeywordGroup* chosen = nullptr;
  for (const auto& g : account.groups) {
    const auto* c = account.find_campaign(g.campaign);
    if (!c || NegativeFilter(c->negatives).matches(kw, kw_words)) continue;
    if (!chosen || g.keywords.size() < chosen->keywords.size() ||
        (g.keywords.size() == chosen->keywords.size() &&
         detail::group_index(account, g) < detail::group_index(account, *chosen))) {
      chosen = &g;
    }
  }

  if (chosen) {
    notes.push_back("admitted by " + chosen->campaign + "; joined its group");
    const std::string home = chosen->campaign;
    for (const auto* c : detail::c3_campaigns(account)) {
      if (c->name != home) ed.add_negative(c->name, exact_neg(kw));
    }
    detail::insert_into_group(ed, home, rule);
    KeywordGroup g = *ed.account().find_group(home);
    g.erasers.push_back(Eraser::exact(kw));
    ed.set_group(std::move(g));
  } else if (opts.strategy == Strategy::MinNegatives && !account.groups.empty()) {
    // Try the keyword in each group; re-reduce the groups whose erasers would erase it.
    std::vector<Keyword> sk_new = sk;
    sk_new.push_back(kw);
    std::sort(sk_new.begin(), sk_new.end());
    std::optional<std::vector<KeywordGroup>> best;
    std::size_t best_cost = 0, best_l = 0;
    for (std::size_t l = 0; l < account.groups.size(); ++l) {
      std::vector<KeywordGroup> groups = account.groups;
      for (std::size_t j = 0; j < groups.size(); ++j) {
        auto& g = groups[j];
        if (j == l) {
          g.keywords.push_back(kw);
          std::sort(g.keywords.begin(), g.keywords.end());
          bool covered = std::any_of(g.erasers.begin(), g.erasers.end(), [&](const Eraser& e) { return erases(e, kw); });
          if (!covered) g.erasers.push_back(Eraser::exact(kw));
        } else if (std::any_of(g.erasers.begin(), g.erasers.end(), [&](const Eraser& e) { return erases(e, kw); })) {
          g.erasers = reduce(g.keywords, sk_new, {opts.max_words});
        }
        std::sort(g.erasers.begin(), g.erasers.end());
      }
      std::size_t total_erasers = 0, adgroup = 0;
      for (const auto& g : groups) {
        total_erasers += g.erasers.size();
        adgroup += g.keywords.size() * (g.keywords.size() - 1);
      }
      const std::size_t cost = (groups.size() - 1) * total_erasers + adgroup;
      if (!best || cost < best_cost) {
        best = std::move(groups);
        best_cost = cost;
        best_l = l;
      }
    }
    const std::string home = account.groups[best_l].campaign;
    notes.push_back("erased by every low-priority campaign; moved into " + home + " with re-reduced erasers");
    for (std::size_t j = 0; j < best->size(); ++j) {
      if ((*best)[j].campaign == home) continue;
      ed.set_group((*best)[j]);
    }
    detail::insert_into_group(ed, home, rule);
    KeywordGroup g = (*best)[best_l];
    ed.set_group(g);
    const auto& groups = ed.account().groups;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      ed.sync_negatives(groups[i].campaign, detail::c3_negatives(ed.account(), groups, i));
    }
  } else {
    int next = 0;
    for (const auto* c : detail::c3_campaigns(account)) next = std::max(next, c->tag.group);
    Campaign c;
    c.name = c3_name(next + 1);
    c.priority = Priority::Low;
    c.tag = {CampaignTag::Kind::C3, next + 1};
    std::vector<Keyword> universe = sk;
    universe.push_back(kw);
    for (const auto& e : reduce(sk, universe, {opts.max_words})) c.negatives.insert(e.as_negative());
    for (const auto& nb : account.non_brands) c.negatives.insert(phrase_neg(nb));
    c.adgroups.push_back({kw.str(), {}, ProductTree::leaf(rule.cpc), AdGroupTag::rule(kw)});
    notes.push_back("erased by every low-priority campaign; created " + c.name);
    const std::string name = c.name;
    ed.add_campaign(std::move(c));
    ed.set_group({name, {kw}, {}});
  }
  detail::restore_isolation(ed);
  return detail::finish(ed, std::move(new_rules), opts, std::move(notes));
}

/// Removes a rule's keyword from every negative set and drops what no longer
/// erases anything.
inline UpdateOutcome remove_rule(const Account& account, const RuleSet& rules, const Keyword& kw,
                                 const UpdateOptions& opts = {}) {
  const KeywordGroup* home_group = account.group_of(kw);
  if (!home_group) throw Error(ErrorKind::UnknownKeyword, "no rule for '" + kw.str() + "'");
  RuleSet new_rules = rules;
  new_rules.erase(kw);
  detail::Editor ed(account);
  std::vector<std::string> notes;
  const std::string home = home_group->campaign;

  for (const auto& c : account.campaigns) {
    if (c.negatives.count(exact_neg(kw))) ed.remove_negative(c.name, exact_neg(kw));
  }

  KeywordGroup g = *home_group;
  std::erase(g.keywords, kw);
  if (g.keywords.empty()) {
    notes.push_back("group " + home + " emptied; campaign removed");
    ed.remove_campaign(home);
    ed.remove_group(home);
  } else {
    ed.remove_adgroup(home, kw.str());
    // Sibling AdGroups keep only negatives that still block another group keyword.
    for (const auto& a : ed.account().find_campaign(home)->adgroups) {
      for (const auto& n : NegativeSet(a.negatives)) {
        bool needed = std::any_of(g.keywords.begin(), g.keywords.end(), [&](const Keyword& p) {
          return a.tag.keyword != p && neg_matches(n, p);
        });
        if (!needed) ed.remove_adgroup_negative(home, a.name, n);
      }
    }
    std::erase_if(g.erasers, [&](const Eraser& e) {
      return std::none_of(g.keywords.begin(), g.keywords.end(), [&](const Keyword& p) { return erases(e, p); });
    });
    ed.set_group(std::move(g));
  }

  // Large campaign negatives that no longer erase any foreign keyword are dead weight.
  for (const auto* c : detail::c3_campaigns(ed.account())) {
    const auto* own = ed.account().find_group(c->name);
    for (const auto& n : NegativeSet(c->negatives)) {
      if (n.match_type != MatchType::Large) continue;
      bool needed = false;
      for (const auto& og : ed.account().groups) {
        if (&og == own) continue;
        needed = std::any_of(og.keywords.begin(), og.keywords.end(), [&](const Keyword& p) { return neg_matches(n, p); });
        if (needed) break;
      }
      if (!needed) ed.remove_negative(c->name, n);
    }
  }
  detail::restore_isolation(ed);
  return detail::finish(ed, std::move(new_rules), opts, std::move(notes));
}

/// Drops `item` from every rule; rules left without items are removed.
inline UpdateOutcome remove_item(const Account& account, const RuleSet& rules, const ItemId& item,
                                 const UpdateOptions& opts = {}) {
  UpdateOutcome out{account, rules, {}, false, {}, {}};
  std::vector<Keyword> doomed;
  for (auto& r : out.rules.rules()) {
    if (!r.items.count(item)) continue;
    if (r.items.size() == 1) {
      doomed.push_back(r.keyword);
    } else {
      r.items.erase(item);
      out.notes.push_back("rule '" + r.keyword.str() + "' no longer targets " + item.id);
    }
  }
  for (const auto& k : doomed) {
    auto step = remove_rule(out.account, out.rules, k, opts);
    out.account = std::move(step.account);
    out.rules = std::move(step.rules);
    out.log.insert(out.log.end(), step.log.begin(), step.log.end());
    out.notes.push_back("rule '" + k.str() + "' removed: " + item.id + " was its only item");
  }
  if (doomed.empty() && out.notes.empty()) out.notes.push_back("item " + item.id + " not referenced");
  auto advice = check_balance(out.account, opts.balance_factor);
  out.rebalance_recommended = advice.rebalance;
  out.reason = advice.reason;
  return out;
}

}  // namespace negkw
