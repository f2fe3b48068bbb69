#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "negkw/eraser.hpp"
#include "negkw/keyword.hpp"

namespace negkw {

inline constexpr std::size_t kDefaultLimit = 20000;

/// Currency amount in micro-units.
struct Money {
  std::int64_t micros = 0;

  static Money from_micros(std::int64_t m) {
    if (m < 0) throw Error(ErrorKind::InvalidInput, "negative amount");
    return Money{m};
  }
  friend auto operator<=>(const Money&, const Money&) = default;
};

struct ItemId {
  std::string id;

  explicit ItemId(std::string s) : id(std::move(s)) {
    if (id.empty()) throw Error(ErrorKind::InvalidInput, "empty item id");
  }
  friend auto operator<=>(const ItemId&, const ItemId&) = default;
  friend bool operator==(const ItemId&, const ItemId&) = default;
};

struct Rule {
  Keyword keyword;
  Money cpc;
  std::set<ItemId> items;

  Rule(Keyword k, Money c, std::set<ItemId> its)
      : keyword(std::move(k)), cpc(c), items(std::move(its)) {
    if (items.empty()) throw Error(ErrorKind::InvalidInput, "rule '" + keyword.str() + "' has no items");
  }
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Rules with pairwise distinct keywords, kept in insertion order.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules) {
    for (auto& r : rules) add(std::move(r));
  }

  void add(Rule r) {
    if (contains(r.keyword)) {
      throw Error(ErrorKind::DuplicateKeyword, "duplicate rule keyword '" + r.keyword.str() + "'");
    }
    rules_.push_back(std::move(r));
  }

  bool contains(const Keyword& k) const {
    return std::any_of(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.keyword == k; });
  }

  const Rule* find(const Keyword& k) const {
    for (const auto& r : rules_) {
      if (r.keyword == k) return &r;
    }
    return nullptr;
  }

  bool erase(const Keyword& k) {
    auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.keyword == k; });
    if (it == rules_.end()) return false;
    rules_.erase(it);
    return true;
  }

  std::vector<Rule>& rules() noexcept { return rules_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  /// SK in lexicographic order.
  std::vector<Keyword> keywords() const {
    std::vector<Keyword> out;
    out.reserve(rules_.size());
    for (const auto& r : rules_) out.push_back(r.keyword);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::vector<Rule> rules_;
};

struct TreeBranch;

/// Decision tree over item attributes; every path ends in a bid-bearing leaf.
class ProductTree {
 public:
  static ProductTree leaf(Money bid) {
    ProductTree t;
    t.bid_ = bid;
    return t;
  }
  static ProductTree node(std::string attribute, std::vector<TreeBranch> branches, ProductTree others);

  bool is_leaf() const noexcept { return bid_.has_value(); }
  Money bid() const { return *bid_; }
  const std::string& attribute() const noexcept { return attribute_; }
  const std::vector<TreeBranch>& branches() const noexcept { return branches_; }
  const ProductTree& others() const { return *others_; }

  /// Follows the item's attribute values down to a leaf bid.
  Money evaluate(const std::map<std::string, std::string>& item) const;

  friend bool operator==(const ProductTree& a, const ProductTree& b);

 private:
  ProductTree() = default;
  std::optional<Money> bid_;
  std::string attribute_;
  std::vector<TreeBranch> branches_;
  std::shared_ptr<const ProductTree> others_;
};

struct TreeBranch {
  std::string value;
  ProductTree tree;
  friend bool operator==(const TreeBranch&, const TreeBranch&) = default;
};

inline ProductTree ProductTree::node(std::string attribute, std::vector<TreeBranch> branches,
                                     ProductTree others) {
  ProductTree t;
  t.attribute_ = std::move(attribute);
  t.branches_ = std::move(branches);
  t.others_ = std::make_shared<const ProductTree>(std::move(others));
  return t;
}

inline Money ProductTree::evaluate(const std::map<std::string, std::string>& item) const {
  if (is_leaf()) return *bid_;
  auto it = item.find(attribute_);
  if (it != item.end()) {
    for (const auto& b : branches_) {
      if (b.value == it->second) return b.tree.evaluate(item);
    }
  }
  return others_->evaluate(item);
}

inline bool operator==(const ProductTree& a, const ProductTree& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.bid_ == b.bid_;
  return a.attribute_ == b.attribute_ && a.branches_ == b.branches_ && *a.others_ == *b.others_;
}

struct AdGroupTag {
  enum class Kind { RuleTarget, BrandTarget, CatchAll };
  Kind kind = Kind::CatchAll;
  std::optional<Keyword> keyword;  // rule keyword or brand

  static AdGroupTag rule(Keyword k) { return {Kind::RuleTarget, std::move(k)}; }
  static AdGroupTag brand(Keyword b) { return {Kind::BrandTarget, std::move(b)}; }
  static AdGroupTag catch_all() { return {Kind::CatchAll, std::nullopt}; }
  friend bool operator==(const AdGroupTag&, const AdGroupTag&) = default;
};

struct AdGroup {
  std::string name;
  NegativeSet negatives;
  ProductTree tree;
  AdGroupTag tag;
  friend bool operator==(const AdGroup&, const AdGroup&) = default;
};

enum class Priority { Low = 0, Medium = 1, High = 2 };

inline const char* to_string(Priority p) {
  switch (p) {
    case Priority::High: return "high";
    case Priority::Medium: return "medium";
    case Priority::Low: return "low";
  }
  return "?";
}

struct CampaignTag {
  enum class Kind { C1, C2, C3 };
  Kind kind = Kind::C1;
  int group = 0;  // C3 only, 1-based
  friend bool operator==(const CampaignTag&, const CampaignTag&) = default;
};

struct Campaign {
  std::string name;
  Priority priority = Priority::Low;
  NegativeSet negatives;
  std::vector<AdGroup> adgroups;
  CampaignTag tag;

  AdGroup* find_adgroup(const std::string& n) {
    for (auto& a : adgroups) {
      if (a.name == n) return &a;
    }
    return nullptr;
  }
  const AdGroup* find_adgroup(const std::string& n) const {
    return const_cast<Campaign*>(this)->find_adgroup(n);
  }
  friend bool operator==(const Campaign&, const Campaign&) = default;
};

/// One sk_i: the keywords a low-priority campaign exists for, and the erasers
/// that stand for them in the other low-priority campaigns.
struct KeywordGroup {
  std::string campaign;
  std::vector<Keyword> keywords;  // sorted
  std::vector<Eraser> erasers;    // sorted
  friend bool operator==(const KeywordGroup&, const KeywordGroup&) = default;
};

struct Account {
  std::vector<Campaign> campaigns;
  std::size_t limit = kDefaultLimit;
  std::vector<Keyword> brands;      // SB
  std::vector<Keyword> non_brands;  // SNB
  std::vector<KeywordGroup> groups;

  Campaign* find_campaign(const std::string& n) {
    for (auto& c : campaigns) {
      if (c.name == n) return &c;
    }
    return nullptr;
  }
  const Campaign* find_campaign(const std::string& n) const {
    return const_cast<Account*>(this)->find_campaign(n);
  }

  KeywordGroup* find_group(const std::string& campaign) {
    for (auto& g : groups) {
      if (g.campaign == campaign) return &g;
    }
    return nullptr;
  }
  const KeywordGroup* find_group(const std::string& campaign) const {
    return const_cast<Account*>(this)->find_group(campaign);
  }

  /// Group holding keyword k, or nullptr.
  const KeywordGroup* group_of(const Keyword& k) const {
    for (const auto& g : groups) {
      if (std::binary_search(g.keywords.begin(), g.keywords.end(), k)) return &g;
    }
    return nullptr;
  }

  /// SK, recovered from the partition, sorted.
  std::vector<Keyword> keywords() const {
    std::vector<Keyword> out;
    for (const auto& g : groups) out.insert(out.end(), g.keywords.begin(), g.keywords.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<const Campaign*> low_priority() const {
    std::vector<const Campaign*> out;
    for (const auto& c : campaigns) {
      if (c.tag.kind == CampaignTag::Kind::C3) out.push_back(&c);
    }
    return out;
  }

  /// Orders campaigns by (priority desc, group index, name).
  void canonicalize() {
    std::sort(campaigns.begin(), campaigns.end(), [](const Campaign& a, const Campaign& b) {
      if (a.priority != b.priority) return a.priority > b.priority;
      if (a.tag.group != b.tag.group) return a.tag.group < b.tag.group;
      return a.name < b.name;
    });
    std::sort(groups.begin(), groups.end(), [this](const KeywordGroup& a, const KeywordGroup& b) {
      auto* ca = find_campaign(a.campaign);
      auto* cb = find_campaign(b.campaign);
      int ga = ca ? ca->tag.group : 0;
      int gb = cb ? cb->tag.group : 0;
      if (ga != gb) return ga < gb;
      return a.campaign < b.campaign;
    });
  }

  friend bool operator==(const Account&, const Account&) = default;
};

inline std::size_t count_negatives(const Campaign& c) {
  std::size_t n = c.negatives.size();
  for (const auto& a : c.adgroups) n += a.negatives.size();
  return n;
}

/// Every campaign and AdGroup negative in the account.
inline std::size_t count_negatives(const Account& acc) {
  std::size_t n = 0;
  for (const auto& c : acc.campaigns) n += count_negatives(c);
  return n;
}

inline std::string c3_name(int group) { return "C3-" + std::to_string(group); }

}  // namespace negkw
