#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "negkw/account.hpp"
#include "negkw/builder.hpp"
#include "negkw/simulate.hpp"
#include "negkw/update.hpp"
#include "negkw/verifier.hpp"

namespace negkw {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::vector<std::string> words_of(const std::vector<Keyword>& ks) {
  std::vector<std::string> out;
  for (const auto& k : ks) out.push_back(k.str());
  return out;
}

inline std::vector<Keyword> keywords_of(const json& j) {
  std::vector<Keyword> out;
  for (const auto& s : j) out.push_back(Keyword::parse(s.get<std::string>()));
  return out;
}

}  // namespace detail

inline json to_json(const NegativeKeyword& n) { return {{"keyword", n.keyword.str()}, {"match_type", to_string(n.match_type)}}; }

inline NegativeKeyword negative_from_json(const json& j) {
  return {Keyword::parse(detail::field(j, "keyword").get<std::string>()),
          match_type_from_string(detail::field(j, "match_type").get<std::string>())};
}

inline json to_json(const NegativeSet& negs) {
  json out = json::array();
  for (const auto& n : negs) out.push_back(to_json(n));
  return out;
}

inline NegativeSet negatives_from_json(const json& j) {
  NegativeSet out;
  for (const auto& n : j) out.insert(negative_from_json(n));
  return out;
}

inline json to_json(const ProductTree& t) {
  if (t.is_leaf()) return {{"bid_micros", t.bid().micros}};
  json branches = json::array();
  for (const auto& b : t.branches()) branches.push_back({{"value", b.value}, {"tree", to_json(b.tree)}});
  return {{"attribute", t.attribute()}, {"branches", branches}, {"others", to_json(t.others())}};
}

inline ProductTree tree_from_json(const json& j) {
  if (j.contains("bid_micros")) return ProductTree::leaf(Money::from_micros(j.at("bid_micros").get<std::int64_t>()));
  std::vector<TreeBranch> branches;
  for (const auto& b : detail::field(j, "branches")) {
    branches.push_back({detail::field(b, "value").get<std::string>(), tree_from_json(detail::field(b, "tree"))});
  }
  return ProductTree::node(detail::field(j, "attribute").get<std::string>(), std::move(branches),
                           tree_from_json(detail::field(j, "others")));
}

inline json to_json(const AdGroupTag& t) {
  switch (t.kind) {
    case AdGroupTag::Kind::RuleTarget: return {{"kind", "rule"}, {"keyword", t.keyword->str()}};
    case AdGroupTag::Kind::BrandTarget: return {{"kind", "brand"}, {"keyword", t.keyword->str()}};
    case AdGroupTag::Kind::CatchAll: return {{"kind", "catch-all"}};
  }
  return {};
}

inline AdGroupTag adgroup_tag_from_json(const json& j) {
  const auto kind = detail::field(j, "kind").get<std::string>();
  if (kind == "catch-all") return AdGroupTag::catch_all();
  auto k = Keyword::parse(detail::field(j, "keyword").get<std::string>());
  if (kind == "rule") return AdGroupTag::rule(std::move(k));
  if (kind == "brand") return AdGroupTag::brand(std::move(k));
  throw Error(ErrorKind::Parse, "unknown adgroup tag '" + kind + "'");
}

inline json to_json(const AdGroup& a) {
  return {{"name", a.name}, {"tag", to_json(a.tag)}, {"negatives", to_json(a.negatives)}, {"tree", to_json(a.tree)}};
}

inline AdGroup adgroup_from_json(const json& j) {
  return {detail::field(j, "name").get<std::string>(), negatives_from_json(detail::field(j, "negatives")),
          tree_from_json(detail::field(j, "tree")), adgroup_tag_from_json(detail::field(j, "tag"))};
}

inline json to_json(const CampaignTag& t) {
  switch (t.kind) {
    case CampaignTag::Kind::C1: return {{"kind", "c1"}};
    case CampaignTag::Kind::C2: return {{"kind", "c2"}};
    case CampaignTag::Kind::C3: return {{"kind", "c3"}, {"group", t.group}};
  }
  return {};
}

inline CampaignTag campaign_tag_from_json(const json& j) {
  const auto kind = detail::field(j, "kind").get<std::string>();
  if (kind == "c1") return {CampaignTag::Kind::C1, 0};
  if (kind == "c2") return {CampaignTag::Kind::C2, 0};
  if (kind == "c3") return {CampaignTag::Kind::C3, detail::field(j, "group").get<int>()};
  throw Error(ErrorKind::Parse, "unknown campaign tag '" + kind + "'");
}

inline Priority priority_from_string(std::string_view s) {
  if (s == "high") return Priority::High;
  if (s == "medium") return Priority::Medium;
  if (s == "low") return Priority::Low;
  throw Error(ErrorKind::Parse, "unknown priority '" + std::string(s) + "'");
}

inline json to_json(const Campaign& c) {
  json adgroups = json::array();
  for (const auto& a : c.adgroups) adgroups.push_back(to_json(a));
  return {{"name", c.name},
          {"priority", to_string(c.priority)},
          {"tag", to_json(c.tag)},
          {"negatives", to_json(c.negatives)},
          {"adgroups", adgroups}};
}

inline Campaign campaign_from_json(const json& j) {
  Campaign c;
  c.name = detail::field(j, "name").get<std::string>();
  c.priority = priority_from_string(detail::field(j, "priority").get<std::string>());
  c.tag = campaign_tag_from_json(detail::field(j, "tag"));
  c.negatives = negatives_from_json(detail::field(j, "negatives"));
  for (const auto& a : detail::field(j, "adgroups")) c.adgroups.push_back(adgroup_from_json(a));
  return c;
}

inline json to_json(const Eraser& e) {
  if (e.is_large()) return {{"kind", "large"}, {"words", e.words()}};
  return {{"kind", "exact"}, {"keyword", e.keyword().str()}};
}

inline Eraser eraser_from_json(const json& j) {
  const auto kind = detail::field(j, "kind").get<std::string>();
  if (kind == "large") return Eraser::large(detail::field(j, "words").get<std::vector<std::string>>());
  if (kind == "exact") return Eraser::exact(Keyword::parse(detail::field(j, "keyword").get<std::string>()));
  throw Error(ErrorKind::Parse, "unknown eraser kind '" + kind + "'");
}

inline json to_json(const KeywordGroup& g) {
  json erasers = json::array();
  for (const auto& e : g.erasers) erasers.push_back(to_json(e));
  return {{"campaign", g.campaign}, {"keywords", detail::words_of(g.keywords)}, {"erasers", erasers}};
}

inline KeywordGroup group_from_json(const json& j) {
  KeywordGroup g{detail::field(j, "campaign").get<std::string>(), detail::keywords_of(detail::field(j, "keywords")), {}};
  for (const auto& e : detail::field(j, "erasers")) g.erasers.push_back(eraser_from_json(e));
  return g;
}

/// Account snapshot. The partition and the eraser assignment are stored
/// side by side, both keyed by campaign name.
inline json to_json(const Account& acc) {
  json campaigns = json::array(), partition = json::array(), erasers = json::array();
  for (const auto& c : acc.campaigns) campaigns.push_back(to_json(c));
  for (const auto& g : acc.groups) {
    partition.push_back({{"campaign", g.campaign}, {"keywords", detail::words_of(g.keywords)}});
    json es = json::array();
    for (const auto& e : g.erasers) es.push_back(to_json(e));
    erasers.push_back({{"campaign", g.campaign}, {"erasers", es}});
  }
  return {{"limit", acc.limit},
          {"brands", detail::words_of(acc.brands)},
          {"non_brands", detail::words_of(acc.non_brands)},
          {"campaigns", campaigns},
          {"partition", partition},
          {"erasers", erasers}};
}

inline Account account_from_json(const json& j) {
  try {
    Account acc;
    acc.limit = detail::field(j, "limit").get<std::size_t>();
    acc.brands = detail::keywords_of(detail::field(j, "brands"));
    acc.non_brands = detail::keywords_of(detail::field(j, "non_brands"));
    for (const auto& c : detail::field(j, "campaigns")) acc.campaigns.push_back(campaign_from_json(c));
    for (const auto& p : detail::field(j, "partition")) {
      acc.groups.push_back({detail::field(p, "campaign").get<std::string>(), detail::keywords_of(detail::field(p, "keywords")), {}});
    }
    for (const auto& e : detail::field(j, "erasers")) {
      auto* g = acc.find_group(detail::field(e, "campaign").get<std::string>());
      if (!g) throw Error(ErrorKind::Parse, "erasers for a campaign without a partition entry");
      for (const auto& x : detail::field(e, "erasers")) g->erasers.push_back(eraser_from_json(x));
    }
    acc.canonicalize();
    return acc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("snapshot: ") + e.what());
  }
}

inline std::string render_account(const Account& acc) { return to_json(acc).dump(2) + "\n"; }

inline Account parse_account(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("snapshot: ") + e.what());
  }
  return account_from_json(j);
}

// ---- rules and brand lists ----

inline json to_json(const Rule& r) {
  std::vector<std::string> items;
  for (const auto& i : r.items) items.push_back(i.id);
  return {{"keyword", r.keyword.str()}, {"cpc_micros", r.cpc.micros}, {"items", items}};
}

/// One JSON object per line; blank lines are skipped. Errors carry the line number.
inline RuleSet parse_rules(std::istream& in) {
  RuleSet rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    try {
      const json j = json::parse(line);
      std::set<ItemId> items;
      for (const auto& i : detail::field(j, "items")) items.insert(ItemId(i.get<std::string>()));
      rules.add(Rule(Keyword::parse(detail::field(j, "keyword").get<std::string>()),
                     Money::from_micros(detail::field(j, "cpc_micros").get<std::int64_t>()), std::move(items)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, where + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.message());
    }
  }
  return rules;
}

inline RuleSet parse_rules(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_rules(in);
}

inline std::string render_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules.rules()) out += to_json(r).dump() + "\n";
  return out;
}

/// One brand per line; blank lines and lines starting with '#' are skipped.
inline std::vector<Keyword> parse_brands(std::istream& in) {
  std::vector<Keyword> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      auto k = Keyword::parse(line);
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + e.message());
    }
  }
  return out;
}

inline std::vector<Keyword> parse_brands(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_brands(in);
}

// ---- reports ----

inline json to_json(const Trajectory& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json step = {{"campaign", s.campaign}};
    if (s.blocked_by) {
      step["blocked_by"] = to_json(*s.blocked_by);
    } else {
      step["open_adgroups"] = s.open_adgroups;
    }
    steps.push_back(step);
  }
  json out = {{"query", t.query.str()}, {"steps", steps}, {"disposition", to_string(t.disposition)}};
  if (!t.campaign.empty()) out["campaign"] = t.campaign;
  if (!t.adgroup.empty()) out["adgroup"] = t.adgroup;
  if (!t.details.empty()) out["details"] = t.details;
  return out;
}

inline json to_json(const TrajectoryReport& r) {
  json ts = json::array(), counts = json::object();
  for (const auto& t : r.trajectories) ts.push_back(to_json(t));
  for (const auto& [d, n] : r.counts) counts[to_string(d)] = n;
  return {{"trajectories", ts}, {"counts", counts}};
}

inline json to_json(const PropertyResult& p) {
  json ce = json::array();
  for (const auto& c : p.counterexamples) {
    ce.push_back({{"query", c.query.str()},
                  {"expected", c.expected},
                  {"disposition", to_string(c.disposition)},
                  {"campaign", c.campaign},
                  {"adgroup", c.adgroup},
                  {"details", c.details}});
  }
  return {{"pass", p.pass}, {"vacuous", p.vacuous}, {"checked", p.checked}, {"counterexamples", ce}};
}

inline json to_json(const VerificationReport& r) {
  json findings = json::array();
  for (const auto& f : r.structural) {
    findings.push_back({{"severity", to_string(f.severity)}, {"kind", f.kind}, {"detail", f.detail}});
  }
  return {{"ok", r.ok()},
          {"property1", to_json(r.property1)},
          {"property2", to_json(r.property2)},
          {"property3", to_json(r.property3)},
          {"structural", findings}};
}

inline json to_json(const ReductionStats& s) {
  return {{"n", s.n},
          {"neras", s.neras},
          {"ntrans", s.ntrans},
          {"covered", s.covered},
          {"k", s.k},
          {"group_sizes", s.group_sizes},
          {"nk_formula", s.nk_formula},
          {"total_negatives_naive", s.total_negatives_naive},
          {"total_negatives_reduced", s.total_negatives_reduced},
          {"ratio", s.ratio}};
}

inline json to_json(const Change& c) {
  json out = {{"op", to_string(c.op)}, {"campaign", c.campaign}};
  if (!c.adgroup.empty()) out["adgroup"] = c.adgroup;
  if (c.negative) out["negative"] = to_json(*c.negative);
  if (c.campaign_value) out["campaign_value"] = to_json(*c.campaign_value);
  if (c.adgroup_value) out["adgroup_value"] = to_json(*c.adgroup_value);
  if (c.group) out["group"] = to_json(*c.group);
  return out;
}

inline Change change_from_json(const json& j) {
  Change c{change_op_from_string(detail::field(j, "op").get<std::string>()),
           detail::field(j, "campaign").get<std::string>(), j.value("adgroup", std::string{}), {}, {}, {}, {}};
  if (j.contains("negative")) c.negative = negative_from_json(j.at("negative"));
  if (j.contains("campaign_value")) c.campaign_value = campaign_from_json(j.at("campaign_value"));
  if (j.contains("adgroup_value")) c.adgroup_value = adgroup_from_json(j.at("adgroup_value"));
  if (j.contains("group")) c.group = group_from_json(j.at("group"));
  return c;
}

inline json to_json(const UpdateOutcome& o) {
  json log = json::array();
  for (const auto& c : o.log) log.push_back(to_json(c));
  return {{"changes", log},
          {"notes", o.notes},
          {"rebalance_recommended", o.rebalance_recommended},
          {"reason", o.reason}};
}

}  // namespace negkw
