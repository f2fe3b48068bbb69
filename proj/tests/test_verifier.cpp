#include <gtest/gtest.h>

#include "support.hpp"

using namespace negkw;
using namespace negkw::testing;

namespace {

std::size_t count_kind(const std::vector<Finding>& fs, const std::string& kind, Finding::Severity s) {
  return static_cast<std::size_t>(
      std::count_if(fs.begin(), fs.end(), [&](const Finding& f) { return f.kind == kind && f.severity == s; }));
}

std::size_t errors(const std::vector<Finding>& fs) {
  return static_cast<std::size_t>(
      std::count_if(fs.begin(), fs.end(), [](const Finding& f) { return f.severity == Finding::Severity::Error; }));
}

}  // namespace

TEST(Verify, WorkedExamplePasses) {
  for (auto mode : {BuildMode::Naive, BuildMode::Reduced}) {
    const auto r = verify(shop_account(mode), 1000, 1);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.property1.checked, 11u);
    EXPECT_EQ(r.property2.checked, 1000u);
    EXPECT_EQ(r.property3.checked, 1000u);
    EXPECT_FALSE(r.property2.vacuous);
  }
}

TEST(Verify, MissingEraserYieldsAmbiguousCounterexamples) {
  auto acc = shop_account();
  auto* nike = acc.find_campaign(campaign_of(acc, kw("nike shoes")));
  ASSERT_TRUE(nike->negatives.erase(large_neg(kw("adidas"))));
  const auto r = verify_property1(acc);
  EXPECT_FALSE(r.pass);
  std::set<Keyword> bad;
  for (const auto& c : r.counterexamples) {
    EXPECT_EQ(c.disposition, Disposition::Ambiguous);
    bad.insert(c.query);
  }
  const auto adidas = kws({"adidas running shoes", "adidas superstar", "adidas superstar sneaker"});
  EXPECT_EQ(bad, std::set<Keyword>(adidas.begin(), adidas.end()));
  EXPECT_GT(count_kind(verify_structure(acc), "isolation", Finding::Severity::Error), 0u);
}

TEST(Verify, EmptyInputsAreVacuous) {
  EXPECT_TRUE(verify_property1(shop_account(), {}).vacuous);
  EXPECT_TRUE(verify_property1(shop_account(), {}).pass);
  BuildInput in{RuleSet({rule("blue umbrella"), rule("red hat")}), {}, {}, {}, {}};
  const auto r = verify_property2(build_account(in), 100, 1);
  EXPECT_TRUE(r.vacuous);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.checked, 0u);
}

TEST(Verify, ZeroProbesRejected) { EXPECT_THROW(verify_property2(shop_account(), 0, 1), Error); }

TEST(Verify, SingleProbeExamples) {
  const auto acc = shop_account();
  EXPECT_TRUE(simulate(acc, kw("nike sandals")).landed_in("C2", "nike"));
  EXPECT_TRUE(simulate(acc, kw("blue umbrella")).landed_in("C1", "catch-all"));
  const auto reebok = simulate(acc, kw("reebok"));
  EXPECT_NE(reebok.disposition, Disposition::Landed);
  EXPECT_NE(reebok.disposition, Disposition::Ambiguous);
}

TEST(Verify, NonSoldBrandIsReportedAsInfo) {
  const auto r = verify(shop_account(), 50, 1);
  EXPECT_EQ(count_kind(r.structural, "non-sold-brand", Finding::Severity::Info), 1u);
  EXPECT_EQ(count_kind(r.structural, "multi-brand", Finding::Severity::Info), 2u);
  EXPECT_EQ(errors(r.structural), 0u);
}

TEST(Verify, FreshBuildHasNoStructuralFindings) {
  for (auto mode : {BuildMode::Naive, BuildMode::Reduced}) {
    EXPECT_TRUE(verify_structure(shop_account(mode)).empty());
    EXPECT_TRUE(verify_structure(build_account(synthetic_input(matrix_spec(150, 2), mode))).empty());
  }
}

TEST(Verify, EmptyFillerPoolIsAGeneratorError) {
  BuildInput in{RuleSet({rule("nike"), rule("adidas")}), kws({"nike", "adidas"}), {}, {}, {}};
  const auto acc = build_account(in);
  try {
    verify_property3(acc, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Generator);
  }
  EXPECT_THROW(verify_property2(acc, 10, 1), Error);
}

TEST(Structure, LimitFinding) {
  auto acc = shop_account();
  acc.limit = 3;
  std::size_t over = 0;
  for (const auto& c : acc.campaigns) {
    if (c.negatives.size() > 3) ++over;
    for (const auto& a : c.adgroups) over += a.negatives.size() > 3;
  }
  EXPECT_EQ(count_kind(verify_structure(acc), "limit", Finding::Severity::Error), over);

  Account tiny;
  tiny.limit = 3;
  Campaign c;
  c.name = "C1";
  c.priority = Priority::High;
  c.tag = {CampaignTag::Kind::C1, 0};
  c.negatives = {exact_neg(kw("a")), exact_neg(kw("b")), exact_neg(kw("c")), exact_neg(kw("d"))};
  tiny.campaigns.push_back(c);
  const auto fs = verify_structure(tiny);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].kind, "limit");
}

TEST(Structure, PartitionOverlap) {
  auto acc = shop_account();
  const std::string a = campaign_of(acc, kw("air max"));
  for (auto& g : acc.groups) {
    if (g.campaign != a) {
      g.keywords.push_back(kw("air max"));
      break;
    }
  }
  EXPECT_EQ(count_kind(verify_structure(acc), "partition", Finding::Severity::Error), 1u);
}

TEST(Structure, CarriedNonStrictEraserIsAnError) {
  auto acc = shop_account();
  const std::string nike = campaign_of(acc, kw("nike shoes"));
  const std::string adidas = campaign_of(acc, kw("adidas superstar"));
  // {shoes} erases keywords in three groups; give it to the nike group and
  // carry it into the adidas campaign.
  for (auto& g : acc.groups) {
    if (g.campaign == nike) g.erasers.push_back(Eraser::large({"shoes"}));
  }
  acc.find_campaign(adidas)->negatives.insert(large_neg(kw("shoes")));
  const auto fs = verify_structure(acc);
  EXPECT_EQ(count_kind(fs, "strictness", Finding::Severity::Error), 1u);
  EXPECT_EQ(count_kind(fs, "strictness", Finding::Severity::Info), 1u);
}

TEST(Verify, ReadOnlyAndDeterministic) {
  const auto acc = build_account(synthetic_input(matrix_spec(100, 3), BuildMode::Reduced));
  const auto snapshot = render_account(acc);
  const auto a = to_json(verify(acc, 300, 42)).dump();
  const auto b = to_json(verify(acc, 300, 42)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(render_account(acc), snapshot);
}

TEST(Verify, ProbesAvoidSkAndOtherBrands) {
  const auto acc = shop_account();
  auto broken = acc;
  // With C2 gone, every brand probe misses; counterexamples show what was generated.
  std::erase_if(broken.campaigns, [](const Campaign& c) { return c.tag.kind == CampaignTag::Kind::C2; });
  const auto r = verify_property2(broken, 200, 7);
  EXPECT_FALSE(r.pass);
  const auto sk = acc.keywords();
  for (const auto& c : r.counterexamples) {
    EXPECT_FALSE(std::binary_search(sk.begin(), sk.end(), c.query));
    std::size_t brands = 0;
    for (const auto& b : acc.brands) brands += contains_phrase(c.query, b);
    EXPECT_EQ(brands, 1u) << c.query.str();
    EXPECT_FALSE(contains_phrase(c.query, kw("reebok")));
  }
  EXPECT_EQ(to_json(r).dump(), to_json(verify_property2(broken, 200, 7)).dump());
  EXPECT_NE(to_json(r).dump(), to_json(verify_property2(broken, 200, 8)).dump());
}
