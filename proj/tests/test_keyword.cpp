#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace negkw;
using negkw::testing::kw;

TEST(Normalize, LowercasesAndSplitsOnWhitespace) {
  EXPECT_EQ(normalize("Nike  Shoes").tokens(), (std::vector<std::string>{"nike", "shoes"}));
  EXPECT_EQ(normalize("\tAIR\nmax ").str(), "air max");
}

TEST(Normalize, KeepsHyphenatedToken) {
  auto k = normalize("tee-shirt");
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k.tokens()[0], "tee-shirt");
}

TEST(Normalize, RejectsBlank) {
  for (const char* raw : {"", "  ", "\t\n"}) {
    try {
      normalize(raw);
      FAIL() << "accepted '" << raw << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::MalformedKeyword);
    }
  }
}

TEST(Keyword, RejectsInvalidTokens) {
  EXPECT_THROW(Keyword(std::vector<std::string>{}), Error);
  EXPECT_THROW(Keyword(std::vector<std::string>{"Upper"}), Error);
  EXPECT_THROW(Keyword(std::vector<std::string>{"two words"}), Error);
  EXPECT_THROW(Keyword(std::vector<std::string>{""}), Error);
}

TEST(Normalize, Idempotent) {
  for (const char* raw : {"Nike Air  MAX", "large tee-shirt", "a", " x  y z "}) {
    auto once = normalize(raw);
    EXPECT_EQ(normalize(once.str()), once);
  }
}

TEST(WordSet, Examples) {
  EXPECT_EQ(word_set(kw("nike large shoes")), (WordSet{"large", "nike", "shoes"}));
  EXPECT_EQ(word_set(kw("air max air")), (WordSet{"air", "max"}));
  EXPECT_EQ(word_set(kw("garmin")), (WordSet{"garmin"}));
}

TEST(SubwordSet, NikeLargeShoes) {
  const std::set<Keyword> want{kw("nike"), kw("large"), kw("shoes"), kw("nike large"), kw("large shoes"),
                               kw("nike large shoes")};
  EXPECT_EQ(subword_set(kw("nike large shoes")), want);
  EXPECT_EQ(subword_set(kw("garmin")), std::set<Keyword>{kw("garmin")});
}

// Independent enumeration of contiguous runs by start/length.
std::set<Keyword> runs(const Keyword& p) {
  std::set<Keyword> out;
  const auto& t = p.tokens();
  for (std::size_t len = 1; len <= t.size(); ++len) {
    for (std::size_t s = 0; s + len <= t.size(); ++s) {
      out.insert(Keyword(std::vector<std::string>(t.begin() + s, t.begin() + s + len)));
    }
  }
  return out;
}

TEST(SubwordSet, MatchesBruteForce) {
  EXPECT_EQ(subword_set(kw("air max")), runs(kw("air max")));
  std::mt19937_64 rng(7);
  for (const auto& p : negkw::testing::random_keywords(rng, 200, 4, 5)) {
    auto s = subword_set(p);
    EXPECT_EQ(s, runs(p));
    EXPECT_TRUE(s.count(p));
    for (const auto& t : p.tokens()) EXPECT_TRUE(s.count(Keyword({t})));
  }
}

TEST(NegMatches, Examples) {
  EXPECT_FALSE(neg_matches(exact_neg(kw("nike shoes")), kw("nike large shoes")));
  EXPECT_FALSE(neg_matches(phrase_neg(kw("nike shoes")), kw("nike large shoes")));
  EXPECT_TRUE(neg_matches(phrase_neg(kw("large shoes")), kw("nike large shoes")));
  EXPECT_TRUE(neg_matches(large_neg(kw("nike shoes")), kw("nike large shoes")));
  EXPECT_TRUE(neg_matches(exact_neg(kw("nike shoes")), kw("nike shoes")));
}

TEST(NegMatches, PermissivenessIsMonotone) {
  std::mt19937_64 rng(11);
  const auto pool = negkw::testing::random_keywords(rng, 120, 3, 4);
  for (const auto& n : pool) {
    for (const auto& q : pool) {
      const bool e = neg_matches(exact_neg(n), q);
      const bool p = neg_matches(phrase_neg(n), q);
      const bool l = neg_matches(large_neg(n), q);
      EXPECT_TRUE(!e || p) << n.str() << " / " << q.str();
      EXPECT_TRUE(!p || l) << n.str() << " / " << q.str();
      // Oracle for the phrase case: membership in the brute-force run set.
      EXPECT_EQ(p, runs(q).count(n) == 1);
    }
  }
}

TEST(NegMatches, LargeIgnoresOrderAndDuplicates) {
  std::mt19937_64 rng(3);
  const auto pool = negkw::testing::random_keywords(rng, 80, 4, 3);
  for (const auto& n : pool) {
    for (const auto& q : pool) {
      auto t = q.tokens();
      std::shuffle(t.begin(), t.end(), rng);
      t.push_back(t.front());
      EXPECT_EQ(neg_matches(large_neg(n), q), neg_matches(large_neg(n), Keyword(t)));
    }
  }
}

TEST(MatchType, RoundTripsNames) {
  for (auto m : {MatchType::Exact, MatchType::Phrase, MatchType::Large}) {
    EXPECT_EQ(match_type_from_string(to_string(m)), m);
  }
  EXPECT_EQ(match_type_from_string("broad"), MatchType::Large);
  EXPECT_THROW(match_type_from_string("fuzzy"), Error);
}

TEST(NegativeKeyword, OrderedByTypeThenKeyword) {
  NegativeSet s{large_neg(kw("a")), exact_neg(kw("b")), phrase_neg(kw("a")), exact_neg(kw("a"))};
  std::vector<std::string> got;
  for (const auto& n : s) got.push_back(render(n));
  EXPECT_EQ(got, (std::vector<std::string>{"a (exact)", "b (exact)", "a (phrase)", "a (large)"}));
}
