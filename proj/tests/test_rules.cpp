#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "biclust/biclust.hpp"
#include "oracles.hpp"

using namespace biclust;

namespace {

BinaryContext six_context() { return BinaryContext::from_rows(golden::six_all_pairs_binary()); }

}  // namespace

TEST(ExtractIgb, SixByFifteenExampleGivesExactlyFiveRules) {
  const auto ctx = six_context();
  const auto rules = extract_igb(ctx, 0.3, 0.8);
  ASSERT_EQ(rules.size(), 5u);
  for (const auto& spec : golden::six_rules()) {
    const auto* r = golden::find_rule(rules, ctx.attributes(), spec);
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->support, 2.0 / 6.0);
    EXPECT_EQ(r->confidence, 1.0);
  }
}

TEST(ExtractIgb, FortyPercentSupportLeavesNoRules) {
  // at 40% a rule needs three genes; no pair of columns is shared by three genes
  EXPECT_TRUE(extract_igb(six_context(), 0.4, 0.8).empty());
}

TEST(ExtractIgb, SupportingGenesOfThreeImpliesFour) {
  const auto ctx = six_context();
  const auto rules = extract_igb(ctx, 0.3, 0.8);
  const auto* r = golden::find_rule(rules, ctx.attributes(), {{3}, {4}});
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(supporting_objects(ctx, *r), to_bitset(6, {2, 5}));
}

TEST(ExtractIgb, SignSplitExamples) {
  const auto pos = BinaryContext::from_rows(golden::nbic_positive());
  const auto neg = BinaryContext::from_rows(golden::nbic_negative());
  for (const auto* ctx : {&pos, &neg}) {
    const auto rules = extract_igb(*ctx, 0.2, 0.9);
    ASSERT_EQ(rules.size(), 6u);
    for (const auto& spec : golden::nbic_rules()) {
      const auto* r = golden::find_rule(rules, 6, spec);
      ASSERT_NE(r, nullptr);
      EXPECT_EQ(r->support, 0.4);
      EXPECT_EQ(r->confidence, 1.0);
    }
  }
}

TEST(ExtractIgb, EmptyPremiseWhenEverythingIsUniversal) {
  const auto rules = extract_igb(BinaryContext::from_rows({{1, 1}, {1, 1}}), 0.5, 0.5);
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_TRUE(rules[0].premise.none());
  EXPECT_EQ(rules[0].conclusion.count(), 2u);
}

TEST(ExtractIgb, EmptyContextHasNoRules) {
  EXPECT_TRUE(extract_igb(BinaryContext::from_rows({{0, 0, 0}, {0, 0, 0}}), 0.1, 0.1).empty());
}

TEST(ExtractIgb, RejectsBadRatios) {
  EXPECT_THROW(extract_igb(six_context(), 0.0, 0.5), ConfigError);
  EXPECT_THROW(extract_igb(six_context(), 0.5, 1.5), ConfigError);
}

TEST(ExtractIgb, OrderedBySupportThenConfidence) {
  std::mt19937_64 rng(4);
  const auto grid = oracle::random_grid(rng, 10, 8, 0.5);
  const auto rules = extract_igb(oracle::to_context(grid, 8), 0.2, 0.5);
  for (std::size_t i = 1; i < rules.size(); ++i) {
    EXPECT_GE(rules[i - 1].support, rules[i].support);
    if (rules[i - 1].support == rules[i].support) EXPECT_GE(rules[i - 1].confidence, rules[i].confidence);
  }
}

TEST(ExtractIgb, MatchesDefinitionOnRandomContexts) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 10;
    const auto grid = oracle::random_grid(rng, n, m, 0.2 + 0.6 * (rng() % 100) / 100.0);
    const double minsupp = 0.05 + 0.5 * (rng() % 100) / 100.0;
    const double minconf = 0.3 + 0.65 * (rng() % 100) / 100.0;
    EXPECT_EQ(oracle::keys_of(extract_igb(oracle::to_context(grid, m), minsupp, minconf)),
              oracle::igb(grid, m, minsupp, minconf))
        << "trial " << trial << " minsupp " << minsupp << " minconf " << minconf;
  }
}

TEST(MineFrequentClosed, ClosedSetsWithGenerators) {
  const auto ctx = six_context();
  const auto closed = mine_frequent_closed(ctx, 0.3);
  // support >= 2: C4, C9, C1, C3C4, C7C8, C4C11, C9C15
  ASSERT_EQ(closed.size(), 7u);
  for (const auto& c : closed) {
    EXPECT_EQ(close_itemset(ctx, c.items), c.items);
    EXPECT_GE(c.support_count, 2u);
    EXPECT_EQ(c.generators, minimal_generators(ctx, c.items));
    for (const auto& g : c.generators) EXPECT_EQ(close_itemset(ctx, g), c.items);
  }
}

TEST(MinimalGenerators, KnownCases) {
  const auto ctx = six_context();
  // {C3, C4}: C3 alone closes to it, C4 does not
  const auto gens = minimal_generators(ctx, to_bitset(15, {2, 3}));
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_EQ(gens[0], to_bitset(15, {2}));
  // {C7, C8}: both singletons generate it
  EXPECT_EQ(minimal_generators(ctx, to_bitset(15, {6, 7})).size(), 2u);
  EXPECT_THROW(minimal_generators(ctx, to_bitset(15, {2})), NotClosedError);
}

TEST(MinimalGenerators, MatchBruteForce) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng() % 8;
    const auto grid = oracle::random_grid(rng, 1 + rng() % 8, m, 0.5);
    const auto ctx = oracle::to_context(grid, m);
    for (const auto& c : enumerate_concepts(ctx)) {
      std::set<oracle::Mask> want;
      const oracle::Mask closed = oracle::to_mask(c.intent);
      for (oracle::Mask g = closed;; g = (g - 1) & closed) {
        auto close = [&](oracle::Mask x) { return oracle::intent(grid, oracle::extent(grid, x), m); };
        if (close(g) == closed) {
          bool minimal = true;
          for (std::size_t b = 0; b < m; ++b)
            if ((g >> b & 1U) && close(g & ~(oracle::Mask{1} << b)) == closed) minimal = false;
          if (minimal) want.insert(g);
        }
        if (g == 0) break;
      }
      std::set<oracle::Mask> got;
      for (const auto& g : minimal_generators(ctx, c.intent)) got.insert(oracle::to_mask(g));
      EXPECT_EQ(got, want);
    }
  }
}

TEST(WriteRulesTsv, ListsAttributeIds) {
  const auto ctx = six_context();
  std::ostringstream out;
  write_rules_tsv(out, ctx, extract_igb(ctx, 0.3, 0.8));
  EXPECT_NE(out.str().find("a3\ta4\t0.3333333333333333\t1\n"), std::string::npos);
}
