// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/taxonomy.hpp"

#include <set>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "editjudge/errors.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

TEST(Taxonomy, TwelveFactorsInCanonicalOrder) {
  const auto factors = all_factors();
  ASSERT_EQ(factors.size(), 12u);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    EXPECT_EQ(factors[i].order, i);
    EXPECT_EQ(static_cast<std::size_t>(factors[i].id), i);
  }
  EXPECT_EQ(factors.front().key, "unchanged_regions");
  EXPECT_EQ(factors.back().key, "plausibility");
}

TEST(Taxonomy, KeysAndAbbreviationsAreDistinct) {
  std::set<std::string_view> keys;
  std::set<std::string_view> abbrevs;
  for (const auto& f : all_factors()) {
    keys.insert(f.key);
    abbrevs.insert(f.abbreviation);
    EXPECT_FALSE(f.question.empty()) << f.key;
    EXPECT_FALSE(f.name.empty()) << f.key;
  }
  EXPECT_EQ(keys.size(), 12u);
  EXPECT_EQ(abbrevs.size(), 12u);
}

TEST(Taxonomy, CategoryMembership) {
  EXPECT_EQ(factors_in(Category::kImagePreservation).size(), 3u);
  EXPECT_EQ(factors_in(Category::kEditQuality).size(), 6u);
  EXPECT_EQ(factors_in(Category::kInstructionFidelity).size(), 3u);
  std::size_t total = 0;
  for (auto c : kAllCategories) {
    for (auto id : factors_in(c)) EXPECT_EQ(factor(id).category, c);
    total += factors_in(c).size();
    EXPECT_EQ(category_from_key(category_key(c)), c);
  }
  EXPECT_EQ(total, kFactorCount);
  EXPECT_EQ(category_from_key("nope"), std::nullopt);
}

TEST(Taxonomy, AnchorsAtOneFourSeven) {
  for (const auto& f : all_factors()) {
    EXPECT_EQ(f.anchors[0].level, 1) << f.key;
    EXPECT_EQ(f.anchors[1].level, 4) << f.key;
    EXPECT_EQ(f.anchors[2].level, 7) << f.key;
    for (const auto& a : f.anchors) EXPECT_FALSE(a.description.empty()) << f.key;
  }
}

TEST(Taxonomy, KeyLookupRoundTrips) {
  for (const auto& f : all_factors()) EXPECT_EQ(factor_from_key(f.key), f.id);
  EXPECT_EQ(factor_from_key("Alignment"), std::nullopt);
  EXPECT_EQ(factor_from_key("overall"), std::nullopt);
}

TEST(Taxonomy, LikertLabels) {
  EXPECT_EQ(likert_label(1), "Strongly Disagree");
  EXPECT_EQ(likert_label(4), "Neither Agree nor Disagree");
  EXPECT_EQ(likert_label(7), "Strongly Agree");
  EXPECT_THROW(likert_label(0), ValidationError);
  EXPECT_THROW(likert_label(8), ValidationError);
}

TEST(LikertScore, AcceptsOneToSeven) {
  for (int v = 1; v <= 7; ++v) EXPECT_EQ(LikertScore::from_int(v).value(), v);
  EXPECT_THROW(LikertScore::from_int(0), ValidationError);
  EXPECT_THROW(LikertScore::from_int(8), ValidationError);
}

TEST(LikertScore, JsonRejectsNonIntegers) {
  using nlohmann::json;
  EXPECT_EQ(LikertScore::from_json(json(5)).value(), 5);
  EXPECT_THROW(LikertScore::from_json(json(7.5)), ValidationError);
  EXPECT_THROW(LikertScore::from_json(json::parse("6.0")), ValidationError);
  EXPECT_THROW(LikertScore::from_json(json("7")), ValidationError);
  EXPECT_THROW(LikertScore::from_json(json(nullptr)), ValidationError);
  try {
    LikertScore::from_json(json(9), "seamlessness");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "seamlessness");
  }
}

TEST(FactorScores, OverallIsUnweightedMean) {
  FactorScores s;
  EXPECT_FALSE(s.complete());
  EXPECT_EQ(s.missing().size(), 12u);
  int v = 1;
  for (const auto& f : all_factors()) {
    s.set(f.id, LikertScore::from_int(v));
    v = v % 7 + 1;
  }
  // 1..7 then 1..5: (28 + 15) / 12
  EXPECT_DOUBLE_EQ(overall_from_factors(s), 43.0 / 12.0);
}

TEST(FactorScores, MissingFactorIsNamed) {
  FactorScores s;
  for (const auto& f : all_factors()) {
    if (f.id != FactorId::kSeamlessness) s.set(f.id, LikertScore::from_int(4));
  }
  EXPECT_EQ(s.missing(), std::vector<FactorId>{FactorId::kSeamlessness});
  try {
    overall_from_factors(s);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "seamlessness");
  }
}

TEST(Taxonomy, CommittedDataFileMatches) {
  const auto committed =
      nlohmann::json::parse(testing::slurp(testing::source_dir() / "data" / "taxonomy.json"));
  EXPECT_EQ(committed, taxonomy_json())
      << "data/taxonomy.json is stale; regenerate it from taxonomy_json()";
}

TEST(Taxonomy, JsonCoversEveryFactorAndOverall) {
  const auto j = taxonomy_json();
  ASSERT_EQ(j["factors"].size(), 12u);
  ASSERT_EQ(j["categories"].size(), 3u);
  EXPECT_EQ(j["overall"]["id"], "overall");
  EXPECT_EQ(j["likert"].size(), 7u);
}

}  // namespace
}  // namespace editjudge
