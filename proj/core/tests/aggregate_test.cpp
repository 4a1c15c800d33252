// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/aggregate.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "editjudge/errors.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

using nlohmann::json;

RatedSheet sheet(std::string image, EditType type, std::string rater, double all,
                 std::optional<double> overall = std::nullopt) {
  RatedSheet s;
  s.image_id = std::move(image);
  s.edit_type = type;
  s.rater = std::move(rater);
  s.factors.fill(all);
  s.overall_question = overall;
  return s;
}

TEST(Aggregate, TwoImagesFourAndSix) {
  const std::vector<RatedSheet> sheets{sheet("a", EditType::kAdd, "r", 4),
                                       sheet("b", EditType::kAdd, "r", 6)};
  const auto g = aggregate(std::span<const RatedSheet>(sheets));
  const auto& cell = g.row(FactorId::kAlignment)[column_of(EditType::kAdd)];
  ASSERT_TRUE(cell);
  EXPECT_DOUBLE_EQ(cell->mean, 5.0);
  EXPECT_DOUBLE_EQ(cell->std, 1.0);
  EXPECT_EQ(cell->count, 2u);
  // Only one type present: the All column is that type's mean with zero spread.
  EXPECT_DOUBLE_EQ(g.row(FactorId::kAlignment)[kAllColumn]->mean, 5.0);
  EXPECT_DOUBLE_EQ(g.row(FactorId::kAlignment)[kAllColumn]->std, 0.0);
  EXPECT_FALSE(g.row(FactorId::kAlignment)[column_of(EditType::kRemove)]);
  EXPECT_FALSE(g.overall_question[0]);
}

TEST(Aggregate, PerImageMeanThenTypeCell) {
  // Image a: raters give 3 and 6 -> 4.5; image b: 7 -> 7.
  const std::vector<RatedSheet> sheets{sheet("a", EditType::kRemove, "p2", 6, 6),
                                       sheet("b", EditType::kRemove, "p1", 7, 7),
                                       sheet("a", EditType::kRemove, "p1", 3, 2)};
  const auto images = per_image_means(sheets);
  ASSERT_EQ(images.size(), 2u);
  EXPECT_EQ(images[0].image_id, "a");
  EXPECT_EQ(images[0].raters, 2u);
  EXPECT_DOUBLE_EQ(images[0].factors[0], 4.5);
  EXPECT_DOUBLE_EQ(*images[0].overall_question, 4.0);
  const auto g = aggregate(std::span<const ImageScores>(images));
  const auto& c = g.row(FactorId::kUnchangedRegions)[column_of(EditType::kRemove)];
  EXPECT_DOUBLE_EQ(c->mean, 5.75);
  EXPECT_DOUBLE_EQ(c->std, 1.25);
  EXPECT_DOUBLE_EQ(g.overall_question[column_of(EditType::kRemove)]->mean, 5.5);
}

TEST(Aggregate, AllColumnAveragesTypeMeans) {
  // Add has 1 image at 2, Remove has 3 images at 6: All = mean(2, 6) = 4,
  // not the image-weighted 5.
  std::vector<RatedSheet> sheets{sheet("a", EditType::kAdd, "r", 2)};
  for (std::string id : {"b", "c", "d"}) sheets.push_back(sheet(id, EditType::kRemove, "r", 6));
  const auto g = aggregate(std::span<const RatedSheet>(sheets));
  const auto& all = g.row(FactorId::kPlausibility)[kAllColumn];
  EXPECT_DOUBLE_EQ(all->mean, 4.0);
  EXPECT_DOUBLE_EQ(all->std, 2.0);
  EXPECT_EQ(all->count, 2u);
}

TEST(Aggregate, CategoryAndOverallRollups) {
  RatedSheet s = sheet("a", EditType::kAction, "r", 1);
  for (std::size_t f = 0; f < kFactorCount; ++f) s.factors[f] = static_cast<double>(f % 7 + 1);
  const std::vector<RatedSheet> sheets{s};
  const auto g = aggregate(std::span<const RatedSheet>(sheets));
  const auto col = column_of(EditType::kAction);
  // Image preservation holds factors 0..2 -> 1, 2, 3.
  EXPECT_DOUBLE_EQ(g.row(Category::kImagePreservation)[col]->mean, 2.0);
  EXPECT_NEAR(g.row(Category::kImagePreservation)[col]->std, std::sqrt(2.0 / 3.0), 1e-15);
  // Twelve values 1..7,1..5 -> 43/12.
  EXPECT_DOUBLE_EQ(g.overall_average[col]->mean, 43.0 / 12.0);
  EXPECT_EQ(g.overall_average[col]->count, 12u);
  EXPECT_FALSE(g.overall_average[column_of(EditType::kAdd)]);
}

TEST(Aggregate, ConflictingEditTypeRejected) {
  const std::vector<RatedSheet> sheets{sheet("a", EditType::kAdd, "p1", 4),
                                       sheet("a", EditType::kRemove, "p2", 4)};
  EXPECT_THROW(per_image_means(sheets), ValidationError);
}

TEST(Aggregate, InputOrderDoesNotMatter) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> likert(1, 7);
  std::vector<RatedSheet> sheets;
  for (int i = 0; i < 30; ++i) {
    for (int r = 0; r < 3; ++r) {
      auto s = sheet("img" + std::to_string(i), kAllEditTypes[static_cast<std::size_t>(i % 6)],
                     "r" + std::to_string(r), 0, likert(rng));
      for (auto& f : s.factors) f = likert(rng);
      sheets.push_back(s);
    }
  }
  const auto a = grid_to_json(aggregate(std::span<const RatedSheet>(sheets)));
  std::shuffle(sheets.begin(), sheets.end(), rng);
  EXPECT_EQ(grid_to_json(aggregate(std::span<const RatedSheet>(sheets))).dump(), a.dump());
}

TEST(Aggregate, SpreadIsSampleStd) {
  const std::vector<RatedSheet> sheets{sheet("a", EditType::kAdd, "r", 4),
                                       sheet("b", EditType::kRemove, "r", 6)};
  const auto g = aggregate(std::span<const RatedSheet>(sheets));
  EXPECT_DOUBLE_EQ(g.factor_spread[0]->std, std::sqrt(2.0));
  const std::vector<RatedSheet> one{sheet("a", EditType::kAdd, "r", 4)};
  EXPECT_FALSE(aggregate(std::span<const RatedSheet>(one)).factor_spread[0]);
}

TEST(Aggregate, PooledSeriesIds) {
  const std::vector<RatedSheet> sheets{sheet("a", EditType::kAdd, "r", 4)};
  const auto images = per_image_means(sheets);
  const auto pooled = pooled_series(images);
  EXPECT_EQ(pooled.size(), 12u);
  EXPECT_EQ(pooled.ids().front(), "a/unchanged_regions");
  EXPECT_EQ(factor_series(images, FactorId::kAlignment).ids(), std::vector<std::string>{"a"});
}

TEST(Aggregate, BenchFixtureEqualsOracleExactly) {
  const auto expected = json::parse(testing::slurp(testing::golden_dir() / "bench_expected.json"));
  const auto records = load_records(testing::bench_dir() / "records.jsonl");
  const auto human = aggregate(std::span<const RatedSheet>(sheets_from_records(records)), "Human");
  const auto diff_h = testing::json_diff(json::parse(grid_to_json(human).dump()),
                                         expected["human"], 0.0);
  EXPECT_TRUE(diff_h.empty()) << diff_h.size() << " mismatches, first: " << diff_h.front();

  const auto verdicts =
      load_verdicts(testing::bench_dir() / "verdicts" / "fixture-judge_main_online.jsonl");
  const auto judge = aggregate(std::span<const RatedSheet>(sheets_from_verdicts(verdicts)),
                               "fixture-judge main online");
  const auto diff_j = testing::json_diff(json::parse(grid_to_json(judge).dump()),
                                         expected["judge"], 0.0);
  EXPECT_TRUE(diff_j.empty()) << diff_j.size() << " mismatches, first: " << diff_j.front();
}

}  // namespace
}  // namespace editjudge
