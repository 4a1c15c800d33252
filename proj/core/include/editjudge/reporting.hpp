// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/aggregate.hpp"
#include "editjudge/agreement.hpp"

namespace editjudge {

/// Half-up rounding at `places` decimals, printed with exactly that many.
std::string format_fixed(double value, int places);
/// Half-up rounding to an integer count of 10^-places units.
long long scaled_round(double value, int places);

/// Judge cells closer than `strong` to the human cell are marked strong,
/// closer than `weak` marked weak. Distances are taken between the displayed
/// (3-decimal) values, so the boundaries are exact.
struct HighlightRule {
  double strong = 0.5;
  double weak = 1.0;
};

enum class Highlight { kNone, kWeak, kStrong };
Highlight classify(double human_mean, double judge_mean, const HighlightRule& rule = {});
std::string_view highlight_token(Highlight h);  // "[S] ", "[W] " or ""

/// Correlations at or above this value (after rounding) are bolded.
inline constexpr double kBoldThreshold = 0.25;
bool bolded(double coefficient);

/// A rendered table and its CSV twin.
struct ReportDocument {
  std::string name;
  std::string markdown;
  std::string csv;
};

/// Factor x edit-type table: a Human row and one row per judge grid for every
/// factor, then the Overall Average rows. Throws PreconditionError when no
/// judge grid is given or a grid is empty, and ShapeMismatchError when a
/// judge grid's present cells differ from the human grid's.
ReportDocument render_factor_table(const AggregateGrid& human,
                                   std::span<const AggregateGrid> judges,
                                   const HighlightRule& rule = {});
/// Same layout over the three category rollups plus Overall Average.
ReportDocument render_category_table(const AggregateGrid& human,
                                     std::span<const AggregateGrid> judges,
                                     const HighlightRule& rule = {});

/// One metric value for one task.
struct TaskMetricValue {
  std::string task_id;
  EditType edit_type = EditType::kAdd;
  double value = 0.0;
};

struct MetricColumn {
  std::string name;
  bool lower_is_better = false;
  std::vector<TaskMetricValue> values;
};

/// Dataset min-max scaling to [0,1], inverted when lower is better. +inf
/// maps to the best end, -inf to the worst; a constant column maps to 0.5.
std::vector<double> min_max_normalize(const MetricColumn& column);

/// Human Avg and judge Avg rows (Overall Average / 7) followed by one row per
/// metric. Metric type cells are mean/std over that type's normalized task
/// values; the metric All cell is over all tasks.
ReportDocument render_metric_table(const AggregateGrid& human,
                                   std::span<const AggregateGrid> judges,
                                   std::span<const MetricColumn> metrics);

/// Pointwise agreement between per-image human means and one evaluator.
struct PointwiseRow {
  std::string scope;  // factor key or "All"
  std::string evaluator;
  std::size_t n = 0;
  double mse = 0.0;
  double mae = 0.0;
  double acc = 0.0;
  double acc_pm1 = 0.0;
  std::optional<Correlation> pearson;  // absent when undefined
  std::optional<Correlation> spearman;
  std::optional<Correlation> kendall;
};

/// Twelve factor rows then the pooled "All" row.
std::vector<PointwiseRow> pointwise_rows(std::span<const ImageScores> human,
                                         std::span<const ImageScores> judge,
                                         const std::string& evaluator);
ReportDocument render_pointwise_table(std::span<const PointwiseRow> rows);

struct PairwiseRow {
  std::string evaluator;
  std::array<PairwiseResult, kFactorCount> factors{};
  PairwiseResult all;  // counts summed over factors
};

inline constexpr double kPairwiseMinGap = 2.0;

PairwiseRow pairwise_row(std::span<const ImageScores> human, std::span<const ImageScores> judge,
                         const std::string& evaluator, double min_gap = kPairwiseMinGap);
/// Bold marks the highest displayed accuracy of each column.
ReportDocument render_pairwise_table(std::span<const PairwiseRow> rows);

/// Choices behind every table, written as reports/metadata.json.
nlohmann::ordered_json report_metadata(const HighlightRule& rule);

/// Writes {name}.md and {name}.csv for each document into `dir`.
void write_reports(const std::filesystem::path& dir, std::span<const ReportDocument> docs);

}  // namespace editjudge
