// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/agreement.hpp"
#include "editjudge/dataset.hpp"
#include "editjudge/judge.hpp"
#include "editjudge/taxonomy.hpp"

namespace editjudge {

/// One producer's twelve factor scores for one image. Human sheets also carry
/// the answer to the overall question; judge sheets do not.
struct RatedSheet {
  std::string image_id;
  EditType edit_type = EditType::kAdd;
  std::string rater;
  std::array<double, kFactorCount> factors{};
  std::optional<double> overall_question;
};

std::vector<RatedSheet> sheets_from_records(std::span<const EvaluationRecord> records);
std::vector<RatedSheet> sheets_from_verdicts(std::span<const JudgeVerdict> verdicts);

/// Scores of one image averaged over its raters.
struct ImageScores {
  std::string image_id;
  EditType edit_type = EditType::kAdd;
  std::size_t raters = 0;
  std::array<double, kFactorCount> factors{};
  std::optional<double> overall_question;  // set only if every rater answered
};

/// Sorted by image id. Throws ValidationError when the sheets of one image
/// disagree on its edit type.
std::vector<ImageScores> per_image_means(std::span<const RatedSheet> sheets);

/// Per-factor score series over images, keyed by image id.
ScoreSeries factor_series(std::span<const ImageScores> images, FactorId id,
                          std::string label = {});
/// All (image, factor) pairs pooled, keyed "image_id/factor_key".
ScoreSeries pooled_series(std::span<const ImageScores> images, std::string label = {});

struct CellAggregate {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};
using Cell = std::optional<CellAggregate>;

/// Columns: the six edit types in canonical order, then All Edits.
inline constexpr std::size_t kGridColumns = 7;
inline constexpr std::size_t kAllColumn = 6;
using GridRow = std::array<Cell, kGridColumns>;

std::size_t column_of(EditType type);

/// Factor x edit-type table of means and population standard deviations.
///
/// A type cell summarizes the per-image scores of that type. The All column
/// summarizes the present type-cell means, the overall row the twelve factor
/// cells of a column, and a category row the cells of its member factors. A
/// cell with nothing under it is absent.
struct AggregateGrid {
  std::string label;
  std::size_t images = 0;
  std::size_t sheets = 0;
  std::array<GridRow, kFactorCount> factor_cells{};
  std::array<GridRow, 3> category_cells{};
  GridRow overall_average{};
  GridRow overall_question{};
  /// Sample (n-1) standard deviation of each factor over all per-image
  /// scores; absent with fewer than two images.
  std::array<Cell, kFactorCount> factor_spread{};

  const GridRow& row(FactorId id) const { return factor_cells[static_cast<std::size_t>(id)]; }
  const GridRow& row(Category c) const { return category_cells[static_cast<std::size_t>(c)]; }
  bool empty() const noexcept { return images == 0; }
};

AggregateGrid aggregate(std::span<const ImageScores> images, std::string label = {});
AggregateGrid aggregate(std::span<const RatedSheet> sheets, std::string label = {});

/// Grid export with the aggregation choices recorded alongside the values.
nlohmann::ordered_json grid_to_json(const AggregateGrid& grid);

}  // namespace editjudge
