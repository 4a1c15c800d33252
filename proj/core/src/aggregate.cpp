// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/aggregate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge {
using nlohmann::ordered_json;

std::vector<RatedSheet> sheets_from_records(std::span<const EvaluationRecord> records) {
  std::vector<RatedSheet> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    RatedSheet s;
    s.image_id = r.image_id;
    s.edit_type = r.edit_type;
    s.rater = r.participant_id;
    for (const auto& f : all_factors()) {
      s.factors[static_cast<std::size_t>(f.id)] = r.factor_scores.at(f.id);
    }
    s.overall_question = r.overall_score;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RatedSheet> sheets_from_verdicts(std::span<const JudgeVerdict> verdicts) {
  std::vector<RatedSheet> out;
  out.reserve(verdicts.size());
  for (const auto& v : verdicts) {
    RatedSheet s;
    s.image_id = v.image_id;
    s.edit_type = v.edit_type;
    s.rater = v.model;
    for (std::size_t i = 0; i < kFactorCount; ++i) s.factors[i] = v.factors[i].score;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ImageScores> per_image_means(std::span<const RatedSheet> sheets) {
  // Sum in (image, rater) order so results do not depend on input order.
  std::vector<const RatedSheet*> sorted;
  sorted.reserve(sheets.size());
  for (const auto& s : sheets) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(), [](const RatedSheet* a, const RatedSheet* b) {
    return std::tie(a->image_id, a->rater) < std::tie(b->image_id, b->rater);
  });

  std::vector<ImageScores> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    ImageScores img;
    img.image_id = sorted[i]->image_id;
    img.edit_type = sorted[i]->edit_type;
    double overall_sum = 0.0;
    bool overall_all = true;
    for (; j < sorted.size() && sorted[j]->image_id == img.image_id; ++j) {
      const auto& s = *sorted[j];
      if (s.edit_type != img.edit_type) {
        throw ValidationError(
            "edit_type", fmt::format("image '{}' is labeled both {} and {}", img.image_id,
                                     edit_type_name(img.edit_type), edit_type_name(s.edit_type)));
      }
      for (std::size_t f = 0; f < kFactorCount; ++f) img.factors[f] += s.factors[f];
      if (s.overall_question) {
        overall_sum += *s.overall_question;
      } else {
        overall_all = false;
      }
    }
    img.raters = j - i;
    const double n = static_cast<double>(img.raters);
    for (auto& v : img.factors) v /= n;
    if (overall_all) img.overall_question = overall_sum / n;
    out.push_back(std::move(img));
    i = j;
  }
  return out;
}

ScoreSeries factor_series(std::span<const ImageScores> images, FactorId id, std::string label) {
  ScoreSeries s(std::move(label));
  for (const auto& img : images) s.add(img.image_id, img.factors[static_cast<std::size_t>(id)]);
  return s;
}

ScoreSeries pooled_series(std::span<const ImageScores> images, std::string label) {
  ScoreSeries s(std::move(label));
  for (const auto& img : images) {
    for (const auto& f : all_factors()) {
      s.add(fmt::format("{}/{}", img.image_id, f.key), img.factors[static_cast<std::size_t>(f.id)]);
    }
  }
  return s;
}

std::size_t column_of(EditType type) { return static_cast<std::size_t>(type); }

namespace {

Cell summarize(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  const auto ms = mean_std(values);
  return CellAggregate{ms.mean, ms.std, ms.count};
}

// Mean/std over the means of the given cells; absent if any is absent.
Cell rollup(const std::vector<const Cell*>& cells) {
  std::vector<double> means;
  for (const auto* c : cells) {
    if (!c->has_value()) return std::nullopt;
    means.push_back((*c)->mean);
  }
  return summarize(means);
}

// All column from the present type cells of a row.
void fill_all_column(GridRow& row) {
  std::vector<double> means;
  for (std::size_t t = 0; t < kAllColumn; ++t) {
    if (row[t]) means.push_back(row[t]->mean);
  }
  row[kAllColumn] = summarize(means);
}

ordered_json cell_json(const Cell& c) {
  if (!c) return nullptr;
  return {{"mean", c->mean}, {"std", c->std}, {"count", c->count}};
}

ordered_json row_json(const GridRow& row) {
  ordered_json j = ordered_json::object();
  for (auto t : kAllEditTypes) j[std::string(edit_type_name(t))] = cell_json(row[column_of(t)]);
  j["All"] = cell_json(row[kAllColumn]);
  return j;
}

}  // namespace

AggregateGrid aggregate(std::span<const ImageScores> images, std::string label) {
  AggregateGrid g;
  g.label = std::move(label);
  g.images = images.size();
  for (const auto& img : images) g.sheets += img.raters;

  for (std::size_t f = 0; f < kFactorCount; ++f) {
    std::array<std::vector<double>, kAllColumn> by_type;
    std::vector<double> everything;
    for (const auto& img : images) {
      by_type[column_of(img.edit_type)].push_back(img.factors[f]);
      everything.push_back(img.factors[f]);
    }
    for (std::size_t t = 0; t < kAllColumn; ++t) g.factor_cells[f][t] = summarize(by_type[t]);
    fill_all_column(g.factor_cells[f]);
    if (everything.size() >= 2) {
      const auto ms = mean_std(everything, /*sample=*/true);
      g.factor_spread[f] = CellAggregate{ms.mean, ms.std, ms.count};
    }
  }

  for (std::size_t t = 0; t < kGridColumns; ++t) {
    std::vector<const Cell*> all;
    for (std::size_t f = 0; f < kFactorCount; ++f) all.push_back(&g.factor_cells[f][t]);
    g.overall_average[t] = rollup(all);
    for (auto c : kAllCategories) {
      std::vector<const Cell*> members;
      for (auto id : factors_in(c)) members.push_back(&g.factor_cells[static_cast<std::size_t>(id)][t]);
      g.category_cells[static_cast<std::size_t>(c)][t] = rollup(members);
    }
  }

  const bool have_overall =
      !images.empty() &&
      std::all_of(images.begin(), images.end(), [](const ImageScores& i) {
        return i.overall_question.has_value();
      });
  if (have_overall) {
    std::array<std::vector<double>, kAllColumn> by_type;
    for (const auto& img : images) by_type[column_of(img.edit_type)].push_back(*img.overall_question);
    for (std::size_t t = 0; t < kAllColumn; ++t) g.overall_question[t] = summarize(by_type[t]);
    fill_all_column(g.overall_question);
  }
  return g;
}

AggregateGrid aggregate(std::span<const RatedSheet> sheets, std::string label) {
  const auto images = per_image_means(sheets);
  return aggregate(std::span<const ImageScores>(images), std::move(label));
}

ordered_json grid_to_json(const AggregateGrid& g) {
  ordered_json j;
  j["label"] = g.label;
  j["images"] = g.images;
  j["sheets"] = g.sheets;
  j["aggregation"] = {
      {"image_score", "mean over the image's raters"},
      {"cell", "mean and population std over per-image scores of the edit type"},
      {"all_edits", "mean and population std over the edit-type cell means"},
      {"overall_average", "mean and population std over the twelve factor cells"},
      {"category", "mean and population std over the member factor cells"},
      {"factor_spread", "sample (n-1) std over all per-image scores"},
  };
  ordered_json factors = ordered_json::object();
  for (const auto& f : all_factors()) factors[std::string(f.key)] = row_json(g.row(f.id));
  j["factors"] = std::move(factors);
  ordered_json cats = ordered_json::object();
  for (auto c : kAllCategories) cats[std::string(category_key(c))] = row_json(g.row(c));
  j["categories"] = std::move(cats);
  j["overall_average"] = row_json(g.overall_average);
  j["overall_question"] = row_json(g.overall_question);
  ordered_json spread = ordered_json::object();
  for (const auto& f : all_factors()) {
    spread[std::string(f.key)] = cell_json(g.factor_spread[static_cast<std::size_t>(f.id)]);
  }
  j["factor_spread"] = std::move(spread);
  return j;
}

}  // namespace editjudge
