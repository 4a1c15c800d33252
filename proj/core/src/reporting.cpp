// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/reporting.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "editjudge/csv.hpp"
#include "editjudge/errors.hpp"

namespace editjudge {
using nlohmann::ordered_json;

long long scaled_round(double value, int places) {
  const double scale = std::pow(10.0, places);
  // The epsilon keeps values such as 0.2495 printed from binary fractions
  // slightly below the tie on the half-up side.
  return static_cast<long long>(std::floor(value * scale + 0.5 + 1e-9));
}

std::string format_fixed(double value, int places) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const long long k = scaled_round(value, places);
  const long long mag = std::llabs(k);
  long long scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  std::string out = k < 0 ? "-" : "";
  out += std::to_string(mag / scale);
  if (places > 0) out += fmt::format(".{:0{}d}", mag % scale, places);
  return out;
}

Highlight classify(double human_mean, double judge_mean, const HighlightRule& rule) {
  const long long delta = std::llabs(scaled_round(human_mean, 3) - scaled_round(judge_mean, 3));
  if (delta < std::llround(rule.strong * 1000.0)) return Highlight::kStrong;
  if (delta < std::llround(rule.weak * 1000.0)) return Highlight::kWeak;
  return Highlight::kNone;
}

std::string_view highlight_token(Highlight h) {
  switch (h) {
    case Highlight::kStrong:
      return "[S] ";
    case Highlight::kWeak:
      return "[W] ";
    case Highlight::kNone:
      break;
  }
  return "";
}

namespace {

std::string_view highlight_name(Highlight h) {
  switch (h) {
    case Highlight::kStrong:
      return "strong";
    case Highlight::kWeak:
      return "weak";
    case Highlight::kNone:
      break;
  }
  return "none";
}

constexpr std::string_view kAbsent = "n/a";
constexpr std::array<std::string_view, kGridColumns> kColumnNames = {
    "Add", "Remove", "Replace", "Action", "Counting", "Relation", "All Edits"};

std::string md_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += fmt::format(" {} |", c);
  return out + "\n";
}

std::string md_rule(std::size_t text_cols, std::size_t num_cols) {
  std::string out = "|";
  for (std::size_t i = 0; i < text_cols; ++i) out += "---|";
  for (std::size_t i = 0; i < num_cols; ++i) out += "---:|";
  return out + "\n";
}

std::string csv_row(const std::vector<std::string>& fields) { return csv::format_row(fields); }

std::string producer(const AggregateGrid& g, std::string_view fallback) {
  return g.label.empty() ? std::string(fallback) : g.label;
}

std::string cell_text(const Cell& c) {
  if (!c) return std::string(kAbsent);
  return fmt::format("{} ± {}", format_fixed(c->mean, 3), format_fixed(c->std, 2));
}

void require_judges(const AggregateGrid& human, std::span<const AggregateGrid> judges) {
  if (human.empty()) throw PreconditionError("human grid is empty");
  if (judges.empty()) throw PreconditionError("no judge grid to compare against");
  for (const auto& j : judges) {
    if (j.empty()) throw PreconditionError(fmt::format("judge grid '{}' is empty", j.label));
  }
}

void require_same_shape(const GridRow& h, const GridRow& j, std::string_view row,
                        std::string_view judge) {
  for (std::size_t t = 0; t < kGridColumns; ++t) {
    if (h[t].has_value() != j[t].has_value()) {
      throw ShapeMismatchError(fmt::format(
          "row '{}', column {}: human cell is {} but judge '{}' cell is {}", row, kColumnNames[t],
          h[t] ? "present" : "absent", judge, j[t] ? "present" : "absent"));
    }
  }
}

// One block of rows: the human row then a highlighted row per judge.
struct GridBlock {
  std::vector<std::string> labels;  // leading text columns
  const GridRow* human;
  std::vector<const GridRow*> judges;
};

ReportDocument render_grid(std::string name, std::string title,
                           const std::vector<std::string>& label_headers,
                           const std::vector<GridBlock>& blocks, const AggregateGrid& human,
                           std::span<const AggregateGrid> judges, const HighlightRule& rule) {
  ReportDocument doc;
  doc.name = std::move(name);

  std::vector<std::string> header = label_headers;
  header.emplace_back("Producer");
  for (auto c : kColumnNames) header.emplace_back(c);
  std::string md = fmt::format("## {}\n\n", title);
  md += md_row(header);
  md += md_rule(label_headers.size() + 1, kGridColumns);

  std::vector<std::string> csv_header = label_headers;
  for (auto& h : csv_header) {
    for (auto& c : h) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (const char* c : {"producer", "edit_type", "mean", "std", "count", "highlight"}) {
    csv_header.emplace_back(c);
  }
  std::string csv = csv_row(csv_header);

  const auto human_name = producer(human, "Human");
  for (const auto& block : blocks) {
    for (std::size_t r = 0; r <= block.judges.size(); ++r) {
      const bool is_human = r == 0;
      const GridRow& row = is_human ? *block.human : *block.judges[r - 1];
      const auto who = is_human ? human_name : producer(judges[r - 1], "Judge");
      std::vector<std::string> cells;
      for (const auto& l : block.labels) cells.push_back(is_human ? l : std::string());
      cells.push_back(who);
      for (std::size_t t = 0; t < kGridColumns; ++t) {
        auto h = Highlight::kNone;
        if (!is_human && row[t]) h = classify((*block.human)[t]->mean, row[t]->mean, rule);
        cells.push_back(fmt::format("{}{}", highlight_token(h), cell_text(row[t])));

        std::vector<std::string> fields = block.labels;
        fields.push_back(who);
        fields.emplace_back(t == kAllColumn ? "All" : kColumnNames[t]);
        if (row[t]) {
          fields.push_back(format_fixed(row[t]->mean, 3));
          fields.push_back(format_fixed(row[t]->std, 2));
          fields.push_back(std::to_string(row[t]->count));
        } else {
          fields.insert(fields.end(), 3, std::string());
        }
        fields.emplace_back(is_human ? "" : highlight_name(h));
        csv += csv_row(fields);
      }
      md += md_row(cells);
    }
  }
  md += fmt::format(
      "\n[S] judge mean within {} of the human mean; [W] within {}. Cells are mean ± "
      "population std.\n",
      format_fixed(rule.strong, 1), format_fixed(rule.weak, 1));
  doc.markdown = std::move(md);
  doc.csv = std::move(csv);
  return doc;
}

}  // namespace

bool bolded(double coefficient) {
  return scaled_round(coefficient, 3) >= std::llround(kBoldThreshold * 1000.0);
}

ReportDocument render_factor_table(const AggregateGrid& human,
                                   std::span<const AggregateGrid> judges,
                                   const HighlightRule& rule) {
  require_judges(human, judges);
  std::vector<GridBlock> blocks;
  for (const auto& f : all_factors()) {
    GridBlock b{{std::string(category_name(f.category)), std::string(f.name)}, &human.row(f.id), {}};
    for (const auto& j : judges) {
      require_same_shape(human.row(f.id), j.row(f.id), f.name, j.label);
      b.judges.push_back(&j.row(f.id));
    }
    blocks.push_back(std::move(b));
  }
  GridBlock overall{{"Overall Average", ""}, &human.overall_average, {}};
  for (const auto& j : judges) {
    require_same_shape(human.overall_average, j.overall_average, "Overall Average", j.label);
    overall.judges.push_back(&j.overall_average);
  }
  blocks.push_back(std::move(overall));
  return render_grid("factor_scores", "Factor scores by edit type", {"Category", "Factor"},
                     blocks, human, judges, rule);
}

ReportDocument render_category_table(const AggregateGrid& human,
                                     std::span<const AggregateGrid> judges,
                                     const HighlightRule& rule) {
  require_judges(human, judges);
  std::vector<GridBlock> blocks;
  for (auto c : kAllCategories) {
    GridBlock b{{std::string(category_name(c))}, &human.row(c), {}};
    for (const auto& j : judges) {
      require_same_shape(human.row(c), j.row(c), category_name(c), j.label);
      b.judges.push_back(&j.row(c));
    }
    blocks.push_back(std::move(b));
  }
  GridBlock overall{{"Overall Average"}, &human.overall_average, {}};
  for (const auto& j : judges) {
    require_same_shape(human.overall_average, j.overall_average, "Overall Average", j.label);
    overall.judges.push_back(&j.overall_average);
  }
  blocks.push_back(std::move(overall));
  return render_grid("category_scores", "Category scores by edit type", {"Category"}, blocks,
                     human, judges, rule);
}

// ---------------------------------------------------------------------------
// Traditional metrics

std::vector<double> min_max_normalize(const MetricColumn& column) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : column.values) {
    if (std::isnan(v.value)) {
      throw ValidationError(column.name, fmt::format("{} for task '{}' is NaN", column.name,
                                                     v.task_id));
    }
    if (std::isfinite(v.value)) {
      lo = std::min(lo, v.value);
      hi = std::max(hi, v.value);
    }
  }
  std::vector<double> out;
  out.reserve(column.values.size());
  for (const auto& v : column.values) {
    double x;
    if (std::isinf(v.value)) {
      x = v.value > 0 ? 1.0 : 0.0;
    } else if (hi > lo) {
      x = (v.value - lo) / (hi - lo);
    } else {
      x = 0.5;
    }
    if (column.lower_is_better) x = 1.0 - x;
    out.push_back(x);
  }
  return out;
}

ReportDocument render_metric_table(const AggregateGrid& human,
                                   std::span<const AggregateGrid> judges,
                                   std::span<const MetricColumn> metrics) {
  if (human.empty()) throw PreconditionError("human grid is empty");
  ReportDocument doc;
  doc.name = "traditional_metrics";

  std::vector<std::string> header{"Metric"};
  for (auto c : kColumnNames) header.emplace_back(c);
  std::string md = "## Normalized human, judge and traditional metric scores\n\n";
  md += md_row(header);
  md += md_rule(1, kGridColumns);
  std::string csv = csv_row({"metric", "edit_type", "mean", "std", "count", "normalization"});

  auto emit = [&](const std::string& label, const GridRow& row, std::string_view scheme) {
    std::vector<std::string> cells{label};
    for (std::size_t t = 0; t < kGridColumns; ++t) {
      cells.push_back(cell_text(row[t]));
      std::vector<std::string> fields{label, t == kAllColumn ? "All" : std::string(kColumnNames[t])};
      if (row[t]) {
        fields.push_back(format_fixed(row[t]->mean, 3));
        fields.push_back(format_fixed(row[t]->std, 2));
        fields.push_back(std::to_string(row[t]->count));
      } else {
        fields.insert(fields.end(), 3, std::string());
      }
      fields.emplace_back(scheme);
      csv += csv_row(fields);
    }
    md += md_row(cells);
  };

  auto likert_row = [](const GridRow& overall) {
    GridRow out{};
    for (std::size_t t = 0; t < kGridColumns; ++t) {
      if (overall[t]) {
        out[t] = CellAggregate{normalize_likert(overall[t]->mean), overall[t]->std / 7.0,
                               overall[t]->count};
      }
    }
    return out;
  };

  emit(fmt::format("{} Avg", producer(human, "Human")), likert_row(human.overall_average),
       "likert/7");
  for (const auto& j : judges) {
    emit(fmt::format("{} Avg", producer(j, "Judge")), likert_row(j.overall_average), "likert/7");
  }

  for (const auto& m : metrics) {
    const auto norm = min_max_normalize(m);
    std::array<std::vector<double>, kAllColumn> by_type;
    for (std::size_t i = 0; i < norm.size(); ++i) {
      by_type[column_of(m.values[i].edit_type)].push_back(norm[i]);
    }
    GridRow row{};
    for (std::size_t t = 0; t < kAllColumn; ++t) {
      if (!by_type[t].empty()) {
        const auto ms = mean_std(by_type[t]);
        row[t] = CellAggregate{ms.mean, ms.std, ms.count};
      }
    }
    if (!norm.empty()) {
      const auto ms = mean_std(norm);
      row[kAllColumn] = CellAggregate{ms.mean, ms.std, ms.count};
    }
    emit(m.name, row, m.lower_is_better ? "min-max inverted" : "min-max");
  }
  md +=
      "\nLikert rows are Overall Average / 7. Metric rows are dataset min-max scaled to [0,1], "
      "inverted for error metrics; their All Edits cell spans all tasks.\n";
  doc.markdown = std::move(md);
  doc.csv = std::move(csv);
  return doc;
}

// ---------------------------------------------------------------------------
// Agreement tables

namespace {

template <typename F>
std::optional<Correlation> maybe(F&& f) {
  try {
    return f();
  } catch (const DegenerateInputError&) {
    return std::nullopt;
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

PointwiseRow stats_row(std::string scope, const std::string& evaluator, const ScoreSeries& h,
                       const ScoreSeries& m) {
  PointwiseRow r;
  r.scope = std::move(scope);
  r.evaluator = evaluator;
  r.n = align(h, m).ids.size();
  r.mse = mse(h, m);
  r.mae = mae(h, m);
  r.acc = acc(h, m, 0);
  r.acc_pm1 = acc(h, m, 1);
  r.pearson = maybe([&] { return pearson(h, m); });
  r.spearman = maybe([&] { return spearman(h, m); });
  r.kendall = maybe([&] { return kendall_tau(h, m); });
  return r;
}

std::string p_text(double p) {
  const auto s = format_fixed(p, 3);
  return s == "0.000" ? "<0.001" : s;
}

std::string scope_name(const std::string& scope) {
  if (auto id = factor_from_key(scope)) return std::string(factor(*id).name);
  return scope;
}

}  // namespace

std::vector<PointwiseRow> pointwise_rows(std::span<const ImageScores> human,
                                         std::span<const ImageScores> judge,
                                         const std::string& evaluator) {
  std::vector<PointwiseRow> rows;
  for (const auto& f : all_factors()) {
    rows.push_back(stats_row(std::string(f.key), evaluator, factor_series(human, f.id),
                             factor_series(judge, f.id)));
  }
  rows.push_back(stats_row("All", evaluator, pooled_series(human), pooled_series(judge)));
  return rows;
}

ReportDocument render_pointwise_table(std::span<const PointwiseRow> rows) {
  ReportDocument doc;
  doc.name = "pointwise_agreement";
  std::string md = "## Pointwise agreement with human ratings\n\n";
  md += md_row({"Factor", "Evaluator", "MSE", "MAE", "ACC", "ACC±1", "Pearson", "Spearman",
                "Kendall τ"});
  md += md_rule(2, 7);
  std::string csv = csv_row({"factor", "evaluator", "n", "mse", "mae", "acc", "acc_pm1",
                             "pearson", "pearson_p", "spearman", "spearman_p", "kendall",
                             "kendall_p"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{scope_name(r.scope), r.evaluator, format_fixed(r.mse, 3),
                                   format_fixed(r.mae, 3), format_fixed(r.acc, 3),
                                   format_fixed(r.acc_pm1, 3)};
    std::vector<std::string> fields{r.scope,
                                    r.evaluator,
                                    std::to_string(r.n),
                                    format_fixed(r.mse, 3),
                                    format_fixed(r.mae, 3),
                                    format_fixed(r.acc, 3),
                                    format_fixed(r.acc_pm1, 3)};
    for (const auto* c : {&r.pearson, &r.spearman, &r.kendall}) {
      if (!*c) {
        cells.emplace_back(kAbsent);
        fields.insert(fields.end(), 2, std::string());
        continue;
      }
      const auto coef = format_fixed((*c)->coefficient, 3);
      const auto p = p_text((*c)->p_value);
      cells.push_back(bolded((*c)->coefficient) ? fmt::format("**{}** ({})", coef, p)
                                                : fmt::format("{} ({})", coef, p));
      fields.push_back(coef);
      fields.push_back(p);
    }
    md += md_row(cells);
    csv += csv_row(fields);
  }
  md += fmt::format(
      "\nCorrelations of at least {} are bold; p-values in parentheses. ACC compares the "
      "rounded human mean for equality; ACC±1 allows a difference of 1.\n",
      format_fixed(kBoldThreshold, 2));
  doc.markdown = std::move(md);
  doc.csv = std::move(csv);
  return doc;
}

PairwiseRow pairwise_row(std::span<const ImageScores> human, std::span<const ImageScores> judge,
                         const std::string& evaluator, double min_gap) {
  PairwiseRow row;
  row.evaluator = evaluator;
  for (const auto& f : all_factors()) {
    auto& r = row.factors[static_cast<std::size_t>(f.id)];
    r = pairwise_accuracy(factor_series(human, f.id), factor_series(judge, f.id), min_gap,
                          /*exclude_ties=*/true);
    row.all.agree += r.agree;
    row.all.counted += r.counted;
  }
  return row;
}

ReportDocument render_pairwise_table(std::span<const PairwiseRow> rows) {
  ReportDocument doc;
  doc.name = "pairwise_agreement";

  constexpr std::size_t kCols = kFactorCount + 1;
  auto result = [](const PairwiseRow& r, std::size_t c) -> const PairwiseResult& {
    return c < kFactorCount ? r.factors[c] : r.all;
  };
  std::array<long long, kCols> best;
  best.fill(-1);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < kCols; ++c) {
      if (auto a = result(r, c).accuracy()) best[c] = std::max(best[c], scaled_round(*a, 2));
    }
  }

  std::vector<std::string> header{"Evaluator"};
  for (const auto& f : all_factors()) header.emplace_back(f.abbreviation);
  header.emplace_back("All");
  std::string md = "## Pairwise preference accuracy\n\n";
  md += md_row(header);
  md += md_rule(1, kCols);
  std::string csv = csv_row({"evaluator", "factor", "agree", "counted", "accuracy"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.evaluator};
    for (std::size_t c = 0; c < kCols; ++c) {
      const auto& pr = result(r, c);
      const auto a = pr.accuracy();
      const std::string key =
          c < kFactorCount ? std::string(all_factors()[c].key) : std::string("All");
      if (!a) {
        cells.emplace_back(kAbsent);
        csv += csv_row({r.evaluator, key, "0", "0", ""});
        continue;
      }
      const auto text = format_fixed(*a, 2);
      const bool bold = rows.size() > 1 && scaled_round(*a, 2) == best[c];
      cells.push_back(bold ? fmt::format("**{}**", text) : text);
      csv += csv_row({r.evaluator, key, std::to_string(pr.agree), std::to_string(pr.counted), text});
    }
    md += md_row(cells);
  }
  md +=
      "\nPairs whose human scores differ by more than 2, ties excluded. All is the accuracy over "
      "the pairs of every factor. Bold marks the highest value of each column.\n";
  doc.markdown = std::move(md);
  doc.csv = std::move(csv);
  return doc;
}

ordered_json report_metadata(const HighlightRule& rule) {
  ordered_json j;
  j["rounding"] = "half-up; means 3 decimals, stds 2 decimals, pairwise accuracy 2 decimals";
  j["highlight"] = {{"basis", "|judge mean - human mean| between displayed values"},
                    {"strong_below", rule.strong},
                    {"weak_below", rule.weak},
                    {"tokens", {{"strong", "[S]"}, {"weak", "[W]"}}}};
  j["bold_correlation_at_least"] = kBoldThreshold;
  j["aggregation"] = {
      {"image_score", "mean over raters"},
      {"cell_std", "population (n)"},
      {"all_edits", "mean and std over the edit-type cell means"},
      {"overall_average", "mean and std over the twelve factor cells"},
      {"category", "mean and std over member factor cells"},
      {"factor_spread_std", "sample (n-1)"},
  };
  j["normalization"] = {
      {"likert", "score / 7"},
      {"metrics", "dataset min-max to [0,1]; inverted for L1, L2, LPIPS and Mask LPIPS"},
      {"metrics_all_edits", "mean and std over all tasks"},
      {"infinite_psnr", "maps to the best end of the scale"},
  };
  j["pointwise"] = {
      {"human_reference", "per-image mean over raters"},
      {"acc_exact", "human mean rounded half-up to an integer"},
      {"kendall", "tau-a"},
      {"kendall_p", "normal approximation"},
      {"pearson_spearman_p", "Student t with n-2 degrees of freedom"},
      {"all_row", "every (image, factor) pair pooled"},
  };
  j["pairwise"] = {{"min_gap", kPairwiseMinGap},
                   {"gap_tolerance", kGapTolerance},
                   {"gap_series", "human"},
                   {"ties", "excluded in either series"},
                   {"all", "sum of agreeing pairs / sum of counted pairs"}};
  return j;
}

void write_reports(const std::filesystem::path& dir, std::span<const ReportDocument> docs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  for (const auto& d : docs) {
    write_file(dir / (d.name + ".md"), d.markdown);
    write_file(dir / (d.name + ".csv"), d.csv);
  }
}

}  // namespace editjudge
