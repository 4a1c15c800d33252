// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace editjudge {

/// Scores keyed by item id. Ids are unique and values finite.
class ScoreSeries {
 public:
  ScoreSeries() = default;
  explicit ScoreSeries(std::string label) : label_(std::move(label)) {}
  /// Throws ValidationError on empty ids, duplicate ids or non-finite values.
  ScoreSeries(std::string label, std::vector<std::string> ids, std::vector<double> values);
  /// Unlabeled series with ids "0", "1", ... (zero-padded so that id order is
  /// index order).
  static ScoreSeries from_values(std::vector<double> values, std::string label = {});

  void add(std::string id, double value);

  const std::string& label() const noexcept { return label_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::optional<double> find(const std::string& id) const;

 private:
  std::string label_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// Values of two series on their common ids, in ascending id order.
struct AlignedPair {
  std::vector<std::string> ids;
  std::vector<double> a;
  std::vector<double> b;
};
AlignedPair align(const ScoreSeries& a, const ScoreSeries& b);

/// Throw PreconditionError when the series share no id.
double mse(const ScoreSeries& h, const ScoreSeries& m);
double mae(const ScoreSeries& h, const ScoreSeries& m);

/// Fraction of common items with |h - m| <= tolerance. With tolerance 0 the
/// human value is first rounded half-up to an integer (exact-match ACC);
/// otherwise raw values are compared.
double acc(const ScoreSeries& h, const ScoreSeries& m, int tolerance);

/// Coefficient with a two-sided p-value.
struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Product-moment correlation; p from Student's t with n-2 degrees of
/// freedom. Throws PreconditionError for fewer than 2 common ids and
/// DegenerateInputError when either series is constant.
Correlation pearson(const ScoreSeries& h, const ScoreSeries& m);
/// Pearson on average ranks (ties share the mean rank).
Correlation spearman(const ScoreSeries& h, const ScoreSeries& m);

enum class KendallVariant { kTauA, kTauB };
/// (concordant - discordant) / (n(n-1)/2) by default; tau-b divides by
/// sqrt((n0 - n1)(n0 - n2)) instead. p from the normal approximation of tau-a
/// under independence. Throws PreconditionError for fewer than 2 common ids;
/// tau-b throws DegenerateInputError when a series is constant.
Correlation kendall_tau(const ScoreSeries& h, const ScoreSeries& m,
                        KendallVariant variant = KendallVariant::kTauA);

/// Mean ranks (1-based), ties averaged.
std::vector<double> average_ranks(const std::vector<double>& values);

struct PairwiseResult {
  std::size_t agree = 0;
  std::size_t counted = 0;  // 0: no pair qualified
  bool has_data() const noexcept { return counted > 0; }
  /// agree / counted; std::nullopt when no pair qualified.
  std::optional<double> accuracy() const;
};

/// Gaps within this distance of `min_gap` count as equal to it.
inline constexpr double kGapTolerance = 1e-9;

/// Over unordered pairs of common items whose reference gap |a_i - a_j|
/// exceeds `min_gap` by more than kGapTolerance (and, with `exclude_ties`, on
/// which neither series ties) counts how often the two series order the pair
/// the same way.
PairwiseResult pairwise_accuracy(const ScoreSeries& reference, const ScoreSeries& other,
                                 double min_gap, bool exclude_ties);

/// n items x k raters, fully observed, row-major.
class RatingMatrix {
 public:
  RatingMatrix(std::size_t n, std::size_t k, std::vector<double> cells);
  explicit RatingMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * k_ + j]; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> cells_;
};

/// Two-way ANOVA mean squares (rows = items, columns = raters).
struct AnovaTwoWay {
  double ms_rows = 0.0;
  double ms_cols = 0.0;
  double ms_error = 0.0;
};
/// Throws PreconditionError unless n >= 2 and k >= 2.
AnovaTwoWay anova_two_way(const RatingMatrix& m);

/// Two-way random effects, average measures:
/// (MS_R - MS_E) / (MS_R + (MS_C - MS_E) / n).
/// Throws DegenerateInputError when the denominator is 0.
double icc_2k(const RatingMatrix& m);
/// Two-way random effects, single measure:
/// (MS_R - MS_E) / (MS_R + (k-1) MS_E + k (MS_C - MS_E) / n).
double icc_2_1(const RatingMatrix& m);

/// s / 7 for s in [1, 7]; ValidationError otherwise.
double normalize_likert(double s);

/// Mean and standard deviation; `sample` selects the n-1 denominator.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};
MeanStd mean_std(const std::vector<double>& values, bool sample = false);

}  // namespace editjudge
