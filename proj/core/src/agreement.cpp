// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge {

// ---------------------------------------------------------------------------
// ScoreSeries

ScoreSeries::ScoreSeries(std::string label, std::vector<std::string> ids,
                         std::vector<double> values)
    : label_(std::move(label)) {
  if (ids.size() != values.size()) {
    throw ValidationError("values", "ids and values differ in length");
  }
  for (std::size_t i = 0; i < ids.size(); ++i) add(std::move(ids[i]), values[i]);
}

ScoreSeries ScoreSeries::from_values(std::vector<double> values, std::string label) {
  ScoreSeries s(std::move(label));
  const auto width = std::to_string(values.size()).size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.add(fmt::format("{:0{}d}", i, width), values[i]);
  }
  return s;
}

void ScoreSeries::add(std::string id, double value) {
  if (id.empty()) throw ValidationError("id", "empty item id");
  if (!std::isfinite(value)) {
    throw ValidationError(id, fmt::format("value for '{}' is not finite", id));
  }
  if (std::find(ids_.begin(), ids_.end(), id) != ids_.end()) {
    throw ValidationError(id, fmt::format("duplicate item id '{}'", id));
  }
  ids_.push_back(std::move(id));
  values_.push_back(value);
}

std::optional<double> ScoreSeries::find(const std::string& id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return values_[static_cast<std::size_t>(it - ids_.begin())];
}

AlignedPair align(const ScoreSeries& a, const ScoreSeries& b) {
  std::vector<std::size_t> ia(a.size());
  std::iota(ia.begin(), ia.end(), 0);
  std::sort(ia.begin(), ia.end(), [&](auto x, auto y) { return a.ids()[x] < a.ids()[y]; });
  std::vector<std::size_t> ib(b.size());
  std::iota(ib.begin(), ib.end(), 0);
  std::sort(ib.begin(), ib.end(), [&](auto x, auto y) { return b.ids()[x] < b.ids()[y]; });

  AlignedPair out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ia.size() && j < ib.size()) {
    const auto& ka = a.ids()[ia[i]];
    const auto& kb = b.ids()[ib[j]];
    if (ka < kb) {
      ++i;
    } else if (kb < ka) {
      ++j;
    } else {
      out.ids.push_back(ka);
      out.a.push_back(a.values()[ia[i]]);
      out.b.push_back(b.values()[ib[j]]);
      ++i;
      ++j;
    }
  }
  return out;
}

namespace {

AlignedPair aligned_nonempty(const ScoreSeries& h, const ScoreSeries& m, std::size_t min_n) {
  auto p = align(h, m);
  if (p.ids.size() < min_n) {
    throw PreconditionError(fmt::format("series '{}' and '{}' share {} item(s); need at least {}",
                                        h.label(), m.label(), p.ids.size(), min_n));
  }
  return p;
}

double round_half_up(double x) { return std::floor(x + 0.5); }

double t_test_p(double r, std::size_t n) {
  if (n < 3) return 1.0;
  const double df = static_cast<double>(n - 2);
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double pearson_raw(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateInputError("correlation is undefined for a constant series");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Error and accuracy metrics

double mse(const ScoreSeries& h, const ScoreSeries& m) {
  const auto p = aligned_nonempty(h, m, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < p.a.size(); ++i) s += (p.a[i] - p.b[i]) * (p.a[i] - p.b[i]);
  return s / static_cast<double>(p.a.size());
}

double mae(const ScoreSeries& h, const ScoreSeries& m) {
  const auto p = aligned_nonempty(h, m, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < p.a.size(); ++i) s += std::abs(p.a[i] - p.b[i]);
  return s / static_cast<double>(p.a.size());
}

double acc(const ScoreSeries& h, const ScoreSeries& m, int tolerance) {
  if (tolerance < 0) throw PreconditionError("tolerance must be >= 0");
  const auto p = aligned_nonempty(h, m, 1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    const double hv = tolerance == 0 ? round_half_up(p.a[i]) : p.a[i];
    if (std::abs(hv - p.b[i]) <= static_cast<double>(tolerance)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(p.a.size());
}

// ---------------------------------------------------------------------------
// Correlations

Correlation pearson(const ScoreSeries& h, const ScoreSeries& m) {
  const auto p = aligned_nonempty(h, m, 2);
  const double r = pearson_raw(p.a, p.b);
  return {r, t_test_p(r, p.a.size()), p.a.size()};
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(const ScoreSeries& h, const ScoreSeries& m) {
  const auto p = aligned_nonempty(h, m, 2);
  const double r = pearson_raw(average_ranks(p.a), average_ranks(p.b));
  return {r, t_test_p(r, p.a.size()), p.a.size()};
}

Correlation kendall_tau(const ScoreSeries& h, const ScoreSeries& m, KendallVariant variant) {
  const auto p = aligned_nonempty(h, m, 2);
  const std::size_t n = p.a.size();
  long long concordant = 0;
  long long discordant = 0;
  long long ties_a = 0;
  long long ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sa = sign(p.a[i] - p.a[j]);
      const int sb = sign(p.b[i] - p.b[j]);
      if (sa == 0) ++ties_a;
      if (sb == 0) ++ties_b;
      const int s = sa * sb;
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double diff = static_cast<double>(concordant - discordant);
  double tau = 0.0;
  if (variant == KendallVariant::kTauA) {
    tau = diff / n0;
  } else {
    const double denom = std::sqrt((n0 - static_cast<double>(ties_a)) *
                                   (n0 - static_cast<double>(ties_b)));
    if (denom == 0.0) {
      throw DegenerateInputError("tau-b is undefined when a series is constant");
    }
    tau = diff / denom;
  }
  double pval = 1.0;
  if (n >= 2) {
    const double dn = static_cast<double>(n);
    const double z = 3.0 * (diff / n0) * std::sqrt(dn * (dn - 1.0)) /
                     std::sqrt(2.0 * (2.0 * dn + 5.0));
    const boost::math::normal_distribution<double> norm;
    pval = 2.0 * boost::math::cdf(boost::math::complement(norm, std::abs(z)));
  }
  return {tau, std::min(1.0, pval), n};
}

// ---------------------------------------------------------------------------
// Pairwise accuracy

std::optional<double> PairwiseResult::accuracy() const {
  if (counted == 0) return std::nullopt;
  return static_cast<double>(agree) / static_cast<double>(counted);
}

PairwiseResult pairwise_accuracy(const ScoreSeries& reference, const ScoreSeries& other,
                                 double min_gap, bool exclude_ties) {
  const auto p = aligned_nonempty(reference, other, 2);
  PairwiseResult r;
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    for (std::size_t j = i + 1; j < p.a.size(); ++j) {
      const double da = p.a[i] - p.a[j];
      const double db = p.b[i] - p.b[j];
      // Means of integer ratings carry rounding error: 4.2 - 2.2 > 2 in doubles.
      if (!(std::abs(da) - min_gap > kGapTolerance)) continue;
      if (exclude_ties && (da == 0.0 || db == 0.0)) continue;
      ++r.counted;
      if (sign(da) == sign(db)) ++r.agree;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// ICC

RatingMatrix::RatingMatrix(std::size_t n, std::size_t k, std::vector<double> cells)
    : n_(n), k_(k), cells_(std::move(cells)) {
  if (cells_.size() != n_ * k_) {
    throw ValidationError("cells", fmt::format("expected {}x{} cells, got {}", n_, k_,
                                               cells_.size()));
  }
  for (double v : cells_) {
    if (!std::isfinite(v)) throw ValidationError("cells", "rating matrix has a missing cell");
  }
}

RatingMatrix::RatingMatrix(const std::vector<std::vector<double>>& rows)
    : n_(rows.size()), k_(rows.empty() ? 0 : rows.front().size()) {
  for (const auto& r : rows) {
    if (r.size() != k_) throw ValidationError("cells", "rating matrix rows differ in length");
    cells_.insert(cells_.end(), r.begin(), r.end());
  }
  for (double v : cells_) {
    if (!std::isfinite(v)) throw ValidationError("cells", "rating matrix has a missing cell");
  }
}

AnovaTwoWay anova_two_way(const RatingMatrix& m) {
  const std::size_t n = m.n();
  const std::size_t k = m.k();
  if (n < 2 || k < 2) {
    throw PreconditionError(
        fmt::format("ICC needs at least 2 items and 2 raters, got {}x{}", n, k));
  }
  double grand = 0.0;
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_mean[i] += m.at(i, j);
      col_mean[j] += m.at(i, j);
      grand += m.at(i, j);
    }
  }
  for (auto& v : row_mean) v /= static_cast<double>(k);
  for (auto& v : col_mean) v /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  double ss_rows = 0.0;
  for (double r : row_mean) ss_rows += (r - grand) * (r - grand);
  ss_rows *= static_cast<double>(k);
  double ss_cols = 0.0;
  for (double c : col_mean) ss_cols += (c - grand) * (c - grand);
  ss_cols *= static_cast<double>(n);
  double ss_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = m.at(i, j) - row_mean[i] - col_mean[j] + grand;
      ss_error += e * e;
    }
  }
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return {ss_rows / (dn - 1.0), ss_cols / (dk - 1.0), ss_error / ((dn - 1.0) * (dk - 1.0))};
}

double icc_2k(const RatingMatrix& m) {
  const auto a = anova_two_way(m);
  const double denom = a.ms_rows + (a.ms_cols - a.ms_error) / static_cast<double>(m.n());
  if (denom == 0.0) throw DegenerateInputError("ICC(2,k) is undefined: zero denominator");
  return (a.ms_rows - a.ms_error) / denom;
}

double icc_2_1(const RatingMatrix& m) {
  const auto a = anova_two_way(m);
  const double k = static_cast<double>(m.k());
  const double denom = a.ms_rows + (k - 1.0) * a.ms_error +
                       k * (a.ms_cols - a.ms_error) / static_cast<double>(m.n());
  if (denom == 0.0) throw DegenerateInputError("ICC(2,1) is undefined: zero denominator");
  return (a.ms_rows - a.ms_error) / denom;
}

double normalize_likert(double s) {
  if (!(s >= 1.0 && s <= 7.0)) {
    throw ValidationError("score", fmt::format("Likert value {} outside [1, 7]", s));
  }
  return s / 7.0;
}

MeanStd mean_std(const std::vector<double>& values, bool sample) {
  MeanStd out;
  out.count = values.size();
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double denom = sample ? n - 1.0 : n;
  out.std = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
  return out;
}

}  // namespace editjudge
