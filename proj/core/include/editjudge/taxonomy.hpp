// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace editjudge {

enum class Category : std::uint8_t {
  kImagePreservation,
  kEditQuality,
  kInstructionFidelity,
};

inline constexpr std::array<Category, 3> kAllCategories = {
    Category::kImagePreservation, Category::kEditQuality,
    Category::kInstructionFidelity};

/// The twelve judged factors, in canonical table order.
enum class FactorId : std::uint8_t {
  kUnchangedRegions,
  kGlobalConsistency,
  kIdentityPreservation,
  kScaleRealism,
  kSpatialRelationship,
  kTextureAndDetail,
  kImageQuality,
  kColorAndLighting,
  kSeamlessness,
  kAlignment,
  kCompleteness,
  kPlausibility,
};

inline constexpr std::size_t kFactorCount = 12;

struct RubricAnchor {
  int level;  // 1, 4 or 7
  std::string_view description;
};

struct Factor {
  FactorId id;
  std::size_t order;
  std::string_view key;   // snake_case, equal to the judge JSON schema key
  std::string_view name;  // display name
  std::string_view abbreviation;
  Category category;
  std::string_view question;
  std::array<RubricAnchor, 3> anchors;
};

/// Long-form guidance used by the category-scoped prompt variant.
struct FactorGuide {
  std::string_view definition;
  std::vector<std::string_view> examine;
  std::string_view important;
  std::vector<std::string_view> score_high;
  std::vector<std::string_view> score_low;
  std::string_view focus;  // "focus on ..." constraint fragment
};

struct CategoryGuide {
  std::string_view specialization;  // "instruction fidelity analysis"
  std::string_view assessing;       // what the evaluations are grounded in
  std::string_view task;            // the "Your task is to ..." sentence
  std::string_view precise;         // the "Be precise: ..." constraint
};

/// The thirteenth question asked of human raters. Judges never answer it; their
/// overall is computed from the twelve factors.
struct OverallQuestion {
  static constexpr std::string_view key = "overall";
  static constexpr std::string_view name = "Overall Edit Quality";
  static constexpr std::string_view question =
      "Considering all factors, how good is the edit overall?";
};

/// The twelve factors in canonical order. Overall is not included.
std::span<const Factor, kFactorCount> all_factors();
const Factor& factor(FactorId id);
std::optional<FactorId> factor_from_key(std::string_view key);
std::vector<FactorId> factors_in(Category category);

std::string_view category_key(Category category);
std::string_view category_name(Category category);
std::optional<Category> category_from_key(std::string_view key);

const FactorGuide& factor_guide(FactorId id);
const CategoryGuide& category_guide(Category category);

/// Verbal label of a 7-point Likert value ("Strongly Disagree" ...).
std::string_view likert_label(int value);

/// An integer rating in 1..7.
class LikertScore {
 public:
  /// Throws ValidationError if `value` is outside 1..7.
  static LikertScore from_int(int value, std::string_view field = "score");
  /// Accepts only JSON integers (or integral-valued numbers without a
  /// fractional part written as integers); decimals such as 7.5 or 6.0 are
  /// rejected.
  static LikertScore from_json(const nlohmann::json& value,
                               std::string_view field = "score");

  int value() const noexcept { return value_; }
  friend bool operator==(LikertScore, LikertScore) = default;

 private:
  explicit LikertScore(int v) : value_(v) {}
  int value_;
};

/// Scores for the twelve factors, indexed by FactorId. Slots may be empty while
/// a sheet is being assembled; `complete()` checks all are present.
class FactorScores {
 public:
  void set(FactorId id, LikertScore score);
  std::optional<LikertScore> get(FactorId id) const;
  /// Throws ValidationError naming the factor when absent.
  int at(FactorId id) const;
  bool complete() const;
  std::vector<FactorId> missing() const;
  /// Throws ValidationError naming the first missing factor.
  void require_complete() const;

  friend bool operator==(const FactorScores&, const FactorScores&) = default;

 private:
  std::array<std::optional<LikertScore>, kFactorCount> scores_{};
};

/// Unweighted arithmetic mean of the twelve factor scores. Throws
/// ValidationError naming the first missing factor.
double overall_from_factors(const FactorScores& scores);

/// Machine-readable taxonomy (questions, rubric anchors, category guides,
/// Likert labels) shared by the prompt renderer and the annotation UI.
nlohmann::json taxonomy_json();

}  // namespace editjudge
