// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/taxonomy.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge {
namespace {

using C = Category;
using F = FactorId;

constexpr std::array<Factor, kFactorCount> kFactors = {{
    {F::kUnchangedRegions, 0, "unchanged_regions", "Unchanged Regions", "UR",
     C::kImagePreservation,
     "Did the parts of the image that were not supposed to be edited remain "
     "unchanged?",
     {{{1, "The model changed large areas unrelated to the instruction"},
       {4, "Small artifacts exist but most regions are intact"},
       {7, "No unintended change is visible"}}}},
    {F::kGlobalConsistency, 1, "global_consistency", "Global Consistency", "GC",
     C::kImagePreservation,
     "Has the overall appearance (style, layout, and color) been preserved?",
     {{{1, "The overall style, layout, or color scheme is drastically "
           "different"},
       {4, "Minor inconsistencies in style or layout are present"},
       {7, "The overall appearance is fully consistent"}}}},
    {F::kIdentityPreservation, 2, "identity_preservation",
     "Identity Preservation", "IP", C::kImagePreservation,
     "Do people, animals, or objects maintain their original identity and "
     "features after the edit?",
     {{{1, "Core identifying features have been significantly altered or "
           "lost"},
       {4, "Some features have changed but entities remain generally "
           "recognizable"},
       {7, "All entities retain their distinguishing characteristics "
           "perfectly"}}}},
    {F::kScaleRealism, 3, "scale_realism", "Scale Realism", "SR",
     C::kEditQuality,
     "Is the scale of the edited object realistic compared to other objects in "
     "the image?",
     {{{1, "The edited object's scale is highly unrealistic or implausible"},
       {4, "The scale is somewhat off but not jarringly unrealistic"},
       {7, "The scale is completely realistic and proportionate"}}}},
    {F::kSpatialRelationship, 4, "spatial_relationship", "Spatial Relationship",
     "SP", C::kEditQuality,
     "Has the spatial relationship between objects been maintained?",
     {{{1, "Objects are misplaced or spatial relationships are severely "
           "disrupted"},
       {4, "Minor spatial inconsistencies exist but overall relationships "
           "hold"},
       {7, "All spatial relationships are perfectly maintained"}}}},
    {F::kTextureAndDetail, 5, "texture_and_detail", "Texture and Detail", "TD",
     C::kEditQuality,
     "Is the texture and detail in the edited region consistent with the "
     "surrounding areas?",
     {{{1, "Texture is notably different or detail is significantly degraded"},
       {4, "Texture matches reasonably well with minor detail "
           "inconsistencies"},
       {7, "Texture and detail are seamlessly consistent throughout"}}}},
    {F::kImageQuality, 6, "image_quality", "Image Quality", "IQ",
     C::kEditQuality,
     "Does the edited image avoid noise, blurring, or unnatural distortions?",
     {{{1, "Severe noise, blurring, or distortions are present"},
       {4, "Minor quality issues are noticeable but not severe"},
       {7, "Image quality is excellent with no artifacts"}}}},
    {F::kColorAndLighting, 7, "color_and_lighting", "Color and Lighting", "CL",
     C::kEditQuality,
     "Do the colors, shadows, and lighting of the edited region match the rest "
     "of the image?",
     {{{1, "Colors or lighting are severely mismatched with obvious "
           "inconsistencies"},
       {4, "Colors and lighting mostly match with minor discrepancies"},
       {7, "Colors, shadows, and lighting are perfectly harmonious"}}}},
    {F::kSeamlessness, 8, "seamlessness", "Seamlessness", "SM",
     C::kEditQuality,
     "Does the transition between edited and non-edited regions look natural?",
     {{{1, "Transitions are obvious with clear visible boundaries or seams"},
       {4, "Transitions are mostly smooth with minor detectable edges"},
       {7, "Transitions are completely seamless and undetectable"}}}},
    {F::kAlignment, 9, "alignment", "Alignment", "AL",
     C::kInstructionFidelity,
     "Does the edited image align with the specific edits provided in the "
     "instructions?",
     {{{1, "The edit does not match the instruction or contradicts it"},
       {4, "The edit partially matches but misses some key aspects"},
       {7, "The edit perfectly matches all aspects of the instruction"}}}},
    {F::kCompleteness, 10, "completeness", "Completeness", "CP",
     C::kInstructionFidelity,
     "Were all aspects of the instruction carried out fully?",
     {{{1, "Major parts of the instruction were not executed"},
       {4, "Most aspects were completed but some elements are missing"},
       {7, "Every aspect of the instruction was fully executed"}}}},
    {F::kPlausibility, 11, "plausibility", "Plausibility", "PL",
     C::kInstructionFidelity,
     "Does the result make sense in a real-world context?",
     {{{1, "The result is highly implausible or violates real-world logic"},
       {4, "The result is somewhat plausible but has noticeable oddities"},
       {7, "The result is completely plausible and realistic"}}}},
}};

constexpr std::array<std::string_view, 7> kLikertLabels = {
    "Strongly Disagree", "Disagree",       "Somewhat Disagree",
    "Neither Agree nor Disagree",          "Somewhat Agree",
    "Agree",             "Strongly Agree"};

}  // namespace

std::span<const Factor, kFactorCount> all_factors() { return kFactors; }

const Factor& factor(FactorId id) {
  return kFactors[static_cast<std::size_t>(id)];
}

std::optional<FactorId> factor_from_key(std::string_view key) {
  for (const auto& f : kFactors) {
    if (f.key == key) return f.id;
  }
  return std::nullopt;
}

std::vector<FactorId> factors_in(Category category) {
  std::vector<FactorId> out;
  for (const auto& f : kFactors) {
    if (f.category == category) out.push_back(f.id);
  }
  return out;
}

std::string_view category_key(Category category) {
  switch (category) {
    case Category::kImagePreservation:
      return "image_preservation";
    case Category::kEditQuality:
      return "edit_quality";
    case Category::kInstructionFidelity:
      return "instruction_fidelity";
  }
  return "";
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::kImagePreservation:
      return "Image Preservation";
    case Category::kEditQuality:
      return "Edit Quality";
    case Category::kInstructionFidelity:
      return "Instruction Fidelity";
  }
  return "";
}

std::optional<Category> category_from_key(std::string_view key) {
  for (auto c : kAllCategories) {
    if (category_key(c) == key) return c;
  }
  return std::nullopt;
}

std::string_view likert_label(int value) {
  if (value < 1 || value > 7) {
    throw ValidationError("score", fmt::format("Likert value {} outside 1..7", value));
  }
  return kLikertLabels[static_cast<std::size_t>(value - 1)];
}

LikertScore LikertScore::from_int(int value, std::string_view field) {
  if (value < 1 || value > 7) {
    throw ValidationError(std::string(field),
                          fmt::format("{}: score {} outside 1..7", field, value));
  }
  return LikertScore(value);
}

LikertScore LikertScore::from_json(const nlohmann::json& value,
                                   std::string_view field) {
  if (!value.is_number_integer()) {
    throw ValidationError(
        std::string(field),
        fmt::format("{}: score must be an integer between 1 and 7, got {}",
                    field, value.dump()));
  }
  const auto v = value.get<long long>();
  if (v < 1 || v > 7) {
    throw ValidationError(std::string(field),
                          fmt::format("{}: score {} outside 1..7", field, v));
  }
  return LikertScore(static_cast<int>(v));
}

void FactorScores::set(FactorId id, LikertScore score) {
  scores_[static_cast<std::size_t>(id)] = score;
}

std::optional<LikertScore> FactorScores::get(FactorId id) const {
  return scores_[static_cast<std::size_t>(id)];
}

int FactorScores::at(FactorId id) const {
  const auto& s = scores_[static_cast<std::size_t>(id)];
  if (!s) {
    throw ValidationError(std::string(factor(id).key),
                          fmt::format("missing factor '{}'", factor(id).key));
  }
  return s->value();
}

bool FactorScores::complete() const {
  return std::all_of(scores_.begin(), scores_.end(),
                     [](const auto& s) { return s.has_value(); });
}

std::vector<FactorId> FactorScores::missing() const {
  std::vector<FactorId> out;
  for (const auto& f : kFactors) {
    if (!scores_[f.order]) out.push_back(f.id);
  }
  return out;
}

void FactorScores::require_complete() const {
  const auto gaps = missing();
  if (!gaps.empty()) {
    const auto& f = factor(gaps.front());
    throw ValidationError(std::string(f.key),
                          fmt::format("missing factor '{}'", f.key));
  }
}

double overall_from_factors(const FactorScores& scores) {
  scores.require_complete();
  int sum = 0;
  for (const auto& f : kFactors) sum += scores.at(f.id);
  // Integer sum keeps the mean exact up to the final division.
  return static_cast<double>(sum) / static_cast<double>(kFactorCount);
}

nlohmann::json taxonomy_json() {
  using nlohmann::json;
  json out;
  out["version"] = 1;
  json likert = json::array();
  for (int v = 1; v <= 7; ++v) {
    likert.push_back({{"value", v}, {"label", likert_label(v)}});
  }
  out["likert"] = likert;

  json categories = json::array();
  for (auto c : kAllCategories) {
    const auto& g = category_guide(c);
    json ids = json::array();
    for (auto id : factors_in(c)) ids.push_back(factor(id).key);
    categories.push_back({{"id", category_key(c)},
                          {"name", category_name(c)},
                          {"factors", ids},
                          {"specialization", g.specialization},
                          {"assessing", g.assessing},
                          {"task", g.task},
                          {"precise", g.precise}});
  }
  out["categories"] = categories;

  json factors = json::array();
  for (const auto& f : kFactors) {
    json anchors = json::object();
    for (const auto& a : f.anchors) {
      anchors[std::to_string(a.level)] = a.description;
    }
    const auto& g = factor_guide(f.id);
    auto list = [](const std::vector<std::string_view>& items) {
      json arr = json::array();
      for (auto s : items) arr.push_back(s);
      return arr;
    };
    factors.push_back({{"id", f.key},
                       {"order", f.order},
                       {"name", f.name},
                       {"abbreviation", f.abbreviation},
                       {"category", category_key(f.category)},
                       {"question", f.question},
                       {"anchors", anchors},
                       {"guide",
                        {{"definition", g.definition},
                         {"examine", list(g.examine)},
                         {"important", g.important},
                         {"score_high", list(g.score_high)},
                         {"score_low", list(g.score_low)},
                         {"focus", g.focus}}}});
  }
  out["factors"] = factors;
  out["overall"] = {{"id", OverallQuestion::key},
                    {"name", OverallQuestion::name},
                    {"question", OverallQuestion::question}};
  return out;
}

}  // namespace editjudge
