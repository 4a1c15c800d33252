// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>

#include <fmt/format.h>

#include "editjudge/errors.hpp"
#include "editjudge/judge.hpp"

namespace editjudge {

std::string_view variant_key(PromptVariant v) {
  switch (v) {
    case PromptVariant::kMain:
      return "main";
    case PromptVariant::kFactorRubrics:
      return "rubrics";
    case PromptVariant::kCategoryExamples:
      return "category";
  }
  return "";
}

PromptVariant variant_from_key(std::string_view key) {
  for (auto v : {PromptVariant::kMain, PromptVariant::kFactorRubrics,
                 PromptVariant::kCategoryExamples}) {
    if (variant_key(v) == key) return v;
  }
  throw ValidationError("variant",
                        fmt::format("unknown prompt variant '{}' (main, rubrics, category)", key));
}

std::string_view mode_key(JudgeMode m) {
  return m == JudgeMode::kOnline ? "online" : "offline";
}

JudgeMode mode_from_key(std::string_view key) {
  if (key == "online") return JudgeMode::kOnline;
  if (key == "offline") return JudgeMode::kOffline;
  throw ValidationError("mode", fmt::format("unknown judge mode '{}' (online, offline)", key));
}

WordBounds justification_bounds(PromptVariant v) {
  return v == PromptVariant::kCategoryExamples ? WordBounds{15, 30} : WordBounds{10, 25};
}

std::string_view image_role_key(ImageRole r) {
  switch (r) {
    case ImageRole::kInput:
      return "input";
    case ImageRole::kGroundTruth:
      return "ground_truth";
    case ImageRole::kEdited:
      return "edited";
  }
  return "";
}

std::string factor_results_key(JudgeMode mode) {
  return fmt::format("{}_factor_results", mode_key(mode));
}

std::string PromptDocument::to_text() const {
  std::string out;
  for (const auto& p : parts) {
    if (p.kind == PromptPart::Kind::kText) {
      out += p.text;
    } else {
      out += fmt::format("<<image:{}>>\n", image_role_key(p.role));
    }
  }
  return out;
}

std::vector<ImageRole> PromptDocument::image_roles() const {
  std::vector<ImageRole> roles;
  for (const auto& p : parts) {
    if (p.kind == PromptPart::Kind::kImage) roles.push_back(p.role);
  }
  return roles;
}

namespace {

// Accumulates text and image slots into a PromptDocument.
class Builder {
 public:
  explicit Builder(PromptDocument& doc) : doc_(doc) {}

  Builder& text(std::string_view s) {
    if (doc_.parts.empty() || doc_.parts.back().kind != PromptPart::Kind::kText) {
      doc_.parts.push_back({PromptPart::Kind::kText, {}, ImageRole::kInput});
    }
    doc_.parts.back().text += s;
    return *this;
  }
  Builder& line(std::string_view s = {}) {
    text(s);
    return text("\n");
  }
  Builder& image(ImageRole role) {
    doc_.parts.push_back({PromptPart::Kind::kImage, {}, role});
    return *this;
  }

 private:
  PromptDocument& doc_;
};

constexpr std::string_view kRole =
    "ROLE: You are an expert image editing evaluator. Your evaluations must be "
    "objective, consistent, and grounded entirely in visual comparison and task "
    "intent.";

std::string_view count_word(std::size_t n) {
  switch (n) {
    case 3:
      return "three";
    case 4:
      return "four";
    case 6:
      return "six";
    case 12:
      return "twelve";
    default:
      return "several";
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void scoring_section(Builder& b) {
  b.line("SCORING (7-point Likert Scale):");
  for (int v = 1; v <= 7; ++v) b.line(fmt::format("{} = {}", v, likert_label(v)));
  b.line();
  b.line("Decimal values are not allowed. Use the rubric to guide your scoring.");
  b.line();
}

void output_section(Builder& b, const EditTask& task, JudgeMode mode,
                    const std::vector<FactorId>& factors) {
  b.line("OUTPUT FORMAT (strict JSON):");
  b.line("{");
  b.line(fmt::format("  \"image_id\": \"{}\",", task.task_id));
  b.line(fmt::format("  \"{}\": {{", factor_results_key(mode)));
  for (std::size_t i = 0; i < factors.size(); ++i) {
    b.line(fmt::format("    \"{}\": {{", factor(factors[i]).key));
    b.line("      \"score\": <integer_1_to_7>,");
    b.line("      \"justification\": \"<brief_justification>\"");
    b.line(i + 1 == factors.size() ? "    }" : "    },");
  }
  b.line("  }");
  b.line("}");
  b.line();
}

// Main and FactorRubrics share everything except the FACTORS section.
PromptDocument render_all_factors(PromptVariant variant, const EditTask& task,
                                  JudgeMode mode) {
  PromptDocument doc;
  doc.image_id = task.task_id;
  doc.variant = variant;
  doc.mode = mode;
  for (const auto& f : all_factors()) doc.factors.push_back(f.id);
  Builder b(doc);
  const bool offline = mode == JudgeMode::kOffline;

  b.line(kRole).line();
  b.line(fmt::format("CONTEXT: You are provided with {} inputs:", offline ? "four" : "three"));
  int n = 1;
  b.line(fmt::format("{}. Input Image – the unedited image.", n++)).image(ImageRole::kInput);
  if (offline) {
    b.line(fmt::format("{}. Ground Truth Image – a reference image showing the intended "
                       "result of the edit.",
                       n++))
        .image(ImageRole::kGroundTruth);
  }
  b.line(fmt::format("{}. Edited Image – the image produced after editing.", n++))
      .image(ImageRole::kEdited);
  b.line(fmt::format("{}. Edit Instruction – a natural language description of the intended "
                     "modification.",
                     n++));
  b.line(task.instruction).line();
  b.line(
       "Your task is to evaluate how well the Edited Image aligns with the Input Image "
       "according to the Edit Instruction.")
      .line();

  b.line("FACTORS:");
  for (const auto& f : all_factors()) {
    b.line(fmt::format("{}. {}: {}", f.order + 1, f.name, f.question));
    if (variant == PromptVariant::kFactorRubrics) {
      for (const auto& a : f.anchors) {
        b.line(fmt::format("   Score {}: {}", a.level, a.description));
      }
    }
  }
  b.line();

  b.line("EVALUATION STEPS:");
  b.line(fmt::format("1. Compare the Edited Image to the {} in the context of the Edit "
                     "Instruction.",
                     offline ? "Ground Truth Image" : "Input Image"));
  b.line("2. Assess how well the edited image satisfies each factor definition.");
  b.line("3. Assign a score between 1 and 7 (integers only) using the rubric above.");
  b.line(
      "4. Provide a concise justification (10–25 words) describing what evidence "
      "supports your score.");
  b.line();

  scoring_section(b);
  output_section(b, task, mode, doc.factors);

  b.line("CONSTRAINTS:");
  b.line("1. Respond with only one JSON block.");
  b.line("2. The score must be an integer between 1 and 7.");
  b.line("3. The justifications must reference specific visible evidence (not speculation).");
  b.line("4. Do not restate the definition or include reasoning chains.");
  b.line("5. Keep the tone factual, concise, and visually grounded.");
  return doc;
}

PromptDocument render_category(Category category, const EditTask& task, JudgeMode mode) {
  PromptDocument doc;
  doc.image_id = task.task_id;
  doc.variant = PromptVariant::kCategoryExamples;
  doc.mode = mode;
  doc.category = category;
  doc.factors = factors_in(category);
  const auto& cg = category_guide(category);
  const auto count = count_word(doc.factors.size());
  const bool offline = mode == JudgeMode::kOffline;
  Builder b(doc);

  b.line("ROLE:");
  b.line(fmt::format(
      "You are an expert image editing evaluator specializing in {}. Your evaluations "
      "must be objective, consistent, and grounded entirely in {}.",
      cg.specialization, cg.assessing));
  b.line();

  b.line("CONTEXT:");
  b.line(fmt::format("You are provided with {} inputs:", offline ? "four" : "three"));
  int n = 1;
  b.line(fmt::format("{}. Input Image – the original image before any editing", n++))
      .image(ImageRole::kInput);
  if (offline) {
    b.line(fmt::format("{}. Ground Truth Image – a reference image showing the intended "
                       "result of the edit",
                       n++))
        .image(ImageRole::kGroundTruth);
  }
  b.line(fmt::format("{}. Edited Image – the image produced after applying the edit "
                     "instruction",
                     n++))
      .image(ImageRole::kEdited);
  b.line(fmt::format("{}. Edit Instruction – a natural language description of the "
                     "intended modification",
                     n++));
  b.line(task.instruction).line();
  b.line(fmt::format("{} You will assess {} specific factors related to {}.", cg.task, count,
                     lower(category_name(category))))
      .line();

  b.line("FACTORS UNDER REVIEW:").line();
  int k = 1;
  for (auto id : doc.factors) {
    const auto& f = factor(id);
    const auto& g = factor_guide(id);
    b.line(fmt::format("=== FACTOR {}: {} ===", k++, upper(f.name))).line();
    b.line(fmt::format("Definition: {}", g.definition)).line();
    b.line("What to examine:");
    for (std::size_t i = 0; i < g.examine.size(); ++i) {
      b.line(fmt::format("{}. {}", i + 1, g.examine[i]));
    }
    b.line();
    b.line(fmt::format("Important: {}", g.important)).line();
    b.line("Score high (6-7) when:");
    for (std::size_t i = 0; i < g.score_high.size(); ++i) {
      b.line(fmt::format("{}. {}", i + 1, g.score_high[i]));
    }
    b.line();
    b.line("Score low (1-3) when:");
    for (std::size_t i = 0; i < g.score_low.size(); ++i) {
      b.line(fmt::format("{}. {}", i + 1, g.score_low[i]));
    }
    b.line();
  }

  b.line("EVALUATION STEPS:");
  b.line(
      "1. Read the Edit Instruction carefully and identify all requested changes, targets, "
      "and specifications");
  b.line(
      "2. For each factor, systematically examine the Edited Image in relation to the "
      "instruction");
  if (offline) {
    b.line(
        "3. Compare the Edited Image to the Input Image to understand what changed, and to "
        "the Ground Truth Image to see the intended result");
  } else {
    b.line("3. Compare the Edited Image to the Input Image to understand what changed");
  }
  b.line("4. Look for specific evidence relevant to each factor definition");
  b.line(
      "5. Assign a score between 1 and 7 (integers only) for each factor using the Likert "
      "scale below");
  b.line(
      "6. Provide a concise justification (15-30 words) for each factor, citing specific "
      "observable evidence");
  b.line();

  scoring_section(b);
  output_section(b, task, mode, doc.factors);

  b.line("CONSTRAINTS:");
  std::vector<std::string> constraints = {
      fmt::format("Respond with only one JSON block containing all {} factors", count),
      "Each score must be an integer between 1 and 7",
      "Each justification must reference specific, observable visual evidence (e.g., "
      "\"instruction requested red car but result shows blue car\" not \"color doesn't "
      "match\")",
      "Do not restate definitions or include reasoning chains in justifications",
      std::string(cg.precise),
      "Remain objective: evaluate only what is visible and what the instruction requested",
      "Keep tone factual, concise, and visually grounded",
      "Evaluate each factor independently—do not let one factor's assessment influence "
      "another"};
  for (auto id : doc.factors) {
    constraints.push_back(fmt::format("For {}: {}", factor(id).name, factor_guide(id).focus));
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    b.line(fmt::format("{}. {}", i + 1, constraints[i]));
  }
  return doc;
}

}  // namespace

std::vector<PromptDocument> render_prompt(PromptVariant variant, const EditTask& task,
                                          JudgeMode mode) {
  if (mode == JudgeMode::kOffline && !task.ground_truth) {
    throw PreconditionError(fmt::format(
        "task '{}' has no ground truth image; offline judging needs one", task.task_id));
  }
  if (variant != PromptVariant::kCategoryExamples) {
    return {render_all_factors(variant, task, mode)};
  }
  std::vector<PromptDocument> docs;
  for (auto c : kAllCategories) docs.push_back(render_category(c, task, mode));
  return docs;
}

}  // namespace editjudge
