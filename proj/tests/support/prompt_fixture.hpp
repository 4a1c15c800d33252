// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "editjudge/judge.hpp"

namespace editjudge::testing {

/// The task every committed prompt golden is rendered from.
inline EditTask golden_task() {
  EditTask t;
  t.task_id = "golden-001";
  t.original.uri = "images/golden-001_orig.png";
  t.edited.uri = "images/golden-001_edit.png";
  t.ground_truth = ImageRef{"images/golden-001_gt.png", std::nullopt};
  t.instruction = "Replace the wooden bench with a stone bench";
  t.edit_type = EditType::kReplace;
  return t;
}

/// All documents of one rendering, separated by a "=====" line.
inline std::string render_golden(PromptVariant v, JudgeMode m) {
  std::string out;
  for (const auto& doc : render_prompt(v, golden_task(), m)) {
    if (!out.empty()) out += "\n=====\n";
    out += doc.to_text();
  }
  return out;
}

inline std::filesystem::path golden_prompt_path(const std::filesystem::path& golden_dir,
                                                PromptVariant v, JudgeMode m) {
  return golden_dir / "prompts" /
         (std::string(variant_key(v)) + "_" + std::string(mode_key(m)) + ".txt");
}

}  // namespace editjudge::testing
