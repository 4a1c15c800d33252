// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

// Rendered prompts are compared byte for byte with tests/golden/prompts.
// Run with EDITJUDGE_UPDATE_GOLDENS=1 to rewrite them after a deliberate
// template change.

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "editjudge/judge.hpp"
#include "prompt_fixture.hpp"
#include "test_support.hpp"

namespace editjudge {

void PrintTo(PromptVariant v, std::ostream* os) { *os << variant_key(v); }
void PrintTo(JudgeMode m, std::ostream* os) { *os << mode_key(m); }

namespace {

class PromptGolden
    : public ::testing::TestWithParam<std::tuple<PromptVariant, JudgeMode>> {};

TEST_P(PromptGolden, MatchesCommittedText) {
  const auto [variant, mode] = GetParam();
  const auto path = testing::golden_prompt_path(testing::golden_dir(), variant, mode);
  const auto text = testing::render_golden(variant, mode);
  if (const char* u = std::getenv("EDITJUDGE_UPDATE_GOLDENS"); u && std::string(u) == "1") {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
    GTEST_SKIP() << "rewrote " << path;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  EXPECT_EQ(text, testing::slurp(path)) << path;
}

INSTANTIATE_TEST_SUITE_P(
    AllVariants, PromptGolden,
    ::testing::Combine(::testing::Values(PromptVariant::kMain, PromptVariant::kFactorRubrics,
                                         PromptVariant::kCategoryExamples),
                       ::testing::Values(JudgeMode::kOnline, JudgeMode::kOffline)),
    [](const auto& info) {
      return std::string(variant_key(std::get<0>(info.param))) + "_" +
             std::string(mode_key(std::get<1>(info.param)));
    });

}  // namespace
}  // namespace editjudge
