// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/judge.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "editjudge/errors.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

EditTask make_task(bool with_gt = true) {
  EditTask t;
  t.task_id = "t007";
  t.original.uri = "images/t007_orig.png";
  t.edited.uri = "images/t007_edit.png";
  if (with_gt) t.ground_truth = ImageRef{"images/t007_gt.png", std::nullopt};
  t.instruction = "Add a red kite above the tree";
  t.edit_type = EditType::kAdd;
  return t;
}

// Verdict object for `ids`, every score set to `score`.
ordered_json body(std::span<const FactorId> ids, int score, JudgeMode mode = JudgeMode::kOnline,
                  std::string image_id = "t007") {
  ordered_json results = ordered_json::object();
  for (auto id : ids) {
    results[std::string(factor(id).key)] = {
        {"score", score},
        {"justification", "The edited image keeps the scene intact and the change reads "
                          "clearly against the original input."}};
  }
  return ordered_json{{"image_id", image_id}, {factor_results_key(mode), results}};
}

std::string response(std::span<const FactorId> ids, int score, JudgeMode mode = JudgeMode::kOnline,
                     std::string image_id = "t007") {
  return fmt::format("Here is my evaluation.\n```json\n{}\n```\nThanks.",
                     body(ids, score, mode, std::move(image_id)).dump(2));
}

std::vector<FactorId> every() {
  std::vector<FactorId> v;
  for (const auto& f : all_factors()) v.push_back(f.id);
  return v;
}

TEST(Prompt, KeysRoundTrip) {
  for (auto v : {PromptVariant::kMain, PromptVariant::kFactorRubrics,
                 PromptVariant::kCategoryExamples}) {
    EXPECT_EQ(variant_from_key(variant_key(v)), v);
  }
  EXPECT_EQ(variant_key(PromptVariant::kFactorRubrics), "rubrics");
  EXPECT_THROW(variant_from_key("x"), ValidationError);
  EXPECT_EQ(mode_from_key("offline"), JudgeMode::kOffline);
  EXPECT_EQ(factor_results_key(JudgeMode::kOffline), "offline_factor_results");
  EXPECT_EQ(factor_results_key(JudgeMode::kOnline), "online_factor_results");
  EXPECT_EQ(justification_bounds(PromptVariant::kMain).min_words, 10);
  EXPECT_EQ(justification_bounds(PromptVariant::kCategoryExamples).max_words, 30);
}

TEST(Prompt, ImageRolesPerMode) {
  const auto task = make_task();
  const auto online = render_prompt(PromptVariant::kMain, task, JudgeMode::kOnline);
  ASSERT_EQ(online.size(), 1u);
  EXPECT_EQ(online[0].image_roles(), (std::vector<ImageRole>{ImageRole::kInput, ImageRole::kEdited}));
  EXPECT_EQ(online[0].factors.size(), kFactorCount);
  const auto offline = render_prompt(PromptVariant::kFactorRubrics, task, JudgeMode::kOffline);
  EXPECT_EQ(offline[0].image_roles(),
            (std::vector<ImageRole>{ImageRole::kInput, ImageRole::kGroundTruth, ImageRole::kEdited}));
  const auto text = offline[0].to_text();
  EXPECT_NE(text.find("<<image:ground_truth>>"), std::string::npos);
  EXPECT_NE(text.find(task.instruction), std::string::npos);
  EXPECT_NE(text.find("offline_factor_results"), std::string::npos);
  EXPECT_THROW(render_prompt(PromptVariant::kMain, make_task(false), JudgeMode::kOffline),
               PreconditionError);
}

TEST(Prompt, CategoryVariantSplitsByCategory) {
  const auto docs = render_prompt(PromptVariant::kCategoryExamples, make_task(), JudgeMode::kOnline);
  ASSERT_EQ(docs.size(), 3u);
  std::size_t total = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(docs[i].category, kAllCategories[i]);
    EXPECT_EQ(docs[i].factors, factors_in(kAllCategories[i]));
    total += docs[i].factors.size();
  }
  EXPECT_EQ(total, kFactorCount);
}

TEST(Parser, IgnoresProseAndFences) {
  const auto ids = every();
  const auto v = parse_verdict(response(ids, 5));
  EXPECT_EQ(v.image_id, "t007");
  EXPECT_EQ(v.factors[0].score, 5);
  EXPECT_DOUBLE_EQ(v.overall, 5.0);
  EXPECT_TRUE(v.warnings.empty());
  // No fence at all, just an object inside prose.
  ordered_json bare{{"online_factor_results", ordered_json::object()}};
  for (auto id : ids) bare["online_factor_results"][std::string(factor(id).key)] = {{"score", 3}};
  EXPECT_EQ(parse_verdict("Scores: " + bare.dump() + " done").factors[11].score, 3);
}

std::vector<std::string> parse_failure(const std::string& raw) {
  const auto ids = every();
  try {
    parse_partial_verdict(raw, ids);
  } catch (const VerdictParseError& e) {
    EXPECT_EQ(e.raw_response(), raw);
    return e.factors().empty() ? std::vector<std::string>{"<none>"} : e.factors();
  }
  return {};
}

TEST(Parser, RejectsMalformedResponses) {
  const auto ids = every();
  EXPECT_EQ(parse_failure("I cannot evaluate this."), std::vector<std::string>{"<none>"});
  EXPECT_EQ(parse_failure(response(ids, 4) + response(ids, 4)), std::vector<std::string>{"<none>"});

  const auto j = body(ids, 4);
  auto missing = j;
  missing["online_factor_results"].erase("alignment");
  EXPECT_EQ(parse_failure(missing.dump()), std::vector<std::string>{"alignment"});
  auto extra = j;
  extra["online_factor_results"]["sharpness"] = {{"score", 4}};
  EXPECT_EQ(parse_failure(extra.dump()), std::vector<std::string>{"sharpness"});
  auto eight = j;
  eight["online_factor_results"]["seamlessness"]["score"] = 8;
  EXPECT_EQ(parse_failure(eight.dump()), std::vector<std::string>{"seamlessness"});
  auto half = j;
  half["online_factor_results"]["plausibility"]["score"] = 6.5;
  EXPECT_EQ(parse_failure(half.dump()), std::vector<std::string>{"plausibility"});
  auto text = j;
  text["online_factor_results"]["plausibility"]["score"] = "6";
  EXPECT_EQ(parse_failure(text.dump()), std::vector<std::string>{"plausibility"});
}

TEST(Parser, WordBoundsOnlyWarn) {
  const auto ids = every();
  const auto v = parse_partial_verdict(response(ids, 4), ids, WordBounds{1, 3});
  EXPECT_EQ(v.warnings.size(), kFactorCount);
  EXPECT_NE(v.warnings[0].find("(expected 1-3)"), std::string::npos);
}

TEST(Verdict, JsonRoundTrip) {
  FixtureJudgeClient client;
  const auto v = judge_task(make_task(), client, PromptVariant::kMain, JudgeMode::kOffline);
  const auto j = json::parse(verdict_to_json(v).dump());
  EXPECT_EQ(verdict_from_json(j), v);
  EXPECT_TRUE(j.contains("factor_results"));
  EXPECT_EQ(j["mode"], "offline");
  const auto text = verdict_to_json(v).dump() + "\n" + verdict_to_json(v).dump() + "\n";
  EXPECT_EQ(parse_verdicts_jsonl(text).size(), 2u);
  EXPECT_THROW(parse_verdicts_jsonl("{\n"), ParseError);
  EXPECT_THROW(verdict_from_json(json{{"image_id", "x"}}), ValidationError);
}

TEST(Judge, FixtureIsDeterministic) {
  FixtureJudgeClient a("fx", 3), b("fx", 3), c("fx", 4);
  const auto task = make_task();
  const auto va = judge_task(task, a, PromptVariant::kCategoryExamples, JudgeMode::kOnline);
  EXPECT_EQ(va, judge_task(task, b, PromptVariant::kCategoryExamples, JudgeMode::kOnline));
  EXPECT_EQ(a.calls(), 3);
  EXPECT_EQ(va.attempts, 1);
  EXPECT_EQ(va.raw_responses.size(), 3u);
  EXPECT_EQ(va.model, "fx");
  bool differs = false;
  for (const auto& f : all_factors()) {
    EXPECT_EQ(va.factors[static_cast<std::size_t>(f.id)].score, a.fixture_score("t007", f.id));
    differs |= a.fixture_score("t007", f.id) != c.fixture_score("t007", f.id);
  }
  EXPECT_TRUE(differs);
}

TEST(Judge, RetriesMalformedResponse) {
  FixtureJudgeClient client;
  client.enqueue("Sorry, I can't produce JSON today.");
  const auto v = judge_task(make_task(), client, PromptVariant::kMain, JudgeMode::kOnline, 3);
  EXPECT_EQ(v.attempts, 2);
  EXPECT_EQ(client.calls(), 2);
  EXPECT_EQ(v.raw_responses.size(), 1u);
}

TEST(Judge, GivesUpAfterAttempts) {
  FixtureJudgeClient client;
  const auto ids = every();
  auto bad = response(ids, 9);
  for (int i = 0; i < 3; ++i) client.enqueue(bad);
  try {
    judge_task(make_task(), client, PromptVariant::kMain, JudgeMode::kOnline, 3);
    FAIL();
  } catch (const JudgingError& e) {
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_EQ(e.last_raw_response(), bad);
    EXPECT_NE(std::string(e.what()).find("unchanged_regions"), std::string::npos);
  }
  EXPECT_THROW(judge_task(make_task(), client, PromptVariant::kMain, JudgeMode::kOnline, 0),
               PreconditionError);
}

TEST(Judge, CategoryDocumentsMerge) {
  FixtureJudgeClient client;
  const auto eq = factors_in(Category::kEditQuality);
  const auto fid = factors_in(Category::kInstructionFidelity);
  client.enqueue_for(Category::kEditQuality, "not json");
  client.enqueue_for(Category::kEditQuality, response(eq, 2));
  client.enqueue_for(Category::kInstructionFidelity, response(fid, 7));
  const auto v =
      judge_task(make_task(), client, PromptVariant::kCategoryExamples, JudgeMode::kOnline);
  EXPECT_EQ(client.calls(), 4);
  EXPECT_EQ(v.attempts, 2);
  for (auto id : eq) EXPECT_EQ(v.factors[static_cast<std::size_t>(id)].score, 2);
  for (auto id : fid) EXPECT_EQ(v.factors[static_cast<std::size_t>(id)].score, 7);
  for (auto id : factors_in(Category::kImagePreservation)) {
    EXPECT_EQ(v.factors[static_cast<std::size_t>(id)].score, client.fixture_score("t007", id));
  }
  double sum = 0;
  for (const auto& f : v.factors) sum += f.score;
  EXPECT_DOUBLE_EQ(v.overall, sum / 12);
}

TEST(Judge, MismatchedImageIdWarns) {
  FixtureJudgeClient client;
  const auto ids = every();
  client.enqueue(response(ids, 4, JudgeMode::kOnline, "other"));
  const auto v = judge_task(make_task(), client, PromptVariant::kMain, JudgeMode::kOnline);
  ASSERT_EQ(v.warnings.size(), 1u);
  EXPECT_NE(v.warnings[0].find("'other'"), std::string::npos);
}

TEST(HttpClient, BuildsMultimodalRequest) {
  ModelEndpoint ep;
  ep.name = "test";
  ep.base_url = "http://127.0.0.1:1/v1";
  ep.model = "vision-model";
  ep.temperature = 0.0;
  HttpJudgeClient client(ep, testing::bench_dir());
  auto task = make_task();
  task.original.uri = "images/t000_orig.png";
  task.edited.uri = "images/t000_edit.png";
  task.ground_truth = ImageRef{"images/t000_gt.png", std::nullopt};
  const auto docs = render_prompt(PromptVariant::kMain, task, JudgeMode::kOffline);
  const auto body = client.build_request(docs[0], task);
  EXPECT_EQ(body["model"], "vision-model");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_FALSE(body.contains("max_tokens"));
  const auto& content = body["messages"][0]["content"];
  int images = 0;
  for (const auto& part : content) {
    if (part["type"] == "image_url") {
      ++images;
      EXPECT_EQ(part["image_url"]["url"].get<std::string>().rfind("data:image/png;base64,", 0), 0u);
    }
  }
  EXPECT_EQ(images, 3);
  EXPECT_EQ(content[0]["type"], "text");
}

TEST(HttpClient, SecretsComeFromEnvironment) {
  ModelEndpoint ep;
  ep.name = "test";
  ep.base_url = "http://127.0.0.1:1/v1";
  ep.model = "m";
  ep.api_key_env = "EDITJUDGE_TEST_ABSENT_JUDGE_KEY";
  ::unsetenv("EDITJUDGE_TEST_ABSENT_JUDGE_KEY");
  EXPECT_THROW(HttpJudgeClient{ep}, ConfigError);
  ::setenv("EDITJUDGE_TEST_ABSENT_JUDGE_KEY", "k", 1);
  EXPECT_NO_THROW(HttpJudgeClient{ep});
  ep.base_url.clear();
  EXPECT_THROW(HttpJudgeClient{ep}, ConfigError);
}

}  // namespace
}  // namespace editjudge
