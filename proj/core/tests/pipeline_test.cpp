// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/pipeline.hpp"

#include <fstream>

#include <gtest/gtest.h>

#include "editjudge/errors.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

RunConfig bench_config(const fs::path& out) {
  json j{{"dataset",
          {{"tasks", (testing::bench_dir() / "tasks.jsonl").string()},
           {"records", (testing::bench_dir() / "records.jsonl").string()}}},
         {"endpoints", json::array({{{"name", "fx"}, {"kind", "fixture"}}})},
         {"judge", {{"variant", "main"}, {"mode", "online"}}},
         {"out_dir", out.string()},
         {"study", {{"participants", 25}}},
         {"providers",
          {{"clip", {{"kind", "fixture"}}}, {"dino", {{"kind", "fixture"}}},
           {"lpips", {{"kind", "fixture"}}}}}};
  return parse_config(j);
}

TEST(Pipeline, IngestRecordsShapesAndAssignment) {
  testing::TempDir dir;
  const auto c = bench_config(dir / "out");
  const auto r = run_ingest(c);
  EXPECT_EQ(r.failed, 0u);
  EXPECT_EQ(r.processed, 100u);
  const auto tasks = load_tasks(layout::tasks(c), FileFormat::kJsonl);
  ASSERT_EQ(tasks.size(), 100u);
  EXPECT_EQ(tasks[0].original.shape->width, 24);
  const auto a = assignment_from_json(json::parse(testing::slurp(layout::assignment(c))));
  EXPECT_EQ(a.participants.size(), 25u);
}

TEST(Pipeline, IngestWritesNothingOnFailure) {
  testing::TempDir dir;
  std::ofstream(dir / "tasks.jsonl")
      << R"({"task_id":"x","original":{"path":"missing.png"},"instruction":"Add a cat",)"
      << R"("edit_type":"Add","edited":{"path":"missing.png"}})" << "\n";
  json j{{"dataset", {{"tasks", (dir / "tasks.jsonl").string()}}},
         {"out_dir", (dir / "out").string()}};
  const auto c = parse_config(j);
  const auto r = run_ingest(c);
  EXPECT_EQ(r.failed, 1u);
  EXPECT_EQ(r.errors[0]["task_id"], "x");
  EXPECT_EQ(r.errors[0]["kind"], "io");
  EXPECT_FALSE(fs::exists(layout::tasks(c)));
}

TEST(Pipeline, JudgeIsResumableAndReproducible) {
  testing::TempDir a, b;
  const auto ca = bench_config(a / "out");
  const auto cb = bench_config(b / "out");
  run_ingest(ca);
  run_ingest(cb);
  FixtureJudgeClient client_a, client_b;
  const auto ra = run_judge(ca, client_a, PromptVariant::kMain);
  EXPECT_EQ(ra.processed, 100u);
  EXPECT_EQ(client_a.calls(), 100);
  const auto archive = layout::verdict_archive(ca, "fixture-judge", PromptVariant::kMain,
                                               JudgeMode::kOnline);
  EXPECT_EQ(archive.filename(), "fixture-judge_main_online.jsonl");
  const auto first = testing::slurp(archive);

  const auto again = run_judge(ca, client_a, PromptVariant::kMain);
  EXPECT_EQ(again.skipped, 100u);
  EXPECT_EQ(client_a.calls(), 100);
  EXPECT_EQ(testing::slurp(archive), first);

  auto cb4 = cb;
  cb4.concurrency = 1;
  run_judge(cb4, client_b, PromptVariant::kMain);
  EXPECT_EQ(testing::slurp(layout::verdict_archive(cb, "fixture-judge", PromptVariant::kMain,
                                                   JudgeMode::kOnline)),
            first);
}

TEST(Pipeline, JudgeFailuresAreLoggedAndRetriedNextRun) {
  testing::TempDir dir;
  auto c = bench_config(dir / "out");
  c.attempts = 1;
  run_ingest(c);
  FixtureJudgeClient client;
  client.enqueue("no json here");
  c.concurrency = 1;
  const auto r = run_judge(c, client, PromptVariant::kMain);
  EXPECT_EQ(r.failed, 1u);
  EXPECT_EQ(r.processed, 99u);
  EXPECT_EQ(r.errors[0]["kind"], "judging");
  EXPECT_TRUE(fs::exists(layout::judge_errors(c)));
  const auto r2 = run_judge(c, client, PromptVariant::kMain);
  EXPECT_EQ(r2.processed, 1u);
  EXPECT_EQ(r2.skipped, 99u);
}

TEST(Pipeline, MetricsCoverEveryTask) {
  testing::TempDir dir;
  const auto c = bench_config(dir / "out");
  run_ingest(c);
  const auto r = run_metrics(c, make_providers(c));
  EXPECT_EQ(r.failed, 0u);
  const auto m = load_task_metrics(layout::metrics_jsonl(c));
  ASSERT_EQ(m.size(), 100u);
  for (const auto& t : m) {
    EXPECT_TRUE(t.values[9]) << t.task_id;  // psnr
    EXPECT_TRUE(t.values[10]) << t.task_id;  // ssim
  }
  EXPECT_EQ(run_metrics(c, make_providers(c)).skipped, 100u);
  EXPECT_EQ(json::parse(task_metrics_to_json(m[0]).dump()),
            json::parse(task_metrics_to_json(task_metrics_from_json(
                            json::parse(task_metrics_to_json(m[0]).dump())))
                            .dump()));
}

TEST(Pipeline, AgreeMatchesOracleOnBenchFixture) {
  testing::TempDir dir;
  const auto c = bench_config(dir / "out");
  fs::create_directories(layout::verdicts_dir(c));
  fs::copy_file(testing::bench_dir() / "verdicts" / "fixture-judge_main_online.jsonl",
                layout::verdicts_dir(c) / "fixture-judge_main_online.jsonl");
  const auto r = run_agree(c);
  EXPECT_EQ(r.processed, 1u);
  const auto expected = json::parse(testing::slurp(testing::golden_dir() / "bench_expected.json"));
  const auto read = [&](const char* name) {
    return json::parse(testing::slurp(layout::agreement_dir(c) / name))["data"];
  };
  const auto agg = read("aggregates.json");
  auto diff = testing::json_diff(agg["human"], expected["human"], 0.0);
  EXPECT_TRUE(diff.empty()) << diff.front();
  diff = testing::json_diff(agg["judges"][0], expected["judge"], 0.0);
  EXPECT_TRUE(diff.empty()) << diff.front();
  diff = testing::json_diff(read("pointwise.json"), expected["pointwise"], 1e-9);
  EXPECT_TRUE(diff.empty()) << diff.size() << " first: " << diff.front();
  diff = testing::json_diff(read("pairwise.json"), expected["pairwise"], 1e-9);
  EXPECT_TRUE(diff.empty()) << diff.front();
  diff = testing::json_diff(read("icc.json"), expected["icc"], 1e-9);
  EXPECT_TRUE(diff.empty()) << diff.front();
}

TEST(Pipeline, ReportRendersEveryTable) {
  testing::TempDir dir;
  const auto c = bench_config(dir / "out");
  run_ingest(c);
  FixtureJudgeClient client;
  run_judge(c, client, PromptVariant::kMain);
  run_metrics(c, make_providers(c));
  const auto r = run_report(c);
  EXPECT_EQ(r.processed, 5u);
  for (const char* name : {"factor_scores", "category_scores", "traditional_metrics",
                           "pointwise_agreement", "pairwise_agreement"}) {
    EXPECT_TRUE(fs::exists(layout::reports_dir(c) / (std::string(name) + ".md"))) << name;
    EXPECT_TRUE(fs::exists(layout::reports_dir(c) / (std::string(name) + ".csv"))) << name;
  }
  const auto meta = json::parse(testing::slurp(layout::reports_dir(c) / "metadata.json"));
  EXPECT_EQ(meta["inputs"]["verdicts"][0]["evaluator"], "fixture-judge main online");
  EXPECT_EQ(meta["inputs"]["metric_tasks"], 100);
}

TEST(Pipeline, ReportNeedsRecordsAndVerdicts) {
  testing::TempDir dir;
  auto c = bench_config(dir / "out");
  EXPECT_THROW(run_report(c), PreconditionError);
  c.records.reset();
  EXPECT_THROW(run_agree(c), ConfigError);
}

}  // namespace
}  // namespace editjudge
