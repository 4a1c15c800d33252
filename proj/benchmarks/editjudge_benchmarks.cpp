// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "editjudge/aggregate.hpp"
#include "editjudge/agreement.hpp"
#include "editjudge/image.hpp"
#include "editjudge/judge.hpp"
#include "editjudge/pixel_metrics.hpp"

namespace ej = editjudge;

namespace {

ej::ImageBuffer random_image(int h, int w, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(h) * w * 3);
  for (auto& x : v) x = u(rng);
  return ej::ImageBuffer(h, w, std::move(v));
}

ej::EditTask sample_task() {
  ej::EditTask t;
  t.task_id = "bench-0001";
  t.original.uri = "orig.png";
  t.edited.uri = "edit.png";
  t.ground_truth = ej::ImageRef{"gt.png", std::nullopt};
  t.instruction = "Add a red umbrella next to the bench";
  t.edit_type = ej::EditType::kAdd;
  return t;
}

void BM_Ssim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_image(n, n, 1);
  const auto b = random_image(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ej::ssim(a, b));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

void BM_Psnr(benchmark::State& state) {
  const auto a = random_image(256, 256, 3);
  const auto b = random_image(256, 256, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ej::psnr(a, b));
}
BENCHMARK(BM_Psnr);

void BM_KendallTau(benchmark::State& state) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(1, 7);
  std::vector<double> h(static_cast<std::size_t>(state.range(0)));
  std::vector<double> m(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = d(rng);
    m[i] = d(rng);
  }
  const auto sh = ej::ScoreSeries::from_values(h);
  const auto sm = ej::ScoreSeries::from_values(m);
  for (auto _ : state) benchmark::DoNotOptimize(ej::kendall_tau(sh, sm));
}
BENCHMARK(BM_KendallTau)->Arg(100)->Arg(1200);

void BM_RenderPrompt(benchmark::State& state) {
  const auto task = sample_task();
  const auto variant = static_cast<ej::PromptVariant>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ej::render_prompt(variant, task, ej::JudgeMode::kOffline));
  }
}
BENCHMARK(BM_RenderPrompt)->DenseRange(0, 2);

void BM_ParseVerdict(benchmark::State& state) {
  const auto task = sample_task();
  ej::FixtureJudgeClient client;
  const auto docs = ej::render_prompt(ej::PromptVariant::kMain, task, ej::JudgeMode::kOnline);
  const auto raw = client.canned_response(docs.front());
  for (auto _ : state) benchmark::DoNotOptimize(ej::parse_verdict(raw));
}
BENCHMARK(BM_ParseVerdict);

void BM_Aggregate(benchmark::State& state) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(1, 7);
  std::vector<ej::RatedSheet> sheets;
  for (int i = 0; i < 100; ++i) {
    for (int r = 0; r < 5; ++r) {
      ej::RatedSheet s;
      s.image_id = "img" + std::to_string(i);
      s.edit_type = ej::kAllEditTypes[static_cast<std::size_t>(i % 6)];
      s.rater = "P" + std::to_string(r);
      for (auto& f : s.factors) f = d(rng);
      s.overall_question = d(rng);
      sheets.push_back(std::move(s));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(ej::aggregate(std::span<const ej::RatedSheet>(sheets)));
}
BENCHMARK(BM_Aggregate);

}  // namespace

BENCHMARK_MAIN();
