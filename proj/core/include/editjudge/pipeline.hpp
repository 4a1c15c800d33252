// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/config.hpp"
#include "editjudge/dataset.hpp"
#include "editjudge/embedding.hpp"
#include "editjudge/http.hpp"
#include "editjudge/judge.hpp"
#include "editjudge/reporting.hpp"

namespace editjudge {

/// Files produced under RunConfig::out_dir.
namespace layout {
std::filesystem::path tasks(const RunConfig& c);       // tasks.jsonl
std::filesystem::path assignment(const RunConfig& c);  // assignment.json
std::filesystem::path verdicts_dir(const RunConfig& c);
std::filesystem::path verdict_archive(const RunConfig& c, std::string_view model,
                                      PromptVariant variant, JudgeMode mode);
std::filesystem::path judge_errors(const RunConfig& c);
std::filesystem::path metrics_jsonl(const RunConfig& c);
std::filesystem::path metrics_csv(const RunConfig& c);
std::filesystem::path agreement_dir(const RunConfig& c);
std::filesystem::path reports_dir(const RunConfig& c);
}  // namespace layout

/// What a stage did. `failed` > 0 makes the CLI exit nonzero.
struct StageReport {
  StageReport() = default;
  explicit StageReport(std::string name) : stage(std::move(name)) {}

  std::string stage;
  std::size_t processed = 0;
  std::size_t skipped = 0;  // already complete from an earlier run
  std::size_t failed = 0;
  std::vector<nlohmann::ordered_json> errors;  // {"task_id", "kind", "message"}
  std::vector<std::filesystem::path> artifacts;

  nlohmann::ordered_json to_json() const;
};

/// The ingested task list when present, the configured task file otherwise.
std::vector<EditTask> load_run_tasks(const RunConfig& c);

/// Validates the tasks, decodes every image to record its shape and check
/// mask geometry, and writes tasks.jsonl (plus assignment.json when a study
/// is configured).
StageReport run_ingest(const RunConfig& c);

/// Client for the configured judge endpoint.
std::unique_ptr<JudgeClient> make_judge_client(const RunConfig& c, http::Sleeper sleep = {});

/// Judges every task lacking a verdict in the archive for (model, variant,
/// mode). Verdicts are appended as they complete; the archive is then
/// rewritten in task-id order so that reruns are byte-identical.
StageReport run_judge(const RunConfig& c, JudgeClient& client, PromptVariant variant);

struct ProviderSet {
  std::shared_ptr<EmbeddingProvider> clip;
  std::shared_ptr<EmbeddingProvider> dino;
  std::shared_ptr<EmbeddingProvider> lpips;
};
ProviderSet make_providers(const RunConfig& c, http::Sleeper sleep = {});

/// Metric columns in output order.
struct MetricInfo {
  std::string_view key;
  std::string_view display;
  bool lower_is_better;
};
inline constexpr std::array<MetricInfo, 11> kMetrics = {{
    {"background_consistency", "Background Consistency", false},
    {"clip_image", "Clip Image", false},
    {"clip_text", "Clip Text", false},
    {"dino", "Dino Image", false},
    {"l1", "L1 Error", true},
    {"l2", "L2 Error", true},
    {"lpips", "Lpips", true},
    {"mask_lpips", "Mask Lpips", true},
    {"mask_ssim", "Mask Ssim", false},
    {"psnr", "Psnr", false},
    {"ssim", "Ssim", false},
}};

struct TaskMetrics {
  std::string task_id;
  EditType edit_type = EditType::kAdd;
  std::string reference;  // "ground_truth" or "original"
  std::array<std::optional<double>, kMetrics.size()> values{};
  std::vector<std::string> warnings;
};

nlohmann::ordered_json task_metrics_to_json(const TaskMetrics& m);
TaskMetrics task_metrics_from_json(const nlohmann::json& j);
std::vector<TaskMetrics> load_task_metrics(const std::filesystem::path& path);

/// Pixel metrics compare the edited image with the ground truth when the task
/// has one and with the original otherwise; background consistency always
/// uses the original. Masked metrics need a mask; embedding metrics need the
/// provider for their role. A metric that is undefined for a task is left
/// empty with a warning.
TaskMetrics compute_task_metrics(const EditTask& task, const std::filesystem::path& image_root,
                                 const ProviderSet& providers);

/// Computes metrics for tasks not yet in metrics/task_metrics.jsonl.
StageReport run_metrics(const RunConfig& c, const ProviderSet& providers);

/// Human aggregates, judge aggregates, pointwise/pairwise agreement for every
/// verdict archive, and ICC(2,k) over the human raters.
StageReport run_agree(const RunConfig& c);

/// Renders every table into reports/ with metadata.json.
StageReport run_report(const RunConfig& c);

/// Every verdict archive under verdicts/, in file-name order.
std::vector<std::filesystem::path> verdict_archives(const RunConfig& c);
/// "model variant mode" of an archive's verdicts.
std::string evaluator_label(const JudgeVerdict& v);

}  // namespace editjudge
