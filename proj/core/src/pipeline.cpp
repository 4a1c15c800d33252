// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "editjudge/aggregate.hpp"
#include "editjudge/csv.hpp"
#include "editjudge/errors.hpp"
#include "editjudge/executor.hpp"
#include "editjudge/image.hpp"
#include "editjudge/pixel_metrics.hpp"

namespace editjudge {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace layout {
fs::path tasks(const RunConfig& c) { return c.out_dir / "tasks.jsonl"; }
fs::path assignment(const RunConfig& c) { return c.out_dir / "assignment.json"; }
fs::path verdicts_dir(const RunConfig& c) { return c.out_dir / "verdicts"; }
fs::path verdict_archive(const RunConfig& c, std::string_view model, PromptVariant variant,
                         JudgeMode mode) {
  std::string slug;
  for (char ch : model) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.';
    slug += keep ? ch : '_';
  }
  return verdicts_dir(c) /
         fmt::format("{}_{}_{}.jsonl", slug, variant_key(variant), mode_key(mode));
}
fs::path judge_errors(const RunConfig& c) { return c.out_dir / "judge_errors.jsonl"; }
fs::path metrics_jsonl(const RunConfig& c) { return c.out_dir / "metrics" / "task_metrics.jsonl"; }
fs::path metrics_csv(const RunConfig& c) { return c.out_dir / "metrics" / "task_metrics.csv"; }
fs::path agreement_dir(const RunConfig& c) { return c.out_dir / "agreement"; }
fs::path reports_dir(const RunConfig& c) { return c.out_dir / "reports"; }
}  // namespace layout

namespace {

ordered_json error_entry(std::string_view task_id, const std::exception_ptr& ep) {
  ordered_json e;
  e["task_id"] = task_id;
  try {
    std::rethrow_exception(ep);
  } catch (const Error& err) {
    e["kind"] = err.kind();
    e["message"] = err.what();
  } catch (const std::exception& err) {
    e["kind"] = "internal";
    e["message"] = err.what();
  }
  return e;
}

fs::path resolve_image(const fs::path& root, const ImageRef& ref) {
  fs::path p(ref.uri);
  if (p.is_relative() && !root.empty()) p = root / p;
  return p;
}

std::string relative_to_out(const RunConfig& c, const fs::path& p) {
  return p.lexically_relative(c.out_dir).generic_string();
}

int effective_concurrency(int configured, int declared) {
  return declared > 0 ? std::min(configured, declared) : configured;
}

}  // namespace

ordered_json StageReport::to_json() const {
  ordered_json j;
  j["stage"] = stage;
  j["processed"] = processed;
  j["skipped"] = skipped;
  j["failed"] = failed;
  j["errors"] = errors;
  std::vector<std::string> paths;
  for (const auto& a : artifacts) paths.push_back(a.generic_string());
  j["artifacts"] = paths;
  return j;
}

std::vector<EditTask> load_run_tasks(const RunConfig& c) {
  if (fs::exists(layout::tasks(c))) return load_tasks(layout::tasks(c), FileFormat::kJsonl);
  return load_tasks(c.tasks, format_from_path(c.tasks));
}

// ---------------------------------------------------------------------------
// ingest

StageReport run_ingest(const RunConfig& c) {
  StageReport report{"ingest"};
  auto tasks = load_tasks(c.tasks, format_from_path(c.tasks));

  auto fill = [&](const std::string& task_id, ImageRef& ref, bool mask) {
    const auto path = resolve_image(c.image_root, ref);
    ImageShape shape;
    if (mask) {
      const auto m = load_mask(path);
      shape = {m.width(), m.height(), 1};
    } else {
      const auto img = load_image(path);
      shape = {img.width(), img.height(), ImageBuffer::kChannels};
    }
    if (ref.shape && !(ref.shape->width == shape.width && ref.shape->height == shape.height)) {
      throw ValidationError(
          "shape", fmt::format("task '{}': {} is {}x{} but the task file says {}x{}", task_id,
                               ref.uri, shape.width, shape.height, ref.shape->width,
                               ref.shape->height));
    }
    ref.shape = shape;
  };

  const auto errors = run_bounded(tasks.size(), c.concurrency, [&](std::size_t i) {
    auto& t = tasks[i];
    fill(t.task_id, t.original, false);
    fill(t.task_id, t.edited, false);
    if (t.ground_truth) fill(t.task_id, *t.ground_truth, false);
    if (t.mask) fill(t.task_id, *t.mask, true);
    t.validate();
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errors[i]) {
      report.errors.push_back(error_entry(tasks[i].task_id, errors[i]));
      ++report.failed;
    }
  }
  if (report.failed > 0) return report;  // nothing is written for a bad dataset

  write_file(layout::tasks(c), tasks_to_jsonl(tasks));
  report.artifacts.push_back(layout::tasks(c));
  if (c.study) {
    AssignmentParams p;
    p.participants = c.study->participants;
    p.tasks_per_participant = c.study->tasks_per_participant;
    p.raters_per_task = c.study->raters_per_task;
    p.seed = c.seed;
    const auto a = assign_tasks(tasks, p);
    write_file(layout::assignment(c), assignment_to_json(a).dump(2) + "\n");
    report.artifacts.push_back(layout::assignment(c));
  }
  report.processed = tasks.size();
  return report;
}

// ---------------------------------------------------------------------------
// judge

std::unique_ptr<JudgeClient> make_judge_client(const RunConfig& c, http::Sleeper sleep) {
  const auto& e = c.endpoint();
  if (e.kind == EndpointConfig::Kind::kFixture) {
    return std::make_unique<FixtureJudgeClient>(e.endpoint.model, e.fixture_seed);
  }
  return std::make_unique<HttpJudgeClient>(e.endpoint, c.image_root, std::move(sleep));
}

StageReport run_judge(const RunConfig& c, JudgeClient& client, PromptVariant variant) {
  StageReport report{"judge"};
  const auto tasks = load_run_tasks(c);
  const auto archive = layout::verdict_archive(c, client.model_name(), variant, c.mode);

  std::unordered_set<std::string> done;
  for (const auto& v : load_verdicts(archive)) done.insert(v.image_id);

  std::vector<const EditTask*> todo;
  for (const auto& t : tasks) {
    if (done.count(t.task_id)) {
      ++report.skipped;
    } else {
      todo.push_back(&t);
    }
  }

  std::mutex write_mu;
  const auto errors = run_bounded(
      todo.size(), effective_concurrency(c.concurrency, client.max_parallelism()),
      [&](std::size_t i) {
        auto v = judge_task(*todo[i], client, variant, c.mode, c.attempts);
        const auto line = verdict_to_json(v).dump() + "\n";
        std::lock_guard lock(write_mu);
        append_durable(archive, line);
      });

  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (errors[i]) {
      report.errors.push_back(error_entry(todo[i]->task_id, errors[i]));
      ++report.failed;
    } else {
      ++report.processed;
    }
  }

  // Canonical order: one line per task id, sorted.
  if (fs::exists(archive)) {
    auto verdicts = load_verdicts(archive);
    std::stable_sort(verdicts.begin(), verdicts.end(),
                     [](const JudgeVerdict& a, const JudgeVerdict& b) { return a.image_id < b.image_id; });
    std::string text;
    std::string last;
    for (const auto& v : verdicts) {
      if (!text.empty() && v.image_id == last) continue;
      last = v.image_id;
      text += verdict_to_json(v).dump() + "\n";
    }
    write_file(archive, text);
    report.artifacts.push_back(archive);
  }

  if (!report.errors.empty()) {
    std::string log;
    for (const auto& e : report.errors) log += e.dump() + "\n";
    append_durable(layout::judge_errors(c), log);
    report.artifacts.push_back(layout::judge_errors(c));
  }
  return report;
}

// ---------------------------------------------------------------------------
// metrics

ProviderSet make_providers(const RunConfig& c, http::Sleeper sleep) {
  ProviderSet set;
  std::map<std::string, std::shared_ptr<EmbeddingProvider>> made;
  for (const auto& [role, p] : c.providers) {
    std::shared_ptr<EmbeddingProvider> provider;
    switch (p.kind) {
      case ProviderConfig::Kind::kFixture:
        provider = std::make_shared<FixtureEmbeddingProvider>(p.fixture_name);
        break;
      case ProviderConfig::Kind::kRemote:
        provider = std::make_shared<RemoteEmbeddingProvider>(p.remote, sleep);
        break;
      case ProviderConfig::Kind::kOnnx:
        provider = std::make_shared<OnnxEmbeddingProvider>(p.onnx);
        break;
    }
    made[role] = std::move(provider);
  }
  if (auto it = made.find("clip"); it != made.end()) set.clip = it->second;
  if (auto it = made.find("dino"); it != made.end()) set.dino = it->second;
  if (auto it = made.find("lpips"); it != made.end()) set.lpips = it->second;
  return set;
}

namespace {

std::size_t metric_index(std::string_view key) {
  for (std::size_t i = 0; i < kMetrics.size(); ++i) {
    if (kMetrics[i].key == key) return i;
  }
  throw ValidationError("metric", fmt::format("unknown metric '{}'", key));
}

std::string metric_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);  // shortest round-trip form
}

}  // namespace

ordered_json task_metrics_to_json(const TaskMetrics& m) {
  ordered_json j;
  j["task_id"] = m.task_id;
  j["edit_type"] = edit_type_name(m.edit_type);
  j["reference"] = m.reference;
  ordered_json values = ordered_json::object();
  for (std::size_t i = 0; i < kMetrics.size(); ++i) {
    const auto key = std::string(kMetrics[i].key);
    if (!m.values[i]) {
      values[key] = nullptr;
    } else if (std::isinf(*m.values[i])) {
      values[key] = *m.values[i] > 0 ? "inf" : "-inf";
    } else {
      values[key] = *m.values[i];
    }
  }
  j["metrics"] = std::move(values);
  j["warnings"] = m.warnings;
  return j;
}

TaskMetrics task_metrics_from_json(const json& j) {
  TaskMetrics m;
  try {
    m.task_id = j.at("task_id").get<std::string>();
    m.edit_type = parse_edit_type(j.at("edit_type").get<std::string>());
    m.reference = j.at("reference").get<std::string>();
    for (const auto& [key, v] : j.at("metrics").items()) {
      auto& slot = m.values[metric_index(key)];
      if (v.is_null()) continue;
      if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s != "inf" && s != "-inf") {
          throw ValidationError(key, fmt::format("metric {} has value '{}'", key, s));
        }
        slot = s == "inf" ? kPsnrIdentical : -kPsnrIdentical;
      } else {
        slot = v.get<double>();
      }
    }
    m.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ValidationError("metrics", fmt::format("malformed metrics record: {}", e.what()));
  }
  return m;
}

std::vector<TaskMetrics> load_task_metrics(const fs::path& path) {
  std::vector<TaskMetrics> out;
  if (!fs::exists(path)) return out;
  const auto text = read_file(path);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = std::string_view(text).substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(task_metrics_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("{} line {}: {}", path.string(), line_no, e.what()), line_no);
    }
  }
  return out;
}

TaskMetrics compute_task_metrics(const EditTask& task, const fs::path& image_root,
                                 const ProviderSet& providers) {
  TaskMetrics m;
  m.task_id = task.task_id;
  m.edit_type = task.edit_type;
  m.reference = task.ground_truth ? "ground_truth" : "original";

  const auto original = load_image(resolve_image(image_root, task.original));
  const auto edited = load_image(resolve_image(image_root, task.edited));
  std::optional<ImageBuffer> gt;
  if (task.ground_truth) gt = load_image(resolve_image(image_root, *task.ground_truth));
  std::optional<EditMask> mask;
  if (task.mask) mask = load_mask(resolve_image(image_root, *task.mask));
  const ImageBuffer& reference = gt ? *gt : original;

  auto put = [&](std::string_view key, auto&& compute) {
    try {
      m.values[metric_index(key)] = compute();
    } catch (const DegenerateInputError& e) {
      m.warnings.push_back(fmt::format("{}: {}", key, e.what()));
    } catch (const PreconditionError& e) {
      m.warnings.push_back(fmt::format("{}: {}", key, e.what()));
    } catch (const ShapeMismatchError& e) {
      m.warnings.push_back(fmt::format("{}: {}", key, e.what()));
    } catch (const UnsupportedCapabilityError& e) {
      m.warnings.push_back(fmt::format("{}: {}", key, e.what()));
    }
  };

  put("l1", [&] { return l1_distance(edited, reference); });
  put("l2", [&] { return l2_mse(edited, reference); });
  put("psnr", [&] { return psnr(edited, reference); });
  put("ssim", [&] { return ssim(edited, reference); });
  if (mask) {
    put("mask_ssim", [&] { return masked_ssim(edited, reference, *mask); });
    put("background_consistency",
        [&] { return background_consistency(edited, original, &*mask); });
  } else {
    m.warnings.emplace_back("mask_ssim, background_consistency: task has no mask");
  }
  if (providers.clip) {
    put("clip_image", [&] { return clip_image_similarity(*providers.clip, edited, reference); });
    put("clip_text", [&] { return clip_text_score(*providers.clip, edited, task.instruction); });
  }
  if (providers.dino) {
    if (gt) {
      put("dino", [&] { return dino_similarity(*providers.dino, edited, *gt); });
    } else {
      m.warnings.emplace_back("dino: task has no ground truth");
    }
  }
  if (providers.lpips) {
    put("lpips", [&] { return lpips_distance(*providers.lpips, edited, reference); });
    if (mask) {
      put("mask_lpips", [&] { return lpips_distance(*providers.lpips, edited, reference, &*mask); });
    }
  }
  return m;
}

StageReport run_metrics(const RunConfig& c, const ProviderSet& providers) {
  StageReport report{"metrics"};
  const auto tasks = load_run_tasks(c);
  const auto path = layout::metrics_jsonl(c);

  std::unordered_set<std::string> done;
  for (const auto& m : load_task_metrics(path)) done.insert(m.task_id);
  std::vector<const EditTask*> todo;
  for (const auto& t : tasks) {
    if (done.count(t.task_id)) {
      ++report.skipped;
    } else {
      todo.push_back(&t);
    }
  }

  int limit = c.concurrency;
  for (const auto* p : {providers.clip.get(), providers.dino.get(), providers.lpips.get()}) {
    if (p) limit = effective_concurrency(limit, p->max_parallelism());
  }
  std::mutex write_mu;
  const auto errors = run_bounded(todo.size(), limit, [&](std::size_t i) {
    const auto m = compute_task_metrics(*todo[i], c.image_root, providers);
    const auto line = task_metrics_to_json(m).dump() + "\n";
    std::lock_guard lock(write_mu);
    append_durable(path, line);
  });
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (errors[i]) {
      report.errors.push_back(error_entry(todo[i]->task_id, errors[i]));
      ++report.failed;
    } else {
      ++report.processed;
    }
  }

  auto all = load_task_metrics(path);
  std::stable_sort(all.begin(), all.end(),
                   [](const TaskMetrics& a, const TaskMetrics& b) { return a.task_id < b.task_id; });
  std::string jsonl;
  std::vector<std::string> header{"task_id", "edit_type", "reference"};
  for (const auto& info : kMetrics) header.emplace_back(info.key);
  std::string table = csv::format_row(header);
  std::string last;
  for (const auto& m : all) {
    if (!jsonl.empty() && m.task_id == last) continue;
    last = m.task_id;
    jsonl += task_metrics_to_json(m).dump() + "\n";
    std::vector<std::string> row{m.task_id, std::string(edit_type_name(m.edit_type)), m.reference};
    for (const auto& v : m.values) row.push_back(v ? metric_text(*v) : std::string());
    table += csv::format_row(row);
  }
  write_file(path, jsonl);
  write_file(layout::metrics_csv(c), table);
  report.artifacts.push_back(path);
  report.artifacts.push_back(layout::metrics_csv(c));
  return report;
}

// ---------------------------------------------------------------------------
// agree / report

std::vector<fs::path> verdict_archives(const RunConfig& c) {
  std::vector<fs::path> out;
  const auto dir = layout::verdicts_dir(c);
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string evaluator_label(const JudgeVerdict& v) {
  return fmt::format("{} {} {}", v.model, variant_key(v.variant), mode_key(v.mode));
}

namespace {

struct Evaluated {
  std::string label;
  std::string archive;
  std::vector<ImageScores> images;
};

std::vector<ImageScores> human_images(const RunConfig& c) {
  if (!c.records) throw ConfigError("dataset.records is required for agreement and reports");
  const auto records = load_records(*c.records);
  if (records.empty()) {
    throw PreconditionError(fmt::format("{} holds no records", c.records->string()));
  }
  const auto sheets = sheets_from_records(records);
  return per_image_means(sheets);
}

std::vector<Evaluated> judge_images(const RunConfig& c) {
  std::vector<Evaluated> out;
  for (const auto& path : verdict_archives(c)) {
    const auto verdicts = load_verdicts(path);
    if (verdicts.empty()) continue;
    std::set<std::string> labels;
    for (const auto& v : verdicts) labels.insert(evaluator_label(v));
    if (labels.size() != 1) {
      throw ValidationError("verdicts", fmt::format("{} mixes evaluators", path.string()));
    }
    const auto sheets = sheets_from_verdicts(verdicts);
    out.push_back({*labels.begin(), relative_to_out(c, path), per_image_means(sheets)});
  }
  return out;
}

ordered_json correlation_json(const std::optional<Correlation>& r) {
  if (!r) return nullptr;
  return {{"coefficient", r->coefficient}, {"p_value", r->p_value}, {"n", r->n}};
}

ordered_json pointwise_json(const PointwiseRow& r) {
  ordered_json j;
  j["factor"] = r.scope;
  j["evaluator"] = r.evaluator;
  j["n"] = r.n;
  j["mse"] = r.mse;
  j["mae"] = r.mae;
  j["acc"] = r.acc;
  j["acc_pm1"] = r.acc_pm1;
  j["pearson"] = correlation_json(r.pearson);
  j["spearman"] = correlation_json(r.spearman);
  j["kendall"] = correlation_json(r.kendall);
  return j;
}

ordered_json pairwise_json(const PairwiseRow& r) {
  auto one = [](const PairwiseResult& p) {
    ordered_json j;
    j["agree"] = p.agree;
    j["counted"] = p.counted;
    if (auto a = p.accuracy()) {
      j["accuracy"] = *a;
    } else {
      j["accuracy"] = nullptr;
    }
    return j;
  };
  ordered_json j;
  j["evaluator"] = r.evaluator;
  ordered_json factors = ordered_json::object();
  for (const auto& f : all_factors()) {
    factors[std::string(f.key)] = one(r.factors[static_cast<std::size_t>(f.id)]);
  }
  j["factors"] = std::move(factors);
  j["all"] = one(r.all);
  return j;
}

// ICC(2,k) per factor over images rated by the modal number of raters.
ordered_json icc_json(const RunConfig& c) {
  const auto records = load_records(*c.records);
  std::map<std::string, std::vector<const EvaluationRecord*>> by_image;
  for (const auto& r : records) by_image[r.image_id].push_back(&r);
  std::map<std::size_t, std::size_t> k_count;
  for (const auto& [_, rs] : by_image) ++k_count[rs.size()];
  std::size_t k = 0;
  std::size_t best = 0;
  for (const auto& [kk, n] : k_count) {
    if (n > best) {
      best = n;
      k = kk;
    }
  }
  ordered_json j;
  j["method"] = "ICC(2,k): two-way random effects, average measures";
  j["raters_per_image"] = k;
  std::vector<std::string> excluded;
  std::vector<std::vector<const EvaluationRecord*>> rows;
  for (auto& [id, rs] : by_image) {
    if (rs.size() != k) {
      excluded.push_back(id);
      continue;
    }
    std::sort(rs.begin(), rs.end(), [](const EvaluationRecord* a, const EvaluationRecord* b) {
      return a->participant_id < b->participant_id;
    });
    rows.push_back(rs);
  }
  j["images"] = rows.size();
  j["excluded_images"] = excluded;
  ordered_json factors = ordered_json::object();
  for (const auto& f : all_factors()) {
    std::vector<std::vector<double>> m;
    for (const auto& rs : rows) {
      std::vector<double> row;
      for (const auto* r : rs) row.push_back(r->factor_scores.at(f.id));
      m.push_back(std::move(row));
    }
    try {
      factors[std::string(f.key)] = icc_2k(RatingMatrix(m));
    } catch (const DegenerateInputError&) {
      factors[std::string(f.key)] = nullptr;
    } catch (const PreconditionError&) {
      factors[std::string(f.key)] = nullptr;
    }
  }
  j["factors"] = std::move(factors);
  return j;
}

std::vector<AggregateGrid> judge_grids(const std::vector<Evaluated>& judges) {
  std::vector<AggregateGrid> grids;
  for (const auto& e : judges) grids.push_back(aggregate(std::span<const ImageScores>(e.images), e.label));
  return grids;
}

}  // namespace

StageReport run_agree(const RunConfig& c) {
  StageReport report{"agree"};
  const auto human = human_images(c);
  const auto judges = judge_images(c);
  const auto dir = layout::agreement_dir(c);

  ordered_json aggregates;
  aggregates["human"] = grid_to_json(aggregate(std::span<const ImageScores>(human), "Human"));
  aggregates["judges"] = ordered_json::array();
  for (const auto& g : judge_grids(judges)) aggregates["judges"].push_back(grid_to_json(g));

  std::vector<PointwiseRow> pointwise;
  std::vector<PairwiseRow> pairwise;
  ordered_json pw_json = ordered_json::array();
  ordered_json pr_json = ordered_json::array();
  for (const auto& e : judges) {
    for (auto& r : pointwise_rows(human, e.images, e.label)) {
      pw_json.push_back(pointwise_json(r));
      pointwise.push_back(std::move(r));
    }
    pairwise.push_back(pairwise_row(human, e.images, e.label));
    pr_json.push_back(pairwise_json(pairwise.back()));
  }

  ordered_json sources;
  sources["records"] = c.records->filename().generic_string();
  sources["verdicts"] = ordered_json::array();
  for (const auto& e : judges) {
    sources["verdicts"].push_back({{"evaluator", e.label}, {"archive", e.archive},
                                   {"images", e.images.size()}});
  }

  auto write_json = [&](const std::string& name, ordered_json body) {
    ordered_json doc;
    doc["sources"] = sources;
    doc["metadata"] = report_metadata(HighlightRule{});
    doc["data"] = std::move(body);
    write_file(dir / name, doc.dump(2) + "\n");
    report.artifacts.push_back(dir / name);
  };
  write_json("aggregates.json", std::move(aggregates));
  write_json("pointwise.json", std::move(pw_json));
  write_json("pairwise.json", std::move(pr_json));
  write_json("icc.json", icc_json(c));
  const auto pw_doc = render_pointwise_table(pointwise);
  const auto pr_doc = render_pairwise_table(pairwise);
  write_file(dir / "pointwise.csv", pw_doc.csv);
  write_file(dir / "pairwise.csv", pr_doc.csv);
  report.artifacts.push_back(dir / "pointwise.csv");
  report.artifacts.push_back(dir / "pairwise.csv");
  report.processed = judges.size();
  return report;
}

StageReport run_report(const RunConfig& c) {
  StageReport report{"report"};
  const auto human_imgs = human_images(c);
  const auto judges = judge_images(c);
  if (judges.empty()) {
    throw PreconditionError(fmt::format("no verdict archive under {}",
                                        layout::verdicts_dir(c).string()));
  }
  const auto human = aggregate(std::span<const ImageScores>(human_imgs), "Human");
  const auto grids = judge_grids(judges);
  const HighlightRule rule;

  std::vector<MetricColumn> columns;
  const auto metrics = load_task_metrics(layout::metrics_jsonl(c));
  for (std::size_t i = 0; i < kMetrics.size(); ++i) {
    MetricColumn col{std::string(kMetrics[i].display), kMetrics[i].lower_is_better, {}};
    for (const auto& m : metrics) {
      if (m.values[i]) col.values.push_back({m.task_id, m.edit_type, *m.values[i]});
    }
    if (!col.values.empty()) columns.push_back(std::move(col));
  }

  std::vector<PointwiseRow> pointwise;
  std::vector<PairwiseRow> pairwise;
  for (const auto& e : judges) {
    for (auto& r : pointwise_rows(human_imgs, e.images, e.label)) pointwise.push_back(std::move(r));
    pairwise.push_back(pairwise_row(human_imgs, e.images, e.label));
  }

  const std::vector<ReportDocument> docs{
      render_factor_table(human, grids, rule), render_category_table(human, grids, rule),
      render_metric_table(human, grids, columns), render_pointwise_table(pointwise),
      render_pairwise_table(pairwise)};
  const auto dir = layout::reports_dir(c);
  write_reports(dir, docs);
  for (const auto& d : docs) {
    report.artifacts.push_back(dir / (d.name + ".md"));
    report.artifacts.push_back(dir / (d.name + ".csv"));
  }

  auto meta = report_metadata(rule);
  ordered_json inputs;
  inputs["records"] = c.records->filename().generic_string();
  inputs["human_images"] = human_imgs.size();
  inputs["verdicts"] = ordered_json::array();
  for (const auto& e : judges) {
    inputs["verdicts"].push_back({{"evaluator", e.label}, {"archive", e.archive},
                                  {"images", e.images.size()}});
  }
  inputs["metric_tasks"] = metrics.size();
  meta["inputs"] = std::move(inputs);
  ordered_json tables = ordered_json::array();
  for (const auto& d : docs) tables.push_back(d.name);
  meta["tables"] = std::move(tables);
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
  report.artifacts.push_back(dir / "metadata.json");
  report.processed = docs.size();
  return report;
}

}  // namespace editjudge
