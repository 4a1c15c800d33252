// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/dataset.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "editjudge/csv.hpp"
#include "editjudge/errors.hpp"

namespace editjudge {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Edit types

std::string_view edit_type_name(EditType type) {
  switch (type) {
    case EditType::kAdd:
      return "Add";
    case EditType::kRemove:
      return "Remove";
    case EditType::kReplace:
      return "Replace";
    case EditType::kAction:
      return "Action";
    case EditType::kCounting:
      return "Counting";
    case EditType::kRelation:
      return "Relation";
  }
  return "";
}

EditType parse_edit_type(std::string_view text) {
  for (auto t : kAllEditTypes) {
    if (edit_type_name(t) == text) return t;
  }
  throw ValidationError("edit_type",
                        fmt::format("unknown edit_type '{}'", text));
}

// ---------------------------------------------------------------------------
// Tasks

namespace {

void validate_shape(const ImageRef& ref, std::string_view field) {
  if (ref.uri.empty()) {
    throw ValidationError(std::string(field), fmt::format("{}: empty path", field));
  }
  if (!ref.shape) return;
  if (ref.shape->width < 1 || ref.shape->height < 1) {
    throw ValidationError(std::string(field),
                          fmt::format("{}: width and height must be >= 1", field));
  }
}

ordered_json image_ref_to_json(const ImageRef& ref) {
  if (!ref.shape) return ref.uri;
  return ordered_json{{"path", ref.uri},
                      {"width", ref.shape->width},
                      {"height", ref.shape->height},
                      {"channels", ref.shape->channels}};
}

ImageRef image_ref_from_json(const json& j, std::string_view field) {
  if (j.is_string()) return ImageRef{j.get<std::string>(), std::nullopt};
  if (!j.is_object() || !j.contains("path") || !j["path"].is_string()) {
    throw ValidationError(std::string(field),
                          fmt::format("{}: expected a path string or an object "
                                      "with 'path'",
                                      field));
  }
  ImageRef ref{j["path"].get<std::string>(), std::nullopt};
  if (j.contains("width") || j.contains("height")) {
    ImageShape shape;
    shape.width = j.value("width", 0);
    shape.height = j.value("height", 0);
    shape.channels = j.value("channels", 3);
    ref.shape = shape;
  }
  return ref;
}

const json& require(const json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) {
    throw ValidationError(std::string(key),
                          fmt::format("missing field '{}'", key));
  }
  return *it;
}

std::string require_string(const json& j, std::string_view key) {
  const auto& v = require(j, key);
  if (!v.is_string()) {
    throw ValidationError(std::string(key),
                          fmt::format("field '{}' must be a string", key));
  }
  return v.get<std::string>();
}

void check_unique(std::vector<EditTask>& tasks, std::set<std::string>& seen,
                  std::size_t line) {
  const auto& id = tasks.back().task_id;
  if (!seen.insert(id).second) {
    throw ValidationError("task_id",
                          fmt::format("line {}: duplicate task_id '{}'", line, id));
  }
}

template <typename Fn>
auto at_line(std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(e.field(), fmt::format("line {}: {}", line, e.what()));
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("line {}: {}", line, e.what()), line);
  }
}

}  // namespace

void EditTask::validate() const {
  if (task_id.empty()) throw ValidationError("task_id", "empty task_id");
  if (instruction.empty()) {
    throw ValidationError("instruction",
                          fmt::format("task '{}': empty instruction", task_id));
  }
  validate_shape(original, "original");
  validate_shape(edited, "edited");
  if (ground_truth) validate_shape(*ground_truth, "ground_truth");
  for (const auto* ref : {&original, &edited}) {
    if (ref->shape && ref->shape->channels != 3) {
      throw ValidationError("channels",
                            fmt::format("task '{}': images must have 3 channels",
                                        task_id));
    }
  }
  if (mask) {
    validate_shape(*mask, "mask");
    if (mask->shape && original.shape &&
        (mask->shape->width != original.shape->width ||
         mask->shape->height != original.shape->height)) {
      throw ValidationError(
          "mask", fmt::format("task '{}': mask is {}x{} but original is {}x{}",
                              task_id, mask->shape->width, mask->shape->height,
                              original.shape->width, original.shape->height));
    }
  }
}

ordered_json task_to_json(const EditTask& task) {
  ordered_json j;
  j["task_id"] = task.task_id;
  j["original"] = image_ref_to_json(task.original);
  j["instruction"] = task.instruction;
  j["edit_type"] = edit_type_name(task.edit_type);
  j["edited"] = image_ref_to_json(task.edited);
  if (task.ground_truth) j["ground_truth"] = image_ref_to_json(*task.ground_truth);
  if (task.mask) j["mask"] = image_ref_to_json(*task.mask);
  return j;
}

EditTask task_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("task", "task must be a JSON object");
  EditTask t;
  t.task_id = require_string(j, "task_id");
  t.original = image_ref_from_json(require(j, "original"), "original");
  t.instruction = require_string(j, "instruction");
  t.edit_type = parse_edit_type(require_string(j, "edit_type"));
  t.edited = image_ref_from_json(require(j, "edited"), "edited");
  if (auto it = j.find("ground_truth"); it != j.end() && !it->is_null()) {
    t.ground_truth = image_ref_from_json(*it, "ground_truth");
  }
  if (auto it = j.find("mask"); it != j.end() && !it->is_null()) {
    t.mask = image_ref_from_json(*it, "mask");
  }
  t.validate();
  return t;
}

FileFormat format_from_path(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return FileFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    return FileFormat::kJsonl;
  }
  throw ConfigError(fmt::format("cannot infer format of '{}'", path.string()));
}

std::vector<EditTask> parse_tasks(std::string_view text, FileFormat format) {
  std::vector<EditTask> tasks;
  std::set<std::string> seen;

  if (format == FileFormat::kJsonl) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      const auto line = text.substr(pos, end - pos);
      ++line_no;
      pos = end + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
        if (end == text.size()) break;
        continue;
      }
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("line {}: malformed JSON at byte {}: {}",
                                     line_no, e.byte, e.what()),
                         line_no);
      }
      tasks.push_back(at_line(line_no, [&] { return task_from_json(j); }));
      check_unique(tasks, seen, line_no);
      if (end == text.size()) break;
    }
    return tasks;
  }

  const auto rows = csv::parse(text);
  if (rows.empty()) return tasks;
  const auto& header = rows.front().fields;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (auto required : {"task_id", "original", "instruction", "edit_type", "edited"}) {
    if (!col.count(required)) {
      throw ParseError(fmt::format("line 1: missing CSV column '{}'", required), 1);
    }
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw ParseError(fmt::format("line {}: expected {} fields, got {}", row.line,
                                   header.size(), row.fields.size()),
                       row.line);
    }
    auto get = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it == col.end() ? std::string() : row.fields[it->second];
    };
    tasks.push_back(at_line(row.line, [&] {
      EditTask t;
      t.task_id = get("task_id");
      t.original = ImageRef{get("original"), std::nullopt};
      t.instruction = get("instruction");
      t.edit_type = parse_edit_type(get("edit_type"));
      t.edited = ImageRef{get("edited"), std::nullopt};
      if (auto gt = get("ground_truth"); !gt.empty()) {
        t.ground_truth = ImageRef{gt, std::nullopt};
      }
      if (auto m = get("mask"); !m.empty()) t.mask = ImageRef{m, std::nullopt};
      t.validate();
      return t;
    }));
    check_unique(tasks, seen, row.line);
  }
  return tasks;
}

std::vector<EditTask> load_tasks(const fs::path& path, FileFormat format) {
  return parse_tasks(read_file(path), format);
}

std::string tasks_to_jsonl(std::span<const EditTask> tasks) {
  std::string out;
  for (const auto& t : tasks) {
    out += task_to_json(t).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation records

void EvaluationRecord::validate() const {
  if (participant_id.empty()) {
    throw ValidationError("participant_id", "empty participant_id");
  }
  if (image_id.empty()) throw ValidationError("image_id", "empty image_id");
  factor_scores.require_complete();
  if (overall_score < 1 || overall_score > 7) {
    throw ValidationError("overall_score",
                          fmt::format("overall_score {} outside 1..7", overall_score));
  }
  if (timestamp_end < timestamp_start) {
    throw ValidationError("timestamp_end", "timestamp_end precedes timestamp_start");
  }
}

ordered_json record_to_json(const EvaluationRecord& r) {
  ordered_json scores = ordered_json::object();
  for (const auto& f : all_factors()) {
    scores[std::string(f.key)] = r.factor_scores.at(f.id);
  }
  ordered_json j;
  j["participant_id"] = r.participant_id;
  j["image_id"] = r.image_id;
  j["edit_type"] = edit_type_name(r.edit_type);
  j["factor_scores"] = std::move(scores);
  j["overall_score"] = r.overall_score;
  j["timestamp_start"] = r.timestamp_start.to_iso8601();
  j["timestamp_end"] = r.timestamp_end.to_iso8601();
  j["annotator_id"] = r.annotator_id;
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("record", "record must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(kRecordKeys.begin(), kRecordKeys.end(), key) == kRecordKeys.end()) {
      throw ValidationError(key, fmt::format("unknown record field '{}'", key));
    }
  }
  EvaluationRecord r;
  r.participant_id = require_string(j, "participant_id");
  r.image_id = require_string(j, "image_id");
  r.edit_type = parse_edit_type(require_string(j, "edit_type"));

  const auto& scores = require(j, "factor_scores");
  if (!scores.is_object()) {
    throw ValidationError("factor_scores", "factor_scores must be an object");
  }
  for (const auto& [key, value] : scores.items()) {
    const auto id = factor_from_key(key);
    if (!id) {
      throw ValidationError(key, fmt::format("unknown factor '{}'", key));
    }
    r.factor_scores.set(*id, LikertScore::from_json(value, key));
  }
  r.factor_scores.require_complete();

  const auto& overall = require(j, "overall_score");
  r.overall_score = LikertScore::from_json(overall, "overall_score").value();

  try {
    r.timestamp_start = Timestamp::parse(require_string(j, "timestamp_start"));
  } catch (const ParseError& e) {
    throw ValidationError("timestamp_start", e.what());
  }
  try {
    r.timestamp_end = Timestamp::parse(require_string(j, "timestamp_end"));
  } catch (const ParseError& e) {
    throw ValidationError("timestamp_end", e.what());
  }
  r.annotator_id = require_string(j, "annotator_id");
  r.validate();
  return r;
}

std::string record_to_jsonl(const EvaluationRecord& record) {
  return record_to_json(record).dump();
}

std::vector<EvaluationRecord> parse_records_jsonl(std::string_view text) {
  std::vector<EvaluationRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("line {}: malformed JSON at byte {}: {}",
                                   line_no, e.byte, e.what()),
                       line_no);
    }
    out.push_back(at_line(line_no, [&] { return record_from_json(j); }));
  }
  return out;
}

std::vector<EvaluationRecord> load_records(const fs::path& path) {
  const auto text = read_file(path);
  if (format_from_path(path) == FileFormat::kCsv) return parse_records_csv(text);
  return parse_records_jsonl(text);
}

std::string records_csv_header() {
  std::vector<std::string> cols(kRecordCsvColumns.begin(), kRecordCsvColumns.end());
  return csv::format_row(cols);
}

std::string record_to_csv_rows(const EvaluationRecord& r) {
  std::string out;
  for (const auto& f : all_factors()) {
    const std::vector<std::string> fields = {
        r.participant_id,
        r.image_id,
        std::string(edit_type_name(r.edit_type)),
        std::string(f.key),
        std::to_string(r.factor_scores.at(f.id)),
        std::to_string(r.overall_score),
        r.timestamp_start.to_iso8601(),
        r.timestamp_end.to_iso8601(),
        r.annotator_id};
    out += csv::format_row(fields);
  }
  return out;
}

namespace {

int parse_int_field(const std::string& text, std::string_view field,
                    std::size_t line) {
  int v = 0;
  std::size_t used = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError(std::string(field),
                          fmt::format("line {}: {} must be an integer, got '{}'",
                                      line, field, text));
  }
  return v;
}

}  // namespace

std::vector<EvaluationRecord> parse_records_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  std::vector<EvaluationRecord> out;
  if (rows.empty()) return out;
  const auto& header = rows.front().fields;
  if (!std::equal(header.begin(), header.end(), kRecordCsvColumns.begin(),
                  kRecordCsvColumns.end())) {
    throw ParseError("line 1: record CSV header does not match the storage columns",
                     1);
  }

  std::optional<EvaluationRecord> current;
  std::size_t current_line = 0;
  auto flush = [&] {
    if (!current) return;
    at_line(current_line, [&] {
      current->validate();
      return 0;
    });
    out.push_back(std::move(*current));
    current.reset();
  };

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != kRecordCsvColumns.size()) {
      throw ParseError(fmt::format("line {}: expected {} fields, got {}", row.line,
                                   kRecordCsvColumns.size(), row.fields.size()),
                       row.line);
    }
    const auto& f = row.fields;
    const bool same = current && current->participant_id == f[0] &&
                      current->image_id == f[1];
    if (!same) {
      flush();
      current_line = row.line;
      current = at_line(row.line, [&] {
        EvaluationRecord r;
        r.participant_id = f[0];
        r.image_id = f[1];
        r.edit_type = parse_edit_type(f[2]);
        r.overall_score = parse_int_field(f[5], "overall_score", row.line);
        try {
          r.timestamp_start = Timestamp::parse(f[6]);
          r.timestamp_end = Timestamp::parse(f[7]);
        } catch (const ParseError& e) {
          throw ValidationError("timestamp", e.what());
        }
        r.annotator_id = f[8];
        return r;
      });
    } else if (edit_type_name(current->edit_type) != f[2] ||
               std::to_string(current->overall_score) != f[5] ||
               current->timestamp_start.to_iso8601() != f[6] ||
               current->timestamp_end.to_iso8601() != f[7] ||
               current->annotator_id != f[8]) {
      throw ValidationError(
          "record", fmt::format("line {}: per-evaluation fields differ from the "
                                "evaluation's first row",
                                row.line));
    }
    const auto id = factor_from_key(f[3]);
    if (!id) {
      throw ValidationError(f[3], fmt::format("line {}: unknown factor '{}'",
                                              row.line, f[3]));
    }
    if (current->factor_scores.get(*id)) {
      throw ValidationError(f[3], fmt::format("line {}: factor '{}' repeated",
                                              row.line, f[3]));
    }
    const int score = parse_int_field(f[4], f[3], row.line);
    current->factor_scores.set(
        *id, at_line(row.line, [&] { return LikertScore::from_int(score, f[3]); }));
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// Record store

RecordStore::RecordStore(fs::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  if (fs::exists(path_)) {
    count_ = parse_records_jsonl(read_file(path_)).size();
  }
}

void RecordStore::set_known_tasks(std::unordered_set<std::string> task_ids) {
  std::lock_guard lock(mu_);
  known_tasks_ = std::move(task_ids);
}

void RecordStore::append(const EvaluationRecord& record) {
  record.validate();
  std::string line = record_to_jsonl(record);
  line += '\n';

  std::lock_guard lock(mu_);
  if (known_tasks_ && !known_tasks_->count(record.image_id)) {
    throw ValidationError("image_id",
                          fmt::format("unknown image_id '{}'", record.image_id));
  }
  append_durable(path_, line);
  ++count_;
}

std::vector<EvaluationRecord> RecordStore::read_all() const {
  std::lock_guard lock(mu_);
  if (!fs::exists(path_)) return {};
  return parse_records_jsonl(read_file(path_));
}

std::size_t RecordStore::size() const {
  std::lock_guard lock(mu_);
  return count_;
}

// ---------------------------------------------------------------------------
// Assignment

namespace {

// Uniform integer in [0, bound) from a 64-bit engine by rejection, so results
// do not depend on the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(rng, i)]);
  }
}

}  // namespace

const ParticipantTasks* Assignment::find(std::string_view participant_id) const {
  for (const auto& p : participants) {
    if (p.participant_id == participant_id) return &p;
  }
  return nullptr;
}

Assignment assign_tasks(std::span<const EditTask> tasks,
                        const AssignmentParams& params) {
  const long long n = static_cast<long long>(tasks.size());
  const long long p = params.participants;
  const long long t = params.tasks_per_participant;
  const long long r = params.raters_per_task;
  if (p < 1 || t < 1 || r < 1) {
    throw PreconditionError(
        "participants, tasks_per_participant and raters_per_task must be >= 1");
  }
  if (p * t != r * n) {
    throw PreconditionError(fmt::format(
        "infeasible assignment: participants x tasks_per_participant ({} x {} = "
        "{}) must equal raters_per_task x tasks ({} x {} = {})",
        p, t, p * t, r, n, r * n));
  }
  if (t > n) {
    throw PreconditionError(fmt::format(
        "infeasible assignment: tasks_per_participant ({}) exceeds the number of "
        "tasks ({})",
        t, n));
  }

  std::mt19937_64 rng(params.seed);

  // Interleave edit types: each type's tasks are shuffled and spread evenly
  // over [0, 1); sorting by position yields a sequence in which any window of
  // length w holds roughly w * share(type) tasks of each type.
  std::map<EditType, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    by_type[tasks[i].edit_type].push_back(i);
  }
  struct Slot {
    double position;
    std::size_t type_rank;
    std::size_t index;
  };
  std::vector<Slot> slots;
  std::size_t type_rank = 0;
  for (auto& [type, indices] : by_type) {
    shuffle(indices, rng);
    const double phase =
        static_cast<double>(bounded(rng, 1'000'000)) / 1'000'000.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const double pos = (static_cast<double>(k) + phase) /
                         static_cast<double>(indices.size());
      slots.push_back({pos, type_rank, indices[k]});
    }
    ++type_rank;
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.type_rank < b.type_rank;
  });

  // Participant k takes the contiguous block [k*t, (k+1)*t) of the sequence
  // repeated r times. Blocks never exceed one period, so no participant sees
  // a task twice, and each period contributes one rating per task.
  const std::size_t offset = n > 0 ? bounded(rng, static_cast<std::uint64_t>(n)) : 0;
  std::vector<long long> block_order(static_cast<std::size_t>(p));
  for (long long k = 0; k < p; ++k) block_order[static_cast<std::size_t>(k)] = k;
  shuffle(block_order, rng);

  const int width = std::max<int>(2, static_cast<int>(std::to_string(p).size()));
  Assignment out;
  out.seed = params.seed;
  out.raters_per_task = params.raters_per_task;
  for (long long k = 0; k < p; ++k) {
    ParticipantTasks pt;
    pt.participant_id = fmt::format("P{:0{}d}", k + 1, width);
    const long long block = block_order[static_cast<std::size_t>(k)];
    for (long long j = 0; j < t; ++j) {
      const auto pos = static_cast<std::size_t>((block * t + j + static_cast<long long>(offset)) % n);
      pt.task_ids.push_back(tasks[slots[pos].index].task_id);
    }
    shuffle(pt.task_ids, rng);
    out.participants.push_back(std::move(pt));
  }
  return out;
}

ordered_json assignment_to_json(const Assignment& a) {
  ordered_json participants = ordered_json::array();
  for (const auto& p : a.participants) {
    participants.push_back({{"participant_id", p.participant_id},
                            {"task_ids", p.task_ids}});
  }
  return ordered_json{{"seed", a.seed},
                      {"raters_per_task", a.raters_per_task},
                      {"participants", participants}};
}

Assignment assignment_from_json(const json& j) {
  Assignment a;
  a.seed = j.at("seed").get<std::uint64_t>();
  a.raters_per_task = j.at("raters_per_task").get<int>();
  for (const auto& p : j.at("participants")) {
    a.participants.push_back({p.at("participant_id").get<std::string>(),
                              p.at("task_ids").get<std::vector<std::string>>()});
  }
  return a;
}

// ---------------------------------------------------------------------------
// File helpers

void append_durable(const fs::path& path, std::string_view data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw IoError(fmt::format("cannot open '{}': {}", path.string(), std::strerror(errno)));
  }
  std::size_t written = 0;
  while (written < data.size()) {
    const auto n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw IoError(fmt::format("write to '{}' failed: {}", path.string(), std::strerror(err)));
    }
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw IoError(fmt::format("fsync of '{}' failed", path.string()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
  }
  fs::rename(tmp, path);
}

}  // namespace editjudge
