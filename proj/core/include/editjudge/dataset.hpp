// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/taxonomy.hpp"
#include "editjudge/timestamp.hpp"

namespace editjudge {

enum class EditType : std::uint8_t {
  kAdd,
  kRemove,
  kReplace,
  kAction,
  kCounting,
  kRelation,
};

inline constexpr std::array<EditType, 6> kAllEditTypes = {
    EditType::kAdd,    EditType::kRemove,   EditType::kReplace,
    EditType::kAction, EditType::kCounting, EditType::kRelation};

std::string_view edit_type_name(EditType type);
/// Exact, case-sensitive match on the six labels. Throws ValidationError
/// (field "edit_type") for anything else.
EditType parse_edit_type(std::string_view text);

struct ImageShape {
  int width = 0;
  int height = 0;
  int channels = 3;
  friend bool operator==(const ImageShape&, const ImageShape&) = default;
};

/// Locator of an image plus its decoded shape once known. Task files usually
/// carry only the path; `ingest` fills the shape after decoding.
struct ImageRef {
  std::string uri;
  std::optional<ImageShape> shape;
  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct EditTask {
  std::string task_id;  // doubles as image_id in evaluation records
  ImageRef original;
  std::string instruction;
  EditType edit_type = EditType::kAdd;
  ImageRef edited;
  std::optional<ImageRef> ground_truth;
  std::optional<ImageRef> mask;

  bool supports_offline() const { return ground_truth.has_value(); }
  /// Throws ValidationError on an empty id/instruction/path, invalid shapes,
  /// non-RGB images, or a mask whose shape differs from the original.
  void validate() const;

  friend bool operator==(const EditTask&, const EditTask&) = default;
};

nlohmann::ordered_json task_to_json(const EditTask& task);
EditTask task_from_json(const nlohmann::json& j);

enum class FileFormat { kCsv, kJsonl };
/// Infers the format from the extension (.csv, .jsonl/.json). Throws
/// ConfigError for anything else.
FileFormat format_from_path(const std::filesystem::path& path);

/// Parses task text. Tasks are validated; duplicate task ids are rejected.
/// Errors carry the 1-based line number.
std::vector<EditTask> parse_tasks(std::string_view text, FileFormat format);
std::vector<EditTask> load_tasks(const std::filesystem::path& path,
                                 FileFormat format);
std::string tasks_to_jsonl(std::span<const EditTask> tasks);

struct RecordSource {
  enum class Kind { kHuman, kJudge };
  Kind kind = Kind::kHuman;
  std::string model;
  std::string prompt_variant;
  std::string mode;
  friend bool operator==(const RecordSource&, const RecordSource&) = default;
};

/// One rater's evaluation of one task. The serialized form is exactly the
/// eight published storage keys; `source` is provenance kept in memory only.
struct EvaluationRecord {
  std::string participant_id;
  std::string image_id;
  EditType edit_type = EditType::kAdd;
  FactorScores factor_scores;
  int overall_score = 0;
  Timestamp timestamp_start;
  Timestamp timestamp_end;
  std::string annotator_id;
  RecordSource source;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const EvaluationRecord&,
                         const EvaluationRecord&) = default;
};

/// Storage keys in serialization order.
inline constexpr std::array<std::string_view, 8> kRecordKeys = {
    "participant_id", "image_id",        "edit_type",     "factor_scores",
    "overall_score",  "timestamp_start", "timestamp_end", "annotator_id"};

/// CSV columns: the record fields with factor and score exploded per row.
inline constexpr std::array<std::string_view, 9> kRecordCsvColumns = {
    "participant_id", "image_id",      "edit_type",
    "factor",         "score",         "overall_score",
    "timestamp_start", "timestamp_end", "annotator_id"};

nlohmann::ordered_json record_to_json(const EvaluationRecord& record);
/// Rejects unknown keys, missing keys and invalid values. Missing factors are
/// reported by id in the ValidationError field.
EvaluationRecord record_from_json(const nlohmann::json& j);
std::string record_to_jsonl(const EvaluationRecord& record);  // no newline

std::vector<EvaluationRecord> parse_records_jsonl(std::string_view text);
std::vector<EvaluationRecord> load_records(const std::filesystem::path& path);

std::string records_csv_header();
/// Twelve rows per record, one per factor, in canonical factor order.
std::string record_to_csv_rows(const EvaluationRecord& record);
std::vector<EvaluationRecord> parse_records_csv(std::string_view text);

/// Append-only JSONL store of evaluation records.
///
/// Appends are serialized through a single writer lock and flushed with
/// fsync before returning. Records are never rewritten or deleted.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path path);

  /// Restricts appends to records whose image_id is in `task_ids`.
  void set_known_tasks(std::unordered_set<std::string> task_ids);

  /// Validates and appends. Throws ValidationError or IoError.
  void append(const EvaluationRecord& record);
  std::vector<EvaluationRecord> read_all() const;
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::optional<std::unordered_set<std::string>> known_tasks_;
  mutable std::mutex mu_;
  std::size_t count_ = 0;
};

struct AssignmentParams {
  int participants = 25;
  int tasks_per_participant = 20;
  int raters_per_task = 5;
  std::uint64_t seed = 0;
};

struct ParticipantTasks {
  std::string participant_id;
  std::vector<std::string> task_ids;  // presentation order
  friend bool operator==(const ParticipantTasks&,
                         const ParticipantTasks&) = default;
};

struct Assignment {
  std::uint64_t seed = 0;
  int raters_per_task = 0;
  std::vector<ParticipantTasks> participants;

  const ParticipantTasks* find(std::string_view participant_id) const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Deals tasks to participants so that every task is rated by exactly
/// `raters_per_task` distinct participants and every participant receives
/// `tasks_per_participant` distinct tasks. Edit types are interleaved before
/// dealing so each participant's list spans as many types as possible.
/// Deterministic for a given seed. Throws PreconditionError when
/// participants * tasks_per_participant != raters_per_task * |tasks| or the
/// numbers cannot be satisfied.
Assignment assign_tasks(std::span<const EditTask> tasks,
                        const AssignmentParams& params);

nlohmann::ordered_json assignment_to_json(const Assignment& assignment);
Assignment assignment_from_json(const nlohmann::json& j);

std::string read_file(const std::filesystem::path& path);
/// Appends `data` and fsyncs before returning. Not synchronized; callers
/// serialize concurrent appends to one file.
void append_durable(const std::filesystem::path& path, std::string_view data);
/// Writes atomically via a temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace editjudge
