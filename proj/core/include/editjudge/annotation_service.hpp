// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/dataset.hpp"

namespace editjudge {

struct AnnotationServiceOptions {
  std::vector<EditTask> tasks;
  Assignment assignment;
  std::filesystem::path store_path;  // append-only JSONL of EvaluationRecords
  std::filesystem::path image_root;  // served under /images/
  std::optional<std::filesystem::path> static_dir;  // served under /
  /// When set, every /api/ request must carry it in X-Study-Token.
  std::optional<std::string> study_token;
};

/// HTTP backend of the rating interface.
///
///   GET  /api/taxonomy                      questions, anchors and labels
///   GET  /api/session/{participant}/next    next unrated task or a done marker
///   GET  /api/session/{participant}/progress  {"done", "total"}
///   POST /api/ratings                       one EvaluationRecord
///   GET  /images/...                        task images
///
/// Ratings are validated and appended to the record store; nothing is ever
/// rewritten. Incomplete score sets get 422 listing the missing question ids,
/// unknown participants 404, and a second rating of the same task 409.
class AnnotationService {
 public:
  explicit AnnotationService(AnnotationServiceOptions options);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port; the
  /// bound port is returned. Throws IoError when binding fails.
  int start(const std::string& host, int port);
  /// Blocks until stop() is called.
  void wait();
  void stop();

  /// The /next payload for a participant, or std::nullopt when unknown.
  std::optional<nlohmann::ordered_json> next_payload(const std::string& participant) const;
  /// The questions in presentation order: twelve factors, then overall.
  static nlohmann::ordered_json questions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace editjudge
