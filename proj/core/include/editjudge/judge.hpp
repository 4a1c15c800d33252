// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <chrono>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/dataset.hpp"
#include "editjudge/http.hpp"
#include "editjudge/taxonomy.hpp"

namespace editjudge {

enum class PromptVariant { kMain, kFactorRubrics, kCategoryExamples };
enum class JudgeMode { kOnline, kOffline };

std::string_view variant_key(PromptVariant v);  // "main", "rubrics", "category"
PromptVariant variant_from_key(std::string_view key);  // ValidationError otherwise
std::string_view mode_key(JudgeMode m);                // "online", "offline"
JudgeMode mode_from_key(std::string_view key);

/// Inclusive justification word-count bounds the prompt asks for.
struct WordBounds {
  int min_words;
  int max_words;
};
WordBounds justification_bounds(PromptVariant v);

enum class ImageRole { kInput, kGroundTruth, kEdited };
std::string_view image_role_key(ImageRole r);  // "input", "ground_truth", "edited"

struct PromptPart {
  enum class Kind { kText, kImage };
  Kind kind = Kind::kText;
  std::string text;  // kText only
  ImageRole role = ImageRole::kInput;  // kImage only
};

/// A rendered prompt: text interleaved with image slots, plus the factors the
/// judge is asked to score in it.
struct PromptDocument {
  std::string image_id;
  PromptVariant variant = PromptVariant::kMain;
  JudgeMode mode = JudgeMode::kOnline;
  std::optional<Category> category;  // set for category-scoped documents
  std::vector<FactorId> factors;
  std::vector<PromptPart> parts;

  /// Text with each image slot rendered as a `<<image:ROLE>>` line.
  std::string to_text() const;
  std::vector<ImageRole> image_roles() const;
};

/// One document for Main and FactorRubrics, three (one per category, in
/// category order) for CategoryExamples. Throws PreconditionError for offline
/// mode on a task without a ground truth image.
std::vector<PromptDocument> render_prompt(PromptVariant variant, const EditTask& task,
                                          JudgeMode mode);

/// The JSON key wrapping per-factor results, e.g. "offline_factor_results".
std::string factor_results_key(JudgeMode mode);

struct FactorVerdict {
  int score = 0;
  std::string justification;
  friend bool operator==(const FactorVerdict&, const FactorVerdict&) = default;
};

/// Parsed results for the factors requested by one prompt document.
struct PartialVerdict {
  std::optional<std::string> image_id;
  std::map<FactorId, FactorVerdict> factors;
  std::vector<std::string> warnings;
};

/// Extracts the single JSON object embedded in `raw` (surrounding prose and
/// code fences are ignored) and validates the results object against
/// `expected`. Throws VerdictParseError, carrying `raw` and the implicated
/// factor keys, when there is no JSON block, more than one, a missing or
/// unexpected factor, or a score that is not an integer in 1..7.
/// Justifications outside `bounds` produce warnings only.
PartialVerdict parse_partial_verdict(std::string_view raw, std::span<const FactorId> expected,
                                     std::optional<WordBounds> bounds = std::nullopt);

/// A complete, validated 12-factor verdict.
struct JudgeVerdict {
  std::string image_id;
  EditType edit_type = EditType::kAdd;
  std::array<FactorVerdict, kFactorCount> factors{};
  double overall = 0.0;  // mean of the 12 scores
  std::vector<std::string> raw_responses;  // one per prompt document
  PromptVariant variant = PromptVariant::kMain;
  JudgeMode mode = JudgeMode::kOnline;
  std::string model;
  int attempts = 0;  // largest number of tries any document needed
  std::vector<std::string> warnings;

  FactorScores scores() const;
  friend bool operator==(const JudgeVerdict&, const JudgeVerdict&) = default;
};

/// Parses a response that must cover all twelve factors.
JudgeVerdict parse_verdict(std::string_view raw,
                           std::optional<WordBounds> bounds = std::nullopt);

nlohmann::ordered_json verdict_to_json(const JudgeVerdict& v);
JudgeVerdict verdict_from_json(const nlohmann::json& j);
std::vector<JudgeVerdict> parse_verdicts_jsonl(std::string_view text);
std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path);

struct JudgeResponse {
  std::string text;
  int transport_attempts = 1;
  std::chrono::milliseconds latency{0};
  std::optional<int> prompt_tokens;
  std::optional<int> completion_tokens;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual std::string model_name() const = 0;
  /// 0 means unlimited.
  virtual int max_parallelism() const { return 0; }
  virtual JudgeResponse complete(const PromptDocument& doc, const EditTask& task) = 0;
};

/// Connection settings for an OpenAI-compatible chat completions endpoint.
/// The secret is referenced by environment variable name only.
struct ModelEndpoint {
  std::string name;
  std::string base_url;  // ".../v1"; "/chat/completions" is appended
  std::string model;
  std::optional<std::string> api_key_env;
  std::chrono::milliseconds timeout{120000};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::optional<double> temperature;  // unset: endpoint default
  std::optional<int> max_tokens;
  int max_parallelism = 4;
};

/// Sends each document as one user message whose content alternates text and
/// base64 data-URI images. The secret is resolved at construction so a
/// missing variable raises ConfigError before any network call.
class HttpJudgeClient : public JudgeClient {
 public:
  explicit HttpJudgeClient(ModelEndpoint endpoint, std::filesystem::path image_root = {},
                           http::Sleeper sleep = {});

  std::string model_name() const override { return endpoint_.model; }
  int max_parallelism() const override { return endpoint_.max_parallelism; }
  JudgeResponse complete(const PromptDocument& doc, const EditTask& task) override;

  /// The request body that complete() would send.
  nlohmann::json build_request(const PromptDocument& doc, const EditTask& task) const;

 private:
  std::string image_data_uri(const ImageRef& ref) const;

  ModelEndpoint endpoint_;
  std::filesystem::path image_root_;
  http::Sleeper sleep_;
  http::Headers headers_;
};

/// Offline stand-in for a judge model. Queued responses are served first (in
/// order); afterwards each document is answered with a well-formed verdict
/// whose scores are a pure function of (seed, image_id, factor).
class FixtureJudgeClient : public JudgeClient {
 public:
  explicit FixtureJudgeClient(std::string model = "fixture-judge", std::uint64_t seed = 0);

  std::string model_name() const override { return model_; }
  JudgeResponse complete(const PromptDocument& doc, const EditTask& task) override;

  void enqueue(std::string response);
  /// Per-document override: documents for `category` get `response` while
  /// any remain queued for it.
  void enqueue_for(Category category, std::string response);
  int calls() const;

  /// The score the default responder gives.
  int fixture_score(std::string_view image_id, FactorId f) const;
  std::string canned_response(const PromptDocument& doc) const;

 private:
  std::string model_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  std::deque<std::string> queue_;
  std::map<Category, std::deque<std::string>> by_category_;
  int calls_ = 0;
};

/// Renders, calls and parses, re-asking up to `attempts` times per document
/// when parsing fails, then merges category documents into one verdict.
/// Throws JudgingError (with the last raw response) when a document never
/// yields a valid verdict, PreconditionError for offline mode without a
/// ground truth, and lets TransportError/ConfigError from the client through.
JudgeVerdict judge_task(const EditTask& task, JudgeClient& client, PromptVariant variant,
                        JudgeMode mode, int attempts = 3);

}  // namespace editjudge
