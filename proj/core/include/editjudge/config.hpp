// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "editjudge/embedding.hpp"
#include "editjudge/judge.hpp"

namespace editjudge {

/// A judge endpoint. Kind "http" talks to an OpenAI-compatible server;
/// kind "fixture" answers locally and deterministically.
struct EndpointConfig {
  enum class Kind { kHttp, kFixture };
  Kind kind = Kind::kHttp;
  ModelEndpoint endpoint;
  std::uint64_t fixture_seed = 0;
};

/// An embedding provider bound to a role ("clip", "dino" or "lpips").
struct ProviderConfig {
  enum class Kind { kFixture, kRemote, kOnnx };
  Kind kind = Kind::kFixture;
  std::string fixture_name = "fixture";
  RemoteProviderConfig remote;
  OnnxProviderConfig onnx;
};

inline constexpr std::array<std::string_view, 3> kProviderRoles = {"clip", "dino", "lpips"};

struct StudyConfig {
  int participants = 25;
  int tasks_per_participant = 20;
  int raters_per_task = 5;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Environment variable holding the shared study token; unset disables the
  /// gate.
  std::optional<std::string> token_env;
  /// Directory of a built annotation UI served at "/".
  std::optional<std::filesystem::path> static_dir;
};

/// Everything a pipeline run needs. Relative paths in the file are resolved
/// against the directory containing it.
struct RunConfig {
  std::filesystem::path tasks;
  std::optional<std::filesystem::path> records;  // human evaluation records
  std::filesystem::path image_root;              // defaults to the tasks directory
  std::vector<EndpointConfig> endpoints;
  std::string judge_endpoint;  // name; defaults to the first endpoint
  std::optional<PromptVariant> variant;
  JudgeMode mode = JudgeMode::kOnline;
  int attempts = 3;
  int concurrency = 4;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::optional<StudyConfig> study;
  std::map<std::string, ProviderConfig> providers;
  ServeConfig serve;

  /// Throws ConfigError when no endpoint has that name (empty: the
  /// configured judge endpoint).
  const EndpointConfig& endpoint(std::string_view name = {}) const;
};

/// Validates the document completely before returning. Unknown keys, keys
/// that would hold a secret, and out-of-range values raise ConfigError
/// naming the key path.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace editjudge
