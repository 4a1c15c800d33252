// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/config.hpp"

#include <algorithm>
#include <cctype>
#include <initializer_list>

#include <fmt/format.h>

#include "editjudge/dataset.hpp"
#include "editjudge/errors.hpp"

namespace editjudge {
using nlohmann::json;

namespace {

bool looks_secret(std::string_view key) {
  std::string k(key);
  for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k.size() > 4 && k.compare(k.size() - 4, 4, "_env") == 0) return false;
  for (std::string_view bad : {"api_key", "apikey", "secret", "password", "token"}) {
    if (k.find(bad) != std::string::npos) return true;
  }
  return false;
}

// A JSON object being read, with the dotted path used in error messages.
class Obj {
 public:
  Obj(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(fmt::format("{} must be an object", where()));
    for (const auto& [key, _] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      if (looks_secret(key)) {
        throw ConfigError(fmt::format(
            "{}: '{}' looks like a secret; reference it by environment variable name with a "
            "'_env' key instead",
            where(), key));
      }
      throw ConfigError(fmt::format("{}: unknown key '{}'", where(), key));
    }
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const json& raw(std::string_view key) const { return j_.at(std::string(key)); }
  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  std::string str(std::string_view key, std::string fallback = {}) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(fmt::format("{} must be a string", child(key)));
    return v.get<std::string>();
  }
  std::string required_str(std::string_view key) const {
    if (!has(key)) throw ConfigError(fmt::format("{} is required", child(key)));
    auto s = str(key);
    if (s.empty()) throw ConfigError(fmt::format("{} must not be empty", child(key)));
    return s;
  }
  std::optional<std::string> opt_str(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return str(key);
  }
  long long integer(std::string_view key, long long fallback, long long lo, long long hi) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(fmt::format("{} must be an integer", child(key)));
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
      throw ConfigError(fmt::format("{} must be in [{}, {}], got {}", child(key), lo, hi, x));
    }
    return x;
  }
  std::uint64_t u64(std::string_view key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw ConfigError(fmt::format("{} must be a non-negative integer", child(key)));
    }
    return v.get<std::uint64_t>();
  }
  std::optional<double> number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", child(key)));
    return v.get<double>();
  }

  const std::string& path() const { return path_; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

EndpointConfig parse_endpoint(const json& j, const std::string& path) {
  Obj o(j, path,
        {"name", "kind", "base_url", "model", "api_key_env", "timeout_ms", "max_retries",
         "initial_backoff_ms", "temperature", "max_tokens", "max_parallelism", "seed"});
  EndpointConfig e;
  const auto kind = o.str("kind", "http");
  if (kind == "http") {
    e.kind = EndpointConfig::Kind::kHttp;
  } else if (kind == "fixture") {
    e.kind = EndpointConfig::Kind::kFixture;
  } else {
    throw ConfigError(fmt::format("{}: kind must be 'http' or 'fixture', got '{}'",
                                  o.child("kind"), kind));
  }
  auto& m = e.endpoint;
  m.name = o.required_str("name");
  if (e.kind == EndpointConfig::Kind::kHttp) {
    m.base_url = o.required_str("base_url");
    m.model = o.required_str("model");
  } else {
    m.model = o.str("model", "fixture-judge");
    if (o.has("base_url")) {
      throw ConfigError(fmt::format("{}: a fixture endpoint takes no base_url", o.child("base_url")));
    }
  }
  m.api_key_env = o.opt_str("api_key_env");
  m.timeout = std::chrono::milliseconds(o.integer("timeout_ms", 120000, 1, 3'600'000));
  m.max_retries = static_cast<int>(o.integer("max_retries", 3, 0, 20));
  m.initial_backoff = std::chrono::milliseconds(o.integer("initial_backoff_ms", 1000, 0, 600000));
  m.temperature = o.number("temperature");
  if (o.has("max_tokens")) m.max_tokens = static_cast<int>(o.integer("max_tokens", 0, 1, 1 << 20));
  m.max_parallelism = static_cast<int>(o.integer("max_parallelism", 4, 1, 256));
  e.fixture_seed = o.u64("seed", 0);
  return e;
}

std::vector<Capability> parse_capabilities(const Obj& o) {
  std::vector<Capability> caps;
  if (!o.has("capabilities")) return caps;
  const auto& arr = o.raw("capabilities");
  if (!arr.is_array()) {
    throw ConfigError(fmt::format("{} must be an array", o.child("capabilities")));
  }
  for (const auto& c : arr) {
    if (!c.is_string()) {
      throw ConfigError(fmt::format("{} entries must be strings", o.child("capabilities")));
    }
    const auto cap = capability_from_name(c.get<std::string>());
    if (!cap) {
      throw ConfigError(fmt::format("{}: unknown capability '{}'", o.child("capabilities"),
                                    c.get<std::string>()));
    }
    caps.push_back(*cap);
  }
  return caps;
}

std::array<double, 3> triple(const Obj& o, std::string_view key, std::array<double, 3> fallback) {
  if (!o.has(key)) return fallback;
  const auto& v = o.raw(key);
  if (!v.is_array() || v.size() != 3 ||
      !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
    throw ConfigError(fmt::format("{} must be an array of three numbers", o.child(key)));
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

ProviderConfig parse_provider(const json& j, const std::string& path,
                              const std::filesystem::path& base) {
  Obj o(j, path,
        {"kind", "name", "url", "model_id", "capabilities", "api_key_env", "timeout_ms",
         "max_retries", "max_parallelism", "model_path", "input_width", "input_height", "mean",
         "std", "embedding_output", "patch_outputs"});
  ProviderConfig p;
  const auto kind = o.required_str("kind");
  if (kind == "fixture") {
    p.kind = ProviderConfig::Kind::kFixture;
    p.fixture_name = o.str("name", "fixture");
  } else if (kind == "remote") {
    p.kind = ProviderConfig::Kind::kRemote;
    p.remote.url = o.required_str("url");
    p.remote.model_id = o.required_str("model_id");
    p.remote.capabilities = parse_capabilities(o);
    if (p.remote.capabilities.empty()) {
      throw ConfigError(fmt::format("{} must list at least one capability",
                                    o.child("capabilities")));
    }
    p.remote.api_key_env = o.opt_str("api_key_env");
    p.remote.timeout = std::chrono::milliseconds(o.integer("timeout_ms", 30000, 1, 3'600'000));
    p.remote.retry.max_retries = static_cast<int>(o.integer("max_retries", 3, 0, 20));
    p.remote.max_parallelism = static_cast<int>(o.integer("max_parallelism", 4, 1, 256));
  } else if (kind == "onnx") {
    p.kind = ProviderConfig::Kind::kOnnx;
    p.onnx.model_path = resolve(base, o.required_str("model_path"));
    p.onnx.model_id = o.required_str("model_id");
    p.onnx.input_width = static_cast<int>(o.integer("input_width", 224, 1, 4096));
    p.onnx.input_height = static_cast<int>(o.integer("input_height", 224, 1, 4096));
    p.onnx.mean = triple(o, "mean", {0.0, 0.0, 0.0});
    p.onnx.stddev = triple(o, "std", {1.0, 1.0, 1.0});
    p.onnx.embedding_output = o.str("embedding_output");
    if (o.has("patch_outputs")) {
      const auto& v = o.raw("patch_outputs");
      if (!v.is_array()) {
        throw ConfigError(fmt::format("{} must be an array", o.child("patch_outputs")));
      }
      for (const auto& s : v) {
        if (!s.is_string()) {
          throw ConfigError(fmt::format("{} entries must be strings", o.child("patch_outputs")));
        }
        p.onnx.patch_outputs.push_back(s.get<std::string>());
      }
    }
  } else {
    throw ConfigError(fmt::format("{}: kind must be 'fixture', 'remote' or 'onnx', got '{}'",
                                  o.child("kind"), kind));
  }
  return p;
}

}  // namespace

const EndpointConfig& RunConfig::endpoint(std::string_view name) const {
  const std::string_view want = name.empty() ? std::string_view(judge_endpoint) : name;
  for (const auto& e : endpoints) {
    if (want.empty() || e.endpoint.name == want) return e;
  }
  if (want.empty()) throw ConfigError("no judge endpoint is configured");
  throw ConfigError(fmt::format("no endpoint named '{}'", want));
}

RunConfig parse_config(const json& j, const std::filesystem::path& base) {
  Obj root(j, "",
           {"dataset", "endpoints", "judge", "concurrency", "out_dir", "seed", "study",
            "providers", "serve"});
  RunConfig c;

  if (!root.has("dataset")) throw ConfigError("dataset is required");
  {
    Obj d(root.raw("dataset"), "dataset", {"tasks", "records", "image_root"});
    c.tasks = resolve(base, d.required_str("tasks"));
    if (auto r = d.opt_str("records")) c.records = resolve(base, *r);
    c.image_root = d.has("image_root") ? resolve(base, d.str("image_root"))
                                       : c.tasks.parent_path();
    format_from_path(c.tasks);  // rejects unsupported extensions up front
    if (c.records) format_from_path(*c.records);
  }

  if (root.has("endpoints")) {
    const auto& arr = root.raw("endpoints");
    if (!arr.is_array()) throw ConfigError("endpoints must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto e = parse_endpoint(arr[i], fmt::format("endpoints[{}]", i));
      for (const auto& prev : c.endpoints) {
        if (prev.endpoint.name == e.endpoint.name) {
          throw ConfigError(fmt::format("endpoints[{}]: duplicate name '{}'", i, e.endpoint.name));
        }
      }
      c.endpoints.push_back(std::move(e));
    }
  }

  if (root.has("judge")) {
    Obj jd(root.raw("judge"), "judge", {"endpoint", "variant", "mode", "attempts"});
    c.judge_endpoint = jd.str("endpoint");
    if (auto v = jd.opt_str("variant")) {
      try {
        c.variant = variant_from_key(*v);
      } catch (const Error& e) {
        throw ConfigError(fmt::format("judge.variant: {}", e.what()));
      }
    }
    if (auto m = jd.opt_str("mode")) {
      try {
        c.mode = mode_from_key(*m);
      } catch (const Error& e) {
        throw ConfigError(fmt::format("judge.mode: {}", e.what()));
      }
    }
    c.attempts = static_cast<int>(jd.integer("attempts", 3, 1, 20));
  }
  if (!c.judge_endpoint.empty()) c.endpoint();  // must name a configured endpoint

  c.concurrency = static_cast<int>(root.integer("concurrency", 4, 1, 256));
  c.out_dir = resolve(base, root.str("out_dir", "out"));
  c.seed = root.u64("seed", 0);

  if (root.has("study")) {
    Obj s(root.raw("study"), "study", {"participants", "tasks_per_participant", "raters_per_task"});
    StudyConfig st;
    st.participants = static_cast<int>(s.integer("participants", 25, 1, 100000));
    st.tasks_per_participant = static_cast<int>(s.integer("tasks_per_participant", 20, 1, 100000));
    st.raters_per_task = static_cast<int>(s.integer("raters_per_task", 5, 1, 100000));
    c.study = st;
  }

  if (root.has("providers")) {
    Obj p(root.raw("providers"), "providers", {"clip", "dino", "lpips"});
    for (auto role : kProviderRoles) {
      if (p.has(role)) {
        c.providers.emplace(std::string(role),
                            parse_provider(p.raw(role), p.child(role), base));
      }
    }
  }

  if (root.has("serve")) {
    Obj s(root.raw("serve"), "serve", {"host", "port", "token_env", "static_dir"});
    c.serve.host = s.str("host", "127.0.0.1");
    c.serve.port = static_cast<int>(s.integer("port", 8080, 0, 65535));
    c.serve.token_env = s.opt_str("token_env");
    if (auto d = s.opt_str("static_dir")) c.serve.static_dir = resolve(base, *d);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (path.extension() != ".json") {
    throw ConfigError(fmt::format("config {} must be a .json file", path.string()));
  }
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_config(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace editjudge
