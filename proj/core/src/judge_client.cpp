// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>

#include <fmt/format.h>

#include "editjudge/errors.hpp"
#include "editjudge/judge.hpp"

namespace editjudge {
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// HTTP client

HttpJudgeClient::HttpJudgeClient(ModelEndpoint endpoint, std::filesystem::path image_root,
                                 http::Sleeper sleep)
    : endpoint_(std::move(endpoint)),
      image_root_(std::move(image_root)),
      sleep_(std::move(sleep)) {
  if (endpoint_.base_url.empty()) {
    throw ConfigError(fmt::format("endpoint '{}' has no base_url", endpoint_.name));
  }
  if (endpoint_.model.empty()) {
    throw ConfigError(fmt::format("endpoint '{}' has no model", endpoint_.name));
  }
  if (endpoint_.api_key_env) {
    const char* key = std::getenv(endpoint_.api_key_env->c_str());
    if (!key || !*key) {
      throw ConfigError(fmt::format("endpoint '{}': environment variable {} is not set",
                                    endpoint_.name, *endpoint_.api_key_env));
    }
    headers_.emplace_back("Authorization", fmt::format("Bearer {}", key));
  }
}

std::string HttpJudgeClient::image_data_uri(const ImageRef& ref) const {
  std::filesystem::path path(ref.uri);
  if (path.is_relative() && !image_root_.empty()) path = image_root_ / path;
  const auto bytes = read_file(path);
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string_view mime = (ext == ".jpg" || ext == ".jpeg") ? "image/jpeg" : "image/png";
  return fmt::format(
      "data:{};base64,{}", mime,
      http::base64_encode(std::span(reinterpret_cast<const unsigned char*>(bytes.data()),
                                    bytes.size())));
}

json HttpJudgeClient::build_request(const PromptDocument& doc, const EditTask& task) const {
  json content = json::array();
  for (const auto& part : doc.parts) {
    if (part.kind == PromptPart::Kind::kText) {
      content.push_back({{"type", "text"}, {"text", part.text}});
      continue;
    }
    const ImageRef* ref = nullptr;
    switch (part.role) {
      case ImageRole::kInput:
        ref = &task.original;
        break;
      case ImageRole::kEdited:
        ref = &task.edited;
        break;
      case ImageRole::kGroundTruth:
        if (!task.ground_truth) {
          throw PreconditionError(
              fmt::format("task '{}' has no ground truth image", task.task_id));
        }
        ref = &*task.ground_truth;
        break;
    }
    content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", image_data_uri(*ref)}}}});
  }
  json body{{"model", endpoint_.model},
            {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
  if (endpoint_.temperature) body["temperature"] = *endpoint_.temperature;
  if (endpoint_.max_tokens) body["max_tokens"] = *endpoint_.max_tokens;
  return body;
}

JudgeResponse HttpJudgeClient::complete(const PromptDocument& doc, const EditTask& task) {
  const auto body = build_request(doc, task);
  std::string url = endpoint_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  const http::RetryPolicy policy{endpoint_.max_retries, endpoint_.initial_backoff, 2.0,
                                 std::chrono::milliseconds(60000)};
  const auto res = http::post_json(url, headers_, body.dump(), endpoint_.timeout, policy, sleep_);

  json j;
  try {
    j = json::parse(res.body);
  } catch (const json::parse_error& e) {
    throw TransportError(fmt::format("endpoint '{}' returned non-JSON body: {}", endpoint_.name,
                                     e.what()),
                         res.attempts, res.status);
  }
  JudgeResponse out;
  out.transport_attempts = res.attempts;
  out.latency = res.latency;
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) {
      out.text = content.get<std::string>();
    } else {
      for (const auto& part : content) {
        if (part.value("type", "") == "text") out.text += part.value("text", "");
      }
    }
  } catch (const json::exception&) {
    throw TransportError(
        fmt::format("endpoint '{}' response has no choices[0].message.content", endpoint_.name),
        res.attempts, res.status);
  }
  if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
    if (u->contains("prompt_tokens")) out.prompt_tokens = (*u)["prompt_tokens"].get<int>();
    if (u->contains("completion_tokens")) {
      out.completion_tokens = (*u)["completion_tokens"].get<int>();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixture client

FixtureJudgeClient::FixtureJudgeClient(std::string model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed) {}

void FixtureJudgeClient::enqueue(std::string response) {
  std::lock_guard lock(mu_);
  queue_.push_back(std::move(response));
}

void FixtureJudgeClient::enqueue_for(Category category, std::string response) {
  std::lock_guard lock(mu_);
  by_category_[category].push_back(std::move(response));
}

int FixtureJudgeClient::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

int FixtureJudgeClient::fixture_score(std::string_view image_id, FactorId f) const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed_;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  mix(image_id);
  mix(factor(f).key);
  return 2 + static_cast<int>(h % 6);
}

std::string FixtureJudgeClient::canned_response(const PromptDocument& doc) const {
  ordered_json results = ordered_json::object();
  for (auto id : doc.factors) {
    const auto& f = factor(id);
    results[std::string(f.key)] = {
        {"score", fixture_score(doc.image_id, id)},
        {"justification",
         fmt::format("Fixture verdict for {}: visible evidence in the edited image was "
                     "compared against the input image carefully.",
                     f.key)}};
  }
  ordered_json body;
  body["image_id"] = doc.image_id;
  body[factor_results_key(doc.mode)] = std::move(results);
  return fmt::format("Evaluation follows.\n```json\n{}\n```\n", body.dump(2));
}

JudgeResponse FixtureJudgeClient::complete(const PromptDocument& doc, const EditTask&) {
  std::lock_guard lock(mu_);
  ++calls_;
  JudgeResponse r;
  if (doc.category) {
    auto it = by_category_.find(*doc.category);
    if (it != by_category_.end() && !it->second.empty()) {
      r.text = std::move(it->second.front());
      it->second.pop_front();
      return r;
    }
  }
  if (!queue_.empty()) {
    r.text = std::move(queue_.front());
    queue_.pop_front();
    return r;
  }
  r.text = canned_response(doc);
  return r;
}

}  // namespace editjudge
