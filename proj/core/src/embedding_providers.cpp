// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>

#include "editjudge/embedding.hpp"
#include "editjudge/errors.hpp"

namespace editjudge {
using nlohmann::json;

// ---------------------------------------------------------------------------
// Remote provider

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteProviderConfig config,
                                                 http::Sleeper sleep)
    : config_(std::move(config)), sleep_(std::move(sleep)) {
  if (config_.url.empty()) throw ConfigError("remote provider needs a url");
  if (config_.api_key_env) {
    const char* key = std::getenv(config_.api_key_env->c_str());
    if (!key || !*key) {
      throw ConfigError(fmt::format("environment variable {} is not set",
                                    *config_.api_key_env));
    }
    headers_.emplace_back("Authorization", fmt::format("Bearer {}", key));
  }
}

bool RemoteEmbeddingProvider::supports(Capability c) const {
  return std::find(config_.capabilities.begin(), config_.capabilities.end(), c) !=
         config_.capabilities.end();
}

std::string RemoteEmbeddingProvider::call(Capability c, const std::string& payload) {
  const json body{{"capability", capability_name(c)}, {"payload", payload}};
  return http::post_json(config_.url, headers_, body.dump(), config_.timeout, config_.retry,
                         sleep_)
      .body;
}

namespace {

std::string image_payload(const ImageBuffer& image) {
  const auto png = encode_png(image);
  return http::base64_encode(png);
}

std::vector<double> read_vector(const json& j) {
  if (!j.is_object() || !j.contains("vector") || !j["vector"].is_array()) {
    throw ParseError("provider response lacks a 'vector' array");
  }
  std::vector<double> out;
  out.reserve(j["vector"].size());
  for (const auto& v : j["vector"]) {
    if (!v.is_number()) throw ParseError("provider vector holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

FeatureMap read_feature_map(const json& j) {
  auto values = read_vector(j);
  if (!j.contains("shape") || !j["shape"].is_array() || j["shape"].size() != 3) {
    throw ParseError("patch feature response needs \"shape\": [C, H, W]");
  }
  FeatureMap fm{j["shape"][0].get<int>(), j["shape"][1].get<int>(),
                j["shape"][2].get<int>(), std::move(values)};
  return fm;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("provider returned invalid JSON: {}", e.what()), e.byte);
  }
}

}  // namespace

std::vector<double> RemoteEmbeddingProvider::do_embed_image(const ImageBuffer& image) {
  return read_vector(parse_body(call(Capability::kImageEmbedding, image_payload(image))));
}

std::vector<double> RemoteEmbeddingProvider::do_embed_text(std::string_view text) {
  return read_vector(parse_body(call(Capability::kTextEmbedding, std::string(text))));
}

std::vector<FeatureMap> RemoteEmbeddingProvider::do_patch_features(
    const ImageBuffer& image) {
  const auto j = parse_body(call(Capability::kPatchFeatures, image_payload(image)));
  std::vector<FeatureMap> out;
  if (j.contains("layers")) {
    for (const auto& layer : j["layers"]) out.push_back(read_feature_map(layer));
  } else {
    out.push_back(read_feature_map(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ONNX provider

struct OnnxEmbeddingProvider::Impl {
  cv::dnn::Net net;
  std::mutex mu;
};

OnnxEmbeddingProvider::OnnxEmbeddingProvider(OnnxProviderConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  if (config_.embedding_output.empty() && config_.patch_outputs.empty()) {
    throw ConfigError("ONNX provider declares no outputs");
  }
  try {
    impl_->net = cv::dnn::readNetFromONNX(config_.model_path.string());
  } catch (const cv::Exception& e) {
    throw ConfigError(fmt::format("cannot load ONNX model '{}': {}",
                                  config_.model_path.string(), e.what()));
  }
  if (impl_->net.empty()) {
    throw ConfigError(fmt::format("cannot load ONNX model '{}'", config_.model_path.string()));
  }
}

OnnxEmbeddingProvider::~OnnxEmbeddingProvider() = default;

std::string OnnxEmbeddingProvider::model_id() const {
  return fmt::format("{};resize={}x{} bilinear;mean=[{},{},{}];std=[{},{},{}]",
                     config_.model_id, config_.input_width, config_.input_height,
                     config_.mean[0], config_.mean[1], config_.mean[2], config_.stddev[0],
                     config_.stddev[1], config_.stddev[2]);
}

bool OnnxEmbeddingProvider::supports(Capability c) const {
  switch (c) {
    case Capability::kImageEmbedding:
      return !config_.embedding_output.empty();
    case Capability::kPatchFeatures:
      return !config_.patch_outputs.empty();
    case Capability::kTextEmbedding:
      return false;
  }
  return false;
}

namespace {

cv::Mat to_blob(const ImageBuffer& image, const OnnxProviderConfig& cfg) {
  cv::Mat rgb(image.height(), image.width(), CV_32FC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = rgb.ptr<float>(y);
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        row[x * 3 + c] = static_cast<float>(image.at(y, x, c));
      }
    }
  }
  cv::Mat resized;
  cv::resize(rgb, resized, cv::Size(cfg.input_width, cfg.input_height), 0, 0,
             cv::INTER_LINEAR);
  const int dims[] = {1, 3, cfg.input_height, cfg.input_width};
  cv::Mat blob(4, dims, CV_32F);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < cfg.input_height; ++y) {
      const auto* src = resized.ptr<float>(y);
      for (int x = 0; x < cfg.input_width; ++x) {
        const int idx[] = {0, c, y, x};
        blob.at<float>(idx) = static_cast<float>((src[x * 3 + c] - cfg.mean[c]) /
                                                 cfg.stddev[c]);
      }
    }
  }
  return blob;
}

}  // namespace

std::vector<double> OnnxEmbeddingProvider::do_embed_image(const ImageBuffer& image) {
  std::lock_guard lock(impl_->mu);
  impl_->net.setInput(to_blob(image, config_));
  cv::Mat out = impl_->net.forward(config_.embedding_output);
  const cv::Mat flat = out.reshape(1, 1);
  std::vector<double> v(flat.total());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = flat.at<float>(0, static_cast<int>(i));
  }
  return v;
}

std::vector<FeatureMap> OnnxEmbeddingProvider::do_patch_features(const ImageBuffer& image) {
  std::lock_guard lock(impl_->mu);
  impl_->net.setInput(to_blob(image, config_));
  std::vector<cv::Mat> outs;
  std::vector<cv::String> names(config_.patch_outputs.begin(), config_.patch_outputs.end());
  impl_->net.forward(outs, names);
  std::vector<FeatureMap> layers;
  for (std::size_t l = 0; l < outs.size(); ++l) {
    const auto& m = outs[l];
    if (m.dims != 4 || m.size[0] != 1) {
      throw ValidationError("patch_features",
                            fmt::format("output '{}' is not a 1xCxHxW tensor",
                                        config_.patch_outputs[l]));
    }
    FeatureMap fm{m.size[1], m.size[2], m.size[3], {}};
    fm.data.resize(m.total());
    const auto* p = m.ptr<float>();
    for (std::size_t i = 0; i < fm.data.size(); ++i) fm.data[i] = p[i];
    layers.push_back(std::move(fm));
  }
  return layers;
}

}  // namespace editjudge
