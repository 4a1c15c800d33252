// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "editjudge/http.hpp"
#include "editjudge/image.hpp"

namespace editjudge {

enum class Capability { kImageEmbedding, kTextEmbedding, kPatchFeatures };

std::string_view capability_name(Capability c);  // "image_embedding", ...
std::optional<Capability> capability_from_name(std::string_view name);

/// A finite, non-zero vector with its cached L2 norm.
class Embedding {
 public:
  /// Throws ValidationError on an empty vector or a non-finite entry.
  explicit Embedding(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  double norm() const noexcept { return norm_; }
  std::size_t dimension() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  double norm_;
};

/// Cosine similarity. Throws ShapeMismatchError on differing dimensions and
/// DegenerateInputError when either norm is zero.
double cosine_similarity(const Embedding& a, const Embedding& b);

/// One C x H x W feature map, channel-major.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

/// Source of neural features. Capabilities are declared up front; asking for
/// an undeclared one raises UnsupportedCapabilityError. Preprocessing (resize,
/// crop, normalization) belongs to the provider and is described by model_id().
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string model_id() const = 0;
  virtual bool supports(Capability c) const = 0;
  /// 0 means any number of concurrent calls is safe.
  virtual int max_parallelism() const { return 0; }

  Embedding embed_image(const ImageBuffer& image);
  Embedding embed_text(std::string_view text);
  /// One map per layer, in a fixed layer order.
  std::vector<FeatureMap> patch_features(const ImageBuffer& image);

 protected:
  virtual std::vector<double> do_embed_image(const ImageBuffer& image);
  virtual std::vector<double> do_embed_text(std::string_view text);
  virtual std::vector<FeatureMap> do_patch_features(const ImageBuffer& image);

 private:
  void require(Capability c) const;
};

/// Cosine between the edited-image and instruction embeddings (raw cosine, no
/// rescaling).
double clip_text_score(EmbeddingProvider& provider, const ImageBuffer& edited,
                       std::string_view instruction);
double clip_image_similarity(EmbeddingProvider& provider, const ImageBuffer& edited,
                             const ImageBuffer& reference);
double dino_similarity(EmbeddingProvider& provider, const ImageBuffer& edited,
                       const ImageBuffer& ground_truth);

/// Perceptual patch distance: per layer, features are unit-normalized along
/// channels, squared differences are summed over channels and averaged over
/// locations; layer results are summed. With a mask, only locations whose
/// nearest image pixel is unedited are averaged. Throws DegenerateInputError
/// when the mask leaves no location.
double lpips_distance(EmbeddingProvider& provider, const ImageBuffer& a,
                      const ImageBuffer& b, const EditMask* mask = nullptr);

/// The same distance on precomputed feature maps (one per layer).
double lpips_from_features(const std::vector<FeatureMap>& fa,
                           const std::vector<FeatureMap>& fb, const EditMask* mask);

/// Stable 64-bit content hash of an image (shape plus 8-bit quantized values).
std::uint64_t image_content_hash(const ImageBuffer& image);

/// Deterministic in-process provider for tests and dry runs. Registered
/// vectors are returned for matching content; anything else gets a pseudo
/// embedding derived from pooled colors (images) or hashed words (text).
class FixtureEmbeddingProvider : public EmbeddingProvider {
 public:
  static constexpr int kFallbackDimension = 64;

  explicit FixtureEmbeddingProvider(std::string name = "fixture");

  void register_image(const ImageBuffer& image, std::vector<double> vector);
  void register_text(std::string text, std::vector<double> vector);
  void register_patches(const ImageBuffer& image, std::vector<FeatureMap> layers);

  std::string model_id() const override;
  bool supports(Capability) const override { return true; }

 protected:
  std::vector<double> do_embed_image(const ImageBuffer& image) override;
  std::vector<double> do_embed_text(std::string_view text) override;
  std::vector<FeatureMap> do_patch_features(const ImageBuffer& image) override;

 private:
  std::string name_;
  mutable std::mutex mu_;
  std::map<std::uint64_t, std::vector<double>> images_;
  std::map<std::string, std::vector<double>, std::less<>> texts_;
  std::map<std::uint64_t, std::vector<FeatureMap>> patches_;
};

struct RemoteProviderConfig {
  std::string url;
  std::string model_id;
  std::vector<Capability> capabilities;
  std::optional<std::string> api_key_env;  // sent as a bearer token
  std::chrono::milliseconds timeout{30000};
  http::RetryPolicy retry;
  int max_parallelism = 4;
};

/// HTTP provider. Each call POSTs {"capability", "payload"} where the payload
/// is base64 PNG for images and UTF-8 for text, and expects {"vector": [...]}.
/// Patch features additionally carry "shape": [C, H, W], or a "layers" array of
/// such objects.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteProviderConfig config,
                                   http::Sleeper sleep = {});

  std::string model_id() const override { return config_.model_id; }
  bool supports(Capability c) const override;
  int max_parallelism() const override { return config_.max_parallelism; }

 protected:
  std::vector<double> do_embed_image(const ImageBuffer& image) override;
  std::vector<double> do_embed_text(std::string_view text) override;
  std::vector<FeatureMap> do_patch_features(const ImageBuffer& image) override;

 private:
  std::string call(Capability c, const std::string& payload);

  RemoteProviderConfig config_;
  http::Sleeper sleep_;
  http::Headers headers_;
};

struct OnnxProviderConfig {
  std::filesystem::path model_path;
  std::string model_id;
  int input_width = 224;
  int input_height = 224;
  std::array<double, 3> mean{0.0, 0.0, 0.0};  // subtracted in [0,1] units
  std::array<double, 3> stddev{1.0, 1.0, 1.0};
  /// Output producing the image embedding; empty disables the capability.
  std::string embedding_output;
  /// NCHW outputs used as patch features; empty disables the capability.
  std::vector<std::string> patch_outputs;
};

/// Local inference over a serialized ONNX graph through OpenCV's dnn module.
/// Images are resized bilinearly to the configured input size and normalized
/// per channel. Text embedding is not supported.
class OnnxEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit OnnxEmbeddingProvider(OnnxProviderConfig config);
  ~OnnxEmbeddingProvider() override;

  std::string model_id() const override;
  bool supports(Capability c) const override;
  int max_parallelism() const override { return 1; }

 protected:
  std::vector<double> do_embed_image(const ImageBuffer& image) override;
  std::vector<FeatureMap> do_patch_features(const ImageBuffer& image) override;

 private:
  struct Impl;
  OnnxProviderConfig config_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace editjudge
