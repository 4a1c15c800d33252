// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "editjudge/embedding.hpp"
#include "editjudge/errors.hpp"

namespace editjudge {

std::string_view capability_name(Capability c) {
  switch (c) {
    case Capability::kImageEmbedding:
      return "image_embedding";
    case Capability::kTextEmbedding:
      return "text_embedding";
    case Capability::kPatchFeatures:
      return "patch_features";
  }
  return "";
}

std::optional<Capability> capability_from_name(std::string_view name) {
  for (auto c : {Capability::kImageEmbedding, Capability::kTextEmbedding,
                 Capability::kPatchFeatures}) {
    if (capability_name(c) == name) return c;
  }
  return std::nullopt;
}

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("embedding", "embedding is empty");
  double ss = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("embedding", "embedding is not finite");
    ss += v * v;
  }
  norm_ = std::sqrt(ss);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.dimension() != b.dimension()) {
    throw ShapeMismatchError(fmt::format("embedding dimensions differ: {} vs {}",
                                         a.dimension(), b.dimension()));
  }
  if (a.norm() == 0.0 || b.norm() == 0.0) {
    throw DegenerateInputError("cosine similarity of a zero vector is undefined");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values()[i] * b.values()[i];
  return std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Provider base

void EmbeddingProvider::require(Capability c) const {
  if (!supports(c)) {
    throw UnsupportedCapabilityError(fmt::format("provider '{}' does not support {}",
                                                 model_id(), capability_name(c)));
  }
}

Embedding EmbeddingProvider::embed_image(const ImageBuffer& image) {
  require(Capability::kImageEmbedding);
  return Embedding(do_embed_image(image));
}

Embedding EmbeddingProvider::embed_text(std::string_view text) {
  require(Capability::kTextEmbedding);
  return Embedding(do_embed_text(text));
}

std::vector<FeatureMap> EmbeddingProvider::patch_features(const ImageBuffer& image) {
  require(Capability::kPatchFeatures);
  auto layers = do_patch_features(image);
  if (layers.empty()) throw ValidationError("patch_features", "provider returned no layers");
  for (const auto& l : layers) {
    if (l.channels < 1 || l.height < 1 || l.width < 1 ||
        l.data.size() != static_cast<std::size_t>(l.channels) * l.height * l.width) {
      throw ValidationError("patch_features", "feature map shape does not match its data");
    }
    for (double v : l.data) {
      if (!std::isfinite(v)) {
        throw ValidationError("patch_features", "feature map is not finite");
      }
    }
  }
  return layers;
}

std::vector<double> EmbeddingProvider::do_embed_image(const ImageBuffer&) {
  throw UnsupportedCapabilityError("image_embedding not implemented");
}
std::vector<double> EmbeddingProvider::do_embed_text(std::string_view) {
  throw UnsupportedCapabilityError("text_embedding not implemented");
}
std::vector<FeatureMap> EmbeddingProvider::do_patch_features(const ImageBuffer&) {
  throw UnsupportedCapabilityError("patch_features not implemented");
}

// ---------------------------------------------------------------------------
// Metrics

double clip_text_score(EmbeddingProvider& provider, const ImageBuffer& edited,
                       std::string_view instruction) {
  if (!provider.supports(Capability::kTextEmbedding)) {
    throw UnsupportedCapabilityError(fmt::format(
        "provider '{}' does not support text_embedding", provider.model_id()));
  }
  const auto img = provider.embed_image(edited);
  return cosine_similarity(img, provider.embed_text(instruction));
}

double clip_image_similarity(EmbeddingProvider& provider, const ImageBuffer& edited,
                             const ImageBuffer& reference) {
  const auto a = provider.embed_image(edited);
  return cosine_similarity(a, provider.embed_image(reference));
}

double dino_similarity(EmbeddingProvider& provider, const ImageBuffer& edited,
                       const ImageBuffer& ground_truth) {
  return clip_image_similarity(provider, edited, ground_truth);
}

double lpips_from_features(const std::vector<FeatureMap>& fa,
                           const std::vector<FeatureMap>& fb, const EditMask* mask) {
  if (fa.size() != fb.size() || fa.empty()) {
    throw ShapeMismatchError("feature stacks differ in layer count");
  }
  if (mask && mask->all_edited()) {
    throw DegenerateInputError("mask marks every pixel as edited");
  }
  constexpr double kEps = 1e-10;
  double total = 0.0;
  for (std::size_t l = 0; l < fa.size(); ++l) {
    const auto& a = fa[l];
    const auto& b = fb[l];
    if (a.channels != b.channels || a.height != b.height || a.width != b.width) {
      throw ShapeMismatchError(fmt::format("layer {} shapes differ", l));
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < a.height; ++y) {
      for (int x = 0; x < a.width; ++x) {
        if (mask) {
          const int py = static_cast<int>((y + 0.5) * mask->height() / a.height);
          const int px = static_cast<int>((x + 0.5) * mask->width() / a.width);
          if (mask->at(py, px)) continue;
        }
        double na = 0.0;
        double nb = 0.0;
        for (int c = 0; c < a.channels; ++c) {
          na += a.at(c, y, x) * a.at(c, y, x);
          nb += b.at(c, y, x) * b.at(c, y, x);
        }
        na = std::sqrt(na) + kEps;
        nb = std::sqrt(nb) + kEps;
        double d = 0.0;
        for (int c = 0; c < a.channels; ++c) {
          const double diff = a.at(c, y, x) / na - b.at(c, y, x) / nb;
          d += diff * diff;
        }
        sum += d;
        ++count;
      }
    }
    if (count == 0) {
      throw DegenerateInputError(
          fmt::format("mask leaves no unedited location at layer {} ({}x{})", l, a.height,
                      a.width));
    }
    total += sum / static_cast<double>(count);
  }
  return total;
}

double lpips_distance(EmbeddingProvider& provider, const ImageBuffer& a,
                      const ImageBuffer& b, const EditMask* mask) {
  if (!a.same_shape(b)) {
    throw ShapeMismatchError(fmt::format("image shapes differ: {}x{} vs {}x{}", a.height(),
                                         a.width(), b.height(), b.width()));
  }
  if (mask && (mask->height() != a.height() || mask->width() != a.width())) {
    throw ShapeMismatchError("mask shape differs from the images");
  }
  if (mask && mask->all_edited()) {
    throw DegenerateInputError("mask marks every pixel as edited");
  }
  const auto fa = provider.patch_features(a);
  return lpips_from_features(fa, provider.patch_features(b), mask);
}

// ---------------------------------------------------------------------------
// Fixture provider

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t byte) {
  h ^= byte;
  h *= kFnvPrime;
}

std::uint64_t fnv_string(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) fnv_mix(h, c);
  return h;
}

// Mean of channel c over rows [y0,y1) x cols [x0,x1).
double block_mean(const ImageBuffer& img, int c, int y0, int y1, int x0, int x1) {
  double s = 0.0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) s += img.at(y, x, c);
  }
  return s / static_cast<double>((y1 - y0) * (x1 - x0));
}

}  // namespace

std::uint64_t image_content_hash(const ImageBuffer& image) {
  std::uint64_t h = kFnvOffset;
  for (int shift = 0; shift < 32; shift += 8) {
    fnv_mix(h, (static_cast<std::uint32_t>(image.height()) >> shift) & 0xff);
    fnv_mix(h, (static_cast<std::uint32_t>(image.width()) >> shift) & 0xff);
  }
  for (double v : image.values()) {
    fnv_mix(h, static_cast<std::uint64_t>(std::floor(v * 255.0 + 0.5)));
  }
  return h;
}

FixtureEmbeddingProvider::FixtureEmbeddingProvider(std::string name)
    : name_(std::move(name)) {}

std::string FixtureEmbeddingProvider::model_id() const {
  return fmt::format("{}:pooled-rgb-4x4+luma-hist-16;hashed-words-64", name_);
}

void FixtureEmbeddingProvider::register_image(const ImageBuffer& image,
                                              std::vector<double> vector) {
  std::lock_guard lock(mu_);
  images_[image_content_hash(image)] = std::move(vector);
}

void FixtureEmbeddingProvider::register_text(std::string text, std::vector<double> vector) {
  std::lock_guard lock(mu_);
  texts_[std::move(text)] = std::move(vector);
}

void FixtureEmbeddingProvider::register_patches(const ImageBuffer& image,
                                                std::vector<FeatureMap> layers) {
  std::lock_guard lock(mu_);
  patches_[image_content_hash(image)] = std::move(layers);
}

std::vector<double> FixtureEmbeddingProvider::do_embed_image(const ImageBuffer& image) {
  {
    std::lock_guard lock(mu_);
    if (auto it = images_.find(image_content_hash(image)); it != images_.end()) {
      return it->second;
    }
  }
  // 4x4 grid of RGB means (48) followed by a 16-bin luminance histogram.
  std::vector<double> v;
  v.reserve(kFallbackDimension);
  const int h = image.height();
  const int w = image.width();
  for (int gy = 0; gy < 4; ++gy) {
    for (int gx = 0; gx < 4; ++gx) {
      const int y0 = gy * h / 4;
      const int y1 = std::max(y0 + 1, (gy + 1) * h / 4);
      const int x0 = gx * w / 4;
      const int x1 = std::max(x0 + 1, (gx + 1) * w / 4);
      for (int c = 0; c < 3; ++c) {
        v.push_back(block_mean(image, c, std::min(y0, h - 1), std::min(y1, h),
                               std::min(x0, w - 1), std::min(x1, w)));
      }
    }
  }
  std::array<double, 16> hist{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double luma =
          0.299 * image.at(y, x, 0) + 0.587 * image.at(y, x, 1) + 0.114 * image.at(y, x, 2);
      hist[static_cast<std::size_t>(std::min(15, static_cast<int>(luma * 16.0)))] += 1.0;
    }
  }
  for (double bin : hist) v.push_back(bin / static_cast<double>(h * w));
  return v;
}

std::vector<double> FixtureEmbeddingProvider::do_embed_text(std::string_view text) {
  {
    std::lock_guard lock(mu_);
    if (auto it = texts_.find(text); it != texts_.end()) return it->second;
  }
  // Feature hashing of lower-cased words with a signed bucket.
  std::vector<double> v(kFallbackDimension, 0.0);
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    const auto hsh = fnv_string(word);
    v[hsh % kFallbackDimension] += (hsh >> 63) ? -1.0 : 1.0;
    word.clear();
  };
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else {
      flush();
    }
  }
  flush();
  // Keep the vector non-zero for empty or fully cancelling input.
  v[0] += 1e-3;
  return v;
}

std::vector<FeatureMap> FixtureEmbeddingProvider::do_patch_features(
    const ImageBuffer& image) {
  {
    std::lock_guard lock(mu_);
    if (auto it = patches_.find(image_content_hash(image)); it != patches_.end()) {
      return it->second;
    }
  }
  // One layer on an (up to) 8x8 grid: RGB block means plus a constant
  // channel so uniform black blocks still have a direction.
  const int gh = std::min(8, image.height());
  const int gw = std::min(8, image.width());
  FeatureMap fm{4, gh, gw, std::vector<double>(static_cast<std::size_t>(4) * gh * gw)};
  for (int gy = 0; gy < gh; ++gy) {
    const int y0 = gy * image.height() / gh;
    const int y1 = (gy + 1) * image.height() / gh;
    for (int gx = 0; gx < gw; ++gx) {
      const int x0 = gx * image.width() / gw;
      const int x1 = (gx + 1) * image.width() / gw;
      for (int c = 0; c < 3; ++c) {
        fm.data[(static_cast<std::size_t>(c) * gh + gy) * gw + gx] =
            block_mean(image, c, y0, y1, x0, x1);
      }
      fm.data[(static_cast<std::size_t>(3) * gh + gy) * gw + gx] = 0.25;
    }
  }
  return {std::move(fm)};
}

}  // namespace editjudge
