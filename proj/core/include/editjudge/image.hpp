// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace editjudge {

/// Row-major H x W x 3 image with intensities in [0, 1].
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  ImageBuffer() = default;
  /// Zero-filled buffer. Throws ValidationError unless height, width >= 1.
  ImageBuffer(int height, int width);
  /// Takes ownership of `values` (size must be height * width * 3). Throws
  /// ValidationError on a size mismatch or a value outside [0, 1] or not finite.
  ImageBuffer(int height, int width, std::vector<double> values);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return kChannels; }
  std::size_t size() const noexcept { return values_.size(); }

  double at(int y, int x, int c) const {
    return values_[index(y, x, c)];
  }
  double& at(int y, int x, int c) { return values_[index(y, x, c)]; }

  const std::vector<double>& values() const noexcept { return values_; }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// Binary edit mask, true = edited pixel.
class EditMask {
 public:
  EditMask() = default;
  EditMask(int height, int width, bool value = false);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool at(int y, int x) const { return cells_[index(y, x)] != 0; }
  void set(int y, int x, bool v) { cells_[index(y, x)] = v ? 1 : 0; }

  std::size_t edited_count() const;
  bool all_edited() const { return edited_count() == cells_.size(); }

  friend bool operator==(const EditMask&, const EditMask&) = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<unsigned char> cells_;
};

/// Decodes a PNG or JPEG file into RGB intensities. 8-bit sources are divided
/// by 255 and 16-bit sources by 65535; grayscale is replicated to three
/// channels and alpha is dropped. Throws IoError when the file cannot be read
/// or decoded.
ImageBuffer load_image(const std::filesystem::path& path);

/// Decodes a mask image: any pixel whose first channel is above half range is
/// edited.
EditMask load_mask(const std::filesystem::path& path);

/// Decodes an in-memory PNG/JPEG.
ImageBuffer decode_image(const std::vector<unsigned char>& bytes);

/// Encodes as 8-bit PNG (values rounded half-up after scaling by 255).
std::vector<unsigned char> encode_png(const ImageBuffer& image);
void save_png(const std::filesystem::path& path, const ImageBuffer& image);
void save_mask_png(const std::filesystem::path& path, const EditMask& mask);

}  // namespace editjudge
