// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "editjudge/errors.hpp"
#include "editjudge/image.hpp"

namespace editjudge {

ImageBuffer::ImageBuffer(int height, int width)
    : ImageBuffer(height, width,
                  std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                          static_cast<std::size_t>(std::max(width, 0)) *
                                          kChannels,
                                      0.0)) {}

ImageBuffer::ImageBuffer(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height < 1 || width < 1) {
    throw ValidationError("shape", fmt::format("image must be at least 1x1, got {}x{}",
                                               height, width));
  }
  const auto expected = static_cast<std::size_t>(height) *
                        static_cast<std::size_t>(width) * kChannels;
  if (values_.size() != expected) {
    throw ValidationError("values",
                          fmt::format("expected {} values for a {}x{}x3 image, got {}",
                                      expected, height, width, values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError("values", "image intensities must be finite and in [0, 1]");
    }
  }
}

EditMask::EditMask(int height, int width, bool value)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw ValidationError("shape",
                          fmt::format("mask must be at least 1x1, got {}x{}", height, width));
  }
  cells_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                value ? 1 : 0);
}

std::size_t EditMask::edited_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

namespace {

ImageBuffer from_mat(const cv::Mat& decoded, const std::string& what) {
  if (decoded.empty()) throw IoError(fmt::format("cannot decode image {}", what));
  double scale = 1.0;
  switch (decoded.depth()) {
    case CV_8U:
      scale = 255.0;
      break;
    case CV_16U:
      scale = 65535.0;
      break;
    default:
      throw IoError(fmt::format("unsupported pixel depth in {}", what));
  }
  const int h = decoded.rows;
  const int w = decoded.cols;
  const int ch = decoded.channels();
  std::vector<double> values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                             3);
  std::size_t k = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        // OpenCV stores BGR(A); gray is replicated.
        const int src = ch == 1 ? 0 : 2 - c;
        const double raw = decoded.depth() == CV_8U
                               ? decoded.ptr<unsigned char>(y)[x * ch + src]
                               : decoded.ptr<unsigned short>(y)[x * ch + src];
        values[k++] = raw / scale;
      }
    }
  }
  return ImageBuffer(h, w, std::move(values));
}

cv::Mat to_mat(const ImageBuffer& image) {
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = mat.ptr<unsigned char>(y);
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        row[x * 3 + (2 - c)] =
            static_cast<unsigned char>(std::floor(image.at(y, x, c) * 255.0 + 0.5));
      }
    }
  }
  return mat;
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  const cv::Mat decoded = cv::imread(path.string(), cv::IMREAD_ANYDEPTH | cv::IMREAD_ANYCOLOR);
  if (decoded.empty()) {
    throw IoError(fmt::format("cannot read image '{}'", path.string()));
  }
  return from_mat(decoded, "'" + path.string() + "'");
}

EditMask load_mask(const std::filesystem::path& path) {
  const auto img = load_image(path);
  EditMask mask(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) mask.set(y, x, img.at(y, x, 0) > 0.5);
  }
  return mask;
}

ImageBuffer decode_image(const std::vector<unsigned char>& bytes) {
  const cv::Mat decoded =
      cv::imdecode(bytes, cv::IMREAD_ANYDEPTH | cv::IMREAD_ANYCOLOR);
  return from_mat(decoded, "from memory");
}

std::vector<unsigned char> encode_png(const ImageBuffer& image) {
  std::vector<unsigned char> out;
  if (!cv::imencode(".png", to_mat(image), out)) {
    throw IoError("PNG encoding failed");
  }
  return out;
}

void save_png(const std::filesystem::path& path, const ImageBuffer& image) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), to_mat(image))) {
    throw IoError(fmt::format("cannot write '{}'", path.string()));
  }
}

void save_mask_png(const std::filesystem::path& path, const EditMask& mask) {
  cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      mat.at<unsigned char>(y, x) = mask.at(y, x) ? 255 : 0;
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), mat)) {
    throw IoError(fmt::format("cannot write '{}'", path.string()));
  }
}

}  // namespace editjudge
