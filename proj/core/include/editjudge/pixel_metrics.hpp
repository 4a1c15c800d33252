// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>

#include "editjudge/image.hpp"

namespace editjudge {

/// Mean absolute per-element difference. Throws ShapeMismatchError.
double l1_distance(const ImageBuffer& a, const ImageBuffer& b);
/// Mean squared per-element difference. Throws ShapeMismatchError.
double l2_mse(const ImageBuffer& a, const ImageBuffer& b);

/// Returned by psnr() for identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(1 / MSE) with unit peak. Returns kPsnrIdentical when MSE is 0.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean local SSIM over every placement of the Gaussian window that lies
/// inside the image (no padding), averaged over the three channels.
/// Throws ShapeMismatchError, or PreconditionError when the image is smaller
/// than the window.
double ssim(const ImageBuffer& a, const ImageBuffer& b, const SsimOptions& opts = {});

/// SSIM restricted to window placements that contain no edited pixel.
/// Throws DegenerateInputError when every pixel is edited or no window fits
/// in the unedited region.
double masked_ssim(const ImageBuffer& a, const ImageBuffer& b, const EditMask& mask,
                   const SsimOptions& opts = {});

/// Masked SSIM of edited against original over the unedited region; plain
/// SSIM when `mask` is null.
double background_consistency(const ImageBuffer& edited, const ImageBuffer& original,
                              const EditMask* mask, const SsimOptions& opts = {});

}  // namespace editjudge
