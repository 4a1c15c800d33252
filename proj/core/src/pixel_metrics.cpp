// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/pixel_metrics.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge {
namespace {

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b) || a.size() == 0) {
    throw ShapeMismatchError(fmt::format("image shapes differ: {}x{} vs {}x{}",
                                         a.height(), a.width(), b.height(), b.width()));
  }
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double c = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Valid-mode separable filtering of one plane (h x w) -> (h-n+1) x (w-n+1).
std::vector<double> filter_valid(const std::vector<double>& plane, int h, int w,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int oh = h - n + 1;
  const int ow = w - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * plane[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

// Per-window SSIM map for one channel.
std::vector<double> ssim_map(const ImageBuffer& a, const ImageBuffer& b, int c,
                             const SsimOptions& o) {
  const int h = a.height();
  const int w = a.width();
  const auto plane_size = static_cast<std::size_t>(h) * w;
  std::vector<double> pa(plane_size), pb(plane_size), paa(plane_size), pbb(plane_size),
      pab(plane_size);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      const double va = a.at(y, x, c);
      const double vb = b.at(y, x, c);
      pa[i] = va;
      pb[i] = vb;
      paa[i] = va * va;
      pbb[i] = vb * vb;
      pab[i] = va * vb;
    }
  }
  const auto k = gaussian_kernel(o.window, o.sigma);
  const auto mu_a = filter_valid(pa, h, w, k);
  const auto mu_b = filter_valid(pb, h, w, k);
  const auto e_aa = filter_valid(paa, h, w, k);
  const auto e_bb = filter_valid(pbb, h, w, k);
  const auto e_ab = filter_valid(pab, h, w, k);

  const double c1 = (o.k1 * o.dynamic_range) * (o.k1 * o.dynamic_range);
  const double c2 = (o.k2 * o.dynamic_range) * (o.k2 * o.dynamic_range);
  std::vector<double> out(mu_a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    out[i] = ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return out;
}

void check_window(const ImageBuffer& a, const SsimOptions& o) {
  if (o.window < 1 || o.sigma <= 0.0) {
    throw PreconditionError("SSIM window must be >= 1 and sigma > 0");
  }
  if (a.height() < o.window || a.width() < o.window) {
    throw PreconditionError(fmt::format(
        "image {}x{} is smaller than the {}x{} SSIM window; reduce the window size",
        a.height(), a.width(), o.window, o.window));
  }
}

double masked_ssim_impl(const ImageBuffer& a, const ImageBuffer& b, const EditMask* mask,
                        const SsimOptions& o) {
  require_same_shape(a, b);
  check_window(a, o);
  const int h = a.height();
  const int w = a.width();
  const int oh = h - o.window + 1;
  const int ow = w - o.window + 1;

  // eligible[i] = window at output position i contains no edited pixel.
  std::vector<char> eligible(static_cast<std::size_t>(oh) * ow, 1);
  if (mask) {
    if (mask->height() != h || mask->width() != w) {
      throw ShapeMismatchError(fmt::format("mask is {}x{} but images are {}x{}",
                                           mask->height(), mask->width(), h, w));
    }
    if (mask->all_edited()) {
      throw DegenerateInputError("mask marks every pixel as edited");
    }
    // Summed-area table of edited pixels.
    std::vector<long> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        sat[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] =
            (mask->at(y, x) ? 1 : 0) + sat[static_cast<std::size_t>(y) * (w + 1) + x + 1] +
            sat[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
            sat[static_cast<std::size_t>(y) * (w + 1) + x];
      }
    }
    const int n = o.window;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        auto at = [&](int yy, int xx) { return sat[static_cast<std::size_t>(yy) * (w + 1) + xx]; };
        const long edited = at(y + n, x + n) - at(y, x + n) - at(y + n, x) + at(y, x);
        eligible[static_cast<std::size_t>(y) * ow + x] = edited == 0;
      }
    }
  }

  double total = 0.0;
  for (int c = 0; c < ImageBuffer::kChannels; ++c) {
    const auto map = ssim_map(a, b, c, o);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (!eligible[i]) continue;
      sum += map[i];
      ++count;
    }
    if (count == 0) {
      throw DegenerateInputError(
          "no SSIM window lies entirely within the unedited region");
    }
    total += sum / static_cast<double>(count);
  }
  return total / ImageBuffer::kChannels;
}

}  // namespace

double l1_distance(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
  return s / static_cast<double>(a.size());
}

double l2_mse(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  const double mse = l2_mse(a, b);
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageBuffer& a, const ImageBuffer& b, const SsimOptions& opts) {
  return masked_ssim_impl(a, b, nullptr, opts);
}

double masked_ssim(const ImageBuffer& a, const ImageBuffer& b, const EditMask& mask,
                   const SsimOptions& opts) {
  return masked_ssim_impl(a, b, &mask, opts);
}

double background_consistency(const ImageBuffer& edited, const ImageBuffer& original,
                              const EditMask* mask, const SsimOptions& opts) {
  return masked_ssim_impl(edited, original, mask, opts);
}

}  // namespace editjudge
