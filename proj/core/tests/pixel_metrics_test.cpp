// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/pixel_metrics.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "editjudge/errors.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace editjudge {
namespace {

using testing::random_image;

EditMask random_mask(std::mt19937_64& rng, int h, int w) {
  EditMask m(h, w);
  std::uniform_int_distribution<int> ys(0, h - 1), xs(0, w - 1);
  const int y0 = ys(rng), x0 = xs(rng);
  std::uniform_int_distribution<int> hs(1, std::max(1, h / 3)), ws(1, std::max(1, w / 3));
  const int y1 = std::min(h, y0 + hs(rng)), x1 = std::min(w, x0 + ws(rng));
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) m.set(y, x, true);
  return m;
}

TEST(PixelMetrics, RandomPairsMatchNaiveOracles) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(8, 32);
  SsimOptions opts;
  opts.window = 7;
  int masked_checked = 0;
  for (int i = 0; i < 200; ++i) {
    const int h = size(rng), w = size(rng);
    const auto a = random_image(rng, h, w);
    const auto b = random_image(rng, h, w);
    EXPECT_NEAR(l1_distance(a, b), oracle::l1(a, b), 1e-12);
    EXPECT_NEAR(l2_mse(a, b), oracle::mse(a, b), 1e-12);
    EXPECT_NEAR(psnr(a, b), oracle::psnr(a, b), 1e-9);
    EXPECT_NEAR(ssim(a, b, opts), *oracle::ssim(a, b, nullptr, 7), 1e-9) << h << "x" << w;
    const auto mask = random_mask(rng, h, w);
    if (const auto expected = oracle::ssim(a, b, &mask, 7)) {
      EXPECT_NEAR(masked_ssim(a, b, mask, opts), *expected, 1e-9);
      ++masked_checked;
    } else {
      EXPECT_THROW(masked_ssim(a, b, mask, opts), DegenerateInputError);
    }
  }
  EXPECT_GT(masked_checked, 100);
}

TEST(PixelMetrics, DefaultWindowMatchesOracle) {
  std::mt19937_64 rng(5);
  const auto a = random_image(rng, 40, 33);
  const auto b = random_image(rng, 40, 33);
  EXPECT_NEAR(ssim(a, b), *oracle::ssim(a, b, nullptr, 11), 1e-9);
}

TEST(PixelMetrics, IdentityCases) {
  std::mt19937_64 rng(11);
  const auto a = random_image(rng, 16, 20);
  EXPECT_EQ(l1_distance(a, a), 0.0);
  EXPECT_EQ(l2_mse(a, a), 0.0);
  EXPECT_EQ(psnr(a, a), kPsnrIdentical);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
  SsimOptions o;
  o.window = 7;
  EXPECT_EQ(ssim(a, a, o), 1.0);
  EditMask m(16, 20);
  m.set(0, 0, true);
  EXPECT_EQ(masked_ssim(a, a, m, o), 1.0);
}

TEST(PixelMetrics, KnownValues) {
  ImageBuffer black(4, 4);
  std::vector<double> half(4 * 4 * 3, 0.5);
  const ImageBuffer grey(4, 4, half);
  EXPECT_DOUBLE_EQ(l1_distance(black, grey), 0.5);
  EXPECT_DOUBLE_EQ(l2_mse(black, grey), 0.25);
  EXPECT_NEAR(psnr(black, grey), 10.0 * std::log10(4.0), 1e-12);
}

TEST(PixelMetrics, ShapeMismatch) {
  const ImageBuffer a(8, 8), b(8, 9);
  EXPECT_THROW(l1_distance(a, b), ShapeMismatchError);
  EXPECT_THROW(l2_mse(a, b), ShapeMismatchError);
  EXPECT_THROW(psnr(a, b), ShapeMismatchError);
  EXPECT_THROW(ssim(a, b), ShapeMismatchError);
  EXPECT_THROW(masked_ssim(a, a, EditMask(8, 9), {7}), ShapeMismatchError);
}

TEST(PixelMetrics, ImageSmallerThanWindow) {
  const ImageBuffer a(8, 8);
  EXPECT_THROW(ssim(a, a), PreconditionError);
  SsimOptions o;
  o.window = 8;
  EXPECT_EQ(ssim(a, a, o), 1.0);
}

TEST(PixelMetrics, MaskedDegenerateCases) {
  std::mt19937_64 rng(2);
  const auto a = random_image(rng, 12, 12);
  SsimOptions o;
  o.window = 7;
  EXPECT_THROW(masked_ssim(a, a, EditMask(12, 12, true), o), DegenerateInputError);
  EditMask centre(12, 12);
  centre.set(6, 6, true);  // every 7x7 placement covers the centre pixel
  EXPECT_THROW(masked_ssim(a, a, centre, o), DegenerateInputError);
}

TEST(PixelMetrics, BackgroundConsistencyUsesMask) {
  std::mt19937_64 rng(8);
  const auto orig = random_image(rng, 20, 20);
  auto edited = orig;
  EditMask mask(20, 20);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      mask.set(y, x, true);
      for (int c = 0; c < 3; ++c) edited.at(y, x, c) = 1.0 - orig.at(y, x, c);
    }
  SsimOptions o;
  o.window = 7;
  EXPECT_EQ(background_consistency(edited, orig, &mask, o), 1.0);
  EXPECT_LT(background_consistency(edited, orig, nullptr, o), 1.0);
}

TEST(Image, BufferValidation) {
  EXPECT_THROW(ImageBuffer(0, 3), ValidationError);
  EXPECT_THROW(ImageBuffer(2, 2, std::vector<double>(11, 0.0)), ValidationError);
  EXPECT_THROW(ImageBuffer(1, 1, {0.0, 1.5, 0.0}), ValidationError);
  EXPECT_THROW(ImageBuffer(1, 1, {0.0, NAN, 0.0}), ValidationError);
}

TEST(Image, PngRoundTripAtEightBits) {
  testing::TempDir dir;
  std::mt19937_64 rng(4);
  auto img = random_image(rng, 9, 13);
  for (auto y = 0; y < 9; ++y)
    for (auto x = 0; x < 13; ++x)
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = std::round(img.at(y, x, c) * 255) / 255;
  save_png(dir / "a.png", img);
  const auto back = load_image(dir / "a.png");
  ASSERT_TRUE(back.same_shape(img));
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_NEAR(back.values()[i], img.values()[i], 1e-12);
  }
  EXPECT_EQ(decode_image(encode_png(img)), back);
  EXPECT_THROW(load_image(dir / "missing.png"), IoError);
}

TEST(Image, MaskRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(6);
  const auto m = random_mask(rng, 10, 14);
  save_mask_png(dir / "m.png", m);
  EXPECT_EQ(load_mask(dir / "m.png"), m);
}

}  // namespace
}  // namespace editjudge
