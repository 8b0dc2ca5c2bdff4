// tests/test_crq.cc

// Copyright 2026  The iLAVSE C++ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ilavse/crq.h"

#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "ilavse/rng.h"

using namespace ilavse;

namespace {

LipFrame SolidFrame(int h, int w, int c, float value) {
  LipFrame f;
  f.height = h;
  f.width = w;
  f.channels = c;
  f.pixels.assign(f.NumPixels(), value);
  return f;
}

LipFrame RandomFrame(int h, int w, int c, Rng* rng) {
  LipFrame f = SolidFrame(h, w, c, 0.0f);
  for (auto& p : f.pixels) p = static_cast<float>(rng->Uniform());
  return f;
}

}  // namespace

TEST_CASE("color reduce: luma weights") {
  auto white = SolidFrame(4, 4, 3, 1.0f);
  auto g = ColorReduce(white, ColorMode::kGray);
  CHECK(g.channels == 1);
  for (float p : g.pixels) CHECK(p == doctest::Approx(1.0f).epsilon(1e-6));

  auto black = ColorReduce(SolidFrame(4, 4, 3, 0.0f), ColorMode::kGray);
  for (float p : black.pixels) CHECK(p == 0.0f);

  LipFrame red = SolidFrame(2, 2, 3, 0.0f);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) red.at(y, x, 0) = 1.0f;
  auto rg = ColorReduce(red, ColorMode::kGray);
  // Weighted-sum oracle with the declared weights.
  for (float p : rg.pixels) CHECK(p == doctest::Approx(0.299f).epsilon(1e-6));

  auto gray_in = SolidFrame(4, 4, 1, 0.3f);
  auto passthrough = ColorReduce(gray_in, ColorMode::kGray);
  CHECK(passthrough.pixels == gray_in.pixels);
  CHECK_THROWS_AS(ColorReduce(gray_in, ColorMode::kRgb), InvalidInputError);
}

TEST_CASE("resolution reduce: constants, checkerboard, shape") {
  auto c = ResolutionReduce(SolidFrame(100, 100, 1, 0.25f), 16);
  CHECK(c.height == 16);
  CHECK(c.width == 16);
  for (float p : c.pixels) CHECK(p == doctest::Approx(0.25f).epsilon(1e-6));

  // Checkerboard with a 2x2 repeating block: each box-filter cell at r=16
  // averages two ones and two zeros, exactly 0.5.
  LipFrame board = SolidFrame(32, 32, 1, 0.0f);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      board.at(y, x, 0) = ((y + x) % 2 == 0) ? 1.0f : 0.0f;
    }
  }
  auto half = ResolutionReduce(board, 16);
  for (float p : half.pixels) CHECK(p == doctest::Approx(0.5f).epsilon(1e-6));

  CHECK_THROWS_AS(ResolutionReduce(SolidFrame(8, 8, 1, 0.0f), 16),
                  InvalidInputError);
}

TEST_CASE("resolution reduce preserves the mean (non-integer ratio)") {
  Rng rng(31);
  auto f = RandomFrame(100, 100, 1, &rng);
  auto r = ResolutionReduce(f, 16);
  double m_in = 0.0, m_out = 0.0;
  for (float p : f.pixels) m_in += p;
  for (float p : r.pixels) m_out += p;
  m_in /= static_cast<double>(f.pixels.size());
  m_out /= static_cast<double>(r.pixels.size());
  CHECK(m_out == doctest::Approx(m_in).epsilon(1e-4));
}

TEST_CASE("image quantize: powers of two, 0.6 -> 0.5, identity at 32") {
  auto q = ImageQuantize(SolidFrame(2, 2, 1, 0.25f), EofpSpec{5});
  for (float p : q.pixels) CHECK(p == 0.25f);

  LipFrame f = SolidFrame(2, 2, 1, 0.6f);
  f.at(0, 0, 0) = 1.0f;  // keep the window anchored at exponent 127
  auto q2 = ImageQuantize(f, EofpSpec{5});
  CHECK(q2.at(0, 0, 0) == 1.0f);
  CHECK(q2.at(1, 1, 0) == 0.5f);

  Rng rng(32);
  auto rnd = RandomFrame(8, 8, 1, &rng);
  auto q3 = ImageQuantize(rnd, EofpSpec{32});
  CHECK(q3.pixels == rnd.pixels);
}

TEST_CASE("crq composition order and output shape") {
  Rng rng(33);
  auto frame = RandomFrame(128, 128, 3, &rng);

  CrqConfig config;
  config.color = ColorMode::kGray;
  config.resolution = 16;
  config.image_bits = EofpSpec{5};

  auto out = Crq(frame, config);
  CHECK(out.height == 16);
  CHECK(out.width == 16);
  CHECK(out.channels == 1);
  // Every pixel mantissa-free after quantization.
  for (float p : out.pixels) {
    if (p != 0.0f) CHECK(Decompose(p).mantissa == 0);
    CHECK(p >= 0.0f);
    CHECK(p <= 1.0f);
  }

  // Composition equals staged application.
  auto staged = ImageQuantize(
      ResolutionReduce(ColorReduce(frame, config.color), config.resolution),
      config.image_bits);
  CHECK(out.pixels == staged.pixels);

  // Identity config on a matching frame.
  CrqConfig ident;
  ident.color = ColorMode::kRgb;
  ident.resolution = 64;
  ident.image_bits = EofpSpec{32};
  auto rgb64 = RandomFrame(64, 64, 3, &rng);
  auto same = Crq(rgb64, ident);
  CHECK(same.pixels == rgb64.pixels);

  // Determinism: identical frame + config -> bit-identical output.
  auto again = Crq(frame, config);
  CHECK(again.pixels == out.pixels);
}

TEST_CASE("ae target: gray low-res, unquantized") {
  Rng rng(34);
  auto frame = RandomFrame(64, 64, 3, &rng);
  CrqConfig config;
  config.color = ColorMode::kGray;
  config.resolution = 16;
  config.image_bits = EofpSpec{5};

  auto target = AeTarget(frame, config);
  CHECK(target.height == 16);
  CHECK(target.channels == 1);
  // Box averages of random pixels essentially always carry mantissa bits.
  int with_mantissa = 0;
  for (float p : target.pixels) {
    if (p != 0.0f && Decompose(p).mantissa != 0) ++with_mantissa;
  }
  CHECK(with_mantissa > static_cast<int>(target.pixels.size() * 3 / 4));

  // Target of an already-gray low-res frame is itself.
  auto gray16 = RandomFrame(16, 16, 1, &rng);
  auto self_target = AeTarget(gray16, config);
  CHECK(self_target.pixels == gray16.pixels);
}

TEST_CASE("png and pgm round trips") {
  Rng rng(35);
  const auto dir = std::filesystem::temp_directory_path() / "ilavse_imgtest";
  std::filesystem::create_directories(dir);

  auto gray = RandomFrame(24, 17, 1, &rng);
  const auto png_path = (dir / "g.png").string();
  WritePng(png_path, gray);
  auto gray2 = ReadImage(png_path);
  CHECK(gray2.height == 24);
  CHECK(gray2.width == 17);
  CHECK(gray2.channels == 1);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    // 8-bit storage quantizes to 1/255 steps.
    CHECK(std::fabs(gray2.pixels[i] - gray.pixels[i]) <= 0.5f / 255.0f + 1e-6f);
  }

  auto rgb = RandomFrame(9, 9, 3, &rng);
  const auto rgb_path = (dir / "c.png").string();
  WritePng(rgb_path, rgb);
  auto rgb2 = ReadImage(rgb_path);
  CHECK(rgb2.channels == 3);

  const auto pgm_path = (dir / "g.pgm").string();
  WritePgm(pgm_path, gray);
  auto gray3 = ReadImage(pgm_path);
  CHECK(gray3.pixels == gray2.pixels);

  // ReadLipDir orders by numeric index.
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06d.png", i);
    WritePng((dir / name).string(), SolidFrame(4, 4, 1, 0.1f * (i + 1)));
  }
  std::filesystem::remove(png_path);
  std::filesystem::remove(rgb_path);
  std::filesystem::remove(pgm_path);
  auto seq = ReadLipDir(dir.string());
  CHECK(seq.frames.size() == 3);
  CHECK(seq.frames[0].at(0, 0, 0) == doctest::Approx(0.1f).epsilon(0.01));
  CHECK(seq.frames[2].at(0, 0, 0) == doctest::Approx(0.3f).epsilon(0.01));
  std::filesystem::remove_all(dir);
}
