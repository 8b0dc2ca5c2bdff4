// tests/test_wav.cc

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

#include "ilavse/wav.h"

#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "ilavse/rng.h"

using namespace ilavse;

TEST_CASE("wav 16-bit mono round trip") {
  Rng rng(41);
  Waveform w;
  w.samples.resize(16000);
  for (auto& s : w.samples) s = 0.8 * (2.0 * rng.Uniform() - 1.0);
  const auto path =
      (std::filesystem::temp_directory_path() / "rt16.wav").string();
  WriteWav(path, w);
  auto r = ReadWav(path);
  CHECK(r.sample_rate == 16000);
  REQUIRE(r.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::fabs(r.samples[i] - w.samples[i]) <= 1.0 / 32768.0 + 1e-9);
  }
  std::filesystem::remove(path);
}

TEST_CASE("wav load resamples to 16 kHz") {
  // 1 kHz tone at 48 kHz should come back as a 1 kHz tone at 16 kHz.
  Waveform w48;
  w48.sample_rate = 48000;
  w48.samples.resize(48000);
  for (std::size_t i = 0; i < w48.samples.size(); ++i) {
    w48.samples[i] = 0.5 * std::sin(2.0 * M_PI * 1000.0 * i / 48000.0);
  }
  const auto path =
      (std::filesystem::temp_directory_path() / "rs48.wav").string();
  WriteWav(path, w48);
  auto r = ReadWav(path);
  std::filesystem::remove(path);
  CHECK(r.sample_rate == 16000);
  CHECK(r.samples.size() == 16000);
  // Compare the interior against the ideal tone (filter edges excluded).
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 500; i + 500 < r.samples.size(); ++i) {
    const double ideal = 0.5 * std::sin(2.0 * M_PI * 1000.0 * i / 16000.0);
    err += (r.samples[i] - ideal) * (r.samples[i] - ideal);
    ref += ideal * ideal;
  }
  CHECK(10.0 * std::log10(ref / err) > 40.0);
}

TEST_CASE("resample_poly length contract") {
  std::vector<double> x(16000, 0.1);
  auto y = ResamplePoly(x, 5, 8);  // 16 kHz -> 10 kHz
  CHECK(y.size() == 10000);
  auto z = ResamplePoly(x, 1, 1);
  CHECK(z.size() == x.size());
  CHECK_THROWS_AS(ResamplePoly(x, 0, 2), InvalidInputError);
}

TEST_CASE("resample_poly preserves a band-limited tone") {
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::sin(2.0 * M_PI * 440.0 * i / 16000.0);
  }
  auto y = ResamplePoly(x, 5, 8);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 300; i + 300 < y.size(); ++i) {
    const double ideal = std::sin(2.0 * M_PI * 440.0 * i / 10000.0);
    err += (y[i] - ideal) * (y[i] - ideal);
    ref += ideal * ideal;
  }
  CHECK(10.0 * std::log10(ref / err) > 50.0);
}
