// tests/test_audio.cc

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

#include "ilavse/audio.h"

#include <cmath>
#include <complex>
#include <filesystem>

#include <doctest.h>

#include "ilavse/rng.h"

using namespace ilavse;

namespace {

Waveform RandomWave(std::size_t n, Rng* rng, double amp = 0.5) {
  Waveform w;
  w.samples.resize(n);
  for (auto& s : w.samples) s = amp * (2.0 * rng->Uniform() - 1.0);
  return w;
}

double RoundTripSnrDb(const Waveform& x, const Waveform& y) {
  REQUIRE(x.samples.size() == y.samples.size());
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    sig += x.samples[i] * x.samples[i];
    const double d = x.samples[i] - y.samples[i];
    err += d * d;
  }
  if (err == 0.0) return 1e9;
  return 10.0 * std::log10(sig / err);
}

// Direct DFT bin evaluation, the independent oracle for Stft.
std::complex<double> DirectDftBin(const std::vector<double>& frame, int k) {
  std::complex<double> acc(0.0, 0.0);
  const double n = static_cast<double>(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double ang = -2.0 * M_PI * k * static_cast<double>(i) / n;
    acc += frame[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

}  // namespace

TEST_CASE("stft frame count and fps") {
  Rng rng(1);
  auto w = RandomWave(16000, &rng);
  auto spec = Stft(w);
  CHECK(spec.num_frames == 51);  // floor(16000/320) + 1
  CHECK(spec.num_bins() == 257);
  // 50 frames per second: hop rate.
  CHECK(kSampleRate / spec.config.hop == 50);

  auto w2 = RandomWave(16000 * 2, &rng);
  CHECK(Stft(w2).num_frames == 101);
}

TEST_CASE("stft of zero signal is all-zero") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  auto spec = Stft(w);
  CHECK(spec.num_frames == 51);
  for (const auto& z : spec.data) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("stft rejects empty waveform") {
  Waveform w;
  CHECK_THROWS_AS(Stft(w), InvalidInputError);
}

TEST_CASE("stft single unpadded rectangular frame matches direct DFT") {
  StftConfig config;
  config.window = StftConfig::Window::kRect;
  config.center = false;

  Waveform w;
  w.samples.assign(512, 1.0);
  auto spec = Stft(w, config);
  REQUIRE(spec.num_frames == 1);
  // Constant signal: bin 0 magnitude equals the window sum.
  CHECK(std::abs(spec.at(0, 0)) == doctest::Approx(512.0).epsilon(1e-12));

  Rng rng(2);
  auto wr = RandomWave(512, &rng);
  auto sr = Stft(wr, config);
  for (int k : {0, 1, 7, 128, 256}) {
    const auto expect = DirectDftBin(wr.samples, k);
    const auto got = sr.at(0, static_cast<std::size_t>(k));
    CHECK(std::abs(got - expect) < 1e-8);
  }
}

TEST_CASE("istft round trip: 40 dB over random lengths") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n =
        8000 + static_cast<std::size_t>(rng.UniformInt(64000 - 8000 + 1));
    auto w = RandomWave(n, &rng);
    auto back = Istft(Stft(w));
    REQUIRE(back.samples.size() == n);
    CHECK(RoundTripSnrDb(w, back) >= 40.0);
  }
}

TEST_CASE("istft of all-zero spectrogram is silence") {
  ComplexSpectrogram spec;
  spec.num_frames = 51;
  spec.num_samples = 16000;
  spec.data.assign(spec.num_frames * spec.num_bins(), {0.0, 0.0});
  auto w = Istft(spec);
  CHECK(w.samples.size() == 16000);
  for (double s : w.samples) CHECK(s == 0.0);
}

TEST_CASE("istft single rectangular frame round trip") {
  StftConfig config;
  config.window = StftConfig::Window::kRect;
  config.center = false;
  Rng rng(4);
  auto w = RandomWave(512, &rng);
  auto back = Istft(Stft(w, config));
  REQUIRE(back.samples.size() == 512);
  for (std::size_t i = 0; i < 512; ++i) {
    CHECK(std::fabs(back.samples[i] - w.samples[i]) < 1e-5);
  }
}

TEST_CASE("istft reports zero-energy normalization regions") {
  // Hann with hop == window leaves w^2 ~ 0 at frame boundaries.
  StftConfig config;
  config.hop = 512;
  config.center = false;
  Rng rng(5);
  auto w = RandomWave(1024, &rng);
  auto spec = Stft(w, config);
  CHECK_THROWS_AS(Istft(spec), NumericalError);
}

TEST_CASE("log1p feature basics") {
  ComplexSpectrogram spec;
  spec.num_frames = 1;
  spec.data.assign(spec.num_bins(), {0.0, 0.0});
  spec.data[0] = {std::exp(1.0) - 1.0, 0.0};
  spec.data[1] = {0.0, 0.0};
  auto f = Log1pFeature(spec);
  CHECK(f.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.at(0, 1) == 0.0);

  // Round trip through expm1.
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double m = rng.Uniform() * 100.0;
    const double r = std::expm1(std::log1p(m));
    CHECK(std::fabs(r - m) <= 1e-6 * std::max(1.0, m));
  }
}

TEST_CASE("normalize: zero mean unit std per bin, exact round trip") {
  Rng rng(7);
  auto w = RandomWave(16000, &rng);
  auto feat = Log1pFeature(Stft(w));
  auto [norm, stats] = Normalize(feat);

  for (std::size_t b = 0; b < norm.num_bins; ++b) {
    double mean = 0.0, var = 0.0;
    for (std::size_t t = 0; t < norm.num_frames; ++t) mean += norm.at(t, b);
    mean /= static_cast<double>(norm.num_frames);
    for (std::size_t t = 0; t < norm.num_frames; ++t) {
      const double d = norm.at(t, b) - mean;
      var += d * d;
    }
    var /= static_cast<double>(norm.num_frames);
    CHECK(std::fabs(mean) < 1e-5);
    CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-5);
  }

  auto back = Denormalize(norm, stats);
  for (std::size_t i = 0; i < feat.frames.size(); ++i) {
    CHECK(std::fabs(back.frames[i] - feat.frames[i]) < 1e-6);
  }
}

TEST_CASE("normalize: constant-per-bin input gives zeros with floored std") {
  LogFeature f;
  f.num_frames = 10;
  f.num_bins = 4;
  f.frames.resize(40);
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t b = 0; b < 4; ++b) f.at(t, b) = 0.5 * static_cast<double>(b);
  }
  auto [norm, stats] = Normalize(f);
  for (double v : norm.frames) CHECK(v == 0.0);
  for (double s : stats.std) CHECK(s == NormStats::kStdFloor);
}

TEST_CASE("normalize rejects single-frame utterances") {
  LogFeature f;
  f.num_frames = 1;
  f.num_bins = 257;
  f.frames.resize(257, 1.0);
  CHECK_THROWS_AS(Normalize(f), InvalidInputError);
}

TEST_CASE("frame context: replicate padding and interior slices") {
  LogFeature f;
  f.num_frames = 7;
  f.num_bins = 3;
  f.frames.resize(21);
  for (std::size_t t = 0; t < 7; ++t) {
    for (std::size_t b = 0; b < 3; ++b) {
      f.at(t, b) = static_cast<double>(10 * t + b);
    }
  }
  auto ctx = FrameContext(f, 2);
  CHECK(ctx.frame_dim() == 15);
  // Interior frame 3 stacks exact slices 1..5.
  for (int c = 0; c < 5; ++c) {
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(ctx.frames[3 * 15 + static_cast<std::size_t>(c) * 3 + b] ==
            f.at(static_cast<std::size_t>(c + 1), b));
    }
  }
  // Left edge: frames -2,-1 replicate frame 0.
  for (int c = 0; c < 2; ++c) {
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(ctx.frames[static_cast<std::size_t>(c) * 3 + b] == f.at(0, b));
    }
  }

  // Degenerate single frame: 5 copies.
  LogFeature g;
  g.num_frames = 1;
  g.num_bins = 3;
  g.frames = {1.0, 2.0, 3.0};
  auto cg = FrameContext(g, 2);
  for (int c = 0; c < 5; ++c) {
    CHECK(cg.frames[static_cast<std::size_t>(c) * 3 + 0] == 1.0);
    CHECK(cg.frames[static_cast<std::size_t>(c) * 3 + 2] == 3.0);
  }
}

TEST_CASE("context dimension is 257x5 for pipeline features") {
  Rng rng(8);
  auto feat = Log1pFeature(Stft(RandomWave(16000, &rng)));
  auto ctx = FrameContext(feat, 2);
  CHECK(ctx.frame_dim() == 257 * 5);
}

TEST_CASE("reconstruct: clean features and phase round trip at 40 dB") {
  Rng rng(9);
  auto w = RandomWave(24000, &rng);
  auto spec = Stft(w);
  auto [norm, stats] = Normalize(Log1pFeature(spec));
  auto back = Reconstruct(norm, stats, spec);
  CHECK(back.samples.size() == w.samples.size());
  CHECK(RoundTripSnrDb(w, back) >= 40.0);
}

TEST_CASE("reconstruct: zero features with zero stats give silence") {
  Rng rng(10);
  auto w = RandomWave(16000, &rng);
  auto spec = Stft(w);
  LogFeature zeros;
  zeros.num_frames = spec.num_frames;
  zeros.num_bins = spec.num_bins();
  zeros.frames.assign(zeros.num_frames * zeros.num_bins, 0.0);
  NormStats stats;
  stats.mean.assign(zeros.num_bins, 0.0);
  stats.std.assign(zeros.num_bins, 0.0);
  auto out = Reconstruct(zeros, stats, spec);
  CHECK(out.samples.size() == w.samples.size());
  for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("reconstruct rejects shape mismatch") {
  Rng rng(11);
  auto spec = Stft(RandomWave(16000, &rng));
  LogFeature f;
  f.num_frames = spec.num_frames - 1;
  f.num_bins = spec.num_bins();
  f.frames.assign(f.num_frames * f.num_bins, 0.0);
  NormStats stats;
  stats.mean.assign(f.num_bins, 0.0);
  stats.std.assign(f.num_bins, 1.0);
  CHECK_THROWS_AS(Reconstruct(f, stats, spec), ShapeError);
}

TEST_CASE("feature dump round trip") {
  Rng rng(12);
  auto [norm, stats] = Normalize(Log1pFeature(Stft(RandomWave(16000, &rng))));
  const auto path =
      (std::filesystem::temp_directory_path() / "feat_rt.bin").string();
  SaveFeature(path, norm, stats);
  auto [f2, s2] = LoadFeature(path);
  CHECK(f2.frames == norm.frames);
  CHECK(s2.mean == stats.mean);
  CHECK(s2.std == stats.std);
  std::filesystem::remove(path);
}
