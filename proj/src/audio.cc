// src/audio.cc

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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ilavse/binio.h"
#include "ilavse/fft.h"

namespace ilavse {

void StftConfig::Validate() const {
  if (window_size <= 0 || (window_size & (window_size - 1)) != 0) {
    throw InvalidInputError("stft window size must be a positive power of two");
  }
  if (hop <= 0 || hop > window_size) {
    throw InvalidInputError("stft hop must be in (0, window_size]");
  }
}

namespace {

std::vector<double> MakeWindow(const StftConfig& config) {
  std::vector<double> w(static_cast<std::size_t>(config.window_size));
  if (config.window == StftConfig::Window::kRect) {
    std::fill(w.begin(), w.end(), 1.0);
  } else {
    // Periodic Hann.
    const double n = static_cast<double>(config.window_size);
    for (int i = 0; i < config.window_size; ++i) {
      w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
    }
  }
  return w;
}

// Sample of the (virtually) reflect-padded signal at position pos, where
// pos ranges over [-pad, n + pad). Reflection without edge repetition.
double ReflectAt(const std::vector<double>& x, std::int64_t pos) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (pos < 0) pos = -pos;
  if (pos >= n) pos = 2 * (n - 1) - pos;
  if (pos < 0 || pos >= n) {
    throw InvalidInputError("signal too short for reflect padding");
  }
  return x[static_cast<std::size_t>(pos)];
}

}  // namespace

ComplexSpectrogram Stft(const Waveform& wave, const StftConfig& config) {
  config.Validate();
  wave.Validate();
  const std::size_t n = wave.samples.size();
  if (n == 0) throw InvalidInputError("stft of an empty waveform");
  if (!config.center && n < static_cast<std::size_t>(config.window_size)) {
    throw InvalidInputError("uncentered stft needs at least one full window");
  }

  std::size_t frames =
      config.center
          ? n / static_cast<std::size_t>(config.hop) + 1
          : (n - static_cast<std::size_t>(config.window_size)) /
                    static_cast<std::size_t>(config.hop) +
                1;
  // When hop > window/2, a tail remainder beyond window/2 falls outside every
  // scheduled window; one extra frame keeps the transform invertible.
  if (config.center &&
      n % static_cast<std::size_t>(config.hop) >
          static_cast<std::size_t>(config.window_size / 2)) {
    ++frames;
  }
  const std::vector<double> window = MakeWindow(config);
  const int half = config.window_size / 2;

  ComplexSpectrogram spec;
  spec.config = config;
  spec.num_frames = frames;
  spec.num_samples = n;
  spec.data.resize(frames * spec.num_bins());

  std::vector<double> frame(static_cast<std::size_t>(config.window_size));
  for (std::size_t m = 0; m < frames; ++m) {
    const std::int64_t start =
        static_cast<std::int64_t>(m) * config.hop - (config.center ? half : 0);
    for (int i = 0; i < config.window_size; ++i) {
      const std::int64_t pos = start + i;
      const double s = config.center
                           ? ReflectAt(wave.samples, pos)
                           : wave.samples[static_cast<std::size_t>(pos)];
      frame[static_cast<std::size_t>(i)] = s * window[static_cast<std::size_t>(i)];
    }
    const auto bins = RealFft(frame);
    std::copy(bins.begin(), bins.end(), spec.data.begin() + m * spec.num_bins());
  }
  return spec;
}

Waveform Istft(const ComplexSpectrogram& spec) {
  spec.config.Validate();
  if (spec.num_frames == 0) throw InvalidInputError("istft of an empty spectrogram");
  if (spec.data.size() != spec.num_frames * spec.num_bins()) {
    throw ShapeError("spectrogram data " + std::to_string(spec.data.size()) +
                     " != frames*bins " +
                     std::to_string(spec.num_frames * spec.num_bins()));
  }

  const auto& config = spec.config;
  const std::vector<double> window = MakeWindow(config);
  const int half = config.window_size / 2;
  const std::size_t ws = static_cast<std::size_t>(config.window_size);

  // Length of the padded overlap-add canvas.
  const std::size_t canvas =
      (spec.num_frames - 1) * static_cast<std::size_t>(config.hop) + ws;
  std::vector<double> acc(canvas, 0.0);
  std::vector<double> wsq(canvas, 0.0);

  std::vector<std::complex<double>> bins(spec.num_bins());
  for (std::size_t m = 0; m < spec.num_frames; ++m) {
    std::copy(spec.data.begin() + m * spec.num_bins(),
              spec.data.begin() + (m + 1) * spec.num_bins(), bins.begin());
    const auto frame = RealIfft(bins, ws);
    const std::size_t off = m * static_cast<std::size_t>(config.hop);
    for (std::size_t i = 0; i < ws; ++i) {
      acc[off + i] += frame[i] * window[i];
      wsq[off + i] += window[i] * window[i];
    }
  }

  const std::size_t out_len =
      spec.num_samples > 0
          ? spec.num_samples
          : (config.center
                 ? (spec.num_frames - 1) * static_cast<std::size_t>(config.hop)
                 : canvas);
  const std::size_t offset = config.center ? static_cast<std::size_t>(half) : 0;

  Waveform wave;
  wave.sample_rate = kSampleRate;
  wave.samples.resize(out_len);
  constexpr double kEps = 1e-12;
  for (std::size_t i = 0; i < out_len; ++i) {
    std::size_t pos = offset + i;
    if ((pos >= canvas || wsq[pos] <= kEps) && config.center) {
      // Tail samples past the last frame center are only present through
      // their reflect-padded copies; read them back from there.
      const std::size_t mirror = 2 * (out_len - 1) - i + offset;
      if (mirror < canvas && wsq[mirror] > kEps) pos = mirror;
    }
    if (pos >= canvas || wsq[pos] <= kEps) {
      throw NumericalError("zero-energy window normalization region at sample " +
                           std::to_string(i));
    }
    wave.samples[i] = acc[pos] / wsq[pos];
  }
  return wave;
}

LogFeature Log1pFeature(const ComplexSpectrogram& spec) {
  LogFeature f;
  f.num_frames = spec.num_frames;
  f.num_bins = spec.num_bins();
  f.frames.resize(f.num_frames * f.num_bins);
  for (std::size_t i = 0; i < f.frames.size(); ++i) {
    f.frames[i] = std::log1p(std::abs(spec.data[i]));
  }
  return f;
}

std::pair<LogFeature, NormStats> Normalize(const LogFeature& feature) {
  if (feature.num_frames < 2) {
    throw InvalidInputError(
        "normalization needs at least 2 frames for std estimation");
  }
  NormStats stats;
  stats.mean.assign(feature.num_bins, 0.0);
  stats.std.assign(feature.num_bins, 0.0);
  const double inv_f = 1.0 / static_cast<double>(feature.num_frames);

  for (std::size_t t = 0; t < feature.num_frames; ++t) {
    for (std::size_t b = 0; b < feature.num_bins; ++b) {
      stats.mean[b] += feature.at(t, b);
    }
  }
  for (auto& m : stats.mean) m *= inv_f;
  for (std::size_t t = 0; t < feature.num_frames; ++t) {
    for (std::size_t b = 0; b < feature.num_bins; ++b) {
      const double d = feature.at(t, b) - stats.mean[b];
      stats.std[b] += d * d;
    }
  }
  for (auto& s : stats.std) {
    s = std::max(std::sqrt(s * inv_f), NormStats::kStdFloor);
  }

  LogFeature out = feature;
  for (std::size_t t = 0; t < out.num_frames; ++t) {
    for (std::size_t b = 0; b < out.num_bins; ++b) {
      out.at(t, b) = (out.at(t, b) - stats.mean[b]) / stats.std[b];
    }
  }
  return {std::move(out), std::move(stats)};
}

LogFeature Denormalize(const LogFeature& feature, const NormStats& stats) {
  if (stats.mean.size() != feature.num_bins || stats.std.size() != feature.num_bins) {
    throw ShapeError("stats dim (" + std::to_string(stats.mean.size()) +
                     ") != feature bins (" + std::to_string(feature.num_bins) + ")");
  }
  LogFeature out = feature;
  for (std::size_t t = 0; t < out.num_frames; ++t) {
    for (std::size_t b = 0; b < out.num_bins; ++b) {
      out.at(t, b) = out.at(t, b) * stats.std[b] + stats.mean[b];
    }
  }
  return out;
}

ContextFeature FrameContext(const LogFeature& feature, int half_width) {
  if (feature.num_frames == 0) {
    throw InvalidInputError("context stacking needs at least one frame");
  }
  if (half_width < 0) throw InvalidInputError("context half width must be >= 0");

  ContextFeature ctx;
  ctx.num_frames = feature.num_frames;
  ctx.num_bins = feature.num_bins;
  ctx.half_width = half_width;
  ctx.frames.resize(ctx.num_frames * ctx.frame_dim());

  const std::int64_t last = static_cast<std::int64_t>(feature.num_frames) - 1;
  for (std::size_t n = 0; n < ctx.num_frames; ++n) {
    double* dst = ctx.frames.data() + n * ctx.frame_dim();
    for (int c = -half_width; c <= half_width; ++c) {
      const std::int64_t src = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(n) + c, 0, last);  // replicate padding
      std::memcpy(dst, feature.frames.data() +
                           static_cast<std::size_t>(src) * feature.num_bins,
                  feature.num_bins * sizeof(double));
      dst += feature.num_bins;
    }
  }
  return ctx;
}

Waveform Reconstruct(const LogFeature& enhanced, const NormStats& stats,
                     const ComplexSpectrogram& noisy_phase) {
  if (enhanced.num_frames != noisy_phase.num_frames ||
      enhanced.num_bins != noisy_phase.num_bins()) {
    throw ShapeError("enhanced (" + std::to_string(enhanced.num_frames) + "," +
                     std::to_string(enhanced.num_bins) + ") != noisy (" +
                     std::to_string(noisy_phase.num_frames) + "," +
                     std::to_string(noisy_phase.num_bins()) + ")");
  }
  const LogFeature denorm = Denormalize(enhanced, stats);

  ComplexSpectrogram spec = noisy_phase;
  for (std::size_t t = 0; t < denorm.num_frames; ++t) {
    for (std::size_t b = 0; b < denorm.num_bins; ++b) {
      const double mag = std::max(0.0, std::expm1(denorm.at(t, b)));
      const std::complex<double>& z = noisy_phase.at(t, b);
      const double zmag = std::abs(z);
      spec.at(t, b) = zmag > 0.0 ? z * (mag / zmag) : std::complex<double>(mag, 0.0);
    }
  }
  return Istft(spec);
}

namespace {
constexpr char kFeatMagic[4] = {'I', 'L', 'F', '1'};
}

void SaveFeature(const std::string& path, const LogFeature& feature,
                 const NormStats& stats) {
  BinWriter w(path);
  w.Bytes(kFeatMagic, 4);
  w.U32(1);
  w.U64(feature.num_frames);
  w.U64(feature.num_bins);
  for (double v : feature.frames) w.F64(v);
  w.F64Vec(stats.mean);
  w.F64Vec(stats.std);
  w.Close();
}

std::pair<LogFeature, NormStats> LoadFeature(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kFeatMagic, 4) != 0) {
    throw IoError("not a feature file: " + path);
  }
  if (r.U32() != 1) throw IoError("unsupported feature file version: " + path);
  LogFeature f;
  f.num_frames = r.U64();
  f.num_bins = r.U64();
  f.frames.resize(f.num_frames * f.num_bins);
  for (auto& v : f.frames) v = r.F64();
  NormStats stats;
  stats.mean = r.F64Vec();
  stats.std = r.F64Vec();
  if (stats.mean.size() != f.num_bins || stats.std.size() != f.num_bins) {
    throw IoError("corrupt stats in " + path);
  }
  return {std::move(f), std::move(stats)};
}

}  // namespace ilavse
