// src/augment.cc

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

#include "ilavse/augment.h"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ilavse {

double Rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

Waveform MixAtSnr(const Waveform& clean, const Waveform& noise,
                  const MixSpec& spec, Rng* rng) {
  clean.Validate();
  noise.Validate();
  if (clean.sample_rate != noise.sample_rate) {
    throw InvalidInputError("mix requires matching sample rates");
  }
  if (!std::isfinite(spec.snr_db)) {
    throw InvalidInputError("snr must be finite");
  }
  if (clean.samples.empty() || Rms(clean.samples) == 0.0) {
    throw InvalidInputError("clean signal is silent");
  }
  if (noise.samples.empty() || Rms(noise.samples) == 0.0) {
    throw InvalidInputError("noise source is silent");
  }

  const std::size_t n = clean.samples.size();
  std::vector<double> seg(n);
  const std::size_t offset =
      spec.loop == NoiseLoop::kRandomStart && rng != nullptr
          ? static_cast<std::size_t>(rng->UniformInt(noise.samples.size()))
          : 0;
  for (std::size_t i = 0; i < n; ++i) {
    seg[i] = noise.samples[(offset + i) % noise.samples.size()];
  }
  const double seg_rms = Rms(seg);
  if (seg_rms == 0.0) {
    throw InvalidInputError("noise segment is silent");
  }

  // rms(scaled) = rms(clean) * 10^(-snr/20)
  const double scale =
      Rms(clean.samples) * std::pow(10.0, -spec.snr_db / 20.0) / seg_rms;

  Waveform out;
  out.sample_rate = clean.sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = clean.samples[i] + scale * seg[i];
  }
  return out;
}

int SampleOffset(const OffsetRange& range, Rng* rng) {
  if (range.k < 0) throw InvalidInputError("offset range k must be >= 0");
  if (range.k == 0) return 0;
  return static_cast<int>(rng->UniformInt(-range.k, range.k));
}

AlignedPair ApplyOffset(const FrameSpan& audio, const FrameSpan& video,
                        int offset) {
  if (audio.num_frames == 0 || video.num_frames == 0) {
    throw InvalidInputError("offset on empty frame streams");
  }
  // Output frame t uses audio[t + offset], video[t].
  const std::int64_t a_start = std::max<std::int64_t>(0, offset);
  const std::int64_t v_start = std::max<std::int64_t>(0, -offset);
  const std::int64_t frames = std::min(
      static_cast<std::int64_t>(audio.num_frames) - a_start,
      static_cast<std::int64_t>(video.num_frames) - v_start);
  if (frames <= 0) {
    throw InvalidInputError("offset magnitude " + std::to_string(offset) +
                            " leaves no overlap");
  }

  AlignedPair out;
  out.num_frames = static_cast<std::size_t>(frames);
  out.audio.resize(out.num_frames * audio.dim);
  out.video.resize(out.num_frames * video.dim);
  std::memcpy(out.audio.data(),
              audio.data + static_cast<std::size_t>(a_start) * audio.dim,
              out.num_frames * audio.dim * sizeof(double));
  std::memcpy(out.video.data(),
              video.data + static_cast<std::size_t>(v_start) * video.dim,
              out.num_frames * video.dim * sizeof(double));
  return out;
}

void LowQualityRange::Validate() const {
  if (lpr < 0.0 || lpr > 100.0) {
    throw InvalidInputError("lpr must be in [0, 100]");
  }
}

double SampleLp(const LowQualityRange& range, Rng* rng) {
  range.Validate();
  if (range.lpr == 0.0) return 0.0;
  return rng->Uniform(0.0, range.lpr);
}

std::size_t ZeroRunLength(std::size_t num_frames, double lp) {
  if (lp < 0.0 || lp > 100.0) throw InvalidInputError("lp must be in [0, 100]");
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(num_frames) * lp / 100.0 + 0.5));
}

void ZeroOutAt(std::vector<double>* latents, std::size_t num_frames,
               std::size_t dim, std::size_t start, std::size_t run) {
  if (latents->size() != num_frames * dim) {
    throw ShapeError("latent buffer " + std::to_string(latents->size()) +
                     " != frames*dim " + std::to_string(num_frames * dim));
  }
  if (run == 0) return;
  if (start + run > num_frames) {
    throw InvalidInputError("zero-out run exceeds sequence");
  }
  std::fill(latents->begin() + static_cast<std::ptrdiff_t>(start * dim),
            latents->begin() + static_cast<std::ptrdiff_t>((start + run) * dim),
            0.0);
}

void ZeroOut(std::vector<double>* latents, std::size_t num_frames,
             std::size_t dim, double lp, Rng* rng) {
  const std::size_t run = ZeroRunLength(num_frames, lp);
  if (run == 0) return;
  const std::size_t start =
      run >= num_frames
          ? 0
          : static_cast<std::size_t>(rng->UniformInt(num_frames - run + 1));
  ZeroOutAt(latents, num_frames, dim, start, std::min(run, num_frames));
}

}  // namespace ilavse
