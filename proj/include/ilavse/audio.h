// ilavse/audio.h

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
//
// Spectral front end: STFT at 512/320 on 16 kHz audio (50 frames/s, aligned
// with 50 fps video), log1p magnitude features with per-utterance
// normalization, context stacking, and waveform reconstruction from enhanced
// features plus the noisy phase.

#ifndef ILAVSE_AUDIO_H_
#define ILAVSE_AUDIO_H_

#include <complex>
#include <string>
#include <vector>

#include "ilavse/wav.h"

namespace ilavse {

struct StftConfig {
  enum class Window { kHann, kRect };

  int window_size = 512;
  int hop = 320;
  Window window = Window::kHann;
  bool center = true;  // reflect padding, frame n centered at n*hop

  int num_bins() const { return window_size / 2 + 1; }
  void Validate() const;
};

struct ComplexSpectrogram {
  std::vector<std::complex<double>> data;  // frames x bins, row-major
  std::size_t num_frames = 0;
  StftConfig config;
  std::size_t num_samples = 0;  // original waveform length

  std::size_t num_bins() const { return static_cast<std::size_t>(config.num_bins()); }
  std::complex<double>& at(std::size_t frame, std::size_t bin) {
    return data[frame * num_bins() + bin];
  }
  const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
    return data[frame * num_bins() + bin];
  }
};

struct NormStats {
  std::vector<double> mean;  // per bin
  std::vector<double> std;   // per bin, floored at kStdFloor

  static constexpr double kStdFloor = 1e-8;
};

struct LogFeature {
  std::vector<double> frames;  // frames x bins, row-major
  std::size_t num_frames = 0;
  std::size_t num_bins = 0;

  double& at(std::size_t frame, std::size_t bin) {
    return frames[frame * num_bins + bin];
  }
  double at(std::size_t frame, std::size_t bin) const {
    return frames[frame * num_bins + bin];
  }
};

// Per-frame stacks of 2L+1 consecutive feature frames, replicate-padded at
// the utterance boundaries. Frame n holds [n-L, ..., n+L], each of num_bins
// values, concatenated in context order.
struct ContextFeature {
  std::vector<double> frames;  // frames x (bins*(2L+1)), row-major
  std::size_t num_frames = 0;
  std::size_t num_bins = 0;
  int half_width = 2;

  std::size_t frame_dim() const {
    return num_bins * static_cast<std::size_t>(2 * half_width + 1);
  }
};

ComplexSpectrogram Stft(const Waveform& wave, const StftConfig& config = {});

Waveform Istft(const ComplexSpectrogram& spec);

// Elementwise log(1 + |S|); no normalization.
LogFeature Log1pFeature(const ComplexSpectrogram& spec);

// Per-bin zero-mean unit-std over the utterance's frames. Requires >= 2
// frames. Population std, floored at NormStats::kStdFloor.
std::pair<LogFeature, NormStats> Normalize(const LogFeature& feature);

LogFeature Denormalize(const LogFeature& feature, const NormStats& stats);

ContextFeature FrameContext(const LogFeature& feature, int half_width = 2);

// Enhanced normalized log1p features + the noisy utterance's stats and phase
// -> waveform: denormalize, expm1, clamp negatives to zero, attach phase,
// inverse STFT.
Waveform Reconstruct(const LogFeature& enhanced, const NormStats& stats,
                     const ComplexSpectrogram& noisy_phase);

// Versioned little-endian dump of a feature matrix plus its stats.
void SaveFeature(const std::string& path, const LogFeature& feature,
                 const NormStats& stats);
std::pair<LogFeature, NormStats> LoadFeature(const std::string& path);

}  // namespace ilavse

#endif  // ILAVSE_AUDIO_H_
