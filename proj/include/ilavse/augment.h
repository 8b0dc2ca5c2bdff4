// ilavse/augment.h

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
// Data perturbation protocols: SNR-controlled noise mixing, audio-visual
// offset simulation, and zero-out of visual latent segments. All randomness
// flows through explicit Rng streams.

#ifndef ILAVSE_AUGMENT_H_
#define ILAVSE_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "ilavse/rng.h"
#include "ilavse/wav.h"

namespace ilavse {

enum class NoiseLoop {
  kRandomStart,  // loop circularly from a random start offset
  kFromStart,    // loop circularly from sample 0
};

struct MixSpec {
  double snr_db = 0.0;
  NoiseLoop loop = NoiseLoop::kRandomStart;
};

// Scales `noise` so 20*log10(rms(clean)/rms(noise)) == snr_db, loops or trims
// it to the clean length, and returns clean + noise.
Waveform MixAtSnr(const Waveform& clean, const Waveform& noise,
                  const MixSpec& spec, Rng* rng);

// Training-time audio/video frame offset range [-k, k]; one frame = 20 ms.
struct OffsetRange {
  int k = 0;
};

// Uniform draw from {-k, ..., k}.
int SampleOffset(const OffsetRange& range, Rng* rng);

// Generic frame matrix: frames x dim, row-major (LogFeature frames, latent
// sequences, ...).
struct FrameSpan {
  const double* data = nullptr;
  std::size_t num_frames = 0;
  std::size_t dim = 0;
};

struct AlignedPair {
  std::vector<double> audio;   // frames x audio_dim
  std::vector<double> video;   // frames x video_dim
  std::size_t num_frames = 0;
};

// Shifts the audio stream by `offset` frames relative to the video stream and
// truncates both to the overlap: output frame t pairs audio[t + offset] with
// video[t]. Pure re-indexing; no interpolation.
AlignedPair ApplyOffset(const FrameSpan& audio, const FrameSpan& video,
                        int offset);

// Per-batch low-quality percentage range [0, lpr].
struct LowQualityRange {
  double lpr = 0.0;  // 0..100

  void Validate() const;
};

// Uniform on [0, lpr].
double SampleLp(const LowQualityRange& range, Rng* rng);

// Zeroes one contiguous run of round(F * lp / 100) frames (round half up);
// the start index is uniform over valid positions. In-place.
void ZeroOut(std::vector<double>* latents, std::size_t num_frames,
             std::size_t dim, double lp, Rng* rng);

// Deterministic variant used when the run placement is already drawn.
void ZeroOutAt(std::vector<double>* latents, std::size_t num_frames,
               std::size_t dim, std::size_t start, std::size_t run);

// round(F * lp / 100), half-up.
std::size_t ZeroRunLength(std::size_t num_frames, double lp);

double Rms(const std::vector<double>& samples);

}  // namespace ilavse

#endif  // ILAVSE_AUGMENT_H_
