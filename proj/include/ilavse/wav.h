// ilavse/wav.h

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

#ifndef ILAVSE_WAV_H_
#define ILAVSE_WAV_H_

#include <string>
#include <vector>

#include "ilavse/common.h"

namespace ilavse {

inline constexpr int kSampleRate = 16000;

// Mono audio signal; samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  void Validate() const;
};

// Polyphase rational-rate resampler (Kaiser-windowed sinc, beta = 5.0,
// 10*max(up,down) taps per side). Output length is ceil(n * up / down).
std::vector<double> ResamplePoly(const std::vector<double>& x, int up,
                                 int down);

// Reads a 16-bit PCM mono WAV. Inputs at other rates are resampled to
// target_rate on load.
Waveform ReadWav(const std::string& path, int target_rate = kSampleRate);

// Writes 16-bit PCM mono; samples are clamped to [-1, 1].
void WriteWav(const std::string& path, const Waveform& wave);

}  // namespace ilavse

#endif  // ILAVSE_WAV_H_
