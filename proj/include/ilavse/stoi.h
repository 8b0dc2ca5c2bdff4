// ilavse/stoi.h

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
// Classic short-time objective intelligibility: 10 kHz analysis, silent-frame
// removal at 40 dB dynamic range, 15 one-third-octave bands from 150 Hz,
// 384 ms segments (30 frames of 256 samples, 50% overlap), clipped
// normalized correlation with a -15 dB SDR bound.

#ifndef ILAVSE_STOI_H_
#define ILAVSE_STOI_H_

#include "ilavse/wav.h"

namespace ilavse {

struct StoiConfig {
  int analysis_rate = 10000;
  int frame_len = 256;
  int fft_size = 512;
  int num_bands = 15;
  double min_freq = 150.0;
  int segment_frames = 30;  // 384 ms
  double beta_db = -15.0;   // clipping bound
  double dyn_range_db = 40.0;
};

// Intrusive intelligibility score, typically in [0, 1]. Signals are trimmed
// to the common length and resampled to 10 kHz if needed. Throws
// InvalidInputError when fewer than segment_frames active frames remain.
double Stoi(const Waveform& clean, const Waveform& processed,
            const StoiConfig& config = {});

}  // namespace ilavse

#endif  // ILAVSE_STOI_H_
