// ilavse/crq.h

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
// CRQ visual compression chain: color channel reduction, resolution
// reduction, bit quantization, applied in exactly that order.

#ifndef ILAVSE_CRQ_H_
#define ILAVSE_CRQ_H_

#include "ilavse/eofp.h"
#include "ilavse/image.h"

namespace ilavse {

enum class ColorMode { kRgb, kGray };

struct CrqConfig {
  ColorMode color = ColorMode::kGray;
  int resolution = 16;  // pixels square, one of {64, 32, 16}
  EofpSpec image_bits{5};

  int out_channels() const { return color == ColorMode::kGray ? 1 : 3; }
  void Validate() const;
};

// Grayscale uses the standard luma weights 0.299/0.587/0.114.
LipFrame ColorReduce(const LipFrame& frame, ColorMode mode);

// Area-weighted (box) downsample to r x r. Upscaling is rejected.
LipFrame ResolutionReduce(const LipFrame& frame, int r);

// Per-pixel EOFP quantize/dequantize round trip at the given width.
LipFrame ImageQuantize(const LipFrame& frame, const EofpSpec& bits);

// Full chain: ImageQuantize(ResolutionReduce(ColorReduce(frame))).
LipFrame Crq(const LipFrame& frame, const CrqConfig& config);

// Autoencoder training target: grayscale + resolution-reduced, unquantized.
LipFrame AeTarget(const LipFrame& frame, const CrqConfig& config);

}  // namespace ilavse

#endif  // ILAVSE_CRQ_H_
