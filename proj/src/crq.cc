// src/crq.cc

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

#include <algorithm>
#include <cmath>

namespace ilavse {

void CrqConfig::Validate() const {
  if (resolution != 64 && resolution != 32 && resolution != 16) {
    throw InvalidInputError("crq resolution must be 64, 32 or 16, got " +
                            std::to_string(resolution));
  }
  image_bits.Validate();
}

LipFrame ColorReduce(const LipFrame& frame, ColorMode mode) {
  frame.Validate();
  if (mode == ColorMode::kRgb) {
    if (frame.channels != 3) {
      throw InvalidInputError("RGB mode expects 3 channels, got " +
                              std::to_string(frame.channels));
    }
    return frame;
  }
  if (frame.channels == 1) return frame;  // already gray
  LipFrame out;
  out.height = frame.height;
  out.width = frame.width;
  out.channels = 1;
  out.pixels.resize(out.NumPixels());
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const float v = 0.299f * frame.at(y, x, 0) + 0.587f * frame.at(y, x, 1) +
                      0.114f * frame.at(y, x, 2);
      out.at(y, x, 0) = std::clamp(v, 0.0f, 1.0f);
    }
  }
  return out;
}

LipFrame ResolutionReduce(const LipFrame& frame, int r) {
  frame.Validate();
  if (r <= 0) throw InvalidInputError("target resolution must be positive");
  if (r > frame.height || r > frame.width) {
    throw InvalidInputError("upscaling request " + std::to_string(frame.height) +
                            "x" + std::to_string(frame.width) + " -> " +
                            std::to_string(r) + " (crq only reduces)");
  }
  if (r == frame.height && r == frame.width) return frame;

  LipFrame out;
  out.height = r;
  out.width = r;
  out.channels = frame.channels;
  out.pixels.resize(out.NumPixels());

  const double sy = static_cast<double>(frame.height) / r;
  const double sx = static_cast<double>(frame.width) / r;
  for (int oy = 0; oy < r; ++oy) {
    const double y0 = oy * sy, y1 = (oy + 1) * sy;
    const int iy0 = static_cast<int>(std::floor(y0));
    const int iy1 = std::min(frame.height, static_cast<int>(std::ceil(y1)));
    for (int ox = 0; ox < r; ++ox) {
      const double x0 = ox * sx, x1 = (ox + 1) * sx;
      const int ix0 = static_cast<int>(std::floor(x0));
      const int ix1 = std::min(frame.width, static_cast<int>(std::ceil(x1)));
      for (int c = 0; c < frame.channels; ++c) {
        double acc = 0.0, area = 0.0;
        for (int iy = iy0; iy < iy1; ++iy) {
          const double wy =
              std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
          for (int ix = ix0; ix < ix1; ++ix) {
            const double wx =
                std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
            acc += wy * wx * frame.at(iy, ix, c);
            area += wy * wx;
          }
        }
        out.at(oy, ox, c) =
            std::clamp(static_cast<float>(acc / area), 0.0f, 1.0f);
      }
    }
  }
  return out;
}

LipFrame ImageQuantize(const LipFrame& frame, const EofpSpec& bits) {
  frame.Validate();
  if (bits.identity()) return frame;
  LipFrame out = frame;
  out.pixels = EofpRoundTrip(
      frame.pixels,
      bits);
  for (auto& p : out.pixels) p = std::clamp(p, 0.0f, 1.0f);
  return out;
}

LipFrame Crq(const LipFrame& frame, const CrqConfig& config) {
  config.Validate();
  return ImageQuantize(
      ResolutionReduce(ColorReduce(frame, config.color), config.resolution),
      config.image_bits);
}

LipFrame AeTarget(const LipFrame& frame, const CrqConfig& config) {
  config.Validate();
  return ResolutionReduce(ColorReduce(frame, ColorMode::kGray),
                          config.resolution);
}

}  // namespace ilavse
