// ilavse/image.h

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

#ifndef ILAVSE_IMAGE_H_
#define ILAVSE_IMAGE_H_

#include <string>
#include <vector>

#include "ilavse/common.h"

namespace ilavse {

// Lip-crop frame. Pixels in [0, 1], HWC row-major, channels 1 or 3.
struct LipFrame {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> pixels;

  float& at(int y, int x, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int y, int x, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::size_t NumPixels() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  void Validate() const;
};

// Time-ordered lip frames at a fixed rate.
struct LipSequence {
  std::vector<LipFrame> frames;
  double fps = 50.0;
  // Per-frame low-quality flags: true marks a frame whose visual content is
  // unusable (its latent is zeroed in the pipeline).
  std::vector<bool> absent;
};

// 8-bit image files; pixel codes map to [0,1] by /255 on load.
LipFrame ReadImage(const std::string& path);          // .png or .pgm by magic
void WritePng(const std::string& path, const LipFrame& frame);
void WritePgm(const std::string& path, const LipFrame& frame);  // gray only

// Loads <dir>/<zero-padded index>.png|.pgm in index order.
LipSequence ReadLipDir(const std::string& dir, double fps = 50.0);

}  // namespace ilavse

#endif  // ILAVSE_IMAGE_H_
