// ilavse/autoencoder.h

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
// 2-D-convolution-only autoencoder mapping CRQ-processed lip frames to a
// 2048-d latent and reconstructing the grayscale low-resolution target.
// Encoder: stride-2 3x3 convolutions down to 4x4 spatial, then a 1x1
// convolution to latent_dim/16 channels. Decoder mirrors with nearest
// upsampling; sigmoid output keeps pixels in [0,1].

#ifndef ILAVSE_AUTOENCODER_H_
#define ILAVSE_AUTOENCODER_H_

#include <memory>
#include <string>
#include <vector>

#include "ilavse/checkpoint.h"
#include "ilavse/crq.h"
#include "ilavse/nn.h"

namespace ilavse {

inline constexpr int kLatentDim = 2048;

struct AeConfig {
  CrqConfig crq;
  int latent_dim = kLatentDim;

  void Validate() const;
  std::string Serialize() const;
  static AeConfig Deserialize(const std::string& s);
};

// 2048-d visual latent for one frame.
using LatentVisual = std::vector<double>;

class AutoencoderModel {
 public:
  AutoencoderModel(const AeConfig& config, std::uint64_t seed);

  const AeConfig& config() const { return config_; }

  // (B, C, r, r) -> (B, latent_dim)
  Tensor EncodeBatch(const Tensor& frames);
  // (B, latent_dim) -> (B, 1, r, r), sigmoid-activated
  Tensor DecodeBatch(const Tensor& latents);

  LatentVisual Encode(const LipFrame& frame);
  LipFrame Decode(const LatentVisual& latent);

  // Training pass: reconstruction of a CRQ-processed input batch, then
  // BackwardTrain with the loss gradient.
  Tensor ForwardTrain(const Tensor& frames);
  void BackwardTrain(const Tensor& grad_out);

  std::vector<Tensor*> Params();
  std::vector<std::pair<std::string, Tensor*>> NamedParams();

  Checkpoint ToCheckpoint() const;
  static std::unique_ptr<AutoencoderModel> FromCheckpoint(const Checkpoint& ck);

  // HWC float frame <-> (1, C, H, W) float64 tensor.
  static Tensor FrameToTensor(const LipFrame& frame);
  static LipFrame TensorToFrame(const Tensor& t, bool clamp = true);

 private:
  AeConfig config_;
  int stages_ = 0;
  int latent_channels_ = 0;
  std::vector<std::unique_ptr<Layer>> encoder_;
  std::vector<std::unique_ptr<Layer>> decoder_;
};

struct AeTrainOptions {
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  bool verbose = false;
};

// Frame-wise training on (crq(frame), ae_target(frame)) pairs. Returns the
// per-epoch mean loss curve.
std::vector<double> TrainAe(AutoencoderModel* model,
                            const std::vector<LipFrame>& inputs,
                            const std::vector<LipFrame>& targets,
                            const AeTrainOptions& options);

}  // namespace ilavse

#endif  // ILAVSE_AUTOENCODER_H_
