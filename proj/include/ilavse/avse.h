// ilavse/avse.h

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
// CRNN enhancer: convolutional audio net over 257x5 context frames, EOFP
// latent quantization on the visual path, LSTM fusion over the concatenated
// audio/visual features, and dual linear heads reconstructing the enhanced
// audio frame (257) and the visual latent (2048). Training minimizes
// mse(audio) + mu * mse(visual).

#ifndef ILAVSE_AVSE_H_
#define ILAVSE_AVSE_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ilavse/audio.h"
#include "ilavse/augment.h"
#include "ilavse/autoencoder.h"
#include "ilavse/checkpoint.h"
#include "ilavse/eofp.h"
#include "ilavse/nn.h"

namespace ilavse {

struct AvseConfig {
  int num_bins = 257;
  int context = 2;  // L; context window = 2L+1
  int latent_dim = kLatentDim;

  // Audio net: Conv1 -> Pool(freq) -> Conv3 -> Conv4, 3x3 kernels, frequency
  // strides configurable (context axis always stride 1, padding 1).
  int conv1_channels = 16;
  int conv1_stride_freq = 1;
  int pool_freq = 2;
  int conv3_channels = 32;
  int conv3_stride_freq = 1;
  int conv4_channels = 32;
  int conv4_stride_freq = 1;

  int lstm_hidden = 256;
  int fc2_dim = 512;

  EofpSpec latent_bits{3};
  double mu = 1e-3;
  int segment_frames = 150;

  int context_width() const { return 2 * context + 1; }
  int audio_ctx_dim() const { return num_bins * context_width(); }
  int visual_ctx_dim() const { return latent_dim * context_width(); }
  void Validate() const;
  std::string Serialize() const;
  static AvseConfig Deserialize(const std::string& s);
};

// EOFP round trip over a (frames x dim) latent sequence, one quantization
// window per sequence.
std::vector<double> QuantizeLatentSequence(const std::vector<double>& z,
                                           const EofpSpec& spec);

class AvseModel {
 public:
  AvseModel(const AvseConfig& config, std::uint64_t seed);

  const AvseConfig& config() const { return config_; }
  std::size_t audio_latent_dim() const { return audio_latent_dim_; }

  // (N, audio_ctx_dim) context frames -> (N, audio_latent_dim). The context
  // layout is [c][bin] as produced by FrameContext.
  Tensor AudioNet(const Tensor& x_ctx);

  // Full pass: X_ctx (T, B, audio_ctx_dim), V_ctx (T, B, visual_ctx_dim)
  // -> Y_hat (T, B, num_bins), Z_hat (T, B, latent_dim).
  std::pair<Tensor, Tensor> FuseAndDecode(const Tensor& x_ctx,
                                          const Tensor& v_ctx);

  // Backward through the full pass; parameter grads accumulate.
  void BackwardFuseAndDecode(const Tensor& dy_hat, const Tensor& dz_hat);

  std::vector<Tensor*> Params();
  std::vector<std::pair<std::string, Tensor*>> NamedParams();

  Checkpoint ToCheckpoint() const;
  static std::unique_ptr<AvseModel> FromCheckpoint(const Checkpoint& ck);

 private:
  AvseConfig config_;
  std::size_t audio_latent_dim_ = 0;

  Conv2d conv1_;
  Relu relu1_;
  MaxPool2d pool2_;
  Conv2d conv3_;
  Relu relu3_;
  Conv2d conv4_;
  Relu relu4_;
  std::unique_ptr<Lstm> lstm1_;
  std::unique_ptr<Linear> fc2_;
  Relu relu_fc2_;
  std::unique_ptr<Linear> head_audio_;
  std::unique_ptr<Linear> head_visual_;

  std::vector<std::size_t> audio_in_shape_;  // cached for backward
  std::vector<std::size_t> fused_shape_;
};

// Loss = mse(y_hat, y) + mu * mse(z_hat, z).
double CombinedLoss(const Tensor& y_hat, const Tensor& y, const Tensor& z_hat,
                    const Tensor& z, double mu);
std::pair<Tensor, Tensor> CombinedLossGrad(const Tensor& y_hat, const Tensor& y,
                                           const Tensor& z_hat, const Tensor& z,
                                           double mu);

// One utterance's cached training material.
struct UtteranceFeatures {
  LogFeature noisy;        // normalized log1p frames of the mixture
  NormStats noisy_stats;   // the mixture's own stats
  LogFeature clean_in_noisy_space;  // clean target in the mixture's stats
  std::vector<double> latent;       // F_v x latent_dim, unquantized Z
  std::vector<double> latent_q;     // F_v x latent_dim, quantized V
  std::size_t latent_frames = 0;
};

struct AugmentPolicy {
  int ofr_k = 0;               // audio/video offset range [-k, k]
  double lpr = 0.0;            // low-quality percentage range [0, lpr]
};

struct AvseTrainOptions {
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 5e-5;
  std::uint64_t seed = 0;
  AugmentPolicy augment;
  bool verbose = false;
};

struct TrainLogEntry {
  int epoch = 0;
  double loss = 0.0;
  double audio_loss = 0.0;
  double visual_loss = 0.0;
};

// Trainer with resumable state (optimizer moments, rng, epoch counter).
class AvseTrainer {
 public:
  AvseTrainer(AvseModel* model, const AvseTrainOptions& options);

  // Runs until options.epochs, appending to the log. Deterministic under a
  // fixed seed; a NaN loss aborts with diagnostics.
  void Train(const std::vector<UtteranceFeatures>& dataset);

  const std::vector<TrainLogEntry>& log() const { return log_; }
  int epochs_done() const { return epochs_done_; }

  void SaveState(Checkpoint* ck) const;
  void LoadState(const Checkpoint& ck);

 private:
  void TrainEpoch(const std::vector<UtteranceFeatures>& dataset);

  AvseModel* model_;
  AvseTrainOptions options_;
  Adam adam_;
  Rng rng_;
  int epochs_done_ = 0;
  std::vector<TrainLogEntry> log_;
};

// Per-frame visual availability for enhancement; empty flags = all present.
struct VisualInput {
  std::vector<double> latent_q;  // F x latent_dim quantized latents
  std::size_t num_frames = 0;
  std::vector<bool> absent;      // absent frames are zeroed
};

// Full enhancement chain: stft -> log1p -> normalize -> context on the audio
// side; quantized latents with zero substitution on the visual side; fuse,
// decode, reconstruct with the noisy phase. Output length = input length.
Waveform Enhance(const Waveform& noisy, const VisualInput& visual,
                 AvseModel* model);

// Convenience wrapper: runs CRQ + AE encode + latent quantization on a lip
// sequence to build the VisualInput. Frame-count mismatch beyond +-1 against
// the audio is an error; within +-1 the streams truncate.
VisualInput EncodeVisual(const LipSequence& lips, AutoencoderModel* ae,
                         const AvseConfig& config);

// All-absent visual stream of the given length (the --no-video path).
VisualInput ZeroVisual(std::size_t frames, const AvseConfig& config);

}  // namespace ilavse

#endif  // ILAVSE_AVSE_H_
