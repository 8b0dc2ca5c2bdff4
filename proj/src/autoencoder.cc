// src/autoencoder.cc

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

#include "ilavse/autoencoder.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace ilavse {

void AeConfig::Validate() const {
  crq.Validate();
  if (latent_dim <= 0 || latent_dim % 16 != 0) {
    throw InvalidInputError(
        "latent_dim must be a positive multiple of 16 to flatten from 4x4, got " +
        std::to_string(latent_dim));
  }
  int r = crq.resolution;
  while (r > 4) {
    if (r % 2 != 0) {
      throw InvalidInputError("resolution " + std::to_string(crq.resolution) +
                              " cannot reach the 4x4 encoder tail");
    }
    r /= 2;
  }
  if (r != 4) {
    throw InvalidInputError("resolution too small for the encoder stack");
  }
}

std::string AeConfig::Serialize() const {
  std::ostringstream os;
  os << (crq.color == ColorMode::kGray ? "gray" : "rgb") << " "
     << crq.resolution << " " << crq.image_bits.total_bits << " " << latent_dim;
  return os.str();
}

AeConfig AeConfig::Deserialize(const std::string& s) {
  std::istringstream is(s);
  std::string color;
  AeConfig config;
  int bits = 32;
  is >> color >> config.crq.resolution >> bits >> config.latent_dim;
  if (!is) throw IoError("bad AeConfig preamble: " + s);
  config.crq.color = color == "gray" ? ColorMode::kGray : ColorMode::kRgb;
  config.crq.image_bits = EofpSpec{bits};
  config.Validate();
  return config;
}

namespace {

// Channel schedule for the stride-2 stages: 32, 64, 128, 128, ...
int StageChannels(int stage) { return std::min(32 << stage, 128); }

}  // namespace

AutoencoderModel::AutoencoderModel(const AeConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.Validate();
  Rng rng(seed);

  stages_ = 0;
  for (int r = config_.crq.resolution; r > 4; r /= 2) ++stages_;
  latent_channels_ = config_.latent_dim / 16;

  int in_ch = config_.crq.out_channels();
  for (int s = 0; s < stages_; ++s) {
    const int out_ch = StageChannels(s);
    auto conv = std::make_unique<Conv2d>(in_ch, out_ch, 3, 3, 2, 2, 1, 1);
    conv->Init(&rng);
    encoder_.push_back(std::move(conv));
    encoder_.push_back(std::make_unique<Relu>());
    in_ch = out_ch;
  }
  // Linear 1x1 head: the latent may take any sign.
  auto head = std::make_unique<Conv2d>(in_ch, latent_channels_, 1, 1);
  head->Init(&rng);
  encoder_.push_back(std::move(head));

  int dec_ch = latent_channels_;
  for (int s = stages_ - 1; s >= 0; --s) {
    const int out_ch = StageChannels(s);
    decoder_.push_back(std::make_unique<NearestUpsample2d>(2));
    auto conv = std::make_unique<Conv2d>(dec_ch, out_ch, 3, 3, 1, 1, 1, 1);
    conv->Init(&rng);
    decoder_.push_back(std::move(conv));
    decoder_.push_back(std::make_unique<Relu>());
    dec_ch = out_ch;
  }
  auto out_conv = std::make_unique<Conv2d>(dec_ch, 1, 3, 3, 1, 1, 1, 1);
  out_conv->Init(&rng);
  decoder_.push_back(std::move(out_conv));
  decoder_.push_back(std::make_unique<Sigmoid>());
}

Tensor AutoencoderModel::EncodeBatch(const Tensor& frames) {
  const std::size_t r = static_cast<std::size_t>(config_.crq.resolution);
  if (frames.rank() != 4) {
    throw ShapeError("ae encode expects (B,C,H,W), got " +
                     ShapeToString(frames.shape));
  }
  frames.RequireShape(
      {frames.shape[0], static_cast<std::size_t>(config_.crq.out_channels()), r,
       r},
      "ae encode");
  Tensor h = frames;
  for (auto& layer : encoder_) h = layer->Forward(h);
  // (B, latent_channels, 4, 4) row-major flattens to (B, latent_dim).
  h.shape = {h.shape[0], static_cast<std::size_t>(config_.latent_dim)};
  return h;
}

Tensor AutoencoderModel::DecodeBatch(const Tensor& latents) {
  if (latents.rank() != 2 ||
      latents.shape[1] != static_cast<std::size_t>(config_.latent_dim)) {
    throw ShapeError("ae decode expects (B," + std::to_string(config_.latent_dim) +
                     "), got " + ShapeToString(latents.shape));
  }
  Tensor h = latents;
  h.shape = {latents.shape[0], static_cast<std::size_t>(latent_channels_), 4, 4};
  for (auto& layer : decoder_) h = layer->Forward(h);
  return h;
}

LatentVisual AutoencoderModel::Encode(const LipFrame& frame) {
  Tensor z = EncodeBatch(FrameToTensor(frame));
  return z.values;
}

LipFrame AutoencoderModel::Decode(const LatentVisual& latent) {
  if (latent.size() != static_cast<std::size_t>(config_.latent_dim)) {
    throw ShapeError("latent size " + std::to_string(latent.size()) +
                     " != " + std::to_string(config_.latent_dim));
  }
  Tensor z({1, static_cast<std::size_t>(config_.latent_dim)});
  z.values = latent;
  return TensorToFrame(DecodeBatch(z));
}

Tensor AutoencoderModel::ForwardTrain(const Tensor& frames) {
  return DecodeBatch(EncodeBatch(frames));
}

void AutoencoderModel::BackwardTrain(const Tensor& grad_out) {
  Tensor g = grad_out;
  for (auto it = decoder_.rbegin(); it != decoder_.rend(); ++it) {
    g = (*it)->Backward(g);
  }
  g.shape = {g.shape[0], static_cast<std::size_t>(latent_channels_), 4, 4};
  for (auto it = encoder_.rbegin(); it != encoder_.rend(); ++it) {
    g = (*it)->Backward(g);
  }
}

std::vector<Tensor*> AutoencoderModel::Params() {
  std::vector<Tensor*> out;
  for (auto& [name, t] : NamedParams()) out.push_back(t);
  return out;
}

std::vector<std::pair<std::string, Tensor*>> AutoencoderModel::NamedParams() {
  std::vector<std::pair<std::string, Tensor*>> out;
  int idx = 0;
  for (auto& layer : encoder_) {
    for (auto& [name, t] : layer->NamedParams()) {
      out.emplace_back("enc" + std::to_string(idx) + "." + name, t);
    }
    ++idx;
  }
  idx = 0;
  for (auto& layer : decoder_) {
    for (auto& [name, t] : layer->NamedParams()) {
      out.emplace_back("dec" + std::to_string(idx) + "." + name, t);
    }
    ++idx;
  }
  return out;
}

Checkpoint AutoencoderModel::ToCheckpoint() const {
  Checkpoint ck;
  ck.meta["kind"] = "ae";
  ck.meta["config"] = config_.Serialize();
  auto* self = const_cast<AutoencoderModel*>(this);
  for (auto& [name, t] : self->NamedParams()) ck.Add(name, *t);
  return ck;
}

std::unique_ptr<AutoencoderModel> AutoencoderModel::FromCheckpoint(
    const Checkpoint& ck) {
  if (ck.GetMeta("kind") != "ae") {
    throw IoError("checkpoint is not an autoencoder");
  }
  auto config = AeConfig::Deserialize(ck.GetMeta("config"));
  auto model = std::make_unique<AutoencoderModel>(config, /*seed=*/0);
  for (auto& [name, t] : model->NamedParams()) {
    const Tensor& stored = ck.Get(name);
    if (stored.shape != t->shape) {
      throw IoError("checkpoint shape mismatch for " + name);
    }
    t->values = stored.values;
  }
  return model;
}

Tensor AutoencoderModel::FrameToTensor(const LipFrame& frame) {
  Tensor t({1, static_cast<std::size_t>(frame.channels),
            static_cast<std::size_t>(frame.height),
            static_cast<std::size_t>(frame.width)});
  for (int c = 0; c < frame.channels; ++c) {
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x) {
        t.values[(static_cast<std::size_t>(c) * frame.height + y) * frame.width +
                 x] = frame.at(y, x, c);
      }
    }
  }
  return t;
}

LipFrame AutoencoderModel::TensorToFrame(const Tensor& t, bool clamp) {
  if (t.rank() != 4 || t.shape[0] != 1) {
    throw ShapeError("frame tensor must be (1,C,H,W), got " +
                     ShapeToString(t.shape));
  }
  LipFrame frame;
  frame.channels = static_cast<int>(t.shape[1]);
  frame.height = static_cast<int>(t.shape[2]);
  frame.width = static_cast<int>(t.shape[3]);
  frame.pixels.resize(frame.NumPixels());
  for (int c = 0; c < frame.channels; ++c) {
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x) {
        double v = t.values[(static_cast<std::size_t>(c) * frame.height + y) *
                                frame.width +
                            x];
        if (clamp) v = std::clamp(v, 0.0, 1.0);
        frame.at(y, x, c) = static_cast<float>(v);
      }
    }
  }
  return frame;
}

std::vector<double> TrainAe(AutoencoderModel* model,
                            const std::vector<LipFrame>& inputs,
                            const std::vector<LipFrame>& targets,
                            const AeTrainOptions& options) {
  if (inputs.empty()) throw InvalidInputError("ae training set is empty");
  if (inputs.size() != targets.size()) {
    throw InvalidInputError("ae inputs/targets size mismatch");
  }
  const int r = model->config().crq.resolution;
  const int c = model->config().crq.out_channels();

  Rng rng(options.seed);
  AdamConfig adam_config;
  adam_config.lr = options.learning_rate;
  Adam adam(adam_config);
  auto params = model->Params();

  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> curve;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    // Deterministic shuffle.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.UniformInt(i)]);
    }
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(options.batch_size));
      const std::size_t b = end - start;
      Tensor x({b, static_cast<std::size_t>(c), static_cast<std::size_t>(r),
                static_cast<std::size_t>(r)});
      Tensor y({b, 1, static_cast<std::size_t>(r), static_cast<std::size_t>(r)});
      for (std::size_t k = 0; k < b; ++k) {
        const auto& in = inputs[order[start + k]];
        const auto& tg = targets[order[start + k]];
        if (in.height != r || in.width != r || in.channels != c) {
          throw ShapeError("ae input frame (" + std::to_string(in.height) + "," +
                           std::to_string(in.width) + "," +
                           std::to_string(in.channels) + ") vs config (" +
                           std::to_string(r) + "," + std::to_string(r) + "," +
                           std::to_string(c) + ")");
        }
        if (tg.height != r || tg.width != r || tg.channels != 1) {
          throw ShapeError("ae target frame must be gray r x r");
        }
        Tensor xt = AutoencoderModel::FrameToTensor(in);
        Tensor yt = AutoencoderModel::FrameToTensor(tg);
        std::copy(xt.values.begin(), xt.values.end(),
                  x.values.begin() + static_cast<std::ptrdiff_t>(
                                         k * xt.values.size()));
        std::copy(yt.values.begin(), yt.values.end(),
                  y.values.begin() + static_cast<std::ptrdiff_t>(
                                         k * yt.values.size()));
      }

      for (Tensor* p : params) p->ZeroGrad();
      Tensor recon = model->ForwardTrain(x);
      const double loss = Mse(recon, y);
      if (!std::isfinite(loss)) {
        throw NumericalError("ae training loss is not finite at epoch " +
                             std::to_string(epoch));
      }
      model->BackwardTrain(MseGrad(recon, y));
      adam.Step(params);
      epoch_loss += loss;
      ++batches;
    }
    curve.push_back(epoch_loss / static_cast<double>(batches));
    if (options.verbose) {
      std::printf("ae epoch %d loss %.6f\n", epoch + 1, curve.back());
    }
  }
  return curve;
}

}  // namespace ilavse
