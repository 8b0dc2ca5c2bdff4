// ilavse/nn.h

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
// Deterministic neural substrate: the layer set the pipeline needs (2-D
// convolution, max pooling, linear, LSTM, elementwise activations),
// reverse-mode gradients, MSE, and Adam. Forward caches whatever backward
// needs; Backward accumulates into parameter grads and returns the input
// gradient.

#ifndef ILAVSE_NN_H_
#define ILAVSE_NN_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ilavse/rng.h"
#include "ilavse/tensor.h"

namespace ilavse {

class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor Forward(const Tensor& x) = 0;
  virtual Tensor Backward(const Tensor& grad_out) = 0;

  // Output shape implied by an input shape, without running anything.
  virtual std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const = 0;

  virtual std::string Name() const = 0;
  virtual std::vector<std::pair<std::string, Tensor*>> NamedParams() {
    return {};
  }

  std::vector<Tensor*> Params() {
    std::vector<Tensor*> out;
    for (auto& [name, t] : NamedParams()) out.push_back(t);
    return out;
  }
};

// Cross-correlation 2-D convolution over (B, C, H, W), zero padding.
class Conv2d : public Layer {
 public:
  Conv2d(int in_ch, int out_ch, int kh, int kw, int stride_h = 1,
         int stride_w = 1, int pad_h = 0, int pad_w = 0);

  void Init(Rng* rng);
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override;
  std::string Name() const override { return "conv2d"; }
  std::vector<std::pair<std::string, Tensor*>> NamedParams() override {
    return {{"weight", &weight_}, {"bias", &bias_}};
  }

  Tensor weight_;  // (out_ch, in_ch, kh, kw)
  Tensor bias_;    // (out_ch)

 private:
  int in_ch_, out_ch_, kh_, kw_, sh_, sw_, ph_, pw_;
  Tensor cached_input_;
  std::vector<double> col_;  // im2col scratch
};

// Non-overlapping max pooling over (B, C, H, W); floor division on odd dims.
// Ties route the gradient to the first maximal index in row-major order.
class MaxPool2d : public Layer {
 public:
  MaxPool2d(int kh, int kw);

  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override;
  std::string Name() const override { return "maxpool2d"; }

 private:
  int kh_, kw_;
  std::vector<std::size_t> in_shape_;
  std::vector<std::size_t> argmax_;
};

// Affine map over (B, in) -> (B, out).
class Linear : public Layer {
 public:
  Linear(int in_dim, int out_dim);

  void Init(Rng* rng);
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override;
  std::string Name() const override { return "linear"; }
  std::vector<std::pair<std::string, Tensor*>> NamedParams() override {
    return {{"weight", &weight_}, {"bias", &bias_}};
  }

  Tensor weight_;  // (out, in)
  Tensor bias_;    // (out)

 private:
  int in_dim_, out_dim_;
  Tensor cached_input_;
};

class Relu : public Layer {
 public:
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override {
    return in;
  }
  std::string Name() const override { return "relu"; }

 private:
  Tensor cached_input_;
};

class Sigmoid : public Layer {
 public:
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override {
    return in;
  }
  std::string Name() const override { return "sigmoid"; }

 private:
  Tensor cached_output_;
};

// Nearest-neighbor spatial upsampling by an integer factor on (B, C, H, W).
class NearestUpsample2d : public Layer {
 public:
  explicit NearestUpsample2d(int factor);

  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override;
  std::string Name() const override { return "upsample2d"; }

 private:
  int factor_;
  std::vector<std::size_t> in_shape_;
};

// Unidirectional LSTM over (T, B, in) -> (T, B, hidden); zero initial state.
// Gate order i, f, g, o; forget-gate bias initialized to 1.
class Lstm : public Layer {
 public:
  Lstm(int in_dim, int hidden);

  void Init(Rng* rng);
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  std::vector<std::size_t> OutShape(
      const std::vector<std::size_t>& in) const override;
  std::string Name() const override { return "lstm"; }
  std::vector<std::pair<std::string, Tensor*>> NamedParams() override {
    return {{"w_ih", &w_ih_}, {"w_hh", &w_hh_}, {"bias", &bias_}};
  }
  int hidden() const { return hidden_; }

  Tensor w_ih_;  // (4H, in)
  Tensor w_hh_;  // (4H, H)
  Tensor bias_;  // (4H)

 private:
  int in_dim_, hidden_;
  Tensor cached_input_;
  std::vector<double> gates_;   // T x B x 4H post-activation
  std::vector<double> cells_;   // T x B x H
  std::vector<double> hidden_states_;  // T x B x H
};

// Mean over all elements of the squared difference.
double Mse(const Tensor& prediction, const Tensor& target);

// d(Mse)/d(prediction).
Tensor MseGrad(const Tensor& prediction, const Tensor& target);

struct AdamConfig {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moment slots are keyed by parameter order, which
// must stay stable across Step calls (it is: models own their layers).
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void Step(const std::vector<Tensor*>& params);

  std::uint64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

  void Serialize(std::vector<double>* out) const;
  void Deserialize(const std::vector<double>& in);

 private:
  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Uniform fan-in init: U(-sqrt(1/fan_in), +sqrt(1/fan_in)).
void FanInUniform(Tensor* t, std::size_t fan_in, Rng* rng);

}  // namespace ilavse

#endif  // ILAVSE_NN_H_
