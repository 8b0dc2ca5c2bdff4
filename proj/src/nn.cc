// src/nn.cc

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

#include "ilavse/nn.h"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace ilavse {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

double SigmoidOf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void FanInUniform(Tensor* t, std::size_t fan_in, Rng* rng) {
  const double limit = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (auto& v : t->values) v = rng->Uniform(-limit, limit);
}

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(int in_ch, int out_ch, int kh, int kw, int stride_h,
               int stride_w, int pad_h, int pad_w)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      kh_(kh),
      kw_(kw),
      sh_(stride_h),
      sw_(stride_w),
      ph_(pad_h),
      pw_(pad_w) {
  if (in_ch <= 0 || out_ch <= 0 || kh <= 0 || kw <= 0 || stride_h <= 0 ||
      stride_w <= 0 || pad_h < 0 || pad_w < 0) {
    throw InvalidInputError("bad conv2d hyperparameters");
  }
  weight_ = Tensor({static_cast<std::size_t>(out_ch),
                    static_cast<std::size_t>(in_ch),
                    static_cast<std::size_t>(kh), static_cast<std::size_t>(kw)});
  bias_ = Tensor({static_cast<std::size_t>(out_ch)});
}

void Conv2d::Init(Rng* rng) {
  FanInUniform(&weight_, static_cast<std::size_t>(in_ch_) * kh_ * kw_, rng);
  std::fill(bias_.values.begin(), bias_.values.end(), 0.0);
}

std::vector<std::size_t> Conv2d::OutShape(
    const std::vector<std::size_t>& in) const {
  if (in.size() != 4 || in[1] != static_cast<std::size_t>(in_ch_)) {
    throw ShapeError("conv2d expects (B," + std::to_string(in_ch_) +
                     ",H,W), got " + ShapeToString(in));
  }
  const std::int64_t oh =
      (static_cast<std::int64_t>(in[2]) + 2 * ph_ - kh_) / sh_ + 1;
  const std::int64_t ow =
      (static_cast<std::int64_t>(in[3]) + 2 * pw_ - kw_) / sw_ + 1;
  if (oh <= 0 || ow <= 0) {
    throw ShapeError("conv2d kernel " + std::to_string(kh_) + "x" +
                     std::to_string(kw_) + " does not fit input " +
                     ShapeToString(in));
  }
  return {in[0], static_cast<std::size_t>(out_ch_), static_cast<std::size_t>(oh),
          static_cast<std::size_t>(ow)};
}

namespace {

// Gathers one batch item into a (C*kh*kw, OH*OW) column matrix.
void Im2Col(const double* x, int c_dim, int h, int w, int kh, int kw, int sh,
            int sw, int ph, int pw, int oh, int ow, double* col) {
  const std::size_t patch = static_cast<std::size_t>(oh) * ow;
  for (int c = 0; c < c_dim; ++c) {
    for (int i = 0; i < kh; ++i) {
      for (int j = 0; j < kw; ++j) {
        double* dst = col + ((static_cast<std::size_t>(c) * kh + i) * kw + j) * patch;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * sh - ph + i;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * sw - pw + j;
            const bool inside = iy >= 0 && iy < h && ix >= 0 && ix < w;
            dst[static_cast<std::size_t>(oy) * ow + ox] =
                inside ? x[(static_cast<std::size_t>(c) * h + iy) * w + ix] : 0.0;
          }
        }
      }
    }
  }
}

// Scatters a (C*kh*kw, OH*OW) column gradient back into the input gradient.
void Col2Im(const double* col, int c_dim, int h, int w, int kh, int kw, int sh,
            int sw, int ph, int pw, int oh, int ow, double* dx) {
  const std::size_t patch = static_cast<std::size_t>(oh) * ow;
  for (int c = 0; c < c_dim; ++c) {
    for (int i = 0; i < kh; ++i) {
      for (int j = 0; j < kw; ++j) {
        const double* src =
            col + ((static_cast<std::size_t>(c) * kh + i) * kw + j) * patch;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * sh - ph + i;
          if (iy < 0 || iy >= h) continue;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * sw - pw + j;
            if (ix < 0 || ix >= w) continue;
            dx[(static_cast<std::size_t>(c) * h + iy) * w + ix] +=
                src[static_cast<std::size_t>(oy) * ow + ox];
          }
        }
      }
    }
  }
}

}  // namespace

Tensor Conv2d::Forward(const Tensor& x) {
  const auto out_shape = OutShape(x.shape);
  cached_input_ = x;
  const int b_dim = static_cast<int>(x.shape[0]);
  const int h = static_cast<int>(x.shape[2]);
  const int w = static_cast<int>(x.shape[3]);
  const int oh = static_cast<int>(out_shape[2]);
  const int ow = static_cast<int>(out_shape[3]);
  const std::size_t ckk = static_cast<std::size_t>(in_ch_) * kh_ * kw_;
  const std::size_t patch = static_cast<std::size_t>(oh) * ow;

  Tensor y(out_shape);
  col_.resize(ckk * patch);
  ConstMapMat wmat(weight_.values.data(), out_ch_, static_cast<Eigen::Index>(ckk));
  for (int b = 0; b < b_dim; ++b) {
    Im2Col(x.values.data() + static_cast<std::size_t>(b) * in_ch_ * h * w,
           in_ch_, h, w, kh_, kw_, sh_, sw_, ph_, pw_, oh, ow, col_.data());
    MapMat ymat(y.values.data() + static_cast<std::size_t>(b) * out_ch_ * patch,
                out_ch_, static_cast<Eigen::Index>(patch));
    ConstMapMat cmat(col_.data(), static_cast<Eigen::Index>(ckk),
                     static_cast<Eigen::Index>(patch));
    ymat.noalias() = wmat * cmat;
    for (int oc = 0; oc < out_ch_; ++oc) {
      ymat.row(oc).array() += bias_.values[static_cast<std::size_t>(oc)];
    }
  }
  return y;
}

Tensor Conv2d::Backward(const Tensor& grad_out) {
  const auto& x = cached_input_;
  const auto out_shape = OutShape(x.shape);
  grad_out.RequireShape(out_shape, "conv2d backward");
  const int b_dim = static_cast<int>(x.shape[0]);
  const int h = static_cast<int>(x.shape[2]);
  const int w = static_cast<int>(x.shape[3]);
  const int oh = static_cast<int>(out_shape[2]);
  const int ow = static_cast<int>(out_shape[3]);
  const std::size_t ckk = static_cast<std::size_t>(in_ch_) * kh_ * kw_;
  const std::size_t patch = static_cast<std::size_t>(oh) * ow;

  weight_.EnsureGrad();
  bias_.EnsureGrad();
  Tensor dx(x.shape);

  MapMat dwmat(weight_.grad.data(), out_ch_, static_cast<Eigen::Index>(ckk));
  std::vector<double> dcol(ckk * patch);
  col_.resize(ckk * patch);
  ConstMapMat wmat(weight_.values.data(), out_ch_, static_cast<Eigen::Index>(ckk));

  for (int b = 0; b < b_dim; ++b) {
    ConstMapMat dymat(
        grad_out.values.data() + static_cast<std::size_t>(b) * out_ch_ * patch,
        out_ch_, static_cast<Eigen::Index>(patch));
    Im2Col(x.values.data() + static_cast<std::size_t>(b) * in_ch_ * h * w,
           in_ch_, h, w, kh_, kw_, sh_, sw_, ph_, pw_, oh, ow, col_.data());
    ConstMapMat cmat(col_.data(), static_cast<Eigen::Index>(ckk),
                     static_cast<Eigen::Index>(patch));
    dwmat.noalias() += dymat * cmat.transpose();
    for (int oc = 0; oc < out_ch_; ++oc) {
      bias_.grad[static_cast<std::size_t>(oc)] += dymat.row(oc).sum();
    }
    MapMat dcmat(dcol.data(), static_cast<Eigen::Index>(ckk),
                 static_cast<Eigen::Index>(patch));
    dcmat.noalias() = wmat.transpose() * dymat;
    Col2Im(dcol.data(), in_ch_, h, w, kh_, kw_, sh_, sw_, ph_, pw_, oh, ow,
           dx.values.data() + static_cast<std::size_t>(b) * in_ch_ * h * w);
  }
  return dx;
}

// ---------------------------------------------------------------------------
// MaxPool2d

MaxPool2d::MaxPool2d(int kh, int kw) : kh_(kh), kw_(kw) {
  if (kh <= 0 || kw <= 0) throw InvalidInputError("bad pool kernel");
}

std::vector<std::size_t> MaxPool2d::OutShape(
    const std::vector<std::size_t>& in) const {
  if (in.size() != 4) {
    throw ShapeError("maxpool2d expects (B,C,H,W), got " + ShapeToString(in));
  }
  if (in[2] < static_cast<std::size_t>(kh_) ||
      in[3] < static_cast<std::size_t>(kw_)) {
    throw ShapeError("pool kernel " + std::to_string(kh_) + "x" +
                     std::to_string(kw_) + " does not fit " + ShapeToString(in));
  }
  return {in[0], in[1], in[2] / static_cast<std::size_t>(kh_),
          in[3] / static_cast<std::size_t>(kw_)};
}

Tensor MaxPool2d::Forward(const Tensor& x) {
  const auto out_shape = OutShape(x.shape);
  in_shape_ = x.shape;
  const std::size_t bc = x.shape[0] * x.shape[1];
  const std::size_t h = x.shape[2], w = x.shape[3];
  const std::size_t oh = out_shape[2], ow = out_shape[3];

  Tensor y(out_shape);
  argmax_.assign(bc * oh * ow, 0);
  for (std::size_t p = 0; p < bc; ++p) {
    const double* plane = x.values.data() + p * h * w;
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        std::size_t best = (oy * static_cast<std::size_t>(kh_)) * w +
                           ox * static_cast<std::size_t>(kw_);
        double best_v = plane[best];
        for (int i = 0; i < kh_; ++i) {
          for (int j = 0; j < kw_; ++j) {
            const std::size_t idx =
                (oy * kh_ + static_cast<std::size_t>(i)) * w + ox * kw_ + j;
            if (plane[idx] > best_v) {  // strict: first index wins ties
              best_v = plane[idx];
              best = idx;
            }
          }
        }
        y.values[(p * oh + oy) * ow + ox] = best_v;
        argmax_[(p * oh + oy) * ow + ox] = best;
      }
    }
  }
  return y;
}

Tensor MaxPool2d::Backward(const Tensor& grad_out) {
  const auto out_shape = OutShape(in_shape_);
  grad_out.RequireShape(out_shape, "maxpool2d backward");
  Tensor dx(in_shape_);
  const std::size_t bc = in_shape_[0] * in_shape_[1];
  const std::size_t h = in_shape_[2], w = in_shape_[3];
  const std::size_t plane_out = out_shape[2] * out_shape[3];
  for (std::size_t p = 0; p < bc; ++p) {
    for (std::size_t q = 0; q < plane_out; ++q) {
      dx.values[p * h * w + argmax_[p * plane_out + q]] +=
          grad_out.values[p * plane_out + q];
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Linear

Linear::Linear(int in_dim, int out_dim) : in_dim_(in_dim), out_dim_(out_dim) {
  if (in_dim <= 0 || out_dim <= 0) throw InvalidInputError("bad linear dims");
  weight_ = Tensor({static_cast<std::size_t>(out_dim),
                    static_cast<std::size_t>(in_dim)});
  bias_ = Tensor({static_cast<std::size_t>(out_dim)});
}

void Linear::Init(Rng* rng) {
  FanInUniform(&weight_, static_cast<std::size_t>(in_dim_), rng);
  std::fill(bias_.values.begin(), bias_.values.end(), 0.0);
}

std::vector<std::size_t> Linear::OutShape(
    const std::vector<std::size_t>& in) const {
  if (in.size() != 2 || in[1] != static_cast<std::size_t>(in_dim_)) {
    throw ShapeError("linear expects (B," + std::to_string(in_dim_) +
                     "), got " + ShapeToString(in));
  }
  return {in[0], static_cast<std::size_t>(out_dim_)};
}

Tensor Linear::Forward(const Tensor& x) {
  const auto out_shape = OutShape(x.shape);
  cached_input_ = x;
  Tensor y(out_shape);
  ConstMapMat xm(x.values.data(), static_cast<Eigen::Index>(x.shape[0]), in_dim_);
  ConstMapMat wm(weight_.values.data(), out_dim_, in_dim_);
  MapMat ym(y.values.data(), static_cast<Eigen::Index>(x.shape[0]), out_dim_);
  ym.noalias() = xm * wm.transpose();
  Eigen::Map<const Eigen::RowVectorXd> bm(bias_.values.data(), out_dim_);
  ym.rowwise() += bm;
  return y;
}

Tensor Linear::Backward(const Tensor& grad_out) {
  const auto& x = cached_input_;
  grad_out.RequireShape(OutShape(x.shape), "linear backward");
  weight_.EnsureGrad();
  bias_.EnsureGrad();
  Tensor dx(x.shape);

  const auto b_dim = static_cast<Eigen::Index>(x.shape[0]);
  ConstMapMat xm(x.values.data(), b_dim, in_dim_);
  ConstMapMat dym(grad_out.values.data(), b_dim, out_dim_);
  ConstMapMat wm(weight_.values.data(), out_dim_, in_dim_);
  MapMat dwm(weight_.grad.data(), out_dim_, in_dim_);
  MapMat dxm(dx.values.data(), b_dim, in_dim_);

  dwm.noalias() += dym.transpose() * xm;
  dxm.noalias() = dym * wm;
  Eigen::Map<Eigen::RowVectorXd> dbm(bias_.grad.data(), out_dim_);
  dbm += dym.colwise().sum();
  return dx;
}

// ---------------------------------------------------------------------------
// Activations

Tensor Relu::Forward(const Tensor& x) {
  cached_input_ = x;
  Tensor y = x;
  for (auto& v : y.values) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor Relu::Backward(const Tensor& grad_out) {
  grad_out.RequireShape(cached_input_.shape, "relu backward");
  Tensor dx = grad_out;
  for (std::size_t i = 0; i < dx.values.size(); ++i) {
    if (cached_input_.values[i] <= 0.0) dx.values[i] = 0.0;
  }
  return dx;
}

Tensor Sigmoid::Forward(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values) v = SigmoidOf(v);
  cached_output_ = y;
  return y;
}

Tensor Sigmoid::Backward(const Tensor& grad_out) {
  grad_out.RequireShape(cached_output_.shape, "sigmoid backward");
  Tensor dx = grad_out;
  for (std::size_t i = 0; i < dx.values.size(); ++i) {
    const double y = cached_output_.values[i];
    dx.values[i] *= y * (1.0 - y);
  }
  return dx;
}

// ---------------------------------------------------------------------------
// NearestUpsample2d

NearestUpsample2d::NearestUpsample2d(int factor) : factor_(factor) {
  if (factor <= 0) throw InvalidInputError("bad upsample factor");
}

std::vector<std::size_t> NearestUpsample2d::OutShape(
    const std::vector<std::size_t>& in) const {
  if (in.size() != 4) {
    throw ShapeError("upsample2d expects (B,C,H,W), got " + ShapeToString(in));
  }
  return {in[0], in[1], in[2] * static_cast<std::size_t>(factor_),
          in[3] * static_cast<std::size_t>(factor_)};
}

Tensor NearestUpsample2d::Forward(const Tensor& x) {
  in_shape_ = x.shape;
  const auto out_shape = OutShape(x.shape);
  Tensor y(out_shape);
  const std::size_t bc = x.shape[0] * x.shape[1];
  const std::size_t h = x.shape[2], w = x.shape[3];
  const std::size_t f = static_cast<std::size_t>(factor_);
  for (std::size_t p = 0; p < bc; ++p) {
    for (std::size_t oy = 0; oy < h * f; ++oy) {
      for (std::size_t ox = 0; ox < w * f; ++ox) {
        y.values[(p * h * f + oy) * w * f + ox] =
            x.values[(p * h + oy / f) * w + ox / f];
      }
    }
  }
  return y;
}

Tensor NearestUpsample2d::Backward(const Tensor& grad_out) {
  const auto out_shape = OutShape(in_shape_);
  grad_out.RequireShape(out_shape, "upsample2d backward");
  Tensor dx(in_shape_);
  const std::size_t bc = in_shape_[0] * in_shape_[1];
  const std::size_t h = in_shape_[2], w = in_shape_[3];
  const std::size_t f = static_cast<std::size_t>(factor_);
  for (std::size_t p = 0; p < bc; ++p) {
    for (std::size_t oy = 0; oy < h * f; ++oy) {
      for (std::size_t ox = 0; ox < w * f; ++ox) {
        dx.values[(p * h + oy / f) * w + ox / f] +=
            grad_out.values[(p * h * f + oy) * w * f + ox];
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Lstm

Lstm::Lstm(int in_dim, int hidden) : in_dim_(in_dim), hidden_(hidden) {
  if (in_dim <= 0 || hidden <= 0) throw InvalidInputError("bad lstm dims");
  w_ih_ = Tensor({static_cast<std::size_t>(4 * hidden),
                  static_cast<std::size_t>(in_dim)});
  w_hh_ = Tensor({static_cast<std::size_t>(4 * hidden),
                  static_cast<std::size_t>(hidden)});
  bias_ = Tensor({static_cast<std::size_t>(4 * hidden)});
}

void Lstm::Init(Rng* rng) {
  FanInUniform(&w_ih_, static_cast<std::size_t>(in_dim_), rng);
  FanInUniform(&w_hh_, static_cast<std::size_t>(hidden_), rng);
  std::fill(bias_.values.begin(), bias_.values.end(), 0.0);
  // Forget-gate bias 1 eases early gradient flow through time.
  for (int i = hidden_; i < 2 * hidden_; ++i) {
    bias_.values[static_cast<std::size_t>(i)] = 1.0;
  }
}

std::vector<std::size_t> Lstm::OutShape(
    const std::vector<std::size_t>& in) const {
  if (in.size() != 3 || in[2] != static_cast<std::size_t>(in_dim_)) {
    throw ShapeError("lstm expects (T,B," + std::to_string(in_dim_) +
                     "), got " + ShapeToString(in));
  }
  return {in[0], in[1], static_cast<std::size_t>(hidden_)};
}

Tensor Lstm::Forward(const Tensor& x) {
  const auto out_shape = OutShape(x.shape);
  cached_input_ = x;
  const std::size_t t_dim = x.shape[0], b_dim = x.shape[1];
  const std::size_t hh = static_cast<std::size_t>(hidden_);
  const std::size_t g4 = 4 * hh;

  gates_.assign(t_dim * b_dim * g4, 0.0);
  cells_.assign(t_dim * b_dim * hh, 0.0);
  hidden_states_.assign(t_dim * b_dim * hh, 0.0);

  // All input-side contributions in one GEMM.
  ConstMapMat xm(x.values.data(), static_cast<Eigen::Index>(t_dim * b_dim),
                 in_dim_);
  ConstMapMat wih(w_ih_.values.data(), static_cast<Eigen::Index>(g4), in_dim_);
  MapMat gm(gates_.data(), static_cast<Eigen::Index>(t_dim * b_dim),
            static_cast<Eigen::Index>(g4));
  gm.noalias() = xm * wih.transpose();
  Eigen::Map<const Eigen::RowVectorXd> bm(bias_.values.data(),
                                          static_cast<Eigen::Index>(g4));
  gm.rowwise() += bm;

  ConstMapMat whh(w_hh_.values.data(), static_cast<Eigen::Index>(g4),
                  static_cast<Eigen::Index>(hh));
  Tensor y(out_shape);
  for (std::size_t t = 0; t < t_dim; ++t) {
    MapMat gt(gates_.data() + t * b_dim * g4, static_cast<Eigen::Index>(b_dim),
              static_cast<Eigen::Index>(g4));
    if (t > 0) {
      ConstMapMat hprev(hidden_states_.data() + (t - 1) * b_dim * hh,
                        static_cast<Eigen::Index>(b_dim),
                        static_cast<Eigen::Index>(hh));
      gt.noalias() += hprev * whh.transpose();
    }
    for (std::size_t b = 0; b < b_dim; ++b) {
      double* g = gates_.data() + (t * b_dim + b) * g4;
      double* c = cells_.data() + (t * b_dim + b) * hh;
      double* hcur = hidden_states_.data() + (t * b_dim + b) * hh;
      const double* cprev =
          t > 0 ? cells_.data() + ((t - 1) * b_dim + b) * hh : nullptr;
      for (std::size_t k = 0; k < hh; ++k) {
        const double ig = SigmoidOf(g[k]);
        const double fg = SigmoidOf(g[hh + k]);
        const double gg = std::tanh(g[2 * hh + k]);
        const double og = SigmoidOf(g[3 * hh + k]);
        g[k] = ig;
        g[hh + k] = fg;
        g[2 * hh + k] = gg;
        g[3 * hh + k] = og;
        c[k] = fg * (cprev ? cprev[k] : 0.0) + ig * gg;
        hcur[k] = og * std::tanh(c[k]);
      }
    }
  }
  std::copy(hidden_states_.begin(), hidden_states_.end(), y.values.begin());
  return y;
}

Tensor Lstm::Backward(const Tensor& grad_out) {
  const auto& x = cached_input_;
  grad_out.RequireShape(OutShape(x.shape), "lstm backward");
  const std::size_t t_dim = x.shape[0], b_dim = x.shape[1];
  const std::size_t hh = static_cast<std::size_t>(hidden_);
  const std::size_t g4 = 4 * hh;

  w_ih_.EnsureGrad();
  w_hh_.EnsureGrad();
  bias_.EnsureGrad();

  std::vector<double> dgates(t_dim * b_dim * g4, 0.0);
  std::vector<double> dh(b_dim * hh, 0.0);
  std::vector<double> dc(b_dim * hh, 0.0);

  ConstMapMat whh(w_hh_.values.data(), static_cast<Eigen::Index>(g4),
                  static_cast<Eigen::Index>(hh));
  MapMat dwhh(w_hh_.grad.data(), static_cast<Eigen::Index>(g4),
              static_cast<Eigen::Index>(hh));

  for (std::size_t t = t_dim; t-- > 0;) {
    for (std::size_t b = 0; b < b_dim; ++b) {
      const double* g = gates_.data() + (t * b_dim + b) * g4;
      const double* c = cells_.data() + (t * b_dim + b) * hh;
      const double* cprev =
          t > 0 ? cells_.data() + ((t - 1) * b_dim + b) * hh : nullptr;
      const double* dy = grad_out.values.data() + (t * b_dim + b) * hh;
      double* dhb = dh.data() + b * hh;
      double* dcb = dc.data() + b * hh;
      double* dg = dgates.data() + (t * b_dim + b) * g4;
      for (std::size_t k = 0; k < hh; ++k) {
        const double ig = g[k], fg = g[hh + k], gg = g[2 * hh + k],
                     og = g[3 * hh + k];
        const double tc = std::tanh(c[k]);
        const double dht = dy[k] + dhb[k];
        const double dct = dcb[k] + dht * og * (1.0 - tc * tc);
        dg[k] = dct * gg * ig * (1.0 - ig);
        dg[hh + k] = dct * (cprev ? cprev[k] : 0.0) * fg * (1.0 - fg);
        dg[2 * hh + k] = dct * ig * (1.0 - gg * gg);
        dg[3 * hh + k] = dht * tc * og * (1.0 - og);
        dcb[k] = dct * fg;  // carried to t-1
      }
    }
    // dh_{t-1} = dG_t * W_hh ; dW_hh += dG_t^T * H_{t-1}
    MapMat dgt(dgates.data() + t * b_dim * g4, static_cast<Eigen::Index>(b_dim),
               static_cast<Eigen::Index>(g4));
    if (t > 0) {
      ConstMapMat hprev(hidden_states_.data() + (t - 1) * b_dim * hh,
                        static_cast<Eigen::Index>(b_dim),
                        static_cast<Eigen::Index>(hh));
      dwhh.noalias() += dgt.transpose() * hprev;
      MapMat dhm(dh.data(), static_cast<Eigen::Index>(b_dim),
                 static_cast<Eigen::Index>(hh));
      dhm.noalias() = dgt * whh;
    }
  }

  // Input-side accumulations in single GEMMs.
  ConstMapMat xm(x.values.data(), static_cast<Eigen::Index>(t_dim * b_dim),
                 in_dim_);
  ConstMapMat dgm(dgates.data(), static_cast<Eigen::Index>(t_dim * b_dim),
                  static_cast<Eigen::Index>(g4));
  MapMat dwih(w_ih_.grad.data(), static_cast<Eigen::Index>(g4), in_dim_);
  dwih.noalias() += dgm.transpose() * xm;

  Tensor dx(x.shape);
  MapMat dxm(dx.values.data(), static_cast<Eigen::Index>(t_dim * b_dim), in_dim_);
  ConstMapMat wih(w_ih_.values.data(), static_cast<Eigen::Index>(g4), in_dim_);
  dxm.noalias() = dgm * wih;

  Eigen::Map<Eigen::RowVectorXd> dbm(bias_.grad.data(),
                                     static_cast<Eigen::Index>(g4));
  dbm += dgm.colwise().sum();
  return dx;
}

// ---------------------------------------------------------------------------
// Loss and optimizer

double Mse(const Tensor& prediction, const Tensor& target) {
  if (prediction.shape != target.shape) {
    throw ShapeError("mse: prediction " + ShapeToString(prediction.shape) +
                     " vs target " + ShapeToString(target.shape));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < prediction.values.size(); ++i) {
    const double d = prediction.values[i] - target.values[i];
    acc += d * d;
  }
  return acc / static_cast<double>(prediction.values.size());
}

Tensor MseGrad(const Tensor& prediction, const Tensor& target) {
  if (prediction.shape != target.shape) {
    throw ShapeError("mse grad: prediction " + ShapeToString(prediction.shape) +
                     " vs target " + ShapeToString(target.shape));
  }
  Tensor g(prediction.shape);
  const double scale = 2.0 / static_cast<double>(prediction.values.size());
  for (std::size_t i = 0; i < prediction.values.size(); ++i) {
    g.values[i] = scale * (prediction.values[i] - target.values[i]);
  }
  return g;
}

void Adam::Step(const std::vector<Tensor*>& params) {
  if (m_.empty()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i].assign(params[i]->numel(), 0.0);
      v_[i].assign(params[i]->numel(), 0.0);
    }
  }
  if (m_.size() != params.size()) {
    throw InvalidInputError("adam state does not match parameter count");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    if (p.grad.size() != p.values.size()) {
      throw InvalidInputError("adam step on a parameter without gradients");
    }
    if (m_[i].size() != p.numel()) {
      throw ShapeError("adam moment " + std::to_string(m_[i].size()) +
                       " vs parameter " + std::to_string(p.numel()));
    }
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      const double g = p.grad[k];
      m_[i][k] = config_.beta1 * m_[i][k] + (1.0 - config_.beta1) * g;
      v_[i][k] = config_.beta2 * v_[i][k] + (1.0 - config_.beta2) * g * g;
      const double mhat = m_[i][k] / bc1;
      const double vhat = v_[i][k] / bc2;
      p.values[k] -= config_.lr * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

void Adam::Serialize(std::vector<double>* out) const {
  out->clear();
  out->push_back(static_cast<double>(step_));
  out->push_back(static_cast<double>(m_.size()));
  for (std::size_t i = 0; i < m_.size(); ++i) {
    out->push_back(static_cast<double>(m_[i].size()));
    out->insert(out->end(), m_[i].begin(), m_[i].end());
    out->insert(out->end(), v_[i].begin(), v_[i].end());
  }
}

void Adam::Deserialize(const std::vector<double>& in) {
  std::size_t pos = 0;
  auto next = [&in, &pos]() {
    if (pos >= in.size()) throw IoError("truncated adam state");
    return in[pos++];
  };
  step_ = static_cast<std::uint64_t>(next());
  const std::size_t count = static_cast<std::size_t>(next());
  m_.assign(count, {});
  v_.assign(count, {});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = static_cast<std::size_t>(next());
    m_[i].resize(n);
    v_[i].resize(n);
    for (std::size_t k = 0; k < n; ++k) m_[i][k] = next();
    for (std::size_t k = 0; k < n; ++k) v_[i][k] = next();
  }
}

}  // namespace ilavse
