// tests/test_nn.cc

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

#include <cmath>
#include <filesystem>
#include <functional>

#include <doctest.h>

#include "ilavse/checkpoint.h"

using namespace ilavse;

namespace {

// Central finite differences against an arbitrary scalar function; the
// independent oracle for every analytic gradient in this file.
double FiniteDiff(std::vector<double>* slot, std::size_t index,
                  const std::function<double()>& loss, double eps) {
  const double saved = (*slot)[index];
  (*slot)[index] = saved + eps;
  const double up = loss();
  (*slot)[index] = saved - eps;
  const double down = loss();
  (*slot)[index] = saved;
  return (up - down) / (2.0 * eps);
}

double RelErr(double got, double want) {
  const double denom = std::max({std::fabs(got), std::fabs(want), 1e-8});
  return std::fabs(got - want) / denom;
}

void FillUniform(Tensor* t, Rng* rng, double lo = -1.0, double hi = 1.0) {
  for (auto& v : t->values) v = rng->Uniform(lo, hi);
}

// Mean relative error of analytic vs finite-difference gradients for a layer
// under an MSE head against a fixed random target.
void CheckLayerGradients(Layer* layer, const Tensor& input, Rng* rng,
                         double tol = 1e-3, double eps = 1e-3) {
  Tensor target(layer->OutShape(input.shape));
  FillUniform(&target, rng);

  Tensor x = input;
  auto loss_fn = [&]() {
    Tensor y = layer->Forward(x);
    return Mse(y, target);
  };

  // Analytic pass.
  for (Tensor* p : layer->Params()) p->ZeroGrad();
  Tensor y = layer->Forward(x);
  Tensor dy = MseGrad(y, target);
  Tensor dx = layer->Backward(dy);

  // Input gradient.
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    const double fd = FiniteDiff(&x.values, i, loss_fn, eps);
    CHECK(RelErr(dx.values[i], fd) <= tol);
  }
  // Parameter gradients.
  for (Tensor* p : layer->Params()) {
    for (std::size_t i = 0; i < p->values.size(); ++i) {
      const double fd = FiniteDiff(&p->values, i, loss_fn, eps);
      CHECK(RelErr(p->grad[i], fd) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("conv2d 1x1 identity kernel") {
  Conv2d conv(1, 1, 1, 1);
  conv.weight_.values[0] = 1.0;
  conv.bias_.values[0] = 0.0;
  Rng rng(1);
  Tensor x({2, 1, 5, 7});
  FillUniform(&x, &rng);
  Tensor y = conv.Forward(x);
  CHECK(y.shape == x.shape);
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    CHECK(y.values[i] == x.values[i]);
  }
}

TEST_CASE("conv2d shape inference matches execution") {
  Rng rng(2);
  Conv2d conv(3, 8, 3, 3, 2, 1, 1, 0);
  conv.Init(&rng);
  Tensor x({2, 3, 9, 5});
  FillUniform(&x, &rng);
  Tensor y = conv.Forward(x);
  CHECK(y.shape == conv.OutShape(x.shape));
  CHECK(y.shape == std::vector<std::size_t>{2, 8, 5, 3});
  CHECK_THROWS_AS(conv.OutShape({2, 4, 9, 5}), ShapeError);
}

TEST_CASE("conv2d gradients vs finite differences") {
  Rng rng(3);
  Conv2d conv(2, 3, 3, 2, 2, 1, 1, 1);
  conv.Init(&rng);
  Tensor x({2, 2, 6, 5});
  FillUniform(&x, &rng);
  CheckLayerGradients(&conv, x, &rng);
}

TEST_CASE("maxpool constant input routes gradient to first index") {
  MaxPool2d pool(2, 2);
  Tensor x({1, 1, 4, 4});
  x.values.assign(16, 0.75);
  Tensor y = pool.Forward(x);
  CHECK(y.shape == std::vector<std::size_t>{1, 1, 2, 2});
  for (double v : y.values) CHECK(v == 0.75);

  Tensor dy(y.shape);
  dy.values.assign(4, 1.0);
  Tensor dx = pool.Backward(dy);
  // First element of each 2x2 window takes the whole gradient.
  for (std::size_t wy = 0; wy < 2; ++wy) {
    for (std::size_t wx = 0; wx < 2; ++wx) {
      CHECK(dx.values[(2 * wy) * 4 + 2 * wx] == 1.0);
      CHECK(dx.values[(2 * wy) * 4 + 2 * wx + 1] == 0.0);
      CHECK(dx.values[(2 * wy + 1) * 4 + 2 * wx] == 0.0);
      CHECK(dx.values[(2 * wy + 1) * 4 + 2 * wx + 1] == 0.0);
    }
  }
}

TEST_CASE("maxpool gradients vs finite differences (distinct values)") {
  Rng rng(4);
  MaxPool2d pool(2, 2);
  Tensor x({2, 3, 4, 6});
  // Values well separated so the eps perturbation cannot flip an argmax.
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    x.values[i] = 0.05 * static_cast<double>((i * 37) % 101);
  }
  CheckLayerGradients(&pool, x, &rng);
}

TEST_CASE("linear gradients vs finite differences") {
  Rng rng(5);
  Linear lin(7, 4);
  lin.Init(&rng);
  Tensor x({3, 7});
  FillUniform(&x, &rng);
  CheckLayerGradients(&lin, x, &rng);
}

TEST_CASE("relu and sigmoid gradients vs finite differences") {
  Rng rng(6);
  Relu relu;
  Tensor x({2, 10});
  // Stay away from the kink at zero.
  for (auto& v : x.values) {
    const double m = rng.Uniform(0.2, 1.5);
    v = rng.Uniform() < 0.5 ? -m : m;
  }
  CheckLayerGradients(&relu, x, &rng);

  Sigmoid sig;
  Tensor x2({2, 10});
  FillUniform(&x2, &rng);
  CheckLayerGradients(&sig, x2, &rng);
}

TEST_CASE("upsample gradients vs finite differences") {
  Rng rng(7);
  NearestUpsample2d up(2);
  Tensor x({2, 2, 3, 3});
  FillUniform(&x, &rng);
  CHECK(up.OutShape(x.shape) == std::vector<std::size_t>{2, 2, 6, 6});
  CheckLayerGradients(&up, x, &rng);
}

TEST_CASE("lstm gradients vs finite differences") {
  Rng rng(8);
  Lstm lstm(5, 4);
  lstm.Init(&rng);
  Tensor x({3, 2, 5});  // T=3, B=2
  FillUniform(&x, &rng);
  CheckLayerGradients(&lstm, x, &rng);
}

TEST_CASE("lstm is stateful across time") {
  Rng rng(9);
  Lstm lstm(4, 6);
  lstm.Init(&rng);
  Tensor x({5, 1, 4});
  FillUniform(&x, &rng);
  Tensor y = lstm.Forward(x);

  // Permute frames; outputs must differ (non-pointwise behavior).
  Tensor xp = x;
  for (std::size_t d = 0; d < 4; ++d) {
    std::swap(xp.values[0 * 4 + d], xp.values[4 * 4 + d]);
  }
  Tensor yp = lstm.Forward(xp);
  double diff = 0.0;
  // Compare the final frame, which has seen the full (permuted) history.
  for (std::size_t d = 0; d < 6; ++d) {
    diff += std::fabs(y.values[4 * 6 + d] - yp.values[4 * 6 + d]);
  }
  CHECK(diff > 1e-8);
}

TEST_CASE("forward determinism under a fixed seed") {
  auto build_and_run = [](std::uint64_t seed) {
    Rng rng(seed);
    Conv2d conv(1, 4, 3, 3, 1, 1, 1, 1);
    conv.Init(&rng);
    Lstm lstm(4, 3);
    lstm.Init(&rng);
    Tensor x({1, 1, 6, 4});
    FillUniform(&x, &rng);
    Tensor y = conv.Forward(x);
    Tensor flat({y.shape[2] * y.shape[3], 1, y.shape[1]});
    for (std::size_t i = 0; i < flat.values.size(); ++i) {
      flat.values[i] = y.values[i % y.values.size()];
    }
    return lstm.Forward(flat).values;
  };
  CHECK(build_and_run(42) == build_and_run(42));
  CHECK(build_and_run(42) != build_and_run(43));
}

TEST_CASE("mse basics and gradient") {
  Tensor a({2});
  a.values = {1.0, 2.0};
  Tensor b({2});
  b.values = {0.0, 0.0};
  CHECK(Mse(a, a) == 0.0);
  CHECK(Mse(a, b) == doctest::Approx(2.5).epsilon(1e-15));

  Tensor c({3});
  CHECK_THROWS_AS(Mse(a, c), ShapeError);

  // Gradient vs finite differences at 1e-6 relative (float64 path).
  Rng rng(10);
  Tensor p({4, 3});
  Tensor t({4, 3});
  FillUniform(&p, &rng);
  FillUniform(&t, &rng);
  Tensor g = MseGrad(p, t);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double fd =
        FiniteDiff(&p.values, i, [&]() { return Mse(p, t); }, 1e-6);
    CHECK(RelErr(g.values[i], fd) <= 1e-6);
  }
}

TEST_CASE("adam: zero gradients keep parameters fixed") {
  Tensor p({3});
  p.values = {0.5, -0.25, 1.0};
  p.ZeroGrad();
  Adam adam;
  adam.Step({&p});
  CHECK(p.values == std::vector<double>{0.5, -0.25, 1.0});
}

TEST_CASE("adam: first step equals -lr for unit gradient") {
  // Closed form: mhat = g, vhat = g^2, step = lr * g / (|g| + eps).
  Tensor p({1});
  p.values = {0.0};
  p.EnsureGrad();
  p.grad = {1.0};
  AdamConfig config;
  CHECK(config.lr == 5e-5);  // paper's default
  Adam adam(config);
  adam.Step({&p});
  const double expect = -config.lr * 1.0 / (1.0 + config.epsilon);
  CHECK(p.values[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("adam: errors on step without gradients") {
  Tensor p({2});
  Adam adam;
  CHECK_THROWS_AS(adam.Step({&p}), InvalidInputError);
}

TEST_CASE("adam state round trip through serialization") {
  Rng rng(11);
  Tensor p({8});
  FillUniform(&p, &rng);
  Adam a1;
  for (int i = 0; i < 5; ++i) {
    p.EnsureGrad();
    for (auto& g : p.grad) g = rng.Uniform(-1, 1);
    a1.Step({&p});
  }
  std::vector<double> blob;
  a1.Serialize(&blob);
  Adam a2;
  a2.Deserialize(blob);
  CHECK(a2.step_count() == a1.step_count());

  // Same future behavior from both states.
  Tensor q1 = p, q2 = p;
  q1.EnsureGrad();
  q2.EnsureGrad();
  for (std::size_t i = 0; i < 8; ++i) {
    q1.grad[i] = 0.1 * static_cast<double>(i);
    q2.grad[i] = 0.1 * static_cast<double>(i);
  }
  a1.Step({&q1});
  a2.Step({&q2});
  CHECK(q1.values == q2.values);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  Rng rng(12);
  Checkpoint ck;
  ck.meta["kind"] = "test";
  ck.meta["epoch"] = "3";
  Tensor t1({3, 4});
  FillUniform(&t1, &rng);
  Tensor t2({7});
  FillUniform(&t2, &rng);
  ck.Add("a.weight", t1);
  ck.Add("b.bias", t2);

  const auto path =
      (std::filesystem::temp_directory_path() / "ck_rt.bin").string();
  ck.Save(path);
  auto ck2 = Checkpoint::Load(path);
  std::filesystem::remove(path);
  CHECK(ck2.GetMeta("kind") == "test");
  CHECK(ck2.Get("a.weight").values == t1.values);
  CHECK(ck2.Get("a.weight").shape == t1.shape);
  CHECK(ck2.Get("b.bias").values == t2.values);
  CHECK_THROWS_AS(ck2.Get("missing"), IoError);
}

TEST_CASE("nan guard reports non-finite tensors") {
  Tensor t({2});
  t.values = {1.0, std::nan("")};
  CHECK_THROWS_AS(t.CheckFinite("test tensor"), NumericalError);
}
