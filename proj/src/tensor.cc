// src/tensor.cc

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

#include "ilavse/tensor.h"

#include <algorithm>
#include <cmath>

namespace ilavse {

std::size_t NumelOf(const std::vector<std::size_t>& shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  values.assign(NumelOf(shape), 0.0);
}

void Tensor::EnsureGrad() {
  if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
}

void Tensor::ZeroGrad() {
  if (grad.empty()) {
    grad.assign(values.size(), 0.0);
  } else {
    std::fill(grad.begin(), grad.end(), 0.0);
  }
}

void Tensor::CheckFinite(const std::string& context) const {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite value in " + context);
    }
  }
}

void Tensor::RequireShape(const std::vector<std::size_t>& expect,
                          const std::string& context) const {
  if (shape != expect) {
    throw ShapeError(context + ": got " + ShapeToString(shape) + ", expected " +
                     ShapeToString(expect));
  }
}

}  // namespace ilavse
