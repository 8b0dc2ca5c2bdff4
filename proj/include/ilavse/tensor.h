// ilavse/tensor.h

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

#ifndef ILAVSE_TENSOR_H_
#define ILAVSE_TENSOR_H_

#include <cstddef>
#include <string>
#include <vector>

#include "ilavse/common.h"

namespace ilavse {

// Dense row-major float64 tensor with an optional gradient buffer of the
// same shape. Desk-scale substrate: value semantics, no views.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until EnsureGrad()

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s);

  static Tensor Zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  std::size_t numel() const { return values.size(); }
  std::size_t dim(std::size_t i) const { return shape.at(i); }
  std::size_t rank() const { return shape.size(); }

  void EnsureGrad();
  void ZeroGrad();

  // Throws NumericalError naming `context` if any value is non-finite.
  void CheckFinite(const std::string& context) const;

  // Throws ShapeError naming both shapes.
  void RequireShape(const std::vector<std::size_t>& expect,
                    const std::string& context) const;
};

std::size_t NumelOf(const std::vector<std::size_t>& shape);

}  // namespace ilavse

#endif  // ILAVSE_TENSOR_H_
