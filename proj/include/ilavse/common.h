// ilavse/common.h

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

#ifndef ILAVSE_COMMON_H_
#define ILAVSE_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilavse {

inline constexpr const char* kVersion = "0.1.0";

// Malformed or out-of-contract caller input (empty waveform, bad config, ...).
class InvalidInputError : public std::runtime_error {
 public:
  explicit InvalidInputError(const std::string& msg)
      : std::runtime_error("invalid input: " + msg) {}
};

// Tensor/feature shape disagreement; message names both shapes.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& msg)
      : std::runtime_error("shape mismatch: " + msg) {}
};

// File parsing / serialization problems.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg)
      : std::runtime_error("io error: " + msg) {}
};

// Numerical failure (NaN loss, degenerate normalization, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg)
      : std::runtime_error("numerical error: " + msg) {}
};

inline std::string ShapeToString(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

}  // namespace ilavse

#endif  // ILAVSE_COMMON_H_
