// ilavse/eofp.h

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
// Exponent-only floating-point (EOFP) quantization. A float is reduced to its
// sign bit plus a truncated window of its biased-exponent bits; all mantissa
// bits are dropped, so every dequantized value is 0 or an exact +-2^k.

#ifndef ILAVSE_EOFP_H_
#define ILAVSE_EOFP_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ilavse/common.h"

namespace ilavse {

// Bit fields of an IEEE-754 single-precision value. bias is 127.
struct Float32Fields {
  std::uint32_t sign;             // 1 bit
  std::uint32_t biased_exponent;  // 8 bits
  std::uint32_t mantissa;         // 23 bits
  static constexpr int kBias = 127;

  // Decimal significand: 1 + mantissa/2^23 for normal values,
  // mantissa/2^23 for zero/subnormal.
  double Significand() const;
};

// Splits a finite float into its bit fields. NaN/Inf are rejected.
Float32Fields Decompose(float x);

// Exact inverse of Decompose for every finite bit pattern.
float Recompose(const Float32Fields& fields);

// Quantization width. total_bits = 1 keeps the sign only; 3/5/7/9 keep the
// sign plus 2/4/6/8 exponent bits; 32 is the identity.
struct EofpSpec {
  int total_bits = 5;

  int exponent_bits() const { return total_bits == 32 ? 8 : total_bits - 1; }
  bool identity() const { return total_bits == 32; }
  void Validate() const;
};

// Bit-packed EOFP payload plus the per-tensor header needed to decode it.
//
// Code layout for total_bits t in {3,5,7,9}: [sign | exp_code] with
// exp_code = (clamped biased exponent) & (2^(t-1) - 1). The window of
// representable exponents is the aligned block whose high-order bits equal
// window_high_bits; exponents below the window clamp to its bottom edge and
// are counted in overflow_count. The all-zeros code (sign 0, exp_code 0) is
// reserved for exact zero, so a positive value clamped onto the window bottom
// also decodes to zero (see overflow_count). Subnormal inputs flush to zero.
//
// t = 1 stores one sign bit per element; magnitudes decode to the per-tensor
// median magnitude stored in sign_magnitude. t = 32 stores raw bit patterns.
struct QuantizedTensor {
  EofpSpec spec;
  std::vector<std::size_t> shape;
  std::vector<std::uint8_t> payload;  // ceil(numel * total_bits / 8) bytes
  std::uint8_t window_high_bits = 0;  // shared high-order exponent bits
  float sign_magnitude = 0.0f;        // 1-bit mode reconstruction constant
  std::uint64_t overflow_count = 0;   // clamped or zero-collided elements

  std::size_t NumElements() const;
  std::size_t PayloadBits() const { return NumElements() * spec.total_bits; }

  void Save(const std::string& path) const;
  static QuantizedTensor Load(const std::string& path);
};

QuantizedTensor EofpQuantize(std::span<const float> values,
                             std::vector<std::size_t> shape,
                             const EofpSpec& spec);

std::vector<float> EofpDequantize(const QuantizedTensor& q);

// Convenience quantize->dequantize round trip at the given width.
std::vector<float> EofpRoundTrip(std::span<const float> values,
                                 const EofpSpec& spec);

// Compression-ratio accounting across pipeline configurations.
struct PipelineShape {
  int channels = 3;     // 3 for RGB, 1 for grayscale
  int resolution = 64;  // pixels square
  int bits = 32;        // per-element storage width
};

struct CompressionReport {
  double r_color = 1.0;
  double r_res = 1.0;
  double r_qua = 1.0;
  double r_comp = 1.0;
};

CompressionReport CompressionRatio(const PipelineShape& from,
                                   const PipelineShape& to);

}  // namespace ilavse

#endif  // ILAVSE_EOFP_H_
