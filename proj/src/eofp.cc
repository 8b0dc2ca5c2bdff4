// src/eofp.cc

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

#include "ilavse/eofp.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ilavse/binio.h"

namespace ilavse {

namespace {

constexpr std::uint32_t kSignMask = 0x80000000u;
constexpr std::uint32_t kExpMask = 0x7f800000u;
constexpr std::uint32_t kManMask = 0x007fffffu;

std::uint32_t BitsOf(float x) {
  std::uint32_t u;
  std::memcpy(&u, &x, 4);
  return u;
}

float FloatOf(std::uint32_t u) {
  float x;
  std::memcpy(&x, &u, 4);
  return x;
}

// Writes `width` low bits of `code` at bit offset `pos` (LSB-first stream).
void PutBits(std::vector<std::uint8_t>* buf, std::size_t pos,
             std::uint32_t code, int width) {
  for (int b = 0; b < width; ++b) {
    if (code & (1u << b)) {
      (*buf)[(pos + b) >> 3] |= static_cast<std::uint8_t>(1u << ((pos + b) & 7));
    }
  }
}

std::uint32_t GetBits(const std::vector<std::uint8_t>& buf, std::size_t pos,
                      int width) {
  std::uint32_t code = 0;
  for (int b = 0; b < width; ++b) {
    if (buf[(pos + b) >> 3] & (1u << ((pos + b) & 7))) code |= 1u << b;
  }
  return code;
}

}  // namespace

double Float32Fields::Significand() const {
  const double frac =
      static_cast<double>(mantissa) / static_cast<double>(1u << 23);
  return biased_exponent == 0 ? frac : 1.0 + frac;
}

Float32Fields Decompose(float x) {
  if (!std::isfinite(x)) {
    throw InvalidInputError("decompose requires a finite float");
  }
  const std::uint32_t u = BitsOf(x);
  return Float32Fields{u >> 31, (u & kExpMask) >> 23, u & kManMask};
}

float Recompose(const Float32Fields& fields) {
  const std::uint32_t u = (fields.sign << 31) |
                          ((fields.biased_exponent & 0xffu) << 23) |
                          (fields.mantissa & kManMask);
  return FloatOf(u);
}

void EofpSpec::Validate() const {
  switch (total_bits) {
    case 1:
    case 3:
    case 5:
    case 7:
    case 9:
    case 32:
      return;
    default:
      throw InvalidInputError("eofp total_bits must be one of {1,3,5,7,9,32}, got " +
                              std::to_string(total_bits));
  }
}

std::size_t QuantizedTensor::NumElements() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

QuantizedTensor EofpQuantize(std::span<const float> values,
                             std::vector<std::size_t> shape,
                             const EofpSpec& spec) {
  spec.Validate();
  QuantizedTensor q;
  q.spec = spec;
  q.shape = std::move(shape);
  if (q.NumElements() != values.size()) {
    throw ShapeError("eofp shape " + ShapeToString(q.shape) + " does not match " +
                     std::to_string(values.size()) + " values");
  }
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw InvalidInputError("eofp input contains a non-finite value");
    }
  }
  const std::size_t n = values.size();
  q.payload.assign((n * static_cast<std::size_t>(spec.total_bits) + 7) / 8, 0);

  if (spec.identity()) {
    for (std::size_t i = 0; i < n; ++i) {
      PutBits(&q.payload, i * 32, BitsOf(values[i]), 32);
    }
    return q;
  }

  if (spec.total_bits == 1) {
    std::vector<float> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(values[i]);
    if (n > 0) {
      // Lower median; deterministic for even sizes.
      auto mid = mags.begin() + static_cast<std::ptrdiff_t>((n - 1) / 2);
      std::nth_element(mags.begin(), mid, mags.end());
      q.sign_magnitude = *mid;
    }
    for (std::size_t i = 0; i < n; ++i) {
      PutBits(&q.payload, i, BitsOf(values[i]) >> 31, 1);
    }
    return q;
  }

  const int eb = spec.exponent_bits();
  const std::uint32_t mask = (1u << eb) - 1u;

  // Window from the biased exponent of the largest-magnitude normal value.
  std::uint32_t emax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t e = (BitsOf(values[i]) & kExpMask) >> 23;
    emax = std::max(emax, e);
  }
  q.window_high_bits = static_cast<std::uint8_t>(emax >> eb);
  const std::uint32_t base = static_cast<std::uint32_t>(q.window_high_bits) << eb;

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t u = BitsOf(values[i]);
    const std::uint32_t sign = u >> 31;
    const std::uint32_t e = (u & kExpMask) >> 23;
    std::uint32_t code = 0;
    if (e != 0) {  // zero and subnormals flush to the zero code
      std::uint32_t clamped = e;
      bool lossy = false;
      if (clamped < base) {
        clamped = base;
        lossy = true;
      }
      code = (sign << eb) | (clamped & mask);
      // A positive value on the aligned window bottom collides with the
      // reserved zero code and decodes to 0.
      if (code == 0) lossy = true;
      if (lossy) ++q.overflow_count;
    }
    PutBits(&q.payload, i * static_cast<std::size_t>(spec.total_bits), code,
            spec.total_bits);
  }
  return q;
}

std::vector<float> EofpDequantize(const QuantizedTensor& q) {
  q.spec.Validate();
  const std::size_t n = q.NumElements();
  if (q.payload.size() != (q.PayloadBits() + 7) / 8) {
    throw IoError("quantized payload has " + std::to_string(q.payload.size()) +
                  " bytes, expected " +
                  std::to_string((q.PayloadBits() + 7) / 8));
  }
  std::vector<float> out(n);

  if (q.spec.identity()) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = FloatOf(GetBits(q.payload, i * 32, 32));
    }
    return out;
  }

  if (q.spec.total_bits == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = GetBits(q.payload, i, 1) ? -q.sign_magnitude : q.sign_magnitude;
    }
    return out;
  }

  const int eb = q.spec.exponent_bits();
  const std::uint32_t base = static_cast<std::uint32_t>(q.window_high_bits) << eb;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t code =
        GetBits(q.payload, i * static_cast<std::size_t>(q.spec.total_bits),
                q.spec.total_bits);
    if (code == 0) {
      out[i] = 0.0f;
      continue;
    }
    const std::uint32_t sign = code >> eb;
    const std::uint32_t e = base + (code & ((1u << eb) - 1u));
    out[i] = FloatOf((sign << 31) | (e << 23));
  }
  return out;
}

std::vector<float> EofpRoundTrip(std::span<const float> values,
                                 const EofpSpec& spec) {
  return EofpDequantize(
      EofpQuantize(values, {values.size()}, spec));
}

namespace {
constexpr char kMagic[4] = {'E', 'O', 'F', 'P'};
constexpr std::uint32_t kFormatVersion = 1;
}  // namespace

void QuantizedTensor::Save(const std::string& path) const {
  BinWriter w(path);
  w.Bytes(kMagic, 4);
  w.U32(kFormatVersion);
  w.U8(static_cast<std::uint8_t>(spec.total_bits));
  w.U8(window_high_bits);
  w.F32(sign_magnitude);
  w.U64(overflow_count);
  w.U32(static_cast<std::uint32_t>(shape.size()));
  for (std::size_t d : shape) w.U64(d);
  w.U64(payload.size());
  w.Bytes(payload.data(), payload.size());
  w.Close();
}

QuantizedTensor QuantizedTensor::Load(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not an EOFP tensor file: " + path);
  }
  const std::uint32_t version = r.U32();
  if (version != kFormatVersion) {
    throw IoError("unsupported EOFP file version " + std::to_string(version));
  }
  QuantizedTensor q;
  q.spec.total_bits = r.U8();
  q.spec.Validate();
  q.window_high_bits = r.U8();
  q.sign_magnitude = r.F32();
  q.overflow_count = r.U64();
  const std::uint32_t ndim = r.U32();
  q.shape.resize(ndim);
  for (auto& d : q.shape) d = r.U64();
  const std::uint64_t nbytes = r.U64();
  if (nbytes != (q.PayloadBits() + 7) / 8) {
    throw IoError("corrupt payload length in " + path);
  }
  q.payload.resize(nbytes);
  r.Bytes(q.payload.data(), nbytes);
  return q;
}

CompressionReport CompressionRatio(const PipelineShape& from,
                                   const PipelineShape& to) {
  if (to.channels <= 0 || to.resolution <= 0 || to.bits <= 0 ||
      from.channels <= 0 || from.resolution <= 0 || from.bits <= 0) {
    throw InvalidInputError("compression ratio requires positive dimensions");
  }
  CompressionReport rep;
  rep.r_color = static_cast<double>(from.channels) / to.channels;
  rep.r_res = (static_cast<double>(from.resolution) * from.resolution) /
              (static_cast<double>(to.resolution) * to.resolution);
  rep.r_qua = static_cast<double>(from.bits) / to.bits;
  // Single exact-integer division so e.g. 307.2 comes out as the literal.
  const double num = static_cast<double>(from.channels) * from.resolution *
                     from.resolution * from.bits;
  const double den = static_cast<double>(to.channels) * to.resolution *
                     to.resolution * to.bits;
  rep.r_comp = num / den;
  return rep;
}

}  // namespace ilavse
