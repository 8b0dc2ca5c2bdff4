// tests/test_eofp.cc

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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include <doctest.h>

#include "ilavse/rng.h"

using namespace ilavse;

namespace {

// Independent oracle: zero the mantissa field with raw bit operations,
// keeping sign and full 8-bit exponent. Valid wherever no exponent
// windowing is in play.
float BitOpsMantissaZero(float x) {
  std::uint32_t u;
  std::memcpy(&u, &x, 4);
  u &= 0xFF800000u;
  float y;
  std::memcpy(&y, &u, 4);
  return y;
}

std::uint32_t BitsOf(float x) {
  std::uint32_t u;
  std::memcpy(&u, &x, 4);
  return u;
}

// Random normal (non-subnormal) finite floats with biased exponent
// in [lo, hi].
std::vector<float> RandomNormalFloats(std::size_t n, Rng* rng,
                                      std::uint32_t exp_lo,
                                      std::uint32_t exp_hi) {
  std::vector<float> out(n);
  for (auto& v : out) {
    const std::uint32_t sign = static_cast<std::uint32_t>(rng->UniformInt(2));
    const std::uint32_t e =
        exp_lo + static_cast<std::uint32_t>(rng->UniformInt(exp_hi - exp_lo + 1));
    const std::uint32_t man =
        static_cast<std::uint32_t>(rng->NextU64() & 0x7fffffu);
    std::uint32_t u = (sign << 31) | (e << 23) | man;
    std::memcpy(&v, &u, 4);
  }
  return out;
}

}  // namespace

TEST_CASE("decompose basic fields") {
  auto f = Decompose(1.0f);
  CHECK(f.sign == 0);
  CHECK(f.biased_exponent == 127);
  CHECK(f.mantissa == 0);
  CHECK(f.Significand() == 1.0);

  auto g = Decompose(-0.5f);
  CHECK(g.sign == 1);
  CHECK(g.biased_exponent == 126);
  CHECK(g.mantissa == 0);
  CHECK(g.Significand() == 1.0);
}

TEST_CASE("decompose rejects NaN and Inf") {
  CHECK_THROWS_AS(Decompose(std::nanf("")), InvalidInputError);
  CHECK_THROWS_AS(Decompose(INFINITY), InvalidInputError);
}

TEST_CASE("0.20314788 decodes via sign/exponent/significand arithmetic") {
  const float x = 0.20314788f;
  auto f = Decompose(x);
  CHECK(f.sign == 0);
  CHECK(f.biased_exponent == 124);
  CHECK(f.mantissa == 5244415);
  const double value =
      (f.sign ? -1.0 : 1.0) *
      std::ldexp(f.Significand(),
                 static_cast<int>(f.biased_exponent) - Float32Fields::kBias);
  CHECK(value == static_cast<double>(x));
  CHECK(BitsOf(Recompose(f)) == BitsOf(x));
}

TEST_CASE("recompose is the exact inverse of decompose") {
  // Exhaustive over exponents x sampled mantissa grid, both signs.
  for (std::uint32_t e = 0; e <= 254; ++e) {
    for (std::uint32_t man :
         {0u, 1u, 0x400000u, 0x7fffffu, 0x2aaaaau, 0x155555u}) {
      for (std::uint32_t sign : {0u, 1u}) {
        const std::uint32_t u = (sign << 31) | (e << 23) | man;
        float x;
        std::memcpy(&x, &u, 4);
        if (!std::isfinite(x)) continue;
        CHECK(BitsOf(Recompose(Decompose(x))) == u);
      }
    }
  }
}

TEST_CASE("eofp quantize: paper example at 5 bits") {
  const float x = 0.20314788f;
  auto deq = EofpRoundTrip(std::vector<float>{x}, EofpSpec{5});
  CHECK(deq[0] == 0.125f);
  CHECK(deq[0] == BitOpsMantissaZero(x));
}

TEST_CASE("eofp quantize: exact powers of two survive") {
  for (int bits : {3, 5, 7, 9, 32}) {
    auto deq = EofpRoundTrip(std::vector<float>{0.25f}, EofpSpec{bits});
    CHECK(deq[0] == 0.25f);
  }
}

TEST_CASE("eofp quantize: zero passthrough") {
  for (int bits : {3, 5, 7, 9, 32}) {
    auto deq = EofpRoundTrip(std::vector<float>{0.0f, 1.0f}, EofpSpec{bits});
    CHECK(deq[0] == 0.0f);
  }
}

TEST_CASE("eofp width 32 is identity") {
  Rng rng(7);
  auto vals = RandomNormalFloats(1000, &rng, 1, 254);
  auto deq = EofpRoundTrip(vals, EofpSpec{32});
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(BitsOf(deq[i]) == BitsOf(vals[i]));
  }
}

TEST_CASE("eofp mantissa-removal bounds at width 9 vs bit-ops oracle") {
  Rng rng(11);
  auto vals = RandomNormalFloats(100000, &rng, 1, 254);
  auto deq = EofpRoundTrip(vals, EofpSpec{9});
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(deq[i] == BitOpsMantissaZero(vals[i]));
    const float a = std::fabs(vals[i]);
    const float d = std::fabs(deq[i]);
    // d <= |v| < 2 d for positive magnitudes (mantissa truncation).
    CHECK(d <= a);
    CHECK(a < 2.0f * d);
  }
}

TEST_CASE("eofp quantization is idempotent bit-exactly") {
  Rng rng(13);
  for (int bits : {1, 3, 5, 7, 9, 32}) {
    auto vals = RandomNormalFloats(4096, &rng, 100, 140);
    // Sprinkle exact zeros.
    for (std::size_t i = 0; i < vals.size(); i += 17) vals[i] = 0.0f;
    EofpSpec spec{bits};
    auto q1 = EofpQuantize(vals, {vals.size()}, spec);
    auto deq1 = EofpDequantize(q1);
    auto q2 = EofpQuantize(deq1, {vals.size()}, spec);
    CHECK(q1.payload == q2.payload);
    CHECK(q1.window_high_bits == q2.window_high_bits);
    if (bits == 1) CHECK(q1.sign_magnitude == q2.sign_magnitude);
    auto deq2 = EofpDequantize(q2);
    CHECK(std::memcmp(deq1.data(), deq2.data(), deq1.size() * 4) == 0);
  }
}

TEST_CASE("eofp preserves sign and never raises in-window magnitudes") {
  Rng rng(17);
  for (int bits : {3, 5, 7, 9}) {
    const int eb = bits - 1;
    // Keep all exponents inside one aligned window so no clamps happen.
    const std::uint32_t base = (130u >> eb) << eb;
    auto vals = RandomNormalFloats(4096, &rng, std::max(1u, base + 1),
                                   std::min(254u, base + (1u << eb) - 1));
    auto q = EofpQuantize(vals, {vals.size()}, EofpSpec{bits});
    CHECK(q.overflow_count == 0);
    auto deq = EofpDequantize(q);
    float lo = 0, hi = 0;
    float dlo = 0, dhi = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      CHECK(std::signbit(deq[i]) == std::signbit(vals[i]));
      CHECK(std::fabs(deq[i]) <= std::fabs(vals[i]));
      lo = std::min(lo, vals[i]);
      hi = std::max(hi, vals[i]);
      dlo = std::min(dlo, deq[i]);
      dhi = std::max(dhi, deq[i]);
    }
    // Range preservation: the quantized support sits inside the original.
    CHECK(dlo >= lo);
    CHECK(dhi <= hi);
  }
}

TEST_CASE("eofp out-of-window exponents clamp and are counted") {
  // Window at 3 bits (2 exponent bits) around emax=130: base 128.
  // 0.5 (exp 126) is below the window.
  std::vector<float> vals = {8.0f, -8.0f, 0.5f, -0.5f};
  auto q = EofpQuantize(vals, {4}, EofpSpec{3});
  CHECK(q.overflow_count == 2);
  auto deq = EofpDequantize(q);
  CHECK(deq[0] == 8.0f);
  CHECK(deq[1] == -8.0f);
  // Positive below-window value collides with the reserved zero code.
  CHECK(deq[2] == 0.0f);
  // Negative below-window value clamps to the window bottom edge 2^1.
  CHECK(deq[3] == -2.0f);
}

TEST_CASE("eofp 1-bit mode: signs exact, magnitude is the tensor constant") {
  std::vector<float> vals = {0.75f, -0.1f, 0.3f, -2.0f, 0.5f};
  auto q = EofpQuantize(vals, {5}, EofpSpec{1});
  auto deq = EofpDequantize(q);
  CHECK(q.sign_magnitude == 0.5f);  // median of {0.75,0.1,0.3,2.0,0.5}
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(std::signbit(deq[i]) == std::signbit(vals[i]));
    CHECK(std::fabs(deq[i]) == q.sign_magnitude);
  }
}

TEST_CASE("eofp rejects non-finite input and bad widths") {
  std::vector<float> bad = {1.0f, INFINITY};
  CHECK_THROWS_AS(EofpQuantize(bad, {2}, EofpSpec{5}), InvalidInputError);
  CHECK_THROWS_AS(EofpSpec{4}.Validate(), InvalidInputError);
  CHECK_THROWS_AS(EofpQuantize(std::vector<float>{1.0f}, {2}, EofpSpec{5}),
                  ShapeError);
}

TEST_CASE("quantized tensor file round trip is bit-exact") {
  Rng rng(23);
  auto vals = RandomNormalFloats(777, &rng, 110, 135);
  auto q = EofpQuantize(vals, {7, 111}, EofpSpec{5});
  const auto path =
      (std::filesystem::temp_directory_path() / "eofp_rt.bin").string();
  q.Save(path);
  auto q2 = QuantizedTensor::Load(path);
  CHECK(q2.spec.total_bits == q.spec.total_bits);
  CHECK(q2.shape == q.shape);
  CHECK(q2.payload == q.payload);
  CHECK(q2.window_high_bits == q.window_high_bits);
  CHECK(q2.overflow_count == q.overflow_count);
  std::filesystem::remove(path);

  // Corrupt header length must be rejected.
  auto qbad = q;
  qbad.payload.pop_back();
  CHECK_THROWS_AS(EofpDequantize(qbad), IoError);
}

TEST_CASE("compression ratios: paper configurations") {
  auto full = CompressionRatio({3, 64, 32}, {1, 16, 5});
  CHECK(full.r_color == 3.0);
  CHECK(full.r_res == 16.0);
  CHECK(full.r_qua == doctest::Approx(6.4).epsilon(1e-15));
  CHECK(full.r_comp == 307.2);

  auto no_bits = CompressionRatio({3, 64, 32}, {1, 16, 32});
  CHECK(no_bits.r_comp == 48.0);

  auto ident = CompressionRatio({3, 64, 32}, {3, 64, 32});
  CHECK(ident.r_comp == 1.0);

  CHECK_THROWS_AS(CompressionRatio({3, 64, 32}, {0, 16, 5}),
                  InvalidInputError);
}
