// src/fft.cc

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

#include "ilavse/fft.h"

#include <cmath>

#include "ilavse/common.h"

namespace ilavse {

static bool IsPowerOfTwo(std::size_t n) { return n && !(n & (n - 1)); }

void Fft(std::vector<std::complex<double>>* data, bool inverse) {
  auto& a = *data;
  const std::size_t n = a.size();
  if (!IsPowerOfTwo(n)) {
    throw InvalidInputError("fft size must be a power of two, got " +
                            std::to_string(n));
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& c : a) c *= inv;
  }
}

std::vector<std::complex<double>> RealFft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {x[i], 0.0};
  Fft(&buf, /*inverse=*/false);
  std::vector<std::complex<double>> bins(n / 2 + 1);
  for (std::size_t i = 0; i <= n / 2; ++i) bins[i] = buf[i];
  return bins;
}

std::vector<double> RealIfft(const std::vector<std::complex<double>>& bins,
                             std::size_t n) {
  if (bins.size() != n / 2 + 1) {
    throw ShapeError("real ifft expects " + std::to_string(n / 2 + 1) +
                     " bins for length " + std::to_string(n) + ", got " +
                     std::to_string(bins.size()));
  }
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i <= n / 2; ++i) buf[i] = bins[i];
  for (std::size_t i = n / 2 + 1; i < n; ++i) buf[i] = std::conj(bins[n - i]);
  Fft(&buf, /*inverse=*/true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace ilavse
