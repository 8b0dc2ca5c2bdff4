// ilavse/fft.h

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

#ifndef ILAVSE_FFT_H_
#define ILAVSE_FFT_H_

#include <complex>
#include <vector>

namespace ilavse {

// In-place iterative radix-2 FFT. data.size() must be a power of two.
void Fft(std::vector<std::complex<double>>* data, bool inverse);

// Real-input FFT of length n (power of two); returns n/2 + 1 bins.
std::vector<std::complex<double>> RealFft(const std::vector<double>& x);

// Inverse of RealFft: n/2 + 1 bins -> real signal of length n.
std::vector<double> RealIfft(const std::vector<std::complex<double>>& bins,
                             std::size_t n);

}  // namespace ilavse

#endif  // ILAVSE_FFT_H_
