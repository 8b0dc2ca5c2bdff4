// src/wav.cc

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

#include "ilavse/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "ilavse/binio.h"

namespace ilavse {

void Waveform::Validate() const {
  if (sample_rate <= 0) {
    throw InvalidInputError("waveform sample rate must be positive");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw InvalidInputError("waveform contains a non-finite sample");
    }
  }
}

namespace {

// Zeroth-order modified Bessel function, power series.
double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double y = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Kaiser-windowed lowpass prototype used by the resampler: numtaps odd,
// cutoff relative to Nyquist, normalized to unit DC gain.
std::vector<double> KaiserLowpass(int numtaps, double cutoff, double beta) {
  std::vector<double> h(numtaps);
  const double alpha = 0.5 * (numtaps - 1);
  const double denom = BesselI0(beta);
  double sum = 0.0;
  for (int i = 0; i < numtaps; ++i) {
    const double m = i - alpha;
    const double t = (i - alpha) / alpha;
    const double w = BesselI0(beta * std::sqrt(std::max(0.0, 1.0 - t * t))) / denom;
    h[i] = cutoff * Sinc(cutoff * m) * w;
    sum += h[i];
  }
  for (auto& v : h) v /= sum;
  return h;
}

}  // namespace

std::vector<double> ResamplePoly(const std::vector<double>& x, int up,
                                 int down) {
  if (up <= 0 || down <= 0) {
    throw InvalidInputError("resample factors must be positive");
  }
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return x;
  if (x.empty()) return {};

  const int max_rate = std::max(up, down);
  const int half_len = 10 * max_rate;
  const std::vector<double> h =
      KaiserLowpass(2 * half_len + 1, 1.0 / max_rate, 5.0);

  const std::int64_t n_in = static_cast<std::int64_t>(x.size());
  const std::int64_t n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);

  // y[t] = up * sum_j x[j] * h[t*down + half_len - j*up]
  for (std::int64_t t = 0; t < n_out; ++t) {
    const std::int64_t center = t * down + half_len;
    // Valid j satisfy 0 <= center - j*up <= 2*half_len.
    std::int64_t j_lo = (center - 2 * half_len + up - 1) / up;
    if (center - 2 * half_len <= 0) j_lo = 0;
    std::int64_t j_hi = center / up;
    j_lo = std::max<std::int64_t>(j_lo, 0);
    j_hi = std::min<std::int64_t>(j_hi, n_in - 1);
    double acc = 0.0;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      acc += x[static_cast<std::size_t>(j)] *
             h[static_cast<std::size_t>(center - j * up)];
    }
    y[static_cast<std::size_t>(t)] = up * acc;
  }
  return y;
}

namespace {

std::uint32_t ReadU32Le(std::ifstream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t ReadU16Le(std::ifstream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

Waveform ReadWav(const std::string& path, int target_rate) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open wav: " + path);

  char tag[4];
  is.read(tag, 4);
  std::uint32_t riff_size = ReadU32Le(is);
  (void)riff_size;
  char wave[4];
  is.read(wave, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<std::int16_t> pcm;
  bool have_fmt = false, have_data = false;

  while (is && !(have_fmt && have_data)) {
    char chunk[4];
    is.read(chunk, 4);
    if (!is) break;
    const std::uint32_t size = ReadU32Le(is);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      format = ReadU16Le(is);
      channels = ReadU16Le(is);
      rate = ReadU32Le(is);
      ReadU32Le(is);  // byte rate
      ReadU16Le(is);  // block align
      bits = ReadU16Le(is);
      if (size > 16) is.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm.resize(size / 2);
      is.read(reinterpret_cast<char*>(pcm.data()),
              static_cast<std::streamsize>(size));
      have_data = true;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || !have_data) throw IoError("missing fmt/data chunk: " + path);
  if (format != 1 || bits != 16) {
    throw IoError("only 16-bit PCM wav is supported: " + path);
  }
  if (channels != 1) {
    throw IoError("only mono wav is supported (got " +
                  std::to_string(channels) + " channels): " + path);
  }

  Waveform wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.samples.resize(pcm.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) {
    std::int16_t v = pcm[i];
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    v = static_cast<std::int16_t>(((v & 0xff) << 8) | ((v >> 8) & 0xff));
#endif
    wav.samples[i] = static_cast<double>(v) / 32768.0;
  }

  if (wav.sample_rate != target_rate) {
    wav.samples = ResamplePoly(wav.samples, target_rate, wav.sample_rate);
    wav.sample_rate = target_rate;
  }
  return wav;
}

void WriteWav(const std::string& path, const Waveform& wave) {
  wave.Validate();
  BinWriter w(path);
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(wave.samples.size() * 2);
  w.Bytes("RIFF", 4);
  w.U32(36 + data_bytes);
  w.Bytes("WAVE", 4);
  w.Bytes("fmt ", 4);
  w.U32(16);
  w.Bytes("\x01\x00\x01\x00", 4);  // PCM, mono
  w.U32(static_cast<std::uint32_t>(wave.sample_rate));
  w.U32(static_cast<std::uint32_t>(wave.sample_rate * 2));
  w.Bytes("\x02\x00\x10\x00", 4);  // block align 2, 16 bits
  w.Bytes("data", 4);
  w.U32(data_bytes);
  for (double s : wave.samples) {
    const long v = std::clamp<long>(std::lrint(s * 32768.0), -32768, 32767);
    w.U8(static_cast<std::uint8_t>(v & 0xff));
    w.U8(static_cast<std::uint8_t>((v >> 8) & 0xff));
  }
  w.Close();
}

}  // namespace ilavse
