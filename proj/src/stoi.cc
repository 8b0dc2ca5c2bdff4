// src/stoi.cc

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

#include "ilavse/stoi.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ilavse/fft.h"

namespace ilavse {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric Hann of length n+2 with the zero endpoints dropped.
std::vector<double> InteriorHann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * (i + 1) / static_cast<double>(n + 1));
  }
  return w;
}

// Drops frames whose clean-signal energy is more than dyn_range below the
// loudest frame; survivors are overlap-added back into a pair of shorter
// signals.
void RemoveSilentFrames(std::vector<double>* x, std::vector<double>* y,
                        const StoiConfig& config) {
  const std::size_t flen = static_cast<std::size_t>(config.frame_len);
  const std::size_t hop = flen / 2;
  if (x->size() < flen) {
    x->clear();
    y->clear();
    return;
  }
  const auto w = InteriorHann(config.frame_len);

  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + flen <= x->size(); i += hop) starts.push_back(i);

  std::vector<double> energy(starts.size());
  double max_energy = -1e300;
  for (std::size_t f = 0; f < starts.size(); ++f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < flen; ++i) {
      const double v = w[i] * (*x)[starts[f] + i];
      acc += v * v;
    }
    energy[f] = 20.0 * std::log10(std::sqrt(acc) + kEps);
    max_energy = std::max(max_energy, energy[f]);
  }

  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < starts.size(); ++f) {
    if (max_energy - config.dyn_range_db - energy[f] < 0.0) keep.push_back(f);
  }
  if (keep.empty()) {
    x->clear();
    y->clear();
    return;
  }

  const std::size_t out_len = (keep.size() - 1) * hop + flen;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t src = starts[keep[k]];
    const std::size_t dst = k * hop;
    for (std::size_t i = 0; i < flen; ++i) {
      xs[dst + i] += w[i] * (*x)[src + i];
      ys[dst + i] += w[i] * (*y)[src + i];
    }
  }
  *x = std::move(xs);
  *y = std::move(ys);
}

// Frame magnitudes^2 of the rfft with a Hann window; frames x bins.
std::vector<std::vector<double>> PowerSpectra(const std::vector<double>& x,
                                              const StoiConfig& config) {
  const std::size_t flen = static_cast<std::size_t>(config.frame_len);
  const std::size_t hop = flen / 2;
  const std::size_t nfft = static_cast<std::size_t>(config.fft_size);
  const auto w = InteriorHann(config.frame_len);

  std::vector<std::vector<double>> out;
  std::vector<double> frame(nfft, 0.0);
  for (std::size_t i = 0; i + flen <= x.size(); i += hop) {
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t k = 0; k < flen; ++k) frame[k] = w[k] * x[i + k];
    const auto bins = RealFft(frame);
    std::vector<double> p(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) p[k] = std::norm(bins[k]);
    out.push_back(std::move(p));
  }
  return out;
}

// One-third-octave band edges snapped to the nearest FFT bin.
std::vector<std::pair<std::size_t, std::size_t>> ThirdOctaveBands(
    const StoiConfig& config) {
  const std::size_t bins = static_cast<std::size_t>(config.fft_size) / 2 + 1;
  std::vector<double> f(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    f[k] = static_cast<double>(k) * config.analysis_rate /
           static_cast<double>(config.fft_size);
  }
  auto nearest = [&f](double target) {
    std::size_t best = 0;
    double best_d = std::fabs(f[0] - target);
    for (std::size_t k = 1; k < f.size(); ++k) {
      const double d = std::fabs(f[k] - target);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (int k = 0; k < config.num_bands; ++k) {
    const double lo = config.min_freq * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi = config.min_freq * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    bands.emplace_back(nearest(lo), nearest(hi));
  }
  return bands;
}

}  // namespace

double Stoi(const Waveform& clean, const Waveform& processed,
            const StoiConfig& config) {
  if (clean.sample_rate != processed.sample_rate) {
    throw InvalidInputError("stoi requires matching sample rates");
  }
  std::vector<double> x = clean.samples;
  std::vector<double> y = processed.samples;
  const std::size_t common = std::min(x.size(), y.size());
  x.resize(common);
  y.resize(common);

  if (clean.sample_rate != config.analysis_rate) {
    x = ResamplePoly(x, config.analysis_rate, clean.sample_rate);
    y = ResamplePoly(y, config.analysis_rate, clean.sample_rate);
  }

  RemoveSilentFrames(&x, &y, config);

  const auto px = PowerSpectra(x, config);
  const auto py = PowerSpectra(y, config);
  const std::size_t frames = px.size();
  const std::size_t seg = static_cast<std::size_t>(config.segment_frames);
  if (frames < seg) {
    throw InvalidInputError(
        "stoi needs at least " + std::to_string(config.segment_frames) +
        " active frames (384 ms of speech), got " + std::to_string(frames));
  }

  const auto bands = ThirdOctaveBands(config);
  const std::size_t nb = bands.size();

  // Band magnitudes: bands x frames.
  std::vector<std::vector<double>> xb(nb, std::vector<double>(frames));
  std::vector<std::vector<double>> yb(nb, std::vector<double>(frames));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < nb; ++b) {
      double ax = 0.0, ay = 0.0;
      for (std::size_t k = bands[b].first; k < bands[b].second; ++k) {
        ax += px[t][k];
        ay += py[t][k];
      }
      xb[b][t] = std::sqrt(ax);
      yb[b][t] = std::sqrt(ay);
    }
  }

  const double clip = std::pow(10.0, -config.beta_db / 20.0);
  double d_sum = 0.0;
  std::size_t segments = 0;
  std::vector<double> xs(seg), ys(seg);
  for (std::size_t m = seg; m <= frames; ++m) {
    for (std::size_t b = 0; b < nb; ++b) {
      double nx = 0.0, ny = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        xs[t] = xb[b][m - seg + t];
        ys[t] = yb[b][m - seg + t];
        nx += xs[t] * xs[t];
        ny += ys[t] * ys[t];
      }
      const double alpha = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0.0, my = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        ys[t] = std::min(alpha * ys[t], xs[t] * (1.0 + clip));
        mx += xs[t];
        my += ys[t];
      }
      mx /= static_cast<double>(seg);
      my /= static_cast<double>(seg);
      double sx = 0.0, sy = 0.0, dot = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        const double a = xs[t] - mx;
        const double c = ys[t] - my;
        sx += a * a;
        sy += c * c;
        dot += a * c;
      }
      d_sum += dot / ((std::sqrt(sx) + kEps) * (std::sqrt(sy) + kEps));
    }
    ++segments;
  }
  return d_sum / static_cast<double>(segments * nb);
}

}  // namespace ilavse
