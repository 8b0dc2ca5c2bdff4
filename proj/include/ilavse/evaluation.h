// ilavse/evaluation.h

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

#ifndef ILAVSE_EVALUATION_H_
#define ILAVSE_EVALUATION_H_

#include <map>
#include <string>
#include <vector>

#include "ilavse/stoi.h"
#include "ilavse/wav.h"

namespace ilavse {

// 10*log10(||clean||^2 / ||clean - estimate||^2); +inf for a zero residual.
double SnrDb(const Waveform& clean, const Waveform& estimate);

struct ScoreItem {
  std::string item_id;
  std::string noise;
  double snr_db = 0.0;       // mixing condition
  double stoi = 0.0;         // enhanced (or scored signal)
  double stoi_noisy = 0.0;   // unprocessed reference point
  double snr_improvement = 0.0;
};

struct AggregateRow {
  std::string noise;  // "*" when grouped over all noises
  double snr_db = 0.0;
  std::size_t count = 0;
  double mean_stoi = 0.0;
  double mean_stoi_noisy = 0.0;
  double mean_snr_improvement = 0.0;
};

struct ScoreReport {
  std::vector<ScoreItem> items;
  std::vector<AggregateRow> by_noise_snr;  // ordered by (noise, snr)
  std::vector<AggregateRow> by_snr;        // ordered by snr

  double MeanStoi() const;
  double MeanStoiNoisy() const;
};

// Grouped arithmetic means over (noise, snr) and over snr alone.
ScoreReport Aggregate(std::vector<ScoreItem> items);

// CSV emission: per-item table and the aggregate table, key-ordered.
// Columns: item id, noise, snr_db, stoi, stoi_noisy, snr_improvement.
void WriteReportCsv(const std::string& path, const ScoreReport& report);
void WriteAggregateCsv(const std::string& path, const ScoreReport& report);

}  // namespace ilavse

#endif  // ILAVSE_EVALUATION_H_
