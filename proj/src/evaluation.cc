// src/evaluation.cc

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

#include "ilavse/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ilavse {

double SnrDb(const Waveform& clean, const Waveform& estimate) {
  if (clean.samples.size() != estimate.samples.size()) {
    throw ShapeError("snr: clean " + std::to_string(clean.samples.size()) +
                     " vs estimate " + std::to_string(estimate.samples.size()));
  }
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    sig += clean.samples[i] * clean.samples[i];
    const double d = clean.samples[i] - estimate.samples[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(sig / err);
}

double ScoreReport::MeanStoi() const {
  double acc = 0.0;
  for (const auto& it : items) acc += it.stoi;
  return items.empty() ? 0.0 : acc / static_cast<double>(items.size());
}

double ScoreReport::MeanStoiNoisy() const {
  double acc = 0.0;
  for (const auto& it : items) acc += it.stoi_noisy;
  return items.empty() ? 0.0 : acc / static_cast<double>(items.size());
}

ScoreReport Aggregate(std::vector<ScoreItem> items) {
  if (items.empty()) throw InvalidInputError("nothing to aggregate");
  ScoreReport report;
  report.items = std::move(items);

  std::map<std::pair<std::string, double>, AggregateRow> by_pair;
  std::map<double, AggregateRow> by_snr;
  for (const auto& it : report.items) {
    auto& row = by_pair[{it.noise, it.snr_db}];
    row.noise = it.noise;
    row.snr_db = it.snr_db;
    row.count += 1;
    row.mean_stoi += it.stoi;
    row.mean_stoi_noisy += it.stoi_noisy;
    row.mean_snr_improvement += it.snr_improvement;

    auto& srow = by_snr[it.snr_db];
    srow.noise = "*";
    srow.snr_db = it.snr_db;
    srow.count += 1;
    srow.mean_stoi += it.stoi;
    srow.mean_stoi_noisy += it.stoi_noisy;
    srow.mean_snr_improvement += it.snr_improvement;
  }
  auto finish = [](AggregateRow row) {
    const double n = static_cast<double>(row.count);
    row.mean_stoi /= n;
    row.mean_stoi_noisy /= n;
    row.mean_snr_improvement /= n;
    return row;
  };
  for (const auto& [key, row] : by_pair) {
    report.by_noise_snr.push_back(finish(row));
  }
  for (const auto& [key, row] : by_snr) {
    report.by_snr.push_back(finish(row));
  }
  return report;
}

void WriteReportCsv(const std::string& path, const ScoreReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write report: " + path);
  os << "item_id,noise,snr_db,stoi,stoi_noisy,snr_improvement\n";
  for (const auto& it : report.items) {
    os << it.item_id << "," << it.noise << "," << it.snr_db << "," << it.stoi
       << "," << it.stoi_noisy << "," << it.snr_improvement << "\n";
  }
  if (!os) throw IoError("report write failed: " + path);
}

void WriteAggregateCsv(const std::string& path, const ScoreReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write aggregate: " + path);
  os << "noise,snr_db,count,mean_stoi,mean_stoi_noisy,mean_snr_improvement\n";
  for (const auto& row : report.by_noise_snr) {
    os << row.noise << "," << row.snr_db << "," << row.count << ","
       << row.mean_stoi << "," << row.mean_stoi_noisy << ","
       << row.mean_snr_improvement << "\n";
  }
  for (const auto& row : report.by_snr) {
    os << row.noise << "," << row.snr_db << "," << row.count << ","
       << row.mean_stoi << "," << row.mean_stoi_noisy << ","
       << row.mean_snr_improvement << "\n";
  }
  if (!os) throw IoError("aggregate write failed: " + path);
}

}  // namespace ilavse
