// ilavse/checkpoint.h

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

#ifndef ILAVSE_CHECKPOINT_H_
#define ILAVSE_CHECKPOINT_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilavse/tensor.h"

namespace ilavse {

// Versioned little-endian checkpoint: string metadata (model config preamble,
// rng state, epoch counters) plus named float64 tensors in a registry.
// Save/Load round trips are bit-exact.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Tensor>> tensors;

  void Add(const std::string& name, const Tensor& t) {
    tensors.emplace_back(name, t);
  }
  const Tensor& Get(const std::string& name) const;
  bool HasMeta(const std::string& key) const { return meta.count(key) > 0; }
  const std::string& GetMeta(const std::string& key) const;

  void Save(const std::string& path) const;
  static Checkpoint Load(const std::string& path);
};

}  // namespace ilavse

#endif  // ILAVSE_CHECKPOINT_H_
