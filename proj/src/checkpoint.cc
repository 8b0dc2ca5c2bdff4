// src/checkpoint.cc

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

#include "ilavse/checkpoint.h"

#include <cstring>

#include "ilavse/binio.h"

namespace ilavse {

namespace {
constexpr char kMagic[4] = {'I', 'L', 'C', 'K'};
constexpr std::uint32_t kCkVersion = 1;
}  // namespace

const Tensor& Checkpoint::Get(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw IoError("checkpoint tensor not found: " + name);
}

const std::string& Checkpoint::GetMeta(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) throw IoError("checkpoint metadata not found: " + key);
  return it->second;
}

void Checkpoint::Save(const std::string& path) const {
  BinWriter w(path);
  w.Bytes(kMagic, 4);
  w.U32(kCkVersion);
  w.U64(meta.size());
  for (const auto& [k, v] : meta) {
    w.Str(k);
    w.Str(v);
  }
  w.U64(tensors.size());
  for (const auto& [name, t] : tensors) {
    w.Str(name);
    w.U32(static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) w.U64(d);
    for (double v : t.values) w.F64(v);
  }
  w.Close();
}

Checkpoint Checkpoint::Load(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not a checkpoint file: " + path);
  }
  if (r.U32() != kCkVersion) {
    throw IoError("unsupported checkpoint version: " + path);
  }
  Checkpoint ck;
  const std::uint64_t n_meta = r.U64();
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string k = r.Str();
    ck.meta[k] = r.Str();
  }
  const std::uint64_t n_tensors = r.U64();
  for (std::uint64_t i = 0; i < n_tensors; ++i) {
    std::string name = r.Str();
    const std::uint32_t rank = r.U32();
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = r.U64();
    Tensor t(shape);
    for (auto& v : t.values) v = r.F64();
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

}  // namespace ilavse
