// ilavse/binio.h

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

#ifndef ILAVSE_BINIO_H_
#define ILAVSE_BINIO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ilavse/common.h"

namespace ilavse {

// Little-endian binary stream helpers. All on-disk formats in this project
// (feature dumps, quantized tensors, checkpoints) are declared little-endian;
// these helpers are byte-order-explicit so the files are bit-exact across
// hosts.

class BinWriter {
 public:
  explicit BinWriter(const std::string& path)
      : os_(path, std::ios::binary), path_(path) {
    if (!os_) throw IoError("cannot open for writing: " + path);
  }

  void Bytes(const void* p, std::size_t n) {
    os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void U8(std::uint8_t v) { Bytes(&v, 1); }
  void U32(std::uint32_t v) { WriteLe(v); }
  void U64(std::uint64_t v) { WriteLe(v); }
  void I64(std::int64_t v) { WriteLe(static_cast<std::uint64_t>(v)); }
  void F32(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    WriteLe(u);
  }
  void F64(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    WriteLe(u);
  }
  void Str(const std::string& s) {
    U64(s.size());
    Bytes(s.data(), s.size());
  }
  void F64Vec(const std::vector<double>& v) {
    U64(v.size());
    for (double x : v) F64(x);
  }
  void Close() {
    os_.close();
    if (!os_) throw IoError("write failed: " + path_);
  }

 private:
  template <typename T>
  void WriteLe(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    }
    Bytes(buf, sizeof(T));
  }

  std::ofstream os_;
  std::string path_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& path)
      : is_(path, std::ios::binary), path_(path) {
    if (!is_) throw IoError("cannot open for reading: " + path);
  }

  void Bytes(void* p, std::size_t n) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) {
      throw IoError("truncated file: " + path_);
    }
  }
  std::uint8_t U8() {
    std::uint8_t v;
    Bytes(&v, 1);
    return v;
  }
  std::uint32_t U32() { return ReadLe<std::uint32_t>(); }
  std::uint64_t U64() { return ReadLe<std::uint64_t>(); }
  std::int64_t I64() { return static_cast<std::int64_t>(ReadLe<std::uint64_t>()); }
  float F32() {
    std::uint32_t u = ReadLe<std::uint32_t>();
    float v;
    std::memcpy(&v, &u, 4);
    return v;
  }
  double F64() {
    std::uint64_t u = ReadLe<std::uint64_t>();
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
  std::string Str() {
    std::uint64_t n = U64();
    std::string s(n, '\0');
    Bytes(s.data(), n);
    return s;
  }
  std::vector<double> F64Vec() {
    std::uint64_t n = U64();
    std::vector<double> v(n);
    for (auto& x : v) x = F64();
    return v;
  }
  bool AtEof() {
    is_.peek();
    return is_.eof();
  }
  const std::string& path() const { return path_; }

 private:
  template <typename T>
  T ReadLe() {
    unsigned char buf[sizeof(T)];
    Bytes(buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(buf[i]) << (8 * i);
    }
    return v;
  }

  std::ifstream is_;
  std::string path_;
};

}  // namespace ilavse

#endif  // ILAVSE_BINIO_H_
