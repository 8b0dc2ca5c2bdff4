// src/image.cc

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

#include "ilavse/image.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

namespace ilavse {

void LipFrame::Validate() const {
  if (height <= 0 || width <= 0 || (channels != 1 && channels != 3)) {
    throw InvalidInputError("lip frame must be HxWx{1,3} with positive dims");
  }
  if (pixels.size() != NumPixels()) {
    throw ShapeError("pixel buffer " + std::to_string(pixels.size()) +
                     " != " + std::to_string(NumPixels()));
  }
  for (float p : pixels) {
    if (!(p >= 0.0f && p <= 1.0f)) {
      throw InvalidInputError("pixel outside [0,1]");
    }
  }
}

namespace {

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

LipFrame ReadPngFile(const std::string& path) {
  PngReadCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError("cannot open image: " + path);

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png info init failed");
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError("corrupt png: " + path);
  }
  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  png_byte color = png_get_color_type(ctx.png, ctx.info);
  png_byte depth = png_get_bit_depth(ctx.png, ctx.info);

  if (depth == 16) png_set_strip_16(ctx.png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3) {
    throw IoError("unsupported png channel count " + std::to_string(channels) +
                  ": " + path);
  }

  std::vector<png_byte> row(static_cast<std::size_t>(w) * channels);
  LipFrame frame;
  frame.height = static_cast<int>(h);
  frame.width = static_cast<int>(w);
  frame.channels = channels;
  frame.pixels.resize(frame.NumPixels());
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (std::size_t i = 0; i < row.size(); ++i) {
      frame.pixels[static_cast<std::size_t>(y) * row.size() + i] =
          static_cast<float>(row[i]) / 255.0f;
    }
  }
  png_read_end(ctx.png, nullptr);
  return frame;
}

LipFrame ReadPgmFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open image: " + path);
  std::string magic;
  is >> magic;
  if (magic != "P5") throw IoError("unsupported pgm magic '" + magic + "': " + path);
  int w = 0, h = 0, maxval = 0;
  // Skip whitespace and '#' comments between header tokens.
  auto next_int = [&is, &path]() {
    for (;;) {
      int c = is.peek();
      if (c == '#') {
        std::string line;
        std::getline(is, line);
      } else if (std::isspace(c)) {
        is.get();
      } else {
        break;
      }
    }
    int v = -1;
    is >> v;
    if (!is || v < 0) throw IoError("bad pgm header: " + path);
    return v;
  };
  w = next_int();
  h = next_int();
  maxval = next_int();
  if (maxval != 255) throw IoError("only 8-bit pgm supported: " + path);
  is.get();  // single whitespace after header

  LipFrame frame;
  frame.height = h;
  frame.width = w;
  frame.channels = 1;
  frame.pixels.resize(frame.NumPixels());
  std::vector<unsigned char> raw(frame.NumPixels());
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(is.gcount()) != raw.size()) {
    throw IoError("truncated pgm: " + path);
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    frame.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
  }
  return frame;
}

}  // namespace

LipFrame ReadImage(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open image: " + path);
  unsigned char sig[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(sig), 2);
  probe.close();
  if (sig[0] == 0x89 && sig[1] == 'P') return ReadPngFile(path);
  if (sig[0] == 'P' && sig[1] == '5') return ReadPgmFile(path);
  throw IoError("unrecognized image format: " + path);
}

namespace {

struct PngWriteCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriteCloser() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

unsigned char PixelCode(float v) {
  return static_cast<unsigned char>(
      std::lrint(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

void WritePng(const std::string& path, const LipFrame& frame) {
  frame.Validate();
  PngWriteCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw IoError("cannot open for writing: " + path);
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png info init failed");
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError("png write failed: " + path);
  }
  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(frame.width),
               static_cast<png_uint_32>(frame.height), 8,
               frame.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::vector<png_byte> row(static_cast<std::size_t>(frame.width) * frame.channels);
  for (int y = 0; y < frame.height; ++y) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i] = PixelCode(
          frame.pixels[static_cast<std::size_t>(y) * row.size() + i]);
    }
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

void WritePgm(const std::string& path, const LipFrame& frame) {
  frame.Validate();
  if (frame.channels != 1) {
    throw InvalidInputError("pgm output requires a grayscale frame");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  for (float p : frame.pixels) os.put(static_cast<char>(PixelCode(p)));
  if (!os) throw IoError("pgm write failed: " + path);
}

LipSequence ReadLipDir(const std::string& dir, double fps) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw IoError("lip frame directory not found: " + dir);
  }
  std::map<long, std::string> ordered;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext != ".png" && ext != ".pgm") continue;
    const std::string stem = entry.path().stem().string();
    char* end = nullptr;
    const long idx = std::strtol(stem.c_str(), &end, 10);
    if (end == stem.c_str() || *end != '\0') continue;  // not an index name
    ordered[idx] = entry.path().string();
  }
  if (ordered.empty()) throw IoError("no frames in " + dir);

  LipSequence seq;
  seq.fps = fps;
  seq.frames.reserve(ordered.size());
  for (const auto& [idx, path] : ordered) {
    seq.frames.push_back(ReadImage(path));
    if (seq.frames.size() > 1) {
      const auto& a = seq.frames.front();
      const auto& b = seq.frames.back();
      if (a.height != b.height || a.width != b.width || a.channels != b.channels) {
        throw InvalidInputError("inconsistent frame shapes in " + dir);
      }
    }
  }
  seq.absent.assign(seq.frames.size(), false);
  return seq;
}

}  // namespace ilavse
