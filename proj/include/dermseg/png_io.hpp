/* Copyright 2026 The dermseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DERMSEG_PNG_IO_HPP_
#define DERMSEG_PNG_IO_HPP_

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "dermseg/error.hpp"
#include "dermseg/raster.hpp"

// Raster file formats:
//   image    8-bit RGB PNG (gray, gray+alpha, RGBA and palette files are
//            accepted on read; alpha is dropped)
//   mask     8-bit single-channel PNG holding only 0 and 255
//   probmap  16-bit single-channel PNG, value v stored as round(v * 65535)

namespace dermseg {

inline constexpr double kProbmapScale = 65535.0;

namespace detail {

struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  // One entry per sample, already combined from big-endian pairs for 16-bit.
  std::vector<std::uint16_t> samples;
};

inline void png_error_handler(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg ? msg : "libpng error";
  png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

// Buffers are declared before setjmp so a longjmp never skips a destructor.
inline bool decode_png(std::FILE* fp, PngPixels& out, std::string& err) {
  std::vector<unsigned char> buffer;
  std::vector<png_bytep> rows;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_error_handler, png_warning_handler);
  if (!png) {
    err = "cannot allocate png read struct";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    err = "cannot allocate png info struct";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const auto color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + row_bytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n =
      static_cast<std::size_t>(out.width) * out.height * out.channels;
  out.samples.resize(n);
  if (out.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      out.samples[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = buffer[i];
  }
  return true;
}

inline PngPixels read_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError("cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw DataError("unsupported format (not a PNG): " + path.string());
  }
  std::rewind(fp.get());
  PngPixels px;
  std::string err;
  if (!decode_png(fp.get(), px, err)) {
    throw DataError("cannot decode " + path.string() + ": " + err);
  }
  return px;
}

inline bool encode_png(std::FILE* fp, int width, int height, int color_type,
                       int bit_depth, const std::vector<unsigned char>& bytes,
                       std::string& err) {
  std::vector<png_const_bytep> rows;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            png_error_handler, png_warning_handler);
  if (!png) {
    err = "cannot allocate png write struct";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    err = "cannot allocate png info struct";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t row_bytes = bytes.size() / static_cast<std::size_t>(height);
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[y] = bytes.data() + row_bytes * y;
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

inline void write_png(const std::filesystem::path& path, int width, int height,
                      int color_type, int bit_depth,
                      const std::vector<unsigned char>& bytes) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot open " + path.string() + " for writing");
  std::string err;
  if (!encode_png(fp.get(), width, height, color_type, bit_depth, bytes, err)) {
    throw DataError("cannot encode " + path.string() + ": " + err);
  }
  if (std::fflush(fp.get()) != 0) {
    throw DataError("write failed: " + path.string());
  }
}

}  // namespace detail

inline Image read_image(const std::filesystem::path& path) {
  auto px = detail::read_png(path);
  if (px.bit_depth != 8) {
    throw DataError("unsupported format: " + path.string() + " has bit depth " +
                    std::to_string(px.bit_depth) + ", images must be 8-bit");
  }
  Image img(px.width, px.height);
  auto out = img.data();
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t* s = px.samples.data() + i * px.channels;
    if (px.channels <= 2) {
      out[3 * i] = out[3 * i + 1] = out[3 * i + 2] = static_cast<std::uint8_t>(s[0]);
    } else {
      for (int c = 0; c < 3; ++c) out[3 * i + c] = static_cast<std::uint8_t>(s[c]);
    }
  }
  return img;
}

inline BinaryMask read_mask(const std::filesystem::path& path) {
  auto px = detail::read_png(path);
  if (px.bit_depth != 8 || px.channels != 1) {
    throw DataError("unsupported format: " + path.string() +
                    " is not an 8-bit single-channel PNG");
  }
  std::vector<std::uint8_t> out(px.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto v = px.samples[i];
    if (v != 0 && v != 255) {
      throw ValidationError("mask " + path.string() + " has non-binary value " +
                            std::to_string(v));
    }
    out[i] = v ? 1 : 0;
  }
  return BinaryMask(px.width, px.height, std::move(out));
}

inline ProbabilityMap read_probmap(const std::filesystem::path& path) {
  auto px = detail::read_png(path);
  if (px.bit_depth != 16 || px.channels != 1) {
    throw DataError("unsupported format: " + path.string() +
                    " is not a 16-bit single-channel PNG");
  }
  std::vector<float> out(px.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(px.samples[i] / kProbmapScale);
  }
  return ProbabilityMap(px.width, px.height, std::move(out));
}

inline std::uint16_t quantize_probability(float v) {
  return static_cast<std::uint16_t>(std::lround(static_cast<double>(v) * kProbmapScale));
}

inline void write_image(const Image& img, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(img.data().begin(), img.data().end());
  detail::write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, bytes);
}

inline void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(mask.pixel_count());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.values()[i] ? 255 : 0;
  detail::write_png(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 8, bytes);
}

inline void write_probmap(const ProbabilityMap& map, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(map.pixel_count() * 2);
  for (std::size_t i = 0; i < map.pixel_count(); ++i) {
    const auto q = quantize_probability(map.values()[i]);
    bytes[2 * i] = static_cast<unsigned char>(q >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
  }
  detail::write_png(path, map.width(), map.height(), PNG_COLOR_TYPE_GRAY, 16, bytes);
}

/// Applies the probmap file quantization without touching disk.
inline ProbabilityMap quantize_probmap(const ProbabilityMap& map) {
  std::vector<float> out(map.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(quantize_probability(map.values()[i]) / kProbmapScale);
  }
  return ProbabilityMap(map.width(), map.height(), std::move(out));
}

}  // namespace dermseg

#endif  // DERMSEG_PNG_IO_HPP_
