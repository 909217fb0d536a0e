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

#ifndef DERMSEG_PREPROCESS_HPP_
#define DERMSEG_PREPROCESS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <type_traits>
#include <string>
#include <string_view>
#include <utility>

#include "dermseg/raster.hpp"

namespace dermseg {

enum class ResizeMode { kBilinear, kNearest };

inline ResizeMode parse_resize_mode(std::string_view s) {
  if (s == "bilinear") return ResizeMode::kBilinear;
  if (s == "nearest") return ResizeMode::kNearest;
  throw ValidationError("unknown resize mode '" + std::string(s) + "'");
}

namespace detail {

// Half-pixel-center source coordinate of output index `dst`.
inline double source_coord(int dst, int in, int out) {
  return (dst + 0.5) * static_cast<double>(in) / out - 0.5;
}

inline int nearest_source(int dst, int in, int out) {
  const int s = static_cast<int>(std::floor((dst + 0.5) * static_cast<double>(in) / out));
  return std::clamp(s, 0, in - 1);
}

struct Tap {
  int i0;
  int i1;
  double f;
};

inline Tap bilinear_tap(int dst, int in, int out) {
  double s = std::clamp(source_coord(dst, in, out), 0.0, static_cast<double>(in - 1));
  const int i0 = static_cast<int>(std::floor(s));
  const int i1 = std::min(i0 + 1, in - 1);
  return {i0, i1, s - i0};
}

// a + (b - a) f returns a exactly when a == b, so constant rasters stay exact.
inline double lerp(double a, double b, double f) { return a + (b - a) * f; }

template <typename T>
T store(double v) {
  if constexpr (std::is_integral_v<T>) {
    const double r = std::nearbyint(v);
    return static_cast<T>(std::clamp(r, static_cast<double>(std::numeric_limits<T>::min()),
                                     static_cast<double>(std::numeric_limits<T>::max())));
  } else {
    return static_cast<T>(v);
  }
}

}  // namespace detail

/// Resamples to exactly (height, width) using half-pixel centers.
template <typename T, int C>
Raster<T, C> resize(const Raster<T, C>& in, int height, int width, ResizeMode mode) {
  if (height < 1 || width < 1) throw ParameterError("resize target must be >= 1x1");
  if (height == in.height() && width == in.width()) return in;
  Raster<T, C> out(width, height);
  if (mode == ResizeMode::kNearest) {
    for (int y = 0; y < height; ++y) {
      const int sy = detail::nearest_source(y, in.height(), height);
      for (int x = 0; x < width; ++x) {
        const int sx = detail::nearest_source(x, in.width(), width);
        for (int c = 0; c < C; ++c) out(x, y, c) = in(sx, sy, c);
      }
    }
    return out;
  }
  for (int y = 0; y < height; ++y) {
    const auto ty = detail::bilinear_tap(y, in.height(), height);
    for (int x = 0; x < width; ++x) {
      const auto tx = detail::bilinear_tap(x, in.width(), width);
      for (int c = 0; c < C; ++c) {
        const double top = detail::lerp(in(tx.i0, ty.i0, c), in(tx.i1, ty.i0, c), tx.f);
        const double bot = detail::lerp(in(tx.i0, ty.i1, c), in(tx.i1, ty.i1, c), tx.f);
        out(x, y, c) = detail::store<T>(detail::lerp(top, bot, ty.f));
      }
    }
  }
  return out;
}

inline ProbabilityMap resize(const ProbabilityMap& map, int height, int width,
                             ResizeMode mode = ResizeMode::kBilinear) {
  auto r = resize(map.raster(), height, width, mode);
  for (auto& v : r.data()) v = std::clamp(v, 0.0f, 1.0f);
  return ProbabilityMap(std::move(r));
}

/// Masks only support nearest-neighbour resampling.
inline BinaryMask resize(const BinaryMask& mask, int height, int width,
                         ResizeMode mode = ResizeMode::kNearest) {
  if (mode != ResizeMode::kNearest) {
    throw ParameterError("binary masks can only be resized with nearest neighbour");
  }
  return BinaryMask(resize(mask.raster(), height, width, mode));
}

enum class Task { kLesion, kAttribute };

inline Task parse_task(std::string_view s) {
  if (s == "lesion") return Task::kLesion;
  if (s == "attribute") return Task::kAttribute;
  throw ValidationError("unknown task '" + std::string(s) + "'");
}

struct ResizeTarget {
  int height;
  int width;
  bool operator==(const ResizeTarget&) const = default;
};

inline ResizeTarget task_resize_target(Task task) {
  return task == Task::kLesion ? ResizeTarget{192, 256} : ResizeTarget{384, 576};
}

/// ImageNet statistics used by the mean-subtract and mean/std schemes.
struct NormalizationConstants {
  std::array<double, 3> channel_mean{123.68, 116.779, 103.939};
  std::array<double, 3> unit_mean{0.485, 0.456, 0.406};
  std::array<double, 3> unit_std{0.229, 0.224, 0.225};
};

inline std::string_view to_string(NormalizationScheme s) {
  switch (s) {
    case NormalizationScheme::kChannelMeanSubtract: return "channel-mean-subtract";
    case NormalizationScheme::kMeanStd: return "mean-std";
    case NormalizationScheme::kSymmetricUnit: return "symmetric-unit";
    case NormalizationScheme::kUnit: return "unit";
  }
  return "?";
}

inline NormalizationScheme parse_scheme(std::string_view s) {
  for (auto scheme : {NormalizationScheme::kChannelMeanSubtract, NormalizationScheme::kMeanStd,
                      NormalizationScheme::kSymmetricUnit, NormalizationScheme::kUnit}) {
    if (to_string(scheme) == s) return scheme;
  }
  throw ValidationError("unknown normalization scheme '" + std::string(s) + "'");
}

/// Scheme each supported encoder was pretrained with.
inline NormalizationScheme scheme_for_base(std::string_view base) {
  if (base == "resnet152" || base == "inception_resnet_v2") {
    return NormalizationScheme::kChannelMeanSubtract;
  }
  if (base == "densenet169") return NormalizationScheme::kMeanStd;
  if (base == "xception") return NormalizationScheme::kSymmetricUnit;
  if (base == "deeplabv3") return NormalizationScheme::kUnit;
  throw ValidationError("unknown base network '" + std::string(base) + "'");
}

namespace detail {

// Returns (scale, offset) with normalized = x * scale + offset.
inline std::pair<double, double> affine_for(NormalizationScheme scheme, int c,
                                            const NormalizationConstants& k) {
  switch (scheme) {
    case NormalizationScheme::kChannelMeanSubtract: return {1.0, -k.channel_mean[c]};
    case NormalizationScheme::kMeanStd:
      return {1.0 / (255.0 * k.unit_std[c]), -k.unit_mean[c] / k.unit_std[c]};
    case NormalizationScheme::kSymmetricUnit: return {1.0 / 127.5, -1.0};
    case NormalizationScheme::kUnit: return {1.0 / 255.0, 0.0};
  }
  return {1.0, 0.0};
}

}  // namespace detail

inline NormalizedImage normalize(const Image& image, NormalizationScheme scheme,
                                 const NormalizationConstants& constants = {}) {
  if (scheme == NormalizationScheme::kMeanStd) {
    for (double s : constants.unit_std) {
      if (!(s > 0.0)) throw ParameterError("normalization std must be > 0");
    }
  }
  Raster<float, 3> out(image.width(), image.height());
  for (int c = 0; c < 3; ++c) {
    const auto [scale, offset] = detail::affine_for(scheme, c, constants);
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x)
        out(x, y, c) = static_cast<float>(image(x, y, c) * scale + offset);
  }
  return {std::move(out), scheme};
}

/// Inverse of normalize, before rounding back to 8 bits.
inline Raster<double, 3> denormalize(const NormalizedImage& image,
                                     const NormalizationConstants& constants = {}) {
  Raster<double, 3> out(image.width(), image.height());
  for (int c = 0; c < 3; ++c) {
    const auto [scale, offset] = detail::affine_for(image.scheme, c, constants);
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x)
        out(x, y, c) = (image.pixels(x, y, c) - offset) / scale;
  }
  return out;
}

}  // namespace dermseg

#endif  // DERMSEG_PREPROCESS_HPP_
