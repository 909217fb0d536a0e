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

#ifndef DERMSEG_RASTER_HPP_
#define DERMSEG_RASTER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dermseg/error.hpp"

namespace dermseg {

/// Row-major, channel-interleaved raster. Every raster in the pipeline is at
/// least 1x1.
template <typename T, int C>
class Raster {
 public:
  static_assert(C >= 1);
  using value_type = T;
  static constexpr int kChannels = C;

  Raster(int width, int height, T fill = T{})
      : width_(checked_dim(width)), height_(checked_dim(height)),
        data_(static_cast<std::size_t>(width) * height * C, fill) {}

  Raster(int width, int height, std::vector<T> data)
      : width_(checked_dim(width)), height_(checked_dim(height)),
        data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * height_ * C) {
      throw DimensionError("raster data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(width_) + "x" +
                           std::to_string(height_) + "x" + std::to_string(C));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::size_t size() const { return data_.size(); }

  T& operator()(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  const T& operator()(int x, int y, int c = 0) const {
    return data_[index(x, y, c)];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  const std::vector<T>& values() const { return data_; }
  std::vector<T> release() && { return std::move(data_); }

  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Raster&) const = default;

 private:
  static int checked_dim(int d) {
    if (d < 1) throw DimensionError("raster dimensions must be >= 1");
    return d;
  }
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * C + c;
  }

  int width_;
  int height_;
  std::vector<T> data_;
};

/// 8-bit RGB photograph.
using Image = Raster<std::uint8_t, 3>;

/// Per-pixel foreground probability; values are finite and in [0,1].
class ProbabilityMap {
 public:
  ProbabilityMap(int width, int height, float fill = 0.0f)
      : raster_(width, height, fill) {
    validate();
  }
  ProbabilityMap(int width, int height, std::vector<float> values)
      : raster_(width, height, std::move(values)) {
    validate();
  }
  explicit ProbabilityMap(Raster<float, 1> raster) : raster_(std::move(raster)) {
    validate();
  }

  int width() const { return raster_.width(); }
  int height() const { return raster_.height(); }
  std::size_t pixel_count() const { return raster_.pixel_count(); }
  float operator()(int x, int y) const { return raster_(x, y); }
  std::span<const float> values() const { return raster_.data(); }
  const Raster<float, 1>& raster() const { return raster_; }

  bool operator==(const ProbabilityMap&) const = default;

 private:
  void validate() const {
    for (float v : raster_.data()) {
      if (std::isnan(v)) throw ValidationError("probability map contains NaN");
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
        throw ValidationError("probability map value " + std::to_string(v) +
                              " outside [0,1]");
      }
    }
  }

  Raster<float, 1> raster_;
};

/// Per-pixel {0,1} segmentation.
class BinaryMask {
 public:
  BinaryMask(int width, int height, std::uint8_t fill = 0)
      : raster_(width, height, fill) {
    validate();
  }
  BinaryMask(int width, int height, std::vector<std::uint8_t> values)
      : raster_(width, height, std::move(values)) {
    validate();
  }
  explicit BinaryMask(Raster<std::uint8_t, 1> raster) : raster_(std::move(raster)) {
    validate();
  }

  int width() const { return raster_.width(); }
  int height() const { return raster_.height(); }
  std::size_t pixel_count() const { return raster_.pixel_count(); }
  std::uint8_t operator()(int x, int y) const { return raster_(x, y); }
  std::span<const std::uint8_t> values() const { return raster_.data(); }
  const Raster<std::uint8_t, 1>& raster() const { return raster_; }

  std::size_t count() const {
    return static_cast<std::size_t>(
        std::count(raster_.data().begin(), raster_.data().end(), 1));
  }
  bool any() const { return count() > 0; }

  bool operator==(const BinaryMask&) const = default;

 private:
  void validate() const {
    for (auto v : raster_.data()) {
      if (v > 1) {
        throw ValidationError("binary mask value " + std::to_string(v) +
                              " is not 0 or 1");
      }
    }
  }

  Raster<std::uint8_t, 1> raster_;
};

enum class NormalizationScheme {
  kChannelMeanSubtract,
  kMeanStd,
  kSymmetricUnit,
  kUnit,
};

/// Model input after per-encoder normalization.
struct NormalizedImage {
  Raster<float, 3> pixels;
  NormalizationScheme scheme;

  int width() const { return pixels.width(); }
  int height() const { return pixels.height(); }
};

/// Marker/mask threshold pair for reconstruction post-processing.
class ThresholdPair {
 public:
  ThresholdPair(double t_high, double t_low) : t_high_(t_high), t_low_(t_low) {
    if (!(t_high > 0.0 && t_high < 1.0) || !(t_low > 0.0 && t_low < 1.0)) {
      throw ParameterError("thresholds must lie in (0,1)");
    }
    if (t_high < t_low) {
      throw ParameterError("t_high must be >= t_low");
    }
  }
  double t_high() const { return t_high_; }
  double t_low() const { return t_low_; }
  bool operator==(const ThresholdPair&) const = default;

 private:
  double t_high_;
  double t_low_;
};

/// Smoothing terms of the soft Jaccard ratio (numerator alpha, denominator
/// beta).
class LossCoefficients {
 public:
  LossCoefficients(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
    if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
  }
  static LossCoefficients lesion() { return {1.0, 1.0}; }
  static LossCoefficients attribute() { return {0.0, 1.0}; }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double alpha_;
  double beta_;
};

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
}

struct MapStats {
  float min;
  float max;
  double mean;
};

inline MapStats map_stats(const ProbabilityMap& map) {
  auto v = map.values();
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double sum = 0.0;
  for (float x : v) sum += x;
  return {*lo, *hi, sum / static_cast<double>(v.size())};
}

/// Pixel is foreground iff its value is >= t.
inline BinaryMask threshold(const ProbabilityMap& map, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterError("threshold " + std::to_string(t) + " outside [0,1]");
  }
  std::vector<std::uint8_t> out(map.pixel_count());
  auto v = map.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(v[i]) >= t ? 1 : 0;
  }
  return BinaryMask(map.width(), map.height(), std::move(out));
}

inline ProbabilityMap pixelwise_multiply(const ProbabilityMap& a,
                                         const ProbabilityMap& b) {
  require_same_shape(a, b, "pixelwise_multiply");
  std::vector<float> out(a.pixel_count());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return ProbabilityMap(a.width(), a.height(), std::move(out));
}

inline ProbabilityMap pixelwise_multiply(const ProbabilityMap& a,
                                         const BinaryMask& b) {
  require_same_shape(a, b, "pixelwise_multiply");
  std::vector<float> out(a.pixel_count());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bv[i] ? av[i] : 0.0f;
  return ProbabilityMap(a.width(), a.height(), std::move(out));
}

inline ProbabilityMap to_probability_map(const BinaryMask& mask) {
  std::vector<float> out(mask.values().begin(), mask.values().end());
  return ProbabilityMap(mask.width(), mask.height(), std::move(out));
}

inline BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_union");
  std::vector<std::uint8_t> out(a.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] | b.values()[i];
  return BinaryMask(a.width(), a.height(), std::move(out));
}

inline BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_intersection");
  std::vector<std::uint8_t> out(a.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] & b.values()[i];
  return BinaryMask(a.width(), a.height(), std::move(out));
}

/// True when every foreground pixel of `a` is foreground in `b`.
inline bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "is_subset");
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    if (a.values()[i] && !b.values()[i]) return false;
  }
  return true;
}

}  // namespace dermseg

#endif  // DERMSEG_RASTER_HPP_
