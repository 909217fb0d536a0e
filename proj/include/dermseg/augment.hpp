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

#ifndef DERMSEG_AUGMENT_HPP_
#define DERMSEG_AUGMENT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dermseg/filters.hpp"
#include "dermseg/geometry.hpp"
#include "dermseg/raster.hpp"
#include "dermseg/rng.hpp"

namespace dermseg {

// ---------------------------------------------------------------------------
// Geometric
// ---------------------------------------------------------------------------

/// Flips, then one affine resample about the image center: rotation
/// (degrees, counter-clockwise), isotropic zoom, horizontal shear factor and
/// translation as a fraction of width/height.
struct GeometricParams {
  bool hflip = false;
  bool vflip = false;
  double rotation_deg = 0.0;
  double zoom = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double shear = 0.0;

  void validate() const {
    // Sampling draws [0, 40]; negative angles are accepted so a rotation can
    // be undone.
    if (!(std::abs(rotation_deg) <= 40.0))
      throw ParameterError("rotation magnitude must not exceed 40 degrees");
    if (!(zoom >= 0.7 && zoom <= 1.3)) throw ParameterError("zoom must lie in [0.7,1.3]");
    if (!(shear >= -0.3 && shear <= 0.3)) throw ParameterError("shear must lie in [-0.3,0.3]");
    if (!(std::abs(translate_x) <= 0.5 && std::abs(translate_y) <= 0.5))
      throw ParameterError("translation must lie in [-0.5,0.5] of each dimension");
  }

  bool has_affine() const {
    return rotation_deg != 0.0 || zoom != 1.0 || shear != 0.0 || translate_x != 0.0 ||
           translate_y != 0.0;
  }
  bool is_identity() const { return !hflip && !vflip && !has_affine(); }
  bool operator==(const GeometricParams&) const = default;
};

namespace detail {

struct Affine2 {
  // dst = M (src - c) + c + t
  double a, b, c, d;
  double tx, ty;
};

inline Affine2 inverse_affine(const GeometricParams& p, int width, int height) {
  const double th = p.rotation_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(th);
  const double sn = std::sin(th);
  // Image rows grow downward, so a counter-clockwise rotation on screen is
  // [[cos, sin], [-sin, cos]] in (x, y) pixel coordinates.
  const double r00 = cs, r01 = sn, r10 = -sn, r11 = cs;
  // M = R * Shear * Zoom
  const double s00 = p.zoom, s01 = p.shear * p.zoom, s10 = 0.0, s11 = p.zoom;
  const double m00 = r00 * s00 + r01 * s10;
  const double m01 = r00 * s01 + r01 * s11;
  const double m10 = r10 * s00 + r11 * s10;
  const double m11 = r10 * s01 + r11 * s11;
  const double det = m00 * m11 - m01 * m10;
  return {m11 / det, -m01 / det, -m10 / det, m00 / det, p.translate_x * width,
          p.translate_y * height};
}

}  // namespace detail

/// Result of a joint image/mask transform.
template <typename ImageT>
struct Augmented {
  ImageT image;
  std::vector<BinaryMask> masks;
};

/// Applies the same coordinate map to the image (bilinear) and every mask
/// (nearest). Samples falling outside the canvas are taken from the
/// reflected image.
inline Augmented<Image> apply_geometric(const Image& image, const std::vector<BinaryMask>& masks,
                                        const GeometricParams& p) {
  p.validate();
  for (const auto& m : masks) require_same_shape(image, m, "apply_geometric");
  Image img = image;
  std::vector<Raster<std::uint8_t, 1>> ms;
  for (const auto& m : masks) ms.push_back(m.raster());
  if (p.hflip) {
    img = hflip(img);
    for (auto& m : ms) m = hflip(m);
  }
  if (p.vflip) {
    img = vflip(img);
    for (auto& m : ms) m = vflip(m);
  }
  if (p.has_affine()) {
    const int w = img.width();
    const int h = img.height();
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const auto inv = detail::inverse_affine(p, w, h);
    Image out_img(w, h);
    std::vector<Raster<std::uint8_t, 1>> out_ms(ms.size(), Raster<std::uint8_t, 1>(w, h));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double ux = x - cx - inv.tx;
        const double uy = y - cy - inv.ty;
        const double sx = inv.a * ux + inv.b * uy + cx;
        const double sy = inv.c * ux + inv.d * uy + cy;
        const int x0 = static_cast<int>(std::floor(sx));
        const int y0 = static_cast<int>(std::floor(sy));
        const double fx = sx - x0;
        const double fy = sy - y0;
        const int xa = reflect_index(x0, w), xb = reflect_index(x0 + 1, w);
        const int ya = reflect_index(y0, h), yb = reflect_index(y0 + 1, h);
        for (int c = 0; c < 3; ++c) {
          const double top = img(xa, ya, c) + (img(xb, ya, c) - img(xa, ya, c)) * fx;
          const double bot = img(xa, yb, c) + (img(xb, yb, c) - img(xa, yb, c)) * fx;
          const double v = std::nearbyint(top + (bot - top) * fy);
          out_img(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
        const int nx = reflect_index(static_cast<int>(std::floor(sx + 0.5)), w);
        const int ny = reflect_index(static_cast<int>(std::floor(sy + 0.5)), h);
        for (std::size_t k = 0; k < ms.size(); ++k) out_ms[k](x, y) = ms[k](nx, ny);
      }
    }
    img = std::move(out_img);
    ms = std::move(out_ms);
  }
  Augmented<Image> out{std::move(img), {}};
  for (auto& m : ms) out.masks.emplace_back(std::move(m));
  return out;
}

inline Image apply_geometric(const Image& image, const GeometricParams& p) {
  return apply_geometric(image, {}, p).image;
}

// ---------------------------------------------------------------------------
// Photometric
// ---------------------------------------------------------------------------

/// Colour and tone changes; masks are never touched.
/// Contrast: the image is linearly stretched so the low/high percentiles map
/// to 0/255, then blended: out = x + contrast_delta * (stretched - x).
/// Positive deltas increase contrast, negative ones decrease it.
/// Sharpness: either a Gaussian blur (blur_sigma > 0) or unsharp masking
/// out = x + amount * (x - blur(x, unsharp_sigma)).
struct PhotometricParams {
  std::array<double, 3> channel_shift{0.0, 0.0, 0.0};
  double intensity_scale = 1.0;
  double contrast_delta = 0.0;
  double contrast_low_pct = 2.0;
  double contrast_high_pct = 98.0;
  double blur_sigma = 0.0;
  double unsharp_amount = 0.0;
  double unsharp_sigma = 1.0;

  void validate() const {
    if (!(intensity_scale >= 0.7 && intensity_scale <= 1.3))
      throw ParameterError("intensity scale must lie in [0.7,1.3]");
    if (!(contrast_low_pct >= 0.0 && contrast_low_pct < contrast_high_pct &&
          contrast_high_pct <= 100.0))
      throw ParameterError("contrast percentiles must satisfy 0 <= low < high <= 100");
    if (!(std::abs(contrast_delta) <= 1.0)) throw ParameterError("contrast delta must lie in [-1,1]");
    if (!(blur_sigma >= 0.0) || !(unsharp_amount >= 0.0) || !(unsharp_sigma > 0.0))
      throw ParameterError("sharpness parameters must be non-negative");
    if (blur_sigma > 0.0 && unsharp_amount > 0.0)
      throw ParameterError("blur and unsharp masking are mutually exclusive");
  }
  bool is_identity() const {
    return channel_shift == std::array<double, 3>{0.0, 0.0, 0.0} && intensity_scale == 1.0 &&
           contrast_delta == 0.0 && blur_sigma == 0.0 && unsharp_amount == 0.0;
  }
  bool operator==(const PhotometricParams&) const = default;
};

/// Nearest-rank percentile over all samples.
inline double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw ParameterError("percentile of empty set");
  const std::size_t n = values.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank), values.end());
  return values[rank];
}

inline Raster<double, 3> contrast_stretch(const Raster<double, 3>& in, double delta,
                                          double low_pct, double high_pct) {
  std::vector<double> samples(in.data().begin(), in.data().end());
  const double lo = percentile(samples, low_pct);
  const double hi = percentile(std::move(samples), high_pct);
  Raster<double, 3> out = in;
  if (!(hi > lo)) return out;
  for (auto& v : out.data()) {
    const double stretched = (v - lo) * 255.0 / (hi - lo);
    v = v + delta * (stretched - v);
  }
  return out;
}

inline Raster<double, 3> unsharp_mask(const Raster<double, 3>& in, double amount, double sigma) {
  const auto blurred = gaussian_blur(in, sigma);
  Raster<double, 3> out = in;
  auto o = out.data();
  auto b = blurred.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = o[i] + amount * (o[i] - b[i]);
  return out;
}

inline Image apply_photometric(const Image& image, const PhotometricParams& p) {
  p.validate();
  if (p.is_identity()) return image;
  auto v = to_double(image);
  for (int y = 0; y < v.height(); ++y)
    for (int x = 0; x < v.width(); ++x)
      for (int c = 0; c < 3; ++c) v(x, y, c) = (v(x, y, c) + p.channel_shift[c]) * p.intensity_scale;
  if (p.contrast_delta != 0.0) {
    v = contrast_stretch(v, p.contrast_delta, p.contrast_low_pct, p.contrast_high_pct);
  }
  if (p.blur_sigma > 0.0) v = gaussian_blur(v, p.blur_sigma);
  if (p.unsharp_amount > 0.0) v = unsharp_mask(v, p.unsharp_amount, p.unsharp_sigma);
  return to_u8(v);
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

enum class NoiseKind { kGaussian, kSpeckle, kSaltPepper };

/// gaussian: additive, strength = sigma in intensity units.
/// speckle: multiplicative x + x * n, strength = sigma of n.
/// salt_pepper: each pixel replaced by black or white with probability
/// strength.
struct NoiseParams {
  NoiseKind kind = NoiseKind::kGaussian;
  double strength = 0.0;

  void validate() const {
    if (!(strength >= 0.0)) throw ParameterError("noise strength must be >= 0");
    if (kind == NoiseKind::kSaltPepper && strength > 1.0)
      throw ParameterError("salt & pepper fraction must be <= 1");
  }
  bool operator==(const NoiseParams&) const = default;
};

inline Image apply_noise(const Image& image, const NoiseParams& p, std::uint64_t seed) {
  p.validate();
  if (p.strength == 0.0) return image;
  Rng rng(seed);
  Image out = image;
  if (p.kind == NoiseKind::kSaltPepper) {
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) {
        const bool hit = rng.bernoulli(p.strength);
        const bool white = rng.bernoulli(0.5);
        if (hit) {
          for (int c = 0; c < 3; ++c) out(x, y, c) = white ? 255 : 0;
        }
      }
    return out;
  }
  auto v = to_double(image);
  for (auto& s : v.data()) {
    const double n = rng.normal() * p.strength;
    s = p.kind == NoiseKind::kGaussian ? s + n : s + s * n;
  }
  return to_u8(v);
}

// ---------------------------------------------------------------------------
// Illumination
// ---------------------------------------------------------------------------

enum class IlluminationKind { kAxial, kRadial };

/// Multiplicative gain map with values in [1 - strength, 1 + strength].
/// Axial: linear ramp along `angle_deg`, dark end 1 - s, bright end 1 + s.
/// Radial: 1 + s at the center (fractions of width/height), falling linearly
/// to 1 - s at the farthest corner.
struct IlluminationParams {
  IlluminationKind kind = IlluminationKind::kRadial;
  double strength = 0.0;
  double angle_deg = 0.0;
  double center_x = 0.5;
  double center_y = 0.5;

  void validate() const {
    if (!(strength >= 0.0 && strength <= 0.5))
      throw ParameterError("illumination strength must lie in [0,0.5]");
    if (!(center_x >= 0.0 && center_x <= 1.0 && center_y >= 0.0 && center_y <= 1.0))
      throw ParameterError("illumination center must lie inside the image");
  }
  bool operator==(const IlluminationParams&) const = default;
};

inline Raster<double, 1> illumination_gain_map(int width, int height, const IlluminationParams& p) {
  p.validate();
  Raster<double, 1> g(width, height, 1.0);
  if (p.strength == 0.0) return g;
  if (p.kind == IlluminationKind::kAxial) {
    const double th = p.angle_deg * std::numbers::pi / 180.0;
    const double ux = std::cos(th), uy = std::sin(th);
    double lo = INFINITY, hi = -INFINITY;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double t = x * ux + y * uy;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double t = hi > lo ? 2.0 * ((x * ux + y * uy) - lo) / (hi - lo) - 1.0 : 0.0;
        g(x, y) = 1.0 + p.strength * t;
      }
    return g;
  }
  const double cx = p.center_x * (width - 1);
  const double cy = p.center_y * (height - 1);
  double rmax = 0.0;
  for (double x : {0.0, width - 1.0})
    for (double y : {0.0, height - 1.0}) rmax = std::max(rmax, std::hypot(x - cx, y - cy));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double r = rmax > 0.0 ? std::hypot(x - cx, y - cy) / rmax : 0.0;
      g(x, y) = 1.0 + p.strength * (1.0 - 2.0 * r);
    }
  return g;
}

inline Image apply_illumination(const Image& image, const IlluminationParams& p) {
  const auto g = illumination_gain_map(image.width(), image.height(), p);
  if (p.strength == 0.0) return image;
  auto v = to_double(image);
  for (int y = 0; y < v.height(); ++y)
    for (int x = 0; x < v.width(); ++x)
      for (int c = 0; c < 3; ++c) v(x, y, c) *= g(x, y);
  return to_u8(v);
}

// ---------------------------------------------------------------------------
// Hair occlusion
// ---------------------------------------------------------------------------

/// Each hair is a Catmull-Rom spline through 3-5 control points scattered
/// around a random straight segment; `curliness` is the perpendicular spread
/// of the control points as a fraction of the hair length.
struct HairParams {
  int count = 0;
  double thickness_min = 1.0;
  double thickness_max = 5.0;
  double darkness = 0.8;
  double curliness = 0.15;
  bool light = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (count < 0) throw ParameterError("hair count must be >= 0");
    if (!(thickness_min >= 1.0 && thickness_min <= thickness_max && thickness_max <= 5.0))
      throw ParameterError("hair thickness must satisfy 1 <= min <= max <= 5");
    if (!(darkness >= 0.0 && darkness <= 1.0)) throw ParameterError("hair darkness must lie in [0,1]");
    if (!(curliness >= 0.0)) throw ParameterError("hair curliness must be >= 0");
  }
  bool operator==(const HairParams&) const = default;
};

namespace detail {

struct Point {
  double x;
  double y;
};

inline double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

inline std::vector<Point> catmull_rom(const std::vector<Point>& ctrl, double step) {
  std::vector<Point> out;
  const std::size_t n = ctrl.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Point p0 = ctrl[i == 0 ? 0 : i - 1];
    const Point p1 = ctrl[i];
    const Point p2 = ctrl[i + 1];
    const Point p3 = ctrl[std::min(i + 2, n - 1)];
    const double len = std::hypot(p2.x - p1.x, p2.y - p1.y);
    const int samples = std::max(2, static_cast<int>(std::ceil(len / step)));
    for (int s = 0; s < samples; ++s) {
      const double t = static_cast<double>(s) / samples;
      const double t2 = t * t, t3 = t2 * t;
      auto blend = [&](double a, double b, double c, double d) {
        return 0.5 * (2 * b + (-a + c) * t + (2 * a - 5 * b + 4 * c - d) * t2 +
                      (-a + 3 * b - 3 * c + d) * t3);
      };
      out.push_back({blend(p0.x, p1.x, p2.x, p3.x), blend(p0.y, p1.y, p2.y, p3.y)});
    }
  }
  out.push_back(ctrl.back());
  return out;
}

}  // namespace detail

/// Anti-aliased union of all strokes: per-pixel coverage in [0,1].
inline Raster<double, 1> hair_coverage(int width, int height, const HairParams& p) {
  p.validate();
  Raster<double, 1> cov(width, height, 0.0);
  Rng rng(p.seed);
  const double diag = std::hypot(width, height);
  for (int h = 0; h < p.count; ++h) {
    const int nctrl = rng.uniform_int(3, 5);
    const detail::Point start{rng.uniform(0.0, width), rng.uniform(0.0, height)};
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double length = rng.uniform(0.3, 0.8) * diag;
    const double thickness = rng.uniform(p.thickness_min, p.thickness_max);
    const double ux = std::cos(angle), uy = std::sin(angle);
    std::vector<detail::Point> ctrl;
    for (int k = 0; k < nctrl; ++k) {
      const double along = length * k / (nctrl - 1);
      const double off = rng.normal() * p.curliness * length;
      ctrl.push_back({start.x + along * ux - off * uy, start.y + along * uy + off * ux});
    }
    const auto path = detail::catmull_rom(ctrl, 0.5);
    const double reach = thickness / 2.0 + 0.5;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const auto a = path[i], b = path[i + 1];
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - reach)));
      const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + reach)));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
      const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const double d = detail::segment_distance({x + 0.0, y + 0.0}, a, b);
          const double c = std::clamp(reach - d, 0.0, 1.0);
          if (c > cov(x, y)) cov(x, y) = c;
        }
    }
  }
  return cov;
}

/// 8-bit compositing alpha: round(coverage * darkness * 255).
inline Raster<std::uint8_t, 1> hair_alpha(int width, int height, const HairParams& p) {
  const auto cov = hair_coverage(width, height, p);
  Raster<std::uint8_t, 1> alpha(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      alpha(x, y) = static_cast<std::uint8_t>(std::lround(cov(x, y) * p.darkness * 255.0));
  return alpha;
}

/// Dark hairs scale pixels by (255 - alpha) / 255 with integer floor, so any
/// pixel with alpha > 0 and a non-zero value gets strictly darker. Light hairs
/// do the same toward white.
inline Image simulate_hair(const Image& image, const HairParams& p) {
  p.validate();
  if (p.count == 0) return image;
  const auto alpha = hair_alpha(image.width(), image.height(), p);
  Image out = image;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const unsigned a = alpha(x, y);
      if (a == 0) continue;
      for (int c = 0; c < 3; ++c) {
        const unsigned v = out(x, y, c);
        out(x, y, c) = static_cast<std::uint8_t>(
            p.light ? 255u - (255u - v) * (255u - a) / 255u : v * (255u - a) / 255u);
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling and composition
// ---------------------------------------------------------------------------

struct RoutineSwitch {
  bool enabled = true;
  double probability = 0.5;
  bool operator==(const RoutineSwitch&) const = default;
};

/// Per-routine enable flags, firing probabilities and draw ranges.
struct AugmentConfig {
  RoutineSwitch hflip;
  RoutineSwitch vflip;
  RoutineSwitch rotation;
  double rotation_max_deg = 40.0;
  RoutineSwitch zoom;
  double zoom_min = 0.7;
  double zoom_max = 1.3;
  RoutineSwitch translate;
  double translate_max = 0.1;
  RoutineSwitch shear;
  double shear_max = 0.3;
  RoutineSwitch channel_shift;
  double channel_shift_max = 20.0;
  RoutineSwitch intensity;
  double intensity_min = 0.7;
  double intensity_max = 1.3;
  RoutineSwitch contrast;
  double contrast_max = 0.5;
  double contrast_low_pct = 2.0;
  double contrast_high_pct = 98.0;
  RoutineSwitch sharpness;
  double blur_sigma_min = 0.5;
  double blur_sigma_max = 2.0;
  double unsharp_min = 0.3;
  double unsharp_max = 1.5;
  double unsharp_sigma = 1.0;
  RoutineSwitch noise;
  double gaussian_sigma_max = 10.0;
  double speckle_sigma_max = 0.1;
  double salt_pepper_max = 0.02;
  RoutineSwitch illumination;
  double illumination_strength = 0.3;
  RoutineSwitch hair;
  int hair_count_min = 1;
  int hair_count_max = 10;
  double hair_thickness_min = 1.0;
  double hair_thickness_max = 5.0;
  double hair_darkness_min = 0.5;
  double hair_darkness_max = 1.0;
  double hair_curliness = 0.15;
  double hair_light_probability = 0.2;

  static AugmentConfig all_disabled() {
    AugmentConfig c;
    for (auto* s : c.switches()) s->enabled = false;
    return c;
  }

  std::vector<RoutineSwitch*> switches() {
    return {&hflip, &vflip, &rotation, &zoom, &translate, &shear, &channel_shift,
            &intensity, &contrast, &sharpness, &noise, &illumination, &hair};
  }
};

/// A fully specified augmentation; replaying it is deterministic.
struct AugmentationParams {
  GeometricParams geometric;
  PhotometricParams photometric;
  std::optional<IlluminationParams> illumination;
  std::optional<HairParams> hair;
  std::optional<NoiseParams> noise;
  std::uint64_t noise_seed = 0;

  bool is_identity() const {
    return geometric.is_identity() && photometric.is_identity() && !illumination && !hair && !noise;
  }
  bool operator==(const AugmentationParams&) const = default;
};

namespace detail {

inline bool fires(const RoutineSwitch& s, Rng& rng) {
  // Always consume one draw so later draws do not depend on enable flags.
  const double u = rng.uniform();
  return s.enabled && u < s.probability;
}

}  // namespace detail

/// Draws every routine from its own stream derived from `seed`.
inline AugmentationParams sample_augmentation(std::uint64_t seed, const AugmentConfig& cfg) {
  AugmentationParams out;
  auto stream = [seed](const char* tag) { return Rng(derive_seed(seed, "augment", tag)); };

  {
    Rng r = stream("hflip");
    out.geometric.hflip = detail::fires(cfg.hflip, r);
  }
  {
    Rng r = stream("vflip");
    out.geometric.vflip = detail::fires(cfg.vflip, r);
  }
  {
    Rng r = stream("rotation");
    if (detail::fires(cfg.rotation, r)) out.geometric.rotation_deg = r.uniform(0.0, cfg.rotation_max_deg);
  }
  {
    Rng r = stream("zoom");
    if (detail::fires(cfg.zoom, r)) out.geometric.zoom = r.uniform(cfg.zoom_min, cfg.zoom_max);
  }
  {
    Rng r = stream("translate");
    if (detail::fires(cfg.translate, r)) {
      out.geometric.translate_x = r.uniform(-cfg.translate_max, cfg.translate_max);
      out.geometric.translate_y = r.uniform(-cfg.translate_max, cfg.translate_max);
    }
  }
  {
    Rng r = stream("shear");
    if (detail::fires(cfg.shear, r)) out.geometric.shear = r.uniform(-cfg.shear_max, cfg.shear_max);
  }
  {
    Rng r = stream("channel_shift");
    if (detail::fires(cfg.channel_shift, r)) {
      for (auto& s : out.photometric.channel_shift)
        s = r.uniform(-cfg.channel_shift_max, cfg.channel_shift_max);
    }
  }
  {
    Rng r = stream("intensity");
    if (detail::fires(cfg.intensity, r))
      out.photometric.intensity_scale = r.uniform(cfg.intensity_min, cfg.intensity_max);
  }
  {
    Rng r = stream("contrast");
    out.photometric.contrast_low_pct = cfg.contrast_low_pct;
    out.photometric.contrast_high_pct = cfg.contrast_high_pct;
    if (detail::fires(cfg.contrast, r))
      out.photometric.contrast_delta = r.uniform(-cfg.contrast_max, cfg.contrast_max);
  }
  {
    Rng r = stream("sharpness");
    out.photometric.unsharp_sigma = cfg.unsharp_sigma;
    if (detail::fires(cfg.sharpness, r)) {
      if (r.bernoulli(0.5)) {
        out.photometric.blur_sigma = r.uniform(cfg.blur_sigma_min, cfg.blur_sigma_max);
      } else {
        out.photometric.unsharp_amount = r.uniform(cfg.unsharp_min, cfg.unsharp_max);
      }
    }
  }
  {
    Rng r = stream("illumination");
    if (detail::fires(cfg.illumination, r)) {
      IlluminationParams p;
      p.kind = r.bernoulli(0.5) ? IlluminationKind::kAxial : IlluminationKind::kRadial;
      p.strength = r.uniform(0.0, cfg.illumination_strength);
      p.angle_deg = r.uniform(0.0, 360.0);
      p.center_x = r.uniform(0.25, 0.75);
      p.center_y = r.uniform(0.25, 0.75);
      out.illumination = p;
    }
  }
  {
    Rng r = stream("hair");
    if (detail::fires(cfg.hair, r)) {
      HairParams p;
      p.count = r.uniform_int(cfg.hair_count_min, cfg.hair_count_max);
      p.thickness_min = cfg.hair_thickness_min;
      p.thickness_max = cfg.hair_thickness_max;
      p.darkness = r.uniform(cfg.hair_darkness_min, cfg.hair_darkness_max);
      p.curliness = cfg.hair_curliness;
      p.light = r.bernoulli(cfg.hair_light_probability);
      p.seed = r.next();
      out.hair = p;
    }
  }
  {
    Rng r = stream("noise");
    if (detail::fires(cfg.noise, r)) {
      NoiseParams p;
      switch (r.below(3)) {
        case 0:
          p.kind = NoiseKind::kGaussian;
          p.strength = r.uniform(0.0, cfg.gaussian_sigma_max);
          break;
        case 1:
          p.kind = NoiseKind::kSpeckle;
          p.strength = r.uniform(0.0, cfg.speckle_sigma_max);
          break;
        default:
          p.kind = NoiseKind::kSaltPepper;
          p.strength = r.uniform(0.0, cfg.salt_pepper_max);
          break;
      }
      out.noise = p;
      out.noise_seed = r.next();
    }
  }
  return out;
}

/// Order: geometric, illumination, photometric, hair, noise. Only the
/// geometric stage touches masks.
inline Augmented<Image> apply_augmentation(const Image& image, const std::vector<BinaryMask>& masks,
                                           const AugmentationParams& p) {
  auto out = apply_geometric(image, masks, p.geometric);
  if (p.illumination) out.image = apply_illumination(out.image, *p.illumination);
  out.image = apply_photometric(out.image, p.photometric);
  if (p.hair) out.image = simulate_hair(out.image, *p.hair);
  if (p.noise) out.image = apply_noise(out.image, *p.noise, p.noise_seed);
  return out;
}

}  // namespace dermseg

#endif  // DERMSEG_AUGMENT_HPP_
