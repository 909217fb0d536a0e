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

#ifndef DERMSEG_FILTERS_HPP_
#define DERMSEG_FILTERS_HPP_

#include <cmath>
#include <vector>

#include "dermseg/geometry.hpp"
#include "dermseg/raster.hpp"

namespace dermseg {

/// Normalized Gaussian taps, radius ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

/// Separable convolution with an odd, symmetric kernel and reflected borders.
template <int C>
Raster<double, C> convolve_separable(const Raster<double, C>& in,
                                     const std::vector<double>& kernel) {
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = in.width();
  const int h = in.height();
  Raster<double, C> tmp(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) acc += kernel[k + r] * in(reflect_index(x + k, w), y, c);
        tmp(x, y, c) = acc;
      }
  Raster<double, C> out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) acc += kernel[k + r] * tmp(x, reflect_index(y + k, h), c);
        out(x, y, c) = acc;
      }
  return out;
}

template <int C>
Raster<double, C> gaussian_blur(const Raster<double, C>& in, double sigma) {
  return convolve_separable(in, gaussian_kernel(sigma));
}

template <typename T, int C>
Raster<double, C> to_double(const Raster<T, C>& in) {
  Raster<double, C> out(in.width(), in.height());
  auto src = in.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<double>(src[i]);
  return out;
}

/// Rounds to nearest and clips to [0,255].
template <int C>
Raster<std::uint8_t, C> to_u8(const Raster<double, C>& in) {
  Raster<std::uint8_t, C> out(in.width(), in.height());
  auto src = in.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = std::nearbyint(src[i]);
    dst[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  return out;
}

}  // namespace dermseg

#endif  // DERMSEG_FILTERS_HPP_
