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

#ifndef DERMSEG_GEOMETRY_HPP_
#define DERMSEG_GEOMETRY_HPP_

#include "dermseg/raster.hpp"

// Exact index permutations: flips and quarter-turn rotations.

namespace dermseg {

/// Half-sample symmetric reflection of an index into [0, n).
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

template <typename T, int C>
Raster<T, C> hflip(const Raster<T, C>& in) {
  Raster<T, C> out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x)
      for (int c = 0; c < C; ++c) out(x, y, c) = in(in.width() - 1 - x, y, c);
  return out;
}

template <typename T, int C>
Raster<T, C> vflip(const Raster<T, C>& in) {
  Raster<T, C> out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x)
      for (int c = 0; c < C; ++c) out(x, y, c) = in(x, in.height() - 1 - y, c);
  return out;
}

/// Quarter turn counter-clockwise; width and height swap.
template <typename T, int C>
Raster<T, C> rot90_ccw(const Raster<T, C>& in) {
  const int w = in.width();
  Raster<T, C> out(in.height(), w);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < C; ++c) out(x, y, c) = in(w - 1 - y, x, c);
  return out;
}

/// Quarter turn clockwise; inverse of rot90_ccw.
template <typename T, int C>
Raster<T, C> rot90_cw(const Raster<T, C>& in) {
  const int h = in.height();
  Raster<T, C> out(h, in.width());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < C; ++c) out(x, y, c) = in(y, h - 1 - x, c);
  return out;
}

inline ProbabilityMap hflip(const ProbabilityMap& m) { return ProbabilityMap(hflip(m.raster())); }
inline ProbabilityMap vflip(const ProbabilityMap& m) { return ProbabilityMap(vflip(m.raster())); }
inline ProbabilityMap rot90_ccw(const ProbabilityMap& m) {
  return ProbabilityMap(rot90_ccw(m.raster()));
}
inline ProbabilityMap rot90_cw(const ProbabilityMap& m) {
  return ProbabilityMap(rot90_cw(m.raster()));
}
inline BinaryMask hflip(const BinaryMask& m) { return BinaryMask(hflip(m.raster())); }
inline BinaryMask vflip(const BinaryMask& m) { return BinaryMask(vflip(m.raster())); }

}  // namespace dermseg

#endif  // DERMSEG_GEOMETRY_HPP_
