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

#ifndef DERMSEG_MORPHOLOGY_HPP_
#define DERMSEG_MORPHOLOGY_HPP_

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dermseg/raster.hpp"

namespace dermseg {

enum class Connectivity { k4 = 4, k8 = 8 };

inline Connectivity parse_connectivity(int n) {
  if (n == 4) return Connectivity::k4;
  if (n == 8) return Connectivity::k8;
  throw ParameterError("connectivity must be 4 or 8, got " + std::to_string(n));
}

namespace detail {

struct Offset {
  int dx;
  int dy;
};

inline std::span<const Offset> neighbours(Connectivity c) {
  static constexpr Offset k4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  static constexpr Offset k8[] = {{1, 0}, {-1, 0}, {0, 1},  {0, -1},
                                  {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  if (c == Connectivity::k4) return k4;
  return k8;
}

// Breadth-first propagation through `allowed` starting from every index in
// `queue`; `visited` must already be set for the seeds.
inline void flood(std::span<const std::uint8_t> allowed, int width, int height, Connectivity conn,
                  std::deque<std::size_t>& queue, std::vector<std::uint8_t>& visited,
                  std::vector<std::size_t>* members = nullptr) {
  const auto nbrs = neighbours(conn);
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    if (members) members->push_back(idx);
    const int x = static_cast<int>(idx % width);
    const int y = static_cast<int>(idx / width);
    for (const auto& o : nbrs) {
      const int nx = x + o.dx;
      const int ny = y + o.dy;
      if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
      const std::size_t n = static_cast<std::size_t>(ny) * width + nx;
      if (allowed[n] && !visited[n]) {
        visited[n] = 1;
        queue.push_back(n);
      }
    }
  }
}

}  // namespace detail

/// Connected components in raster-scan order of their first pixel.
struct ComponentLabels {
  std::vector<int> label;             // -1 for background
  std::vector<std::size_t> areas;     // indexed by label
};

inline ComponentLabels label_components(const BinaryMask& mask,
                                        Connectivity conn = Connectivity::k8) {
  const int w = mask.width();
  const int h = mask.height();
  auto m = mask.values();
  ComponentLabels out;
  out.label.assign(m.size(), -1);
  std::vector<std::uint8_t> visited(m.size(), 0);
  std::deque<std::size_t> queue;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i] || visited[i]) continue;
    const int id = static_cast<int>(out.areas.size());
    visited[i] = 1;
    queue.push_back(i);
    members.clear();
    detail::flood(m, w, h, conn, queue, visited, &members);
    for (auto idx : members) out.label[idx] = id;
    out.areas.push_back(members.size());
  }
  return out;
}

/// Keeps only the maximum-area component. Equal areas resolve to the
/// component whose first pixel comes first in raster order.
inline BinaryMask largest_component(const BinaryMask& mask, Connectivity conn = Connectivity::k8) {
  const auto labels = label_components(mask, conn);
  if (labels.areas.empty()) return BinaryMask(mask.width(), mask.height(), 0);
  int best = 0;
  for (int i = 1; i < static_cast<int>(labels.areas.size()); ++i) {
    if (labels.areas[i] > labels.areas[best]) best = i;
  }
  std::vector<std::uint8_t> out(mask.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = labels.label[i] == best ? 1 : 0;
  return BinaryMask(mask.width(), mask.height(), std::move(out));
}

/// Binary reconstruction by dilation: the union of the mask components that
/// intersect the marker. The marker is intersected with the mask first.
inline BinaryMask morphological_reconstruct(const BinaryMask& marker, const BinaryMask& mask,
                                            Connectivity conn = Connectivity::k8) {
  require_same_shape(marker, mask, "morphological_reconstruct");
  auto mk = marker.values();
  auto ms = mask.values();
  std::vector<std::uint8_t> visited(ms.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (mk[i] && ms[i]) {
      visited[i] = 1;
      queue.push_back(i);
    }
  }
  detail::flood(ms, mask.width(), mask.height(), conn, queue, visited);
  return BinaryMask(mask.width(), mask.height(), std::move(visited));
}

}  // namespace dermseg

#endif  // DERMSEG_MORPHOLOGY_HPP_
