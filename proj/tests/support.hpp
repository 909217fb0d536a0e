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

// Test-side generators and independent oracles. Nothing here calls the
// library routine it is meant to check.

#ifndef DERMSEG_TESTS_SUPPORT_HPP_
#define DERMSEG_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "dermseg/raster.hpp"

namespace dermseg::testing {

inline BinaryMask random_mask(std::mt19937_64& gen, int w, int h, double density) {
  std::bernoulli_distribution d(density);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = d(gen) ? 1 : 0;
  return BinaryMask(w, h, std::move(v));
}

inline ProbabilityMap random_map(std::mt19937_64& gen, int w, int h, float lo = 0.0f,
                                 float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = d(gen);
  return ProbabilityMap(w, h, std::move(v));
}

inline Image random_image(std::mt19937_64& gen, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  Image img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(gen));
  return img;
}

inline bool nb(int dx, int dy, int conn) {
  if (dx == 0 && dy == 0) return false;
  if (conn == 4) return dx == 0 || dy == 0;
  return true;
}

/// Naive fixpoint: X <- dilate(X) & mask, starting from marker & mask.
inline BinaryMask fixpoint_reconstruct(const BinaryMask& marker, const BinaryMask& mask, int conn) {
  const int w = mask.width(), h = mask.height();
  std::vector<std::uint8_t> cur(mask.pixel_count());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) cur[y * w + x] = marker(x, y) & mask(x, y);
  for (;;) {
    std::vector<std::uint8_t> next = cur;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!mask(x, y) || cur[y * w + x]) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (!nb(dx, dy, conn)) continue;
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            if (cur[yy * w + xx]) next[y * w + x] = 1;
          }
        }
      }
    }
    if (next == cur) break;
    cur.swap(next);
  }
  return BinaryMask(w, h, std::move(cur));
}

/// Recursive-free flood labelling by repeated min-label propagation.
inline std::vector<int> propagate_labels(const BinaryMask& m, int conn) {
  const int w = m.width(), h = m.height();
  std::vector<int> lab(m.pixel_count(), -1);
  for (int i = 0; i < w * h; ++i)
    if (m.values()[i]) lab[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int& l = lab[y * w + x];
        if (l < 0) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (!nb(dx, dy, conn)) continue;
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            const int o = lab[yy * w + xx];
            if (o >= 0 && o < l) {
              l = o;
              changed = true;
            }
          }
        }
      }
    }
  }
  return lab;
}

inline BinaryMask disk(int w, int h, double cx, double cy, double r) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      v[y * w + x] = ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) ? 1 : 0;
  return BinaryMask(w, h, std::move(v));
}

inline BinaryMask mask_from_rows(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  std::vector<std::uint8_t> v;
  for (const auto& r : rows)
    for (char c : r) v.push_back(c == '#' ? 1 : 0);
  return BinaryMask(w, h, std::move(v));
}

inline BinaryMask oracle_threshold(const ProbabilityMap& m, double t) {
  std::vector<std::uint8_t> v;
  for (float x : m.values()) v.push_back(x >= t ? 1 : 0);
  return BinaryMask(m.width(), m.height(), std::move(v));
}

/// Largest component by label propagation; ties go to the component whose
/// first pixel comes first in raster order.
inline BinaryMask oracle_largest(const BinaryMask& m, int conn) {
  const auto lab = propagate_labels(m, conn);
  std::vector<int> area(lab.size(), 0);
  for (int l : lab)
    if (l >= 0) area[l]++;
  int best = -1;
  for (int l = 0; l < static_cast<int>(area.size()); ++l)
    if (area[l] > 0 && (best < 0 || area[l] > area[best])) best = l;
  std::vector<std::uint8_t> v(lab.size(), 0);
  for (std::size_t i = 0; i < lab.size(); ++i) v[i] = best >= 0 && lab[i] == best;
  return BinaryMask(m.width(), m.height(), std::move(v));
}

inline BinaryMask oracle_lesion_post(const ProbabilityMap& m, double th, double tl, int conn) {
  return fixpoint_reconstruct(oracle_largest(oracle_threshold(m, th), conn),
                              oracle_threshold(m, tl), conn);
}

inline double oracle_jaccard(const BinaryMask& p, const BinaryMask& g) {
  long i = 0, u = 0;
  for (std::size_t k = 0; k < p.pixel_count(); ++k) {
    i += p.values()[k] & g.values()[k];
    u += p.values()[k] | g.values()[k];
  }
  return u == 0 ? 1.0 : double(i) / double(u);
}

struct OraclePick {
  double t_high = 0;
  double t_low = 0;
  double score = -1;
  int evaluated = 0;
};

/// Exhaustive lesion grid search on mean thresholded Jaccard, written
/// without the library's post-processing.
inline OraclePick oracle_grid(const std::vector<ProbabilityMap>& probs,
                              const std::vector<BinaryMask>& gts, const std::vector<double>& ths,
                              const std::vector<double>& tls, double cutoff, int conn) {
  OraclePick best;
  for (double th : ths) {
    for (double tl : tls) {
      if (th < tl) continue;
      ++best.evaluated;
      double s = 0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        const double j = oracle_jaccard(oracle_lesion_post(probs[i], th, tl, conn), gts[i]);
        s += j >= cutoff ? j : 0.0;
      }
      s /= static_cast<double>(probs.size());
      const bool take = s > best.score ||
                        (s == best.score && (th > best.t_high || (th == best.t_high && tl > best.t_low)));
      if (take) best = {th, tl, s, best.evaluated};
    }
  }
  return best;
}

/// Two-level planted fixture: 0.9 inside a single disk, 0.4 elsewhere.
inline void planted_fixture(int n, std::vector<ProbabilityMap>& probs, std::vector<BinaryMask>& gts) {
  for (int i = 0; i < n; ++i) {
    auto g = disk(32, 24, 10 + i % 7, 9 + i % 5, 4 + i % 4);
    std::vector<float> v;
    for (auto b : g.values()) v.push_back(b ? 0.9f : 0.4f);
    probs.emplace_back(32, 24, std::move(v));
    gts.push_back(std::move(g));
  }
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("dermseg-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace dermseg::testing

#endif  // DERMSEG_TESTS_SUPPORT_HPP_
