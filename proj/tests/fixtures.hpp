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

// Synthetic predictors, images and graph mutations shared by the unit and
// acceptance suites.

#ifndef DERMSEG_TESTS_FIXTURES_HPP_
#define DERMSEG_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dermseg/arch.hpp"
#include "dermseg/geometry.hpp"
#include "dermseg/manifest.hpp"
#include "dermseg/png_io.hpp"
#include "dermseg/tta.hpp"
#include "support.hpp"

namespace dermseg::testing {

/// [1 2 1] x [1 2 1] blur of R+G+B with reflected borders, in integers. The
/// kernel and the border rule are symmetric under flips and quarter turns,
/// so this predictor commutes with them exactly.
class EquivariantPredictor : public Predictor {
 public:
  ProbabilityMap predict(const PredictionInput& in) const override {
    const Image& img = in.image;
    const int w = img.width(), h = img.height();
    static constexpr int k[3] = {1, 2, 1};
    std::vector<float> out(img.pixel_count());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        long acc = 0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = reflect_index(x + dx, w), yy = reflect_index(y + dy, h);
            acc += long(k[dx + 1]) * k[dy + 1] * (img(xx, yy, 0) + img(xx, yy, 1) + img(xx, yy, 2));
          }
        out[y * w + x] = static_cast<float>(static_cast<double>(acc) / (16.0 * 765.0));
      }
    return ProbabilityMap(w, h, std::move(out));
  }
};

class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(float v) : v_(v) {}
  ProbabilityMap predict(const PredictionInput& in) const override {
    return ProbabilityMap(in.image.width(), in.image.height(), v_);
  }

 private:
  float v_;
};

class WrongSizePredictor : public Predictor {
 public:
  ProbabilityMap predict(const PredictionInput& in) const override {
    return ProbabilityMap(in.image.width() + 1, in.image.height(), 0.5f);
  }
};

/// Bright skin-toned field with a dark planted disk and mild texture.
inline Image disk_lesion_image(int w, int h, double cx, double cy, double r, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> jitter(-6, 6);
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const bool in = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
      const int base[3] = {in ? 90 : 225, in ? 55 : 180, in ? 40 : 160};
      for (int c = 0; c < 3; ++c) img(x, y, c) = static_cast<std::uint8_t>(base[c] + jitter(gen));
    }
  return img;
}

struct PlantedCase {
  std::string case_id;
  Image image;
  BinaryMask lesion;
  BinaryMask streaks;
};

/// Disk lesions at random positions; every other case also carries a small
/// streak blob inside the lesion.
inline std::vector<PlantedCase> planted_disk_cases(int n, int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PlantedCase> out;
  for (int i = 0; i < n; ++i) {
    const double r = std::min(w, h) * (0.18 + 0.12 * u(gen));
    const double cx = r + 2 + (w - 2 * r - 4) * u(gen);
    const double cy = r + 2 + (h - 2 * r - 4) * u(gen);
    char id[32];
    std::snprintf(id, sizeof id, "case_%03d", i);
    out.push_back({id, disk_lesion_image(w, h, cx, cy, r, gen()), disk(w, h, cx, cy, r),
                   i % 2 ? disk(w, h, cx + r / 3, cy, r / 4) : BinaryMask(w, h)});
  }
  return out;
}

/// Writes images/, masks/ and manifest.jsonl under `dir`.
inline void write_planted_dataset(const std::filesystem::path& dir,
                                  const std::vector<PlantedCase>& cases, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "masks");
  Manifest m;
  m.seed = seed;
  for (const auto& c : cases) {
    DatasetRecord r;
    r.case_id = c.case_id;
    r.image_path = "images/" + c.case_id + ".png";
    r.lesion_gt_path = "masks/" + c.case_id + "_lesion.png";
    r.attribute_gt_paths[index_of(AttributeKind::kStreaks)] = "masks/" + c.case_id + "_streaks.png";
    r.attribute_present[index_of(AttributeKind::kStreaks)] = c.streaks.any();
    write_image(c.image, dir / r.image_path);
    write_mask(c.lesion, dir / *r.lesion_gt_path);
    write_mask(c.streaks, dir / *r.attribute_path(AttributeKind::kStreaks));
    m.records.push_back(r);
  }
  save_manifest(m, dir / "manifest.jsonl");
}

inline std::size_t png_count(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.path().extension() == ".png";
  return n;
}

/// Relative path and contents of every regular file below `root`, sorted.
inline std::vector<std::pair<std::string, std::string>> tree_digest(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file())
      out.emplace_back(std::filesystem::relative(e.path(), root).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Graph mutations on the JSON form.

inline nlohmann::json drop_decoder_upsample(const arch::ArchGraph& g, const std::string& up) {
  auto j = nlohmann::json::parse(arch::graph_to_json(g).dump());
  std::string src, dst;
  for (const auto& e : j["edges"]) {
    if (e["to"] == up) src = e["from"];
    if (e["from"] == up) dst = e["to"];
  }
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& n : j["nodes"])
    if (n["id"] != up) nodes.push_back(n);
  for (const auto& e : j["edges"]) {
    if (e["to"] == up) continue;
    if (e["from"] == up) {
      auto f = e;
      f["from"] = src;
      edges.push_back(f);
    } else {
      edges.push_back(e);
    }
  }
  j["nodes"] = nodes;
  j["edges"] = edges;
  return j;
}

inline nlohmann::json remove_bottleneck(const arch::ArchGraph& g, const std::string& bn) {
  auto j = nlohmann::json::parse(arch::graph_to_json(g).dump());
  std::string src, dst;
  for (const auto& e : j["edges"]) {
    if (e["to"] == bn) src = e["from"];
    if (e["from"] == bn) dst = e["to"];
  }
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& n : j["nodes"])
    if (n["id"] != bn) nodes.push_back(n);
  for (const auto& e : j["edges"])
    if (e["to"] != bn && e["from"] != bn) edges.push_back(e);
  edges.push_back({{"from", src}, {"to", dst}, {"skip", true}});
  j["nodes"] = nodes;
  j["edges"] = edges;
  return j;
}

inline nlohmann::json merge_to_concat(const arch::ArchGraph& g, const std::string& add) {
  auto j = nlohmann::json::parse(arch::graph_to_json(g).dump());
  for (auto& n : j["nodes"])
    if (n["id"] == add) n["kind"] = "concat";
  return j;
}

/// Prefixes every id and reverses node order.
inline nlohmann::json relabel(const nlohmann::json& in, const std::string& prefix) {
  auto j = in;
  nlohmann::json nodes = nlohmann::json::array();
  for (auto it = j["nodes"].rbegin(); it != j["nodes"].rend(); ++it) {
    auto n = *it;
    n["id"] = prefix + n["id"].get<std::string>();
    nodes.push_back(n);
  }
  for (auto& e : j["edges"]) {
    e["from"] = prefix + e["from"].get<std::string>();
    e["to"] = prefix + e["to"].get<std::string>();
  }
  j["nodes"] = nodes;
  return j;
}

}  // namespace dermseg::testing

#endif  // DERMSEG_TESTS_FIXTURES_HPP_
