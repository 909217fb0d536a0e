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

#ifndef DERMSEG_PREDICTORS_HPP_
#define DERMSEG_PREDICTORS_HPP_

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dermseg/augment.hpp"
#include "dermseg/filters.hpp"
#include "dermseg/png_io.hpp"
#include "dermseg/tta.hpp"

namespace dermseg {

struct BaselineOptions {
  /// Blur sigma as a fraction of the shorter image side (at least 1 px).
  double sigma_fraction = 0.01;
  /// Percentiles of blurred luminance taken as skin and lesion references.
  double background_pct = 90.0;
  double foreground_pct = 1.0;
  /// Below this luminance spread the image is treated as featureless.
  double min_contrast = 8.0;
};

/// Classical dark-lesion saliency: blurred luminance, rescaled so the
/// background reference maps to 0 and the darkest reference to 1. Invariant
/// to affine intensity changes that do not clip.
inline ProbabilityMap baseline_saliency(const Image& image, const BaselineOptions& opt = {}) {
  Raster<double, 1> gray(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      gray(x, y) = (image(x, y, 0) + image(x, y, 1) + image(x, y, 2)) / 3.0;
  const double sigma =
      std::max(1.0, opt.sigma_fraction * std::min(image.width(), image.height()));
  const auto blurred = gaussian_blur(gray, sigma);
  std::vector<double> samples(blurred.data().begin(), blurred.data().end());
  const double bg = percentile(samples, opt.background_pct);
  const double fg = percentile(std::move(samples), opt.foreground_pct);
  std::vector<float> out(image.pixel_count(), 0.0f);
  if (bg - fg >= opt.min_contrast) {
    auto b = blurred.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<float>(std::clamp((bg - b[i]) / (bg - fg), 0.0, 1.0));
    }
  }
  return ProbabilityMap(image.width(), image.height(), std::move(out));
}

class BaselinePredictor : public Predictor {
 public:
  explicit BaselinePredictor(BaselineOptions opt = {}) : opt_(opt) {}
  ProbabilityMap predict(const PredictionInput& input) const override {
    return baseline_saliency(input.image, opt_);
  }

 private:
  BaselineOptions opt_;
};

/// Serves stored maps `<directory>/<case_id>.png`. The stored map is taken
/// as the prediction for the untransformed image and is moved with the
/// variant's geometry, so the fixture behaves like an equivariant model.
class FixturePredictor : public Predictor {
 public:
  explicit FixturePredictor(std::filesystem::path directory) : dir_(std::move(directory)) {
    if (!std::filesystem::is_directory(dir_)) {
      throw PredictorContractError("fixture directory " + dir_.string() + " does not exist");
    }
  }

  ProbabilityMap predict(const PredictionInput& input) const override {
    const auto path = dir_ / (std::string(input.case_id) + ".png");
    if (!std::filesystem::exists(path)) {
      throw PredictorContractError("missing fixture for case '" + std::string(input.case_id) +
                                   "' in " + dir_.string());
    }
    const auto map = read_probmap(path);
    switch (input.variant) {
      case TtaKind::kHflip: return hflip(map);
      case TtaKind::kVflip: return vflip(map);
      case TtaKind::kRot90Contrast: return rot90_ccw(map);
      default: return map;
    }
  }

 private:
  std::filesystem::path dir_;
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace detail

/// External model. For each batch the variant images are written as PNGs,
/// their paths are fed to `command` on stdin (one per line), and the command
/// must print one 16-bit probability-map path per input line on stdout, in
/// the same order.
class CommandPredictor : public Predictor {
 public:
  CommandPredictor(std::string command, std::filesystem::path work_dir)
      : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

  ProbabilityMap predict(const PredictionInput& input) const override {
    return predict_batch(std::span<const PredictionInput>(&input, 1)).front();
  }

  std::vector<ProbabilityMap> predict_batch(std::span<const PredictionInput> inputs) const override {
    namespace fs = std::filesystem;
    const fs::path dir = work_dir_ / ("batch-" + std::to_string(next_batch_++));
    fs::create_directories(dir);
    const fs::path list = dir / "inputs.txt";
    const fs::path outputs = dir / "outputs.txt";
    {
      std::ofstream lf(list);
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        const fs::path img = fs::absolute(dir / (std::to_string(i) + ".png"));
        write_image(inputs[i].image, img);
        lf << img.string() << '\n';
      }
    }
    const std::string cmd = command_ + " < " + detail::shell_quote(list.string()) + " > " +
                            detail::shell_quote(outputs.string());
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      throw PredictorContractError("predictor command failed with status " + std::to_string(rc) +
                                   ": " + command_);
    }
    std::ifstream of(outputs);
    std::vector<ProbabilityMap> maps;
    std::string line;
    while (std::getline(of, line)) {
      if (line.empty()) continue;
      try {
        maps.push_back(read_probmap(line));
      } catch (const Error& e) {
        throw PredictorContractError(std::string("predictor output unreadable: ") + e.what());
      }
    }
    if (maps.size() != inputs.size()) {
      throw PredictorContractError("predictor command printed " + std::to_string(maps.size()) +
                                   " paths for " + std::to_string(inputs.size()) + " inputs");
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return maps;
  }

 private:
  std::string command_;
  std::filesystem::path work_dir_;
  mutable std::atomic<std::size_t> next_batch_{0};
};

}  // namespace dermseg

#endif  // DERMSEG_PREDICTORS_HPP_
