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

#ifndef DERMSEG_CONFIG_HPP_
#define DERMSEG_CONFIG_HPP_

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "dermseg/augment.hpp"
#include "dermseg/metrics.hpp"
#include "dermseg/postprocess.hpp"
#include "dermseg/predictors.hpp"
#include "dermseg/preprocess.hpp"
#include "dermseg/tta.hpp"

namespace dermseg {

struct PreprocessConfig {
  NormalizationConstants constants;
  std::string scheme = "unit";
  bool resize_to_task = true;
  std::array<int, 2> lesion_size{192, 256};
  std::array<int, 2> attribute_size{384, 576};

  ResizeTarget target(Task t) const {
    const auto& s = t == Task::kLesion ? lesion_size : attribute_size;
    return {s[0], s[1]};
  }
};

struct PostprocessConfig {
  std::vector<double> t_high_grid = default_t_high_grid();
  std::vector<double> t_low_grid = default_t_low_grid();
  int connectivity = 8;
  /// Empty selects the task default.
  std::string objective;
  bool restrict_to_lesion = true;
};

struct MetricsConfig {
  double jaccard_cutoff = kDefaultJaccardCutoff;
  std::array<int, 2> attribute_eval_size{256, 256};
};

struct TtaSection {
  std::vector<std::string> variants{"identity", "hflip", "vflip", "rot90_contrast", "sharpen"};
  double contrast_strength = 0.5;
  double sharpen_amount = 0.5;
  double sharpen_sigma = 1.0;

  TtaConfig to_tta() const {
    TtaConfig c;
    c.variants.clear();
    for (const auto& v : variants) c.variants.push_back(parse_tta_kind(v));
    c.contrast_strength = contrast_strength;
    c.sharpen_amount = sharpen_amount;
    c.sharpen_sigma = sharpen_sigma;
    return c;
  }
};

struct EnsembleConfig {
  int folds = 5;
};

/// Every tunable constant of the pipeline, one section per module.
struct PipelineConfig {
  PreprocessConfig preprocess;
  AugmentConfig augment;
  PostprocessConfig postprocess;
  MetricsConfig metrics;
  TtaSection tta;
  EnsembleConfig ensemble;
  BaselineOptions baseline;
};

// Field visitors shared by the reader and the writer.

template <typename V>
void visit_fields(RoutineSwitch& s, V& v) {
  v("enabled", s.enabled);
  v("probability", s.probability);
}

template <typename V>
void visit_fields(NormalizationConstants& c, V& v) {
  v("channel_mean", c.channel_mean);
  v("unit_mean", c.unit_mean);
  v("unit_std", c.unit_std);
}

template <typename V>
void visit_fields(PreprocessConfig& c, V& v) {
  visit_fields(c.constants, v);
  v("scheme", c.scheme);
  v("resize_to_task", c.resize_to_task);
  v("lesion_size", c.lesion_size);
  v("attribute_size", c.attribute_size);
}

template <typename V>
void visit_fields(AugmentConfig& c, V& v) {
  v.section("hflip", c.hflip);
  v.section("vflip", c.vflip);
  v.section("rotation", c.rotation);
  v("rotation_max_deg", c.rotation_max_deg);
  v.section("zoom", c.zoom);
  v("zoom_min", c.zoom_min);
  v("zoom_max", c.zoom_max);
  v.section("translate", c.translate);
  v("translate_max", c.translate_max);
  v.section("shear", c.shear);
  v("shear_max", c.shear_max);
  v.section("channel_shift", c.channel_shift);
  v("channel_shift_max", c.channel_shift_max);
  v.section("intensity", c.intensity);
  v("intensity_min", c.intensity_min);
  v("intensity_max", c.intensity_max);
  v.section("contrast", c.contrast);
  v("contrast_max", c.contrast_max);
  v("contrast_low_pct", c.contrast_low_pct);
  v("contrast_high_pct", c.contrast_high_pct);
  v.section("sharpness", c.sharpness);
  v("blur_sigma_min", c.blur_sigma_min);
  v("blur_sigma_max", c.blur_sigma_max);
  v("unsharp_min", c.unsharp_min);
  v("unsharp_max", c.unsharp_max);
  v("unsharp_sigma", c.unsharp_sigma);
  v.section("noise", c.noise);
  v("gaussian_sigma_max", c.gaussian_sigma_max);
  v("speckle_sigma_max", c.speckle_sigma_max);
  v("salt_pepper_max", c.salt_pepper_max);
  v.section("illumination", c.illumination);
  v("illumination_strength", c.illumination_strength);
  v.section("hair", c.hair);
  v("hair_count_min", c.hair_count_min);
  v("hair_count_max", c.hair_count_max);
  v("hair_thickness_min", c.hair_thickness_min);
  v("hair_thickness_max", c.hair_thickness_max);
  v("hair_darkness_min", c.hair_darkness_min);
  v("hair_darkness_max", c.hair_darkness_max);
  v("hair_curliness", c.hair_curliness);
  v("hair_light_probability", c.hair_light_probability);
}

template <typename V>
void visit_fields(PostprocessConfig& c, V& v) {
  v("t_high_grid", c.t_high_grid);
  v("t_low_grid", c.t_low_grid);
  v("connectivity", c.connectivity);
  v("objective", c.objective);
  v("restrict_to_lesion", c.restrict_to_lesion);
}

template <typename V>
void visit_fields(MetricsConfig& c, V& v) {
  v("jaccard_cutoff", c.jaccard_cutoff);
  v("attribute_eval_size", c.attribute_eval_size);
}

template <typename V>
void visit_fields(TtaSection& c, V& v) {
  v("variants", c.variants);
  v("contrast_strength", c.contrast_strength);
  v("sharpen_amount", c.sharpen_amount);
  v("sharpen_sigma", c.sharpen_sigma);
}

template <typename V>
void visit_fields(EnsembleConfig& c, V& v) {
  v("folds", c.folds);
}

template <typename V>
void visit_fields(BaselineOptions& c, V& v) {
  v("sigma_fraction", c.sigma_fraction);
  v("background_pct", c.background_pct);
  v("foreground_pct", c.foreground_pct);
  v("min_contrast", c.min_contrast);
}

template <typename V>
void visit_fields(PipelineConfig& c, V& v) {
  v.section("preprocess", c.preprocess);
  v.section("augment", c.augment);
  v.section("postprocess", c.postprocess);
  v.section("metrics", c.metrics);
  v.section("tta", c.tta);
  v.section("ensemble", c.ensemble);
  v.section("baseline", c.baseline);
}

namespace detail {

class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError("config: " + where() + " must be an object");
  }

  template <typename T>
  void operator()(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config: bad value for " + where() + key + ": " + e.what());
    }
  }

  template <typename S>
  void section(const char* key, S& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    ConfigReader sub(j_.at(key), path_ + key + ".");
    visit_fields(out, sub);
    sub.finish();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ValidationError("config: unknown key " + path_ + key);
    }
  }

 private:
  std::string where() const { return path_.empty() ? "top level" : path_; }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

class ConfigWriter {
 public:
  explicit ConfigWriter(nlohmann::ordered_json& j) : j_(j) {}

  template <typename T>
  void operator()(const char* key, T& value) {
    j_[key] = value;
  }

  template <typename S>
  void section(const char* key, S& value) {
    nlohmann::ordered_json sub = nlohmann::ordered_json::object();
    ConfigWriter w(sub);
    visit_fields(value, w);
    j_[key] = sub;
  }

 private:
  nlohmann::ordered_json& j_;
};

}  // namespace detail

inline void validate_config(const PipelineConfig& c) {
  parse_scheme(c.preprocess.scheme);
  for (auto s : {c.preprocess.lesion_size, c.preprocess.attribute_size, c.metrics.attribute_eval_size})
    if (s[0] < 1 || s[1] < 1) throw ValidationError("config: sizes must be positive");
  parse_connectivity(c.postprocess.connectivity);
  if (!c.postprocess.objective.empty()) parse_objective(c.postprocess.objective);
  c.tta.to_tta();
  if (c.tta.variants.empty()) throw ValidationError("config: tta.variants is empty");
  if (c.ensemble.folds < 1) throw ValidationError("config: ensemble.folds must be >= 1");
  if (!(c.metrics.jaccard_cutoff >= 0.0 && c.metrics.jaccard_cutoff <= 1.0))
    throw ValidationError("config: metrics.jaccard_cutoff must lie in [0,1]");
  auto aug = c.augment;
  for (auto* s : aug.switches())
    if (!(s->probability >= 0.0 && s->probability <= 1.0))
      throw ValidationError("config: augment probabilities must lie in [0,1]");
  GridSearchSpec spec;
  spec.t_high_candidates = c.postprocess.t_high_grid;
  spec.t_low_candidates = c.postprocess.t_low_grid;
  spec.validate();
}

inline PipelineConfig parse_config(const nlohmann::json& j) {
  PipelineConfig c;
  detail::ConfigReader r(j, "");
  visit_fields(c, r);
  r.finish();
  validate_config(c);
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

inline nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  PipelineConfig copy = c;
  detail::ConfigWriter w(j);
  visit_fields(copy, w);
  return j;
}

}  // namespace dermseg

#endif  // DERMSEG_CONFIG_HPP_
