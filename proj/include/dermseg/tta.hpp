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

#ifndef DERMSEG_TTA_HPP_
#define DERMSEG_TTA_HPP_

#include <algorithm>
#include <atomic>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dermseg/augment.hpp"
#include "dermseg/geometry.hpp"
#include "dermseg/preprocess.hpp"
#include "dermseg/raster.hpp"

namespace dermseg {

enum class TtaKind { kIdentity, kHflip, kVflip, kRot90Contrast, kSharpen };

inline constexpr std::array<TtaKind, 5> kAllTtaKinds = {
    TtaKind::kIdentity, TtaKind::kHflip, TtaKind::kVflip, TtaKind::kRot90Contrast,
    TtaKind::kSharpen};

inline std::string_view to_string(TtaKind k) {
  switch (k) {
    case TtaKind::kIdentity: return "identity";
    case TtaKind::kHflip: return "hflip";
    case TtaKind::kVflip: return "vflip";
    case TtaKind::kRot90Contrast: return "rot90_contrast";
    case TtaKind::kSharpen: return "sharpen";
  }
  return "?";
}

inline TtaKind parse_tta_kind(std::string_view s) {
  for (auto k : kAllTtaKinds)
    if (to_string(k) == s) return k;
  throw ValidationError("unknown TTA variant '" + std::string(s) + "'");
}

struct TtaConfig {
  std::vector<TtaKind> variants{kAllTtaKinds.begin(), kAllTtaKinds.end()};
  /// Contrast delta applied to the rotated variant.
  double contrast_strength = 0.5;
  double sharpen_amount = 0.5;
  double sharpen_sigma = 1.0;

  static TtaConfig identity_only() {
    TtaConfig c;
    c.variants = {TtaKind::kIdentity};
    return c;
  }
};

struct TtaVariant {
  TtaKind kind;
  Image image;
};

inline Image tta_forward(TtaKind kind, const Image& image, const TtaConfig& cfg) {
  switch (kind) {
    case TtaKind::kIdentity: return image;
    case TtaKind::kHflip: return hflip(image);
    case TtaKind::kVflip: return vflip(image);
    case TtaKind::kRot90Contrast: {
      PhotometricParams p;
      p.contrast_delta = cfg.contrast_strength;
      return apply_photometric(rot90_ccw(image), p);
    }
    case TtaKind::kSharpen: {
      PhotometricParams p;
      p.unsharp_amount = cfg.sharpen_amount;
      p.unsharp_sigma = cfg.sharpen_sigma;
      return apply_photometric(image, p);
    }
  }
  return image;
}

/// Maps a prediction made on a variant back onto the original pixel grid.
/// Photometric variants need no inverse.
inline ProbabilityMap tta_inverse(TtaKind kind, const ProbabilityMap& map) {
  switch (kind) {
    case TtaKind::kHflip: return hflip(map);
    case TtaKind::kVflip: return vflip(map);
    case TtaKind::kRot90Contrast: return rot90_cw(map);
    default: return map;
  }
}

/// Variants in configuration order; the default order is identity, hflip,
/// vflip, contrast(rot90), sharpen.
inline std::vector<TtaVariant> tta_expand(const Image& image, const TtaConfig& cfg = {}) {
  if (cfg.variants.empty()) throw ValidationError("TTA needs at least one variant");
  std::vector<TtaVariant> out;
  out.reserve(cfg.variants.size());
  for (auto k : cfg.variants) out.push_back({k, tta_forward(k, image, cfg)});
  return out;
}

/// Pixelwise arithmetic mean. Each pixel's values are summed in sorted
/// order, so the result is bit-identical under any permutation of `maps`.
inline ProbabilityMap ensemble_mean(std::span<const ProbabilityMap> maps) {
  if (maps.empty()) throw ValidationError("ensemble of zero maps");
  for (const auto& m : maps) require_same_shape(maps[0], m, "ensemble_mean");
  const std::size_t n = maps[0].pixel_count();
  std::vector<float> out(n);
  std::vector<float> column(maps.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < maps.size(); ++k) column[k] = maps[k].values()[i];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (float v : column) sum += v;
    out[i] = std::clamp(static_cast<float>(sum / static_cast<double>(maps.size())), 0.0f, 1.0f);
  }
  return ProbabilityMap(maps[0].width(), maps[0].height(), std::move(out));
}

inline std::vector<ProbabilityMap> tta_align(std::span<const ProbabilityMap> preds,
                                             std::span<const TtaKind> kinds) {
  if (preds.size() != kinds.size()) {
    throw DimensionError("tta_merge: " + std::to_string(preds.size()) + " maps for " +
                         std::to_string(kinds.size()) + " transform tags");
  }
  std::vector<ProbabilityMap> aligned;
  aligned.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) aligned.push_back(tta_inverse(kinds[i], preds[i]));
  return aligned;
}

inline ProbabilityMap tta_merge(std::span<const ProbabilityMap> preds, std::span<const TtaKind> kinds) {
  const auto aligned = tta_align(preds, kinds);
  return ensemble_mean(aligned);
}

// ---------------------------------------------------------------------------
// Predictor contract
// ---------------------------------------------------------------------------

/// What a predictor sees for one image variant.
struct PredictionInput {
  std::string_view case_id;
  const Image& image;
  const NormalizedImage& normalized;
  TtaKind variant;
};

/// Returns a probability map with the spatial dims of its input. Instances
/// must be safe for concurrent const use.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual ProbabilityMap predict(const PredictionInput& input) const = 0;
  virtual std::vector<ProbabilityMap> predict_batch(std::span<const PredictionInput> inputs) const {
    std::vector<ProbabilityMap> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) out.push_back(predict(in));
    return out;
  }
};

/// Counts raw predictor invocations.
class PredictionAudit {
 public:
  void add(std::size_t n) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::size_t count() const { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::size_t> count_{0};
};

struct PredictOptions {
  TtaConfig tta;
  NormalizationScheme scheme = NormalizationScheme::kUnit;
  NormalizationConstants constants;
  /// Fold count fold_ensemble insists on.
  int expected_folds = 5;
};

/// Runs every TTA variant through `predictor` and returns the predictions
/// mapped back onto the input grid (not yet averaged).
inline std::vector<ProbabilityMap> tta_aligned_predictions(const Predictor& predictor,
                                                           const Image& image,
                                                           std::string_view case_id,
                                                           const PredictOptions& opt,
                                                           PredictionAudit* audit = nullptr) {
  const auto variants = tta_expand(image, opt.tta);
  std::vector<NormalizedImage> normalized;
  normalized.reserve(variants.size());
  for (const auto& v : variants) normalized.push_back(normalize(v.image, opt.scheme, opt.constants));
  std::vector<PredictionInput> inputs;
  std::vector<TtaKind> kinds;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    inputs.push_back({case_id, variants[i].image, normalized[i], variants[i].kind});
    kinds.push_back(variants[i].kind);
  }
  auto preds = predictor.predict_batch(inputs);
  if (preds.size() != inputs.size()) {
    throw PredictorContractError("predictor returned " + std::to_string(preds.size()) +
                                 " maps for " + std::to_string(inputs.size()) + " inputs");
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& v = variants[i].image;
    if (preds[i].width() != v.width() || preds[i].height() != v.height()) {
      throw PredictorContractError(
          "predictor output " + std::to_string(preds[i].width()) + "x" +
          std::to_string(preds[i].height()) + " does not match input " + std::to_string(v.width()) +
          "x" + std::to_string(v.height()) + " for case '" + std::string(case_id) + "' variant " +
          std::string(to_string(variants[i].kind)));
    }
  }
  if (audit) audit->add(preds.size());
  return tta_align(preds, kinds);
}

/// expand -> normalize -> predict -> merge.
inline ProbabilityMap predict_with_tta(const Predictor& predictor, const Image& image,
                                       std::string_view case_id, const PredictOptions& opt = {},
                                       PredictionAudit* audit = nullptr) {
  const auto aligned = tta_aligned_predictions(predictor, image, case_id, opt, audit);
  return ensemble_mean(aligned);
}

/// Mean over folds x TTA variants, taken as one flat average.
inline ProbabilityMap fold_ensemble(std::span<const Predictor* const> folds, const Image& image,
                                    std::string_view case_id, const PredictOptions& opt = {},
                                    PredictionAudit* audit = nullptr) {
  if (static_cast<int>(folds.size()) != opt.expected_folds) {
    throw ValidationError("fold ensemble expects " + std::to_string(opt.expected_folds) +
                          " predictors, got " + std::to_string(folds.size()));
  }
  std::vector<ProbabilityMap> all;
  for (const Predictor* p : folds) {
    auto aligned = tta_aligned_predictions(*p, image, case_id, opt, audit);
    for (auto& m : aligned) all.push_back(std::move(m));
  }
  return ensemble_mean(all);
}

/// Resizes to the model input size, runs the fold ensemble, and resizes the
/// merged map back to the original image size.
inline ProbabilityMap predict_case(std::span<const Predictor* const> folds, const Image& image,
                                   std::string_view case_id, const PredictOptions& opt,
                                   std::optional<ResizeTarget> model_size,
                                   PredictionAudit* audit = nullptr) {
  if (!model_size) return fold_ensemble(folds, image, case_id, opt, audit);
  const auto resized = resize(image, model_size->height, model_size->width, ResizeMode::kBilinear);
  const auto merged = fold_ensemble(folds, resized, case_id, opt, audit);
  return resize(merged, image.height(), image.width(), ResizeMode::kBilinear);
}

}  // namespace dermseg

#endif  // DERMSEG_TTA_HPP_
