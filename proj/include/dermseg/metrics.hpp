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

#ifndef DERMSEG_METRICS_HPP_
#define DERMSEG_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dermseg/raster.hpp"

namespace dermseg {

inline constexpr double kDefaultJaccardCutoff = 0.65;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "confusion");
  ConfusionCounts c;
  auto p = pred.values();
  auto g = gt.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

struct MetricReport {
  double jaccard = 0.0;
  double thresholded_jaccard = 0.0;
  double dice = 0.0;
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

/// J if J >= cutoff, else 0.
inline double thresholded_jaccard(double jaccard, double cutoff) {
  return jaccard >= cutoff ? jaccard : 0.0;
}

namespace detail {

// 0/0 ratios (nothing to find, nothing found) count as perfect agreement.
inline double ratio_or_one(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

inline double jaccard_from(const ConfusionCounts& c) {
  return detail::ratio_or_one(c.tp, c.tp + c.fp + c.fn);
}

inline double dice_from(const ConfusionCounts& c) {
  return detail::ratio_or_one(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

inline MetricReport metrics_from_confusion(const ConfusionCounts& c,
                                           double cutoff = kDefaultJaccardCutoff) {
  MetricReport r;
  r.jaccard = jaccard_from(c);
  r.thresholded_jaccard = thresholded_jaccard(r.jaccard, cutoff);
  r.dice = dice_from(c);
  r.accuracy = detail::ratio_or_one(c.tp + c.tn, c.total());
  r.sensitivity = detail::ratio_or_one(c.tp, c.tp + c.fn);
  r.specificity = detail::ratio_or_one(c.tn, c.tn + c.fp);
  return r;
}

struct PooledMetrics {
  double jaccard = 0.0;
  double dice = 0.0;
  ConfusionCounts counts;
};

inline PooledMetrics pooled_from_confusion(const ConfusionCounts& c) {
  return {jaccard_from(c), dice_from(c), c};
}

/// Confusion counts are summed over every image first; J and D are computed
/// once from the pooled counts.
inline PooledMetrics pooled_attribute_metrics(std::span<const BinaryMask> preds,
                                              std::span<const BinaryMask> gts) {
  if (preds.size() != gts.size()) {
    throw DimensionError("pooled metrics: " + std::to_string(preds.size()) + " predictions vs " +
                         std::to_string(gts.size()) + " ground truths");
  }
  ConfusionCounts total;
  for (std::size_t i = 0; i < preds.size(); ++i) total += confusion(preds[i], gts[i]);
  return pooled_from_confusion(total);
}

inline MetricReport mean_report(std::span<const MetricReport> reports) {
  if (reports.empty()) throw ValidationError("cannot average zero metric reports");
  MetricReport m;
  for (const auto& r : reports) {
    m.jaccard += r.jaccard;
    m.thresholded_jaccard += r.thresholded_jaccard;
    m.dice += r.dice;
    m.accuracy += r.accuracy;
    m.sensitivity += r.sensitivity;
    m.specificity += r.specificity;
  }
  const double n = static_cast<double>(reports.size());
  m.jaccard /= n;
  m.thresholded_jaccard /= n;
  m.dice /= n;
  m.accuracy /= n;
  m.sensitivity /= n;
  m.specificity /= n;
  return m;
}

/// Per-image reports, then their arithmetic mean.
inline std::vector<MetricReport> per_image_reports(std::span<const BinaryMask> preds,
                                                   std::span<const BinaryMask> gts,
                                                   double cutoff = kDefaultJaccardCutoff) {
  if (preds.size() != gts.size()) {
    throw DimensionError("evaluate: " + std::to_string(preds.size()) + " predictions vs " +
                         std::to_string(gts.size()) + " ground truths");
  }
  std::vector<MetricReport> out;
  out.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out.push_back(metrics_from_confusion(confusion(preds[i], gts[i]), cutoff));
  }
  return out;
}

inline MetricReport evaluate_task1(std::span<const BinaryMask> preds, std::span<const BinaryMask> gts,
                                   double cutoff = kDefaultJaccardCutoff) {
  if (preds.empty()) throw ValidationError("evaluate_task1: empty image list");
  const auto reports = per_image_reports(preds, gts, cutoff);
  return mean_report(reports);
}

}  // namespace dermseg

#endif  // DERMSEG_METRICS_HPP_
