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

#ifndef DERMSEG_POSTPROCESS_HPP_
#define DERMSEG_POSTPROCESS_HPP_

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dermseg/metrics.hpp"
#include "dermseg/morphology.hpp"
#include "dermseg/parallel.hpp"
#include "dermseg/raster.hpp"

namespace dermseg {

/// marker = largest component of (prob >= T_H); mask = (prob >= T_L);
/// result = reconstruct(marker, mask).
inline BinaryMask lesion_postprocess(const ProbabilityMap& prob, const ThresholdPair& t,
                                     Connectivity conn = Connectivity::k8) {
  const auto marker = largest_component(threshold(prob, t.t_high()), conn);
  const auto mask = threshold(prob, t.t_low());
  return morphological_reconstruct(marker, mask, conn);
}

/// Like lesion_postprocess but keeps every marker object.
inline BinaryMask attribute_postprocess(const ProbabilityMap& prob, const ThresholdPair& t,
                                        Connectivity conn = Connectivity::k8) {
  return morphological_reconstruct(threshold(prob, t.t_high()), threshold(prob, t.t_low()), conn);
}

/// Restricts the attribute map to the lesion before thresholding.
inline BinaryMask attribute_postprocess(const ProbabilityMap& prob, const BinaryMask& lesion,
                                        const ThresholdPair& t,
                                        Connectivity conn = Connectivity::k8) {
  return attribute_postprocess(pixelwise_multiply(prob, lesion), t, conn);
}

enum class PostprocessKind { kLesion, kAttribute };

enum class GridObjective {
  kMeanThresholdedJaccard,
  kMeanJaccard,
  kPooledJaccard,
  kPooledDice,
};

inline GridObjective parse_objective(std::string_view s) {
  if (s == "mean_thresholded_jaccard") return GridObjective::kMeanThresholdedJaccard;
  if (s == "mean_jaccard") return GridObjective::kMeanJaccard;
  if (s == "pooled_jaccard") return GridObjective::kPooledJaccard;
  if (s == "pooled_dice") return GridObjective::kPooledDice;
  throw ValidationError("unknown grid-search objective '" + std::string(s) + "'");
}

inline std::string_view to_string(GridObjective o) {
  switch (o) {
    case GridObjective::kMeanThresholdedJaccard: return "mean_thresholded_jaccard";
    case GridObjective::kMeanJaccard: return "mean_jaccard";
    case GridObjective::kPooledJaccard: return "pooled_jaccard";
    case GridObjective::kPooledDice: return "pooled_dice";
  }
  return "?";
}

inline GridObjective default_objective(PostprocessKind kind) {
  return kind == PostprocessKind::kLesion ? GridObjective::kMeanThresholdedJaccard
                                          : GridObjective::kPooledJaccard;
}

/// T_H in {0.8, 0.9, 0.95, 0.975, 0.99, 0.995, 0.996}.
inline std::vector<double> default_t_high_grid() {
  return {0.8, 0.9, 0.95, 0.975, 0.99, 0.995, 0.996};
}

/// T_L from 0.30 to 0.85 in steps of 0.05 (12 values).
inline std::vector<double> default_t_low_grid() {
  std::vector<double> out;
  for (int i = 0; i <= 11; ++i) out.push_back(std::round((0.30 + 0.05 * i) * 100.0) / 100.0);
  return out;
}

struct GridSearchSpec {
  std::vector<double> t_high_candidates = default_t_high_grid();
  std::vector<double> t_low_candidates = default_t_low_grid();
  GridObjective objective = GridObjective::kMeanThresholdedJaccard;
  double jaccard_cutoff = kDefaultJaccardCutoff;
  Connectivity connectivity = Connectivity::k8;

  void validate() const {
    if (t_high_candidates.empty() || t_low_candidates.empty())
      throw ValidationError("grid search needs at least one candidate per threshold");
    for (double v : t_high_candidates)
      if (!(v > 0.0 && v < 1.0)) throw ParameterError("T_H candidate outside (0,1)");
    for (double v : t_low_candidates)
      if (!(v > 0.0 && v < 1.0)) throw ParameterError("T_L candidate outside (0,1)");
  }

  /// Candidate pairs in grid order, skipping T_H < T_L.
  std::vector<ThresholdPair> valid_pairs() const {
    std::vector<ThresholdPair> out;
    for (double th : t_high_candidates)
      for (double tl : t_low_candidates)
        if (th >= tl) out.emplace_back(th, tl);
    return out;
  }
};

/// Inputs for one grid search. `lesions` is only used on the attribute path
/// and, when present, restricts each map to its lesion.
struct GridSearchData {
  std::span<const ProbabilityMap> probs;
  std::span<const BinaryMask> gts;
  std::span<const BinaryMask> lesions = {};
};

struct GridRow {
  double t_high;
  double t_low;
  double objective;
};

struct GridSearchResult {
  ThresholdPair best;
  double objective;
  std::vector<GridRow> rows;
};

/// Objective value of one threshold pair over the whole dataset.
inline double evaluate_thresholds(const GridSearchData& data, PostprocessKind kind,
                                  const ThresholdPair& pair, GridObjective objective,
                                  double cutoff, Connectivity conn) {
  ConfusionCounts pooled;
  double sum_j = 0.0;
  double sum_tj = 0.0;
  for (std::size_t i = 0; i < data.probs.size(); ++i) {
    BinaryMask pred = [&] {
      if (kind == PostprocessKind::kLesion) return lesion_postprocess(data.probs[i], pair, conn);
      if (!data.lesions.empty()) {
        return attribute_postprocess(data.probs[i], data.lesions[i], pair, conn);
      }
      return attribute_postprocess(data.probs[i], pair, conn);
    }();
    const auto c = confusion(pred, data.gts[i]);
    pooled += c;
    const double j = jaccard_from(c);
    sum_j += j;
    sum_tj += thresholded_jaccard(j, cutoff);
  }
  const double n = static_cast<double>(data.probs.size());
  switch (objective) {
    case GridObjective::kMeanThresholdedJaccard: return sum_tj / n;
    case GridObjective::kMeanJaccard: return sum_j / n;
    case GridObjective::kPooledJaccard: return jaccard_from(pooled);
    case GridObjective::kPooledDice: return dice_from(pooled);
  }
  return 0.0;
}

/// Exhaustive search over every valid (T_H, T_L) pair. Ties go to the higher
/// T_H, then the higher T_L. Pairs are evaluated on up to `jobs` threads; the
/// result does not depend on scheduling.
inline GridSearchResult grid_search(const GridSearchData& data, const GridSearchSpec& spec,
                                    PostprocessKind kind, int jobs = 1) {
  spec.validate();
  if (data.probs.empty()) throw ValidationError("grid search: no prediction maps");
  if (data.probs.size() != data.gts.size())
    throw DimensionError("grid search: maps and ground truths differ in count");
  if (!data.lesions.empty() && data.lesions.size() != data.probs.size())
    throw DimensionError("grid search: lesion masks and maps differ in count");
  const auto pairs = spec.valid_pairs();
  if (pairs.empty()) throw ValidationError("grid search: every pair has T_H < T_L");

  std::vector<double> scores(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    scores[i] = evaluate_thresholds(data, kind, pairs[i], spec.objective, spec.jaccard_cutoff,
                                    spec.connectivity);
  });

  GridSearchResult result{pairs[0], scores[0], {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    result.rows.push_back({pairs[i].t_high(), pairs[i].t_low(), scores[i]});
    const auto& p = pairs[i];
    const auto& b = result.best;
    const bool better =
        scores[i] > result.objective ||
        (scores[i] == result.objective &&
         (p.t_high() > b.t_high() || (p.t_high() == b.t_high() && p.t_low() > b.t_low())));
    if (better) {
      result.best = p;
      result.objective = scores[i];
    }
  }
  return result;
}

/// CSV with one row per evaluated pair; the chosen pair has selected=1.
inline void write_grid_csv(const GridSearchResult& r, std::ostream& out) {
  out << "t_high,t_low,objective,selected\n";
  char buf[128];
  for (const auto& row : r.rows) {
    const bool sel = row.t_high == r.best.t_high() && row.t_low == r.best.t_low();
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.17g,%d\n", row.t_high, row.t_low, row.objective,
                  sel ? 1 : 0);
    out << buf;
  }
}

}  // namespace dermseg

#endif  // DERMSEG_POSTPROCESS_HPP_
