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

#ifndef DERMSEG_LOSSES_HPP_
#define DERMSEG_LOSSES_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "dermseg/raster.hpp"

namespace dermseg {

enum class LossKind {
  /// Soft Jaccard (union denominator) plus mean binary cross entropy.
  kJaccardBce,
  /// Soft Jaccard with squared-sum denominator.
  kModifiedJaccard,
};

inline LossKind parse_loss_kind(std::string_view s) {
  if (s == "jaccard_bce") return LossKind::kJaccardBce;
  if (s == "modified_jaccard") return LossKind::kModifiedJaccard;
  throw ValidationError("unknown loss '" + std::string(s) + "'");
}

/// Predictions are clipped to [eps, 1 - eps] before taking logarithms.
inline constexpr double kLogEpsilon = 1e-7;

namespace detail {

inline void check_loss_inputs(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DimensionError("loss: y_true has " + std::to_string(y_true.size()) +
                         " pixels, y_pred has " + std::to_string(y_pred.size()));
  }
  if (y_true.empty()) throw DimensionError("loss: empty input");
}

struct JaccardSums {
  double intersection = 0.0;  // sum t p
  double sum_true = 0.0;      // sum t   (or sum t^2)
  double sum_pred = 0.0;      // sum p   (or sum p^2)
};

inline JaccardSums jaccard_sums(std::span<const double> t, std::span<const double> p, bool squared) {
  JaccardSums s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    s.intersection += t[i] * p[i];
    s.sum_true += squared ? t[i] * t[i] : t[i];
    s.sum_pred += squared ? p[i] * p[i] : p[i];
  }
  return s;
}

// 1 - num/den written as (den - num)/den with den - num expanded, so exact
// cases such as 1 - 2/3 do not pick up a second rounding.
inline double jaccard_term(const JaccardSums& s, const LossCoefficients& c) {
  const double den = s.sum_true + s.sum_pred - s.intersection + c.beta();
  return (s.sum_true + s.sum_pred - 2.0 * s.intersection + c.beta() - c.alpha()) / den;
}

inline std::vector<double> to_doubles(std::span<const float> v) { return {v.begin(), v.end()}; }
inline std::vector<double> to_doubles(std::span<const std::uint8_t> v) { return {v.begin(), v.end()}; }

}  // namespace detail

/// 1 - (sum tp + alpha) / (sum t + sum p - sum tp + beta)
///   - (1/N) sum [t log p + (1 - t) log(1 - p)]
inline double jaccard_bce_loss(std::span<const double> y_true, std::span<const double> y_pred,
                               const LossCoefficients& c) {
  detail::check_loss_inputs(y_true, y_pred);
  const auto s = detail::jaccard_sums(y_true, y_pred, false);
  const double jaccard_term = detail::jaccard_term(s, c);
  double bce = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double p = std::clamp(y_pred[i], kLogEpsilon, 1.0 - kLogEpsilon);
    bce -= y_true[i] * std::log(p) + (1.0 - y_true[i]) * std::log(1.0 - p);
  }
  return jaccard_term + bce / static_cast<double>(y_true.size());
}

/// 1 - (sum tp + alpha) / (sum t^2 + sum p^2 - sum tp + beta)
inline double modified_jaccard_loss(std::span<const double> y_true, std::span<const double> y_pred,
                                    const LossCoefficients& c) {
  detail::check_loss_inputs(y_true, y_pred);
  const auto s = detail::jaccard_sums(y_true, y_pred, true);
  return detail::jaccard_term(s, c);
}

inline double loss(LossKind kind, std::span<const double> y_true, std::span<const double> y_pred,
                   const LossCoefficients& c) {
  return kind == LossKind::kJaccardBce ? jaccard_bce_loss(y_true, y_pred, c)
                                       : modified_jaccard_loss(y_true, y_pred, c);
}

/// Analytic d(loss)/d(y_pred). Where the log clip is active the cross-entropy
/// part is flat and contributes zero.
inline std::vector<double> loss_gradient(LossKind kind, std::span<const double> y_true,
                                         std::span<const double> y_pred,
                                         const LossCoefficients& c) {
  detail::check_loss_inputs(y_true, y_pred);
  const bool squared = kind == LossKind::kModifiedJaccard;
  const auto s = detail::jaccard_sums(y_true, y_pred, squared);
  const double num = s.intersection + c.alpha();
  const double den = s.sum_true + s.sum_pred - s.intersection + c.beta();
  const double den2 = den * den;
  const double n = static_cast<double>(y_true.size());
  std::vector<double> grad(y_true.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double t = y_true[i];
    const double p = y_pred[i];
    const double d_den = squared ? 2.0 * p - t : 1.0 - t;
    grad[i] = -(t * den - num * d_den) / den2;
    if (!squared && p >= kLogEpsilon && p <= 1.0 - kLogEpsilon) {
      grad[i] -= (t / p - (1.0 - t) / (1.0 - p)) / n;
    }
  }
  return grad;
}

inline double jaccard_bce_loss(const BinaryMask& y_true, const ProbabilityMap& y_pred,
                               const LossCoefficients& c = LossCoefficients::lesion()) {
  require_same_shape(y_true, y_pred, "jaccard_bce_loss");
  return jaccard_bce_loss(detail::to_doubles(y_true.values()), detail::to_doubles(y_pred.values()), c);
}

inline double modified_jaccard_loss(const BinaryMask& y_true, const ProbabilityMap& y_pred,
                                    const LossCoefficients& c = LossCoefficients::attribute()) {
  require_same_shape(y_true, y_pred, "modified_jaccard_loss");
  return modified_jaccard_loss(detail::to_doubles(y_true.values()),
                               detail::to_doubles(y_pred.values()), c);
}

inline std::vector<double> loss_gradient(LossKind kind, const BinaryMask& y_true,
                                         const ProbabilityMap& y_pred, const LossCoefficients& c) {
  require_same_shape(y_true, y_pred, "loss_gradient");
  return loss_gradient(kind, detail::to_doubles(y_true.values()),
                       detail::to_doubles(y_pred.values()), c);
}

}  // namespace dermseg

#endif  // DERMSEG_LOSSES_HPP_
