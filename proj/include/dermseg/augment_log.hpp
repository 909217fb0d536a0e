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

#ifndef DERMSEG_AUGMENT_LOG_HPP_
#define DERMSEG_AUGMENT_LOG_HPP_

#include <string>

#include "json.hpp"

#include "dermseg/augment.hpp"

// JSON form of AugmentationParams. Doubles are written with round-trip
// precision so a logged augmentation replays bit-exactly.

namespace dermseg {

inline std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kSpeckle: return "speckle";
    case NoiseKind::kSaltPepper: return "salt_pepper";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  for (auto k : {NoiseKind::kGaussian, NoiseKind::kSpeckle, NoiseKind::kSaltPepper})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown noise kind '" + std::string(s) + "'");
}

inline std::string_view to_string(IlluminationKind k) {
  return k == IlluminationKind::kAxial ? "axial" : "radial";
}

inline IlluminationKind parse_illumination_kind(std::string_view s) {
  if (s == "axial") return IlluminationKind::kAxial;
  if (s == "radial") return IlluminationKind::kRadial;
  throw ValidationError("unknown illumination kind '" + std::string(s) + "'");
}

inline nlohmann::ordered_json to_json(const AugmentationParams& p) {
  nlohmann::ordered_json j;
  const auto& g = p.geometric;
  j["geometric"] = {{"hflip", g.hflip},           {"vflip", g.vflip},
                    {"rotation_deg", g.rotation_deg}, {"zoom", g.zoom},
                    {"translate_x", g.translate_x}, {"translate_y", g.translate_y},
                    {"shear", g.shear}};
  const auto& ph = p.photometric;
  j["photometric"] = {{"channel_shift", ph.channel_shift},
                      {"intensity_scale", ph.intensity_scale},
                      {"contrast_delta", ph.contrast_delta},
                      {"contrast_low_pct", ph.contrast_low_pct},
                      {"contrast_high_pct", ph.contrast_high_pct},
                      {"blur_sigma", ph.blur_sigma},
                      {"unsharp_amount", ph.unsharp_amount},
                      {"unsharp_sigma", ph.unsharp_sigma}};
  if (p.illumination) {
    const auto& il = *p.illumination;
    j["illumination"] = {{"kind", to_string(il.kind)}, {"strength", il.strength},
                         {"angle_deg", il.angle_deg},   {"center_x", il.center_x},
                         {"center_y", il.center_y}};
  } else {
    j["illumination"] = nullptr;
  }
  if (p.hair) {
    const auto& h = *p.hair;
    j["hair"] = {{"count", h.count},
                 {"thickness_min", h.thickness_min},
                 {"thickness_max", h.thickness_max},
                 {"darkness", h.darkness},
                 {"curliness", h.curliness},
                 {"light", h.light},
                 {"seed", h.seed}};
  } else {
    j["hair"] = nullptr;
  }
  if (p.noise) {
    j["noise"] = {{"kind", to_string(p.noise->kind)}, {"strength", p.noise->strength}};
  } else {
    j["noise"] = nullptr;
  }
  j["noise_seed"] = p.noise_seed;
  return j;
}

inline AugmentationParams augmentation_from_json(const nlohmann::json& j) {
  try {
    AugmentationParams p;
    const auto& g = j.at("geometric");
    p.geometric.hflip = g.at("hflip").get<bool>();
    p.geometric.vflip = g.at("vflip").get<bool>();
    p.geometric.rotation_deg = g.at("rotation_deg").get<double>();
    p.geometric.zoom = g.at("zoom").get<double>();
    p.geometric.translate_x = g.at("translate_x").get<double>();
    p.geometric.translate_y = g.at("translate_y").get<double>();
    p.geometric.shear = g.at("shear").get<double>();
    const auto& ph = j.at("photometric");
    p.photometric.channel_shift = ph.at("channel_shift").get<std::array<double, 3>>();
    p.photometric.intensity_scale = ph.at("intensity_scale").get<double>();
    p.photometric.contrast_delta = ph.at("contrast_delta").get<double>();
    p.photometric.contrast_low_pct = ph.at("contrast_low_pct").get<double>();
    p.photometric.contrast_high_pct = ph.at("contrast_high_pct").get<double>();
    p.photometric.blur_sigma = ph.at("blur_sigma").get<double>();
    p.photometric.unsharp_amount = ph.at("unsharp_amount").get<double>();
    p.photometric.unsharp_sigma = ph.at("unsharp_sigma").get<double>();
    if (j.contains("illumination") && !j["illumination"].is_null()) {
      const auto& il = j["illumination"];
      IlluminationParams ip;
      ip.kind = parse_illumination_kind(il.at("kind").get<std::string>());
      ip.strength = il.at("strength").get<double>();
      ip.angle_deg = il.at("angle_deg").get<double>();
      ip.center_x = il.at("center_x").get<double>();
      ip.center_y = il.at("center_y").get<double>();
      p.illumination = ip;
    }
    if (j.contains("hair") && !j["hair"].is_null()) {
      const auto& h = j["hair"];
      HairParams hp;
      hp.count = h.at("count").get<int>();
      hp.thickness_min = h.at("thickness_min").get<double>();
      hp.thickness_max = h.at("thickness_max").get<double>();
      hp.darkness = h.at("darkness").get<double>();
      hp.curliness = h.at("curliness").get<double>();
      hp.light = h.at("light").get<bool>();
      hp.seed = h.at("seed").get<std::uint64_t>();
      p.hair = hp;
    }
    if (j.contains("noise") && !j["noise"].is_null()) {
      NoiseParams np;
      np.kind = parse_noise_kind(j["noise"].at("kind").get<std::string>());
      np.strength = j["noise"].at("strength").get<double>();
      p.noise = np;
    }
    p.noise_seed = j.at("noise_seed").get<std::uint64_t>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed augmentation log: ") + e.what());
  }
}

}  // namespace dermseg

#endif  // DERMSEG_AUGMENT_LOG_HPP_
