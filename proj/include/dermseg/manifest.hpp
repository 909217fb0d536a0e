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

#ifndef DERMSEG_MANIFEST_HPP_
#define DERMSEG_MANIFEST_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dermseg/error.hpp"
#include "dermseg/png_io.hpp"
#include "dermseg/rng.hpp"

namespace dermseg {

enum class AttributeKind {
  kPigmentNetwork,
  kGlobules,
  kMiliaLikeCyst,
  kNegativeNetwork,
  kStreaks,
};

inline constexpr int kAttributeCount = 5;
inline constexpr std::array<AttributeKind, kAttributeCount> kAllAttributes = {
    AttributeKind::kPigmentNetwork, AttributeKind::kGlobules,
    AttributeKind::kMiliaLikeCyst, AttributeKind::kNegativeNetwork,
    AttributeKind::kStreaks};

inline std::string_view to_string(AttributeKind a) {
  switch (a) {
    case AttributeKind::kPigmentNetwork: return "pigment_network";
    case AttributeKind::kGlobules: return "globules";
    case AttributeKind::kMiliaLikeCyst: return "milia_like_cyst";
    case AttributeKind::kNegativeNetwork: return "negative_network";
    case AttributeKind::kStreaks: return "streaks";
  }
  return "?";
}

inline AttributeKind parse_attribute(std::string_view s) {
  for (auto a : kAllAttributes) {
    if (to_string(a) == s) return a;
  }
  throw ValidationError("unknown attribute '" + std::string(s) + "'");
}

inline std::size_t index_of(AttributeKind a) { return static_cast<std::size_t>(a); }

struct DatasetRecord {
  std::string case_id;
  std::string image_path;
  std::optional<std::string> lesion_gt_path;
  std::array<std::optional<std::string>, kAttributeCount> attribute_gt_paths{};
  std::array<bool, kAttributeCount> attribute_present{};
  std::optional<int> fold;

  bool present(AttributeKind a) const { return attribute_present[index_of(a)]; }
  const std::optional<std::string>& attribute_path(AttributeKind a) const {
    return attribute_gt_paths[index_of(a)];
  }
};

/// Ordered case list plus the seed it was built with. Relative paths in
/// records resolve against `base_dir`.
struct Manifest {
  std::vector<DatasetRecord> records;
  std::uint64_t seed = 0;
  int fold_count = 5;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  }

  const DatasetRecord* find(std::string_view case_id) const {
    for (const auto& r : records) {
      if (r.case_id == case_id) return &r;
    }
    return nullptr;
  }
};

struct ManifestLoadOptions {
  /// Read every declared attribute ground truth and compare its presence with
  /// the declared flag.
  bool verify_ground_truth = true;
};

namespace detail {

inline DatasetRecord record_from_json(const nlohmann::json& j, int fold_count) {
  DatasetRecord r;
  if (!j.contains("case_id") || !j["case_id"].is_string()) {
    throw ValidationError("manifest record lacks string case_id");
  }
  r.case_id = j["case_id"].get<std::string>();
  if (r.case_id.empty()) throw ValidationError("empty case_id");
  if (!j.contains("image") || !j["image"].is_string()) {
    throw ValidationError("record " + r.case_id + " lacks image path");
  }
  r.image_path = j["image"].get<std::string>();
  if (j.contains("lesion_gt") && !j["lesion_gt"].is_null()) {
    r.lesion_gt_path = j["lesion_gt"].get<std::string>();
  }
  if (j.contains("attributes")) {
    for (const auto& [key, value] : j["attributes"].items()) {
      if (!value.is_null()) {
        r.attribute_gt_paths[index_of(parse_attribute(key))] = value.get<std::string>();
      }
    }
  }
  if (j.contains("present")) {
    for (const auto& [key, value] : j["present"].items()) {
      if (!value.is_boolean()) {
        throw ValidationError("record " + r.case_id + ": present." + key +
                              " must be boolean");
      }
      r.attribute_present[index_of(parse_attribute(key))] = value.get<bool>();
    }
  }
  if (j.contains("fold") && !j["fold"].is_null()) {
    if (!j["fold"].is_number_integer()) {
      throw ValidationError("record " + r.case_id + ": fold must be an integer");
    }
    const int f = j["fold"].get<int>();
    if (f < 0 || f >= fold_count) {
      throw ValidationError("record " + r.case_id + ": fold " + std::to_string(f) +
                            " outside [0," + std::to_string(fold_count - 1) + "]");
    }
    r.fold = f;
  }
  return r;
}

inline nlohmann::ordered_json record_to_json(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["case_id"] = r.case_id;
  j["image"] = r.image_path;
  j["lesion_gt"] = r.lesion_gt_path ? nlohmann::ordered_json(*r.lesion_gt_path)
                                    : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
  nlohmann::ordered_json present = nlohmann::ordered_json::object();
  for (auto a : kAllAttributes) {
    const auto& p = r.attribute_path(a);
    attrs[std::string(to_string(a))] =
        p ? nlohmann::ordered_json(*p) : nlohmann::ordered_json(nullptr);
    present[std::string(to_string(a))] = r.present(a);
  }
  j["attributes"] = attrs;
  j["present"] = present;
  j["fold"] = r.fold ? nlohmann::ordered_json(*r.fold) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace detail

/// Parses a JSON-lines manifest. An optional first line without `case_id`
/// carries `seed` and `folds`.
inline Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {}) {
  Manifest m;
  m.base_dir = base_dir;
  std::string line;
  int line_no = 0;
  bool seen_record = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": parse error: " + e.what());
    }
    if (!j.is_object()) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            " is not a JSON object");
    }
    if (!j.contains("case_id")) {
      if (seen_record) {
        throw ValidationError("manifest header must precede records (line " +
                              std::to_string(line_no) + ")");
      }
      if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("folds")) {
        m.fold_count = j["folds"].get<int>();
        if (m.fold_count < 2) throw ValidationError("manifest folds must be >= 2");
      }
      continue;
    }
    seen_record = true;
    try {
      m.records.push_back(detail::record_from_json(j, m.fold_count));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(m.records.back().case_id).second) {
      throw ValidationError("duplicate case_id " + m.records.back().case_id);
    }
  }
  return m;
}

/// Presence is defined as at least one positive ground-truth pixel.
inline void verify_attribute_flags(const Manifest& m) {
  for (const auto& r : m.records) {
    for (auto a : kAllAttributes) {
      const auto& p = r.attribute_path(a);
      if (!p) continue;
      const bool actual = read_mask(m.resolve(*p)).any();
      if (actual != r.present(a)) {
        throw DataError("record " + r.case_id + ": " + std::string(to_string(a)) +
                        " declared " + (r.present(a) ? "present" : "absent") +
                        " but ground truth " + (actual ? "has" : "has no") +
                        " positive pixels");
      }
    }
  }
}

inline Manifest load_manifest(const std::filesystem::path& path,
                              ManifestLoadOptions options = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  Manifest m = parse_manifest(in, path.parent_path());
  if (options.verify_ground_truth) verify_attribute_flags(m);
  return m;
}

inline void write_manifest(const Manifest& m, std::ostream& out) {
  nlohmann::ordered_json header;
  header["seed"] = m.seed;
  header["folds"] = m.fold_count;
  out << header.dump() << '\n';
  for (const auto& r : m.records) out << detail::record_to_json(r).dump() << '\n';
}

inline void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest " + path.string());
  write_manifest(m, out);
  if (!out) throw DataError("write failed: " + path.string());
}

/// Uniform random partition into k folds whose sizes differ by at most one.
/// With `stratify_by`, positives and negatives of that attribute are dealt
/// round-robin separately so each fold gets a near-equal share of both.
inline Manifest assign_folds(const Manifest& input, int k, std::uint64_t seed,
                             std::optional<AttributeKind> stratify_by = std::nullopt) {
  if (k < 2) throw ParameterError("fold count must be >= 2");
  if (input.records.size() < static_cast<std::size_t>(k)) {
    throw ParameterError("cannot split " + std::to_string(input.records.size()) +
                         " records into " + std::to_string(k) + " folds");
  }
  Manifest out = input;
  out.seed = seed;
  out.fold_count = k;
  Rng rng(derive_seed(seed, "folds"));
  std::vector<std::size_t> order;
  if (stratify_by) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < input.records.size(); ++i) {
      (input.records[i].present(*stratify_by) ? pos : neg).push_back(i);
    }
    rng.shuffle(pos.begin(), pos.end());
    rng.shuffle(neg.begin(), neg.end());
    order = pos;
    order.insert(order.end(), neg.begin(), neg.end());
  } else {
    order.resize(input.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order.begin(), order.end());
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    out.records[order[pos]].fold = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return out;
}

/// Keeps every positive record for `attribute` and min(#neg, #pos) negatives
/// drawn uniformly without replacement. Record order is preserved.
inline Manifest subsample_negatives(const Manifest& input, AttributeKind attribute,
                                    std::uint64_t seed) {
  std::vector<std::size_t> negatives;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < input.records.size(); ++i) {
    if (input.records[i].present(attribute)) {
      ++positives;
    } else {
      negatives.push_back(i);
    }
  }
  if (positives == 0) {
    throw EmptyClassError("no records positive for " + std::string(to_string(attribute)));
  }
  Rng rng(derive_seed(seed, "subsample", to_string(attribute)));
  rng.shuffle(negatives.begin(), negatives.end());
  negatives.resize(std::min(negatives.size(), positives));
  std::vector<bool> keep(input.records.size(), false);
  for (std::size_t i = 0; i < input.records.size(); ++i) {
    keep[i] = input.records[i].present(attribute);
  }
  for (auto i : negatives) keep[i] = true;

  Manifest out = input;
  out.seed = seed;
  out.records.clear();
  for (std::size_t i = 0; i < input.records.size(); ++i) {
    if (keep[i]) out.records.push_back(input.records[i]);
  }
  return out;
}

}  // namespace dermseg

#endif  // DERMSEG_MANIFEST_HPP_
