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

#ifndef DERMSEG_ARCH_HPP_
#define DERMSEG_ARCH_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "dermseg/error.hpp"

// Level-granularity description of an encoder/decoder segmentation network
// and a validator for its wiring rules:
//   R1  decoder upsample count equals maxpool count
//   R2  every skip connection is merged by an add (optionally through a
//       bottleneck conv)
//   R3  every add has operands of identical shape; differing channel counts
//       need a bottleneck conv on the skip
//   R4  the pyramid concat gathers exactly one feature per decoder level,
//       each upsampled to the finest resolution, and feeds the head
//   R5  the output head is a 1x1 conv with one channel at input resolution

namespace dermseg::arch {

enum class LayerKind { kConv, kMaxpool, kUpsample, kAdd, kConcat, kBottleneckConv, kOutputHead };
enum class LayerRole { kNone, kEncoder, kDecoder, kPyramid, kHead };

inline std::string_view to_string(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kMaxpool: return "maxpool";
    case LayerKind::kUpsample: return "upsample";
    case LayerKind::kAdd: return "add";
    case LayerKind::kConcat: return "concat";
    case LayerKind::kBottleneckConv: return "bottleneck_conv";
    case LayerKind::kOutputHead: return "output_head";
  }
  return "?";
}

inline std::string_view to_string(LayerRole r) {
  switch (r) {
    case LayerRole::kNone: return "none";
    case LayerRole::kEncoder: return "encoder";
    case LayerRole::kDecoder: return "decoder";
    case LayerRole::kPyramid: return "pyramid";
    case LayerRole::kHead: return "head";
  }
  return "?";
}

inline LayerKind parse_layer_kind(std::string_view s) {
  for (auto k : {LayerKind::kConv, LayerKind::kMaxpool, LayerKind::kUpsample, LayerKind::kAdd,
                 LayerKind::kConcat, LayerKind::kBottleneckConv, LayerKind::kOutputHead}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown layer kind '" + std::string(s) + "'");
}

inline LayerRole parse_layer_role(std::string_view s) {
  for (auto r : {LayerRole::kNone, LayerRole::kEncoder, LayerRole::kDecoder, LayerRole::kPyramid,
                 LayerRole::kHead}) {
    if (to_string(r) == s) return r;
  }
  throw ValidationError("unknown layer role '" + std::string(s) + "'");
}

struct LayerNode {
  std::string id;
  LayerKind kind = LayerKind::kConv;
  /// Stride for convs, 2 for pooling and upsampling.
  int spatial_factor = 1;
  /// Output channels of conv-like nodes; ignored for the others.
  int channels_out = 0;
  int kernel = 3;
  LayerRole role = LayerRole::kNone;
  /// Resolution level (0 = finest); -1 when not applicable.
  int level = -1;
};

struct Edge {
  std::string from;
  std::string to;
  bool skip = false;
};

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;
  bool operator==(const Shape&) const = default;
};

inline std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.height) + ", " + std::to_string(s.width) + ", " +
         std::to_string(s.channels) + ")";
}

/// Nodes plus directed edges. Nodes without incoming edges consume the
/// network input; operand order of add/concat follows edge order.
class ArchGraph {
 public:
  ArchGraph() = default;
  ArchGraph(std::vector<LayerNode> nodes, std::vector<Edge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    check();
  }

  const std::vector<LayerNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const LayerNode& node(std::string_view id) const { return nodes_[index_.at(std::string(id))]; }
  bool contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

  std::vector<std::string> inputs_of(std::string_view id) const {
    std::vector<std::string> out;
    for (const auto& e : edges_)
      if (e.to == id) out.push_back(e.from);
    return out;
  }
  std::vector<std::string> outputs_of(std::string_view id) const {
    std::vector<std::string> out;
    for (const auto& e : edges_)
      if (e.from == id) out.push_back(e.to);
    return out;
  }

  /// Node ids in a topological order (stable with respect to node order).
  const std::vector<std::string>& topo_order() const { return topo_; }

  std::size_t count(LayerKind k, std::optional<LayerRole> role = std::nullopt) const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [&](const auto& n) {
      return n.kind == k && (!role || n.role == *role);
    }));
  }

  const LayerNode& output_head() const {
    for (const auto& n : nodes_)
      if (n.kind == LayerKind::kOutputHead) return n;
    throw ValidationError("graph has no output head");
  }

 private:
  void check() {
    index_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      if (n.id.empty()) throw ValidationError("layer with empty id");
      if (!index_.emplace(n.id, i).second) throw ValidationError("duplicate layer id '" + n.id + "'");
      if ((n.kind == LayerKind::kMaxpool || n.kind == LayerKind::kUpsample) && n.spatial_factor != 2)
        throw ValidationError("layer '" + n.id + "': pooling/upsampling factor must be 2");
      const bool conv_like = n.kind == LayerKind::kConv || n.kind == LayerKind::kBottleneckConv ||
                             n.kind == LayerKind::kOutputHead;
      if (conv_like && (n.channels_out < 1 || n.spatial_factor < 1))
        throw ValidationError("layer '" + n.id + "': conv needs channels >= 1 and stride >= 1");
    }
    for (const auto& e : edges_) {
      if (!index_.count(e.from) || !index_.count(e.to))
        throw ValidationError("edge " + e.from + " -> " + e.to + " references an unknown layer");
    }
    if (count(LayerKind::kOutputHead) != 1)
      throw ValidationError("graph must have exactly one output head, found " +
                            std::to_string(count(LayerKind::kOutputHead)));
    // Kahn's algorithm, picking ready nodes in declaration order.
    std::vector<int> indegree(nodes_.size(), 0);
    for (const auto& e : edges_) ++indegree[index_[e.to]];
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (indegree[i] == 0) ready.insert(i);
    topo_.clear();
    while (!ready.empty()) {
      const std::size_t i = *ready.begin();
      ready.erase(ready.begin());
      topo_.push_back(nodes_[i].id);
      for (const auto& e : edges_) {
        if (e.from != nodes_[i].id) continue;
        const std::size_t j = index_[e.to];
        if (--indegree[j] == 0) ready.insert(j);
      }
    }
    if (topo_.size() != nodes_.size()) throw ValidationError("graph contains a cycle");
  }

  std::vector<LayerNode> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> topo_;
};

struct ShapeIssue {
  std::string node;
  std::vector<std::string> operands;
  std::string message;
};

struct ShapeInference {
  std::map<std::string, Shape> shapes;
  std::vector<ShapeIssue> issues;
};

/// Largest number of maxpools on any path from the input.
inline int pooling_depth(const ArchGraph& g) {
  std::map<std::string, int> depth;
  int best = 0;
  for (const auto& id : g.topo_order()) {
    int d = 0;
    for (const auto& in : g.inputs_of(id)) d = std::max(d, depth[in]);
    if (g.node(id).kind == LayerKind::kMaxpool) ++d;
    depth[id] = d;
    best = std::max(best, d);
  }
  return best;
}

namespace detail {

inline ShapeInference infer(const ArchGraph& g, const Shape& input, bool strict) {
  if (input.height < 1 || input.width < 1 || input.channels < 1)
    throw ParameterError("input shape must be positive");
  const int pools = pooling_depth(g);
  const int divisor = 1 << pools;
  if (input.height % divisor != 0 || input.width % divisor != 0) {
    throw ParameterError("input " + std::to_string(input.height) + "x" + std::to_string(input.width) +
                         " is not divisible by 2^" + std::to_string(pools) + " = " +
                         std::to_string(divisor));
  }
  ShapeInference r;
  auto issue = [&](ShapeIssue i) {
    if (strict) throw DimensionError("layer '" + i.node + "': " + i.message);
    r.issues.push_back(std::move(i));
  };
  for (const auto& id : g.topo_order()) {
    const auto& n = g.node(id);
    const auto ins = g.inputs_of(id);
    std::vector<Shape> in_shapes;
    for (const auto& i : ins) in_shapes.push_back(r.shapes.at(i));
    if (in_shapes.empty()) in_shapes.push_back(input);
    const Shape first = in_shapes.front();
    Shape out = first;
    switch (n.kind) {
      case LayerKind::kConv:
      case LayerKind::kBottleneckConv:
      case LayerKind::kOutputHead:
        if (in_shapes.size() != 1) issue({id, ins, "conv layers take exactly one input"});
        if (first.height % n.spatial_factor || first.width % n.spatial_factor)
          issue({id, ins, "stride does not divide " + to_string(first)});
        out = {first.height / n.spatial_factor, first.width / n.spatial_factor, n.channels_out};
        break;
      case LayerKind::kMaxpool:
        if (in_shapes.size() != 1) issue({id, ins, "maxpool takes exactly one input"});
        if (first.height % 2 || first.width % 2) issue({id, ins, "odd input " + to_string(first)});
        out = {first.height / 2, first.width / 2, first.channels};
        break;
      case LayerKind::kUpsample:
        if (in_shapes.size() != 1) issue({id, ins, "upsample takes exactly one input"});
        out = {first.height * 2, first.width * 2, first.channels};
        break;
      case LayerKind::kAdd:
        if (in_shapes.size() < 2) issue({id, ins, "add needs at least two operands"});
        for (std::size_t k = 1; k < in_shapes.size(); ++k) {
          if (!(in_shapes[k] == first)) {
            issue({id, ins, "add operands differ: " + ins[0] + " " + to_string(first) + " vs " +
                                ins[k] + " " + to_string(in_shapes[k])});
            break;
          }
        }
        break;
      case LayerKind::kConcat: {
        if (in_shapes.size() < 2) issue({id, ins, "concat needs at least two operands"});
        int channels = 0;
        for (std::size_t k = 0; k < in_shapes.size(); ++k) {
          channels += in_shapes[k].channels;
          if (in_shapes[k].height != first.height || in_shapes[k].width != first.width) {
            issue({id, ins, "concat operands differ spatially: " + ins[0] + " " + to_string(first) +
                                " vs " + ins[k] + " " + to_string(in_shapes[k])});
          }
        }
        out.channels = channels;
        break;
      }
    }
    r.shapes[id] = out;
  }
  return r;
}

}  // namespace detail

/// Output shape of every node. Throws on indivisible input dims or any
/// operand mismatch.
inline std::map<std::string, Shape> infer_shapes(const ArchGraph& g, const Shape& input) {
  return detail::infer(g, input, true).shapes;
}

/// Shape inference that records mismatches instead of throwing.
inline ShapeInference infer_shapes_lenient(const ArchGraph& g, const Shape& input) {
  return detail::infer(g, input, false);
}

struct Violation {
  std::string rule;
  std::vector<std::string> nodes;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::map<std::string, Shape> shapes;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const auto& v) { return v.rule == rule; });
  }
  /// Rule ids with multiplicity, sorted.
  std::vector<std::string> rule_counts() const {
    std::vector<std::string> out;
    for (const auto& v : violations) out.push_back(v.rule);
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline constexpr Shape kDefaultArchInput{192, 256, 3};

inline ValidationReport validate_unet_rules(const ArchGraph& g, const Shape& input = kDefaultArchInput) {
  ValidationReport rep;
  const auto inf = infer_shapes_lenient(g, input);
  rep.shapes = inf.shapes;
  auto add = [&](std::string rule, std::vector<std::string> nodes, std::string msg) {
    rep.violations.push_back({std::move(rule), std::move(nodes), std::move(msg)});
  };

  // R1
  const auto ups = g.count(LayerKind::kUpsample, LayerRole::kDecoder);
  const auto pools = g.count(LayerKind::kMaxpool);
  if (ups != pools) {
    add("R1", {}, std::to_string(pools) + " maxpool layers but " + std::to_string(ups) +
                      " decoder upsample layers");
  }

  // R2
  for (const auto& e : g.edges()) {
    if (!e.skip) continue;
    const auto& target = g.node(e.to);
    bool merged = target.kind == LayerKind::kAdd;
    if (target.kind == LayerKind::kBottleneckConv) {
      const auto outs = g.outputs_of(e.to);
      merged = !outs.empty() && std::all_of(outs.begin(), outs.end(), [&](const auto& o) {
        return g.node(o).kind == LayerKind::kAdd;
      });
    }
    if (!merged) {
      add("R2", {e.from, e.to},
          "skip connection " + e.from + " -> " + e.to + " is not merged by an add");
    }
  }

  // R3
  for (const auto& n : g.nodes()) {
    if (n.kind != LayerKind::kAdd) continue;
    const auto ins = g.inputs_of(n.id);
    for (std::size_t k = 1; k < ins.size(); ++k) {
      const auto& a = inf.shapes.at(ins[0]);
      const auto& b = inf.shapes.at(ins[k]);
      if (a == b) continue;
      std::string msg = "add " + n.id + " operands " + ins[0] + " " + to_string(a) + " and " +
                        ins[k] + " " + to_string(b) + " differ";
      if (a.channels != b.channels) {
        // Name the skip-side operand and the width it must be projected to.
        std::size_t skip_idx = k, main_idx = 0;
        for (const auto& e : g.edges()) {
          if (e.skip && e.to == n.id && e.from == ins[0]) std::swap(skip_idx, main_idx);
        }
        msg += "; bottleneck_conv on " + ins[skip_idx] + " to " +
               std::to_string(inf.shapes.at(ins[main_idx]).channels) + " channels required";
      }
      add("R3", {n.id, ins[0], ins[k]}, msg);
    }
  }

  // R4
  std::set<int> decoder_levels;
  for (const auto& n : g.nodes())
    if (n.role == LayerRole::kDecoder && n.level >= 0) decoder_levels.insert(n.level);
  std::vector<std::string> gathers;
  for (const auto& n : g.nodes())
    if (n.kind == LayerKind::kConcat && n.role == LayerRole::kPyramid) gathers.push_back(n.id);
  if (gathers.size() != 1) {
    add("R4", gathers, "expected exactly one pyramid concat, found " + std::to_string(gathers.size()));
  } else {
    const auto& gather = gathers.front();
    std::map<int, int> seen;
    for (const auto& in : g.inputs_of(gather)) {
      std::string cur = in;
      while (g.node(cur).kind == LayerKind::kUpsample && g.node(cur).role == LayerRole::kPyramid) {
        const auto prev = g.inputs_of(cur);
        if (prev.size() != 1) break;
        cur = prev.front();
      }
      const auto& src = g.node(cur);
      if (src.role != LayerRole::kDecoder || src.level < 0) {
        add("R4", {gather, in}, "pyramid input " + in + " does not come from a decoder level");
        continue;
      }
      ++seen[src.level];
      const auto& s = inf.shapes.at(in);
      if (s.height != input.height || s.width != input.width) {
        add("R4", {gather, in},
            "pyramid input " + in + " from level " + std::to_string(src.level) + " has shape " +
                to_string(s) + ", not upsampled to the finest level");
      }
    }
    for (int level : decoder_levels) {
      if (seen[level] != 1) {
        add("R4", {gather}, "decoder level " + std::to_string(level) + " gathered " +
                                std::to_string(seen[level]) + " times");
      }
    }
    // The gathered features must reach the head.
    std::set<std::string> reach{gather};
    for (const auto& id : g.topo_order()) {
      for (const auto& in : g.inputs_of(id))
        if (reach.count(in)) reach.insert(id);
    }
    if (!reach.count(g.output_head().id)) {
      add("R4", {gather, g.output_head().id}, "pyramid concat does not feed the output head");
    }
  }

  // R5
  const auto& head = g.output_head();
  if (head.kernel != 1) add("R5", {head.id}, "output head kernel is " + std::to_string(head.kernel) + ", not 1x1");
  if (head.channels_out != 1)
    add("R5", {head.id}, "output head has " + std::to_string(head.channels_out) + " channels, not 1");
  if (!g.outputs_of(head.id).empty()) add("R5", {head.id}, "output head is not a sink");
  const auto& hs = inf.shapes.at(head.id);
  if (hs.height != input.height || hs.width != input.width) {
    add("R5", {head.id}, "output head shape " + to_string(hs) + " does not match input spatial size");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Builtin encoders
// ---------------------------------------------------------------------------

/// Per-level feature widths of an encoder (index 0 = full resolution, 5 =
/// deepest). Descriptive summaries of the published encoder stages.
struct EncoderSummary {
  std::string_view name;
  std::array<int, 6> widths;
};

inline constexpr std::array<EncoderSummary, 4> kBuiltinEncoders = {{
    {"resnet152", {64, 64, 256, 512, 1024, 2048}},
    {"densenet169", {64, 64, 256, 512, 1280, 1664}},
    {"xception", {32, 64, 128, 256, 728, 2048}},
    {"inception_resnet_v2", {64, 64, 192, 320, 1088, 1536}},
}};

inline constexpr std::array<int, 5> kDecoderWidths = {32, 64, 128, 192, 256};

/// Encoder levels joined to an upsampling decoder by add-merged skips, with
/// bottleneck convs where widths differ, and a pyramid concat of every
/// decoder level ahead of a 1x1 single-channel head.
inline ArchGraph make_unet_graph(const std::array<int, 6>& enc, const std::array<int, 5>& dec) {
  std::vector<LayerNode> nodes;
  std::vector<Edge> edges;
  auto node = [&](std::string id, LayerKind kind, int channels, LayerRole role, int level,
                  int kernel = 3) {
    LayerNode n;
    n.id = std::move(id);
    n.kind = kind;
    n.spatial_factor = (kind == LayerKind::kMaxpool || kind == LayerKind::kUpsample) ? 2 : 1;
    n.channels_out = channels;
    n.kernel = kernel;
    n.role = role;
    n.level = level;
    nodes.push_back(n);
  };
  const int levels = 5;
  node("enc0", LayerKind::kConv, enc[0], LayerRole::kEncoder, 0);
  for (int l = 1; l <= levels; ++l) {
    const auto s = std::to_string(l);
    node("pool" + s, LayerKind::kMaxpool, 0, LayerRole::kEncoder, l);
    node("enc" + s, LayerKind::kConv, enc[l], LayerRole::kEncoder, l);
    edges.push_back({"enc" + std::to_string(l - 1), "pool" + s});
    edges.push_back({"pool" + s, "enc" + s});
  }
  std::string prev = "enc" + std::to_string(levels);
  int prev_c = enc[levels];
  for (int l = levels - 1; l >= 0; --l) {
    const auto s = std::to_string(l);
    node("up" + s, LayerKind::kUpsample, 0, LayerRole::kDecoder, l);
    edges.push_back({prev, "up" + s});
    node("add" + s, LayerKind::kAdd, 0, LayerRole::kDecoder, l);
    edges.push_back({"up" + s, "add" + s});
    if (enc[l] != prev_c) {
      node("skip_bn" + s, LayerKind::kBottleneckConv, prev_c, LayerRole::kDecoder, l, 1);
      edges.push_back({"enc" + s, "skip_bn" + s, true});
      edges.push_back({"skip_bn" + s, "add" + s});
    } else {
      edges.push_back({"enc" + s, "add" + s, true});
    }
    node("dec" + s, LayerKind::kConv, dec[l], LayerRole::kDecoder, l);
    edges.push_back({"add" + s, "dec" + s});
    prev = "dec" + s;
    prev_c = dec[l];
  }
  node("pyramid", LayerKind::kConcat, 0, LayerRole::kPyramid, 0);
  for (int l = 0; l < levels; ++l) {
    std::string cur = "dec" + std::to_string(l);
    for (int k = 0; k < l; ++k) {
      const std::string up = "pyr" + std::to_string(l) + "_up" + std::to_string(k);
      node(up, LayerKind::kUpsample, 0, LayerRole::kPyramid, l - k - 1);
      edges.push_back({cur, up});
      cur = up;
    }
    edges.push_back({cur, "pyramid"});
  }
  node("final_conv", LayerKind::kConv, 64, LayerRole::kHead, 0);
  edges.push_back({"pyramid", "final_conv"});
  node("head", LayerKind::kOutputHead, 1, LayerRole::kHead, 0, 1);
  edges.push_back({"final_conv", "head"});
  return ArchGraph(std::move(nodes), std::move(edges));
}

inline ArchGraph builtin_graph(std::string_view base) {
  for (const auto& e : kBuiltinEncoders) {
    if (e.name == base) return make_unet_graph(e.widths, kDecoderWidths);
  }
  throw ValidationError("unknown base network '" + std::string(base) + "'");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// {"nodes": [{"id", "kind", "channels", "factor", "kernel", "role",
///   "level"}], "edges": [{"from", "to", "skip"}]}
inline ArchGraph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<LayerNode> nodes;
    for (const auto& n : j.at("nodes")) {
      LayerNode node;
      node.id = n.at("id").get<std::string>();
      node.kind = parse_layer_kind(n.at("kind").get<std::string>());
      node.spatial_factor = n.value(
          "factor", (node.kind == LayerKind::kMaxpool || node.kind == LayerKind::kUpsample) ? 2 : 1);
      node.channels_out = n.value("channels", 0);
      node.kernel = n.value("kernel", node.kind == LayerKind::kConv ? 3 : 1);
      node.role = parse_layer_role(n.value("role", std::string("none")));
      node.level = n.value("level", -1);
      nodes.push_back(std::move(node));
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                       e.value("skip", false)});
    }
    return ArchGraph(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed graph JSON: ") + e.what());
  }
}

inline nlohmann::ordered_json graph_to_json(const ArchGraph& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes()) {
    nlohmann::ordered_json o;
    o["id"] = n.id;
    o["kind"] = to_string(n.kind);
    o["channels"] = n.channels_out;
    o["factor"] = n.spatial_factor;
    o["kernel"] = n.kernel;
    o["role"] = to_string(n.role);
    o["level"] = n.level;
    j["nodes"].push_back(o);
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"skip", e.skip}});
  }
  return j;
}

inline nlohmann::ordered_json report_to_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["ok"] = r.ok();
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    j["violations"].push_back({{"rule", v.rule}, {"nodes", v.nodes}, {"message", v.message}});
  }
  return j;
}

}  // namespace dermseg::arch

#endif  // DERMSEG_ARCH_HPP_
