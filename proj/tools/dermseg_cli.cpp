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

// dermseg: batch command-line front end.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dermseg/dermseg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace dermseg::cli {
namespace {

struct Globals {
  std::string config_path;
  int jobs = 1;
};

PipelineConfig load_or_default(const Globals& g) {
  return g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
}

/// "lesion", "attribute" or "attribute:<kind>".
struct TaskSpec {
  Task task = Task::kLesion;
  std::optional<AttributeKind> attribute;
};

TaskSpec parse_task_spec(const std::string& s) {
  TaskSpec t;
  const auto colon = s.find(':');
  t.task = parse_task(s.substr(0, colon));
  if (colon != std::string::npos) {
    if (t.task != Task::kAttribute) throw ValidationError("only the attribute task takes a kind");
    t.attribute = parse_attribute(s.substr(colon + 1));
  }
  return t;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

/// Sorted case ids of the PNG files in a directory.
std::vector<std::string> png_cases(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path require_file(const fs::path& p) {
  if (!fs::exists(p)) throw DataError("missing file " + p.string());
  return p;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string replay;
};

int run_augment(const Globals& g, const AugmentArgs& a) {
  const auto cfg = load_or_default(g);
  const auto m = load_manifest(a.manifest);
  const std::uint64_t seed = a.seed.value_or(m.seed);
  const fs::path out(a.out);
  for (const char* sub : {"images", "masks", "params"}) fs::create_directories(out / sub);

  Manifest result = m;
  result.seed = seed;
  result.base_dir = out;
  parallel_for(m.records.size(), g.jobs, [&](std::size_t i) {
    const auto& r = m.records[i];
    auto& o = result.records[i];
    const auto image = read_image(require_file(m.resolve(r.image_path)));
    std::vector<BinaryMask> masks;
    std::vector<std::string> names;
    if (r.lesion_gt_path) {
      masks.push_back(read_mask(require_file(m.resolve(*r.lesion_gt_path))));
      names.push_back("lesion");
    }
    for (auto k : kAllAttributes) {
      if (!r.attribute_path(k)) continue;
      masks.push_back(read_mask(require_file(m.resolve(*r.attribute_path(k)))));
      names.push_back(std::string(to_string(k)));
    }
    AugmentationParams params;
    if (a.replay.empty()) {
      params = sample_augmentation(derive_seed(seed, "augment", r.case_id), cfg.augment);
    } else {
      const auto log = fs::path(a.replay) / (r.case_id + ".json");
      std::ifstream in(require_file(log));
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("augmentation log " + log.string() + ": " + e.what());
      }
      params = augmentation_from_json(j);
    }
    const auto aug = apply_augmentation(image, masks, params);
    o.image_path = "images/" + r.case_id + ".png";
    write_image(aug.image, out / o.image_path);
    for (std::size_t k = 0; k < masks.size(); ++k) {
      const std::string rel = "masks/" + r.case_id + "_" + names[k] + ".png";
      write_mask(aug.masks[k], out / rel);
      if (names[k] == "lesion") {
        o.lesion_gt_path = rel;
      } else {
        const auto kind = parse_attribute(names[k]);
        o.attribute_gt_paths[index_of(kind)] = rel;
        // A transform can push an attribute off the canvas.
        o.attribute_present[index_of(kind)] = aug.masks[k].any();
      }
    }
    write_text(out / "params" / (r.case_id + ".json"), to_json(params).dump(2) + "\n");
  });
  save_manifest(result, out / "manifest.jsonl");
  std::cerr << "augmented " << m.records.size() << " cases\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict

/// baseline | fixture:<dir> | command:<shell command>; "{fold}" expands to
/// the fold index.
std::unique_ptr<Predictor> make_predictor(const std::string& spec, const PipelineConfig& cfg,
                                          const fs::path& work_dir) {
  if (spec == "baseline") return std::make_unique<BaselinePredictor>(cfg.baseline);
  if (spec.rfind("fixture:", 0) == 0) return std::make_unique<FixturePredictor>(spec.substr(8));
  if (spec.rfind("command:", 0) == 0) return std::make_unique<CommandPredictor>(spec.substr(8), work_dir);
  throw ValidationError("unknown predictor '" + spec + "' (expected baseline, fixture:<dir> or command:<cmd>)");
}

std::string expand_fold(std::string spec, int fold) {
  const std::string key = "{fold}";
  for (auto pos = spec.find(key); pos != std::string::npos; pos = spec.find(key, pos)) {
    spec.replace(pos, key.size(), std::to_string(fold));
  }
  return spec;
}

struct PredictArgs {
  std::string manifest;
  std::string predictor;
  std::string task = "lesion";
  std::optional<int> folds;
  std::string out;
  bool no_resize = false;
  bool identity_tta = false;
};

int run_predict(const Globals& g, const PredictArgs& a) {
  const auto cfg = load_or_default(g);
  const auto task = parse_task_spec(a.task);
  const auto m = load_manifest(a.manifest, {.verify_ground_truth = false});
  const fs::path out(a.out);
  fs::create_directories(out);
  const fs::path work = out / ".predictor-work";

  PredictOptions opt;
  opt.tta = cfg.tta.to_tta();
  if (a.identity_tta) opt.tta.variants = {TtaKind::kIdentity};
  opt.scheme = parse_scheme(cfg.preprocess.scheme);
  opt.constants = cfg.preprocess.constants;
  opt.expected_folds = a.folds.value_or(cfg.ensemble.folds);
  if (opt.expected_folds < 1) throw ParameterError("--folds must be >= 1");

  std::vector<std::unique_ptr<Predictor>> owned;
  for (int f = 0; f < opt.expected_folds; ++f) {
    owned.push_back(make_predictor(expand_fold(a.predictor, f), cfg, work / ("fold" + std::to_string(f))));
  }
  std::vector<const Predictor*> folds;
  for (const auto& p : owned) folds.push_back(p.get());
  std::optional<ResizeTarget> model_size;
  if (cfg.preprocess.resize_to_task && !a.no_resize) model_size = cfg.preprocess.target(task.task);

  std::vector<std::size_t> counts(m.records.size());
  parallel_for(m.records.size(), g.jobs, [&](std::size_t i) {
    const auto& r = m.records[i];
    const auto image = read_image(require_file(m.resolve(r.image_path)));
    PredictionAudit audit;
    const auto map = predict_case(folds, image, r.case_id, opt, model_size, &audit);
    counts[i] = audit.count();
    write_probmap(map, out / (r.case_id + ".png"));
  });
  std::error_code ec;
  fs::remove_all(work, ec);

  ordered_json log;
  log["predictor"] = a.predictor;
  log["task"] = a.task;
  log["folds"] = opt.expected_folds;
  log["tta_variants"] = ordered_json::array();
  for (auto k : opt.tta.variants) log["tta_variants"].push_back(to_string(k));
  log["cases"] = ordered_json::array();
  std::size_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    log["cases"].push_back({{"case_id", m.records[i].case_id}, {"predictions", counts[i]}});
    total += counts[i];
  }
  log["total_predictions"] = total;
  write_text(out / "audit.json", log.dump(2) + "\n");
  std::cerr << "predicted " << counts.size() << " cases, " << total << " raw predictions\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ensemble

int run_ensemble(const Globals& g, const std::vector<std::string>& dirs, const std::string& out_dir) {
  if (dirs.empty()) throw ValidationError("ensemble needs at least one map directory");
  const auto cases = png_cases(dirs.front());
  for (std::size_t d = 1; d < dirs.size(); ++d) {
    if (png_cases(dirs[d]) != cases) {
      throw DataError("case sets of " + dirs.front() + " and " + dirs[d] + " differ");
    }
  }
  const fs::path out(out_dir);
  fs::create_directories(out);
  parallel_for(cases.size(), g.jobs, [&](std::size_t i) {
    std::vector<ProbabilityMap> maps;
    for (const auto& d : dirs) maps.push_back(read_probmap(fs::path(d) / (cases[i] + ".png")));
    write_probmap(ensemble_mean(maps), out / (cases[i] + ".png"));
  });
  std::cerr << "ensembled " << cases.size() << " cases from " << dirs.size() << " directories\n";
  return 0;
}

// ---------------------------------------------------------------------------
// postprocess

struct PostArgs {
  std::string maps;
  std::string task = "lesion";
  std::vector<double> thresholds;
  bool grid_search = false;
  std::string manifest;
  std::string lesion_masks;
  std::string out;
};

BinaryMask ground_truth(const Manifest& m, const DatasetRecord& r, const TaskSpec& t, int w, int h) {
  if (t.task == Task::kLesion) {
    if (!r.lesion_gt_path) throw DataError("record " + r.case_id + " has no lesion ground truth");
    return read_mask(require_file(m.resolve(*r.lesion_gt_path)));
  }
  const auto& p = r.attribute_path(*t.attribute);
  if (p) return read_mask(require_file(m.resolve(*p)));
  if (r.present(*t.attribute)) {
    throw DataError("record " + r.case_id + " declares " + std::string(to_string(*t.attribute)) +
                    " without a ground-truth mask");
  }
  return BinaryMask(w, h);
}

int run_postprocess(const Globals& g, const PostArgs& a) {
  const auto cfg = load_or_default(g);
  const auto task = parse_task_spec(a.task);
  const auto kind = task.task == Task::kLesion ? PostprocessKind::kLesion : PostprocessKind::kAttribute;
  const bool restrict = kind == PostprocessKind::kAttribute && cfg.postprocess.restrict_to_lesion;
  if (restrict && a.lesion_masks.empty()) {
    throw ValidationError("attribute post-processing restricted to the lesion needs --lesion-masks");
  }
  if (a.grid_search == !a.thresholds.empty()) {
    throw ValidationError("give exactly one of --thresholds T_H,T_L or --grid-search");
  }
  const auto conn = parse_connectivity(cfg.postprocess.connectivity);
  const auto cases = png_cases(a.maps);
  if (cases.empty()) throw DataError("no probability maps in " + a.maps);

  std::vector<ProbabilityMap> probs(cases.size(), ProbabilityMap(1, 1));
  std::vector<BinaryMask> lesions;
  if (restrict) lesions.assign(cases.size(), BinaryMask(1, 1));
  parallel_for(cases.size(), g.jobs, [&](std::size_t i) {
    probs[i] = read_probmap(fs::path(a.maps) / (cases[i] + ".png"));
    if (restrict) lesions[i] = read_mask(require_file(fs::path(a.lesion_masks) / (cases[i] + ".png")));
  });

  const fs::path out(a.out);
  fs::create_directories(out);
  std::optional<ThresholdPair> pair;
  if (a.grid_search) {
    if (a.manifest.empty()) throw ValidationError("--grid-search needs --manifest for ground truth");
    if (kind == PostprocessKind::kAttribute && !task.attribute)
      throw ValidationError("--grid-search on the attribute task needs attribute:<kind>");
    const auto m = load_manifest(a.manifest);
    std::vector<BinaryMask> gts(cases.size(), BinaryMask(1, 1));
    parallel_for(cases.size(), g.jobs, [&](std::size_t i) {
      const auto* r = m.find(cases[i]);
      if (!r) throw DataError("case " + cases[i] + " is not in the manifest");
      gts[i] = ground_truth(m, *r, task, probs[i].width(), probs[i].height());
    });
    GridSearchSpec spec;
    spec.t_high_candidates = cfg.postprocess.t_high_grid;
    spec.t_low_candidates = cfg.postprocess.t_low_grid;
    spec.objective = cfg.postprocess.objective.empty() ? default_objective(kind)
                                                       : parse_objective(cfg.postprocess.objective);
    spec.jaccard_cutoff = cfg.metrics.jaccard_cutoff;
    spec.connectivity = conn;
    const auto result = grid_search({probs, gts, lesions}, spec, kind, g.jobs);
    std::ofstream csv(out / "gridsearch.csv");
    write_grid_csv(result, csv);
    if (!csv) throw DataError("cannot write gridsearch.csv");
    pair = result.best;
    std::cerr << "grid search: T_H=" << pair->t_high() << " T_L=" << pair->t_low() << " "
              << to_string(spec.objective) << "=" << result.objective << "\n";
  } else {
    if (a.thresholds.size() != 2) throw ValidationError("--thresholds expects T_H,T_L");
    pair = ThresholdPair(a.thresholds[0], a.thresholds[1]);
  }

  parallel_for(cases.size(), g.jobs, [&](std::size_t i) {
    const auto mask = kind == PostprocessKind::kLesion ? lesion_postprocess(probs[i], *pair, conn)
                      : restrict ? attribute_postprocess(probs[i], lesions[i], *pair, conn)
                                 : attribute_postprocess(probs[i], *pair, conn);
    write_mask(mask, out / (cases[i] + ".png"));
  });
  ordered_json t;
  t["t_high"] = pair->t_high();
  t["t_low"] = pair->t_low();
  t["connectivity"] = cfg.postprocess.connectivity;
  t["searched"] = a.grid_search;
  write_text(out / "thresholds.json", t.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvalArgs {
  std::string pred;
  std::string manifest;
  std::string task = "lesion";
  std::optional<double> cutoff;
  std::string out;
  bool overlays = false;
};

/// Dimmed image with ground truth in green, prediction in red and their
/// overlap in yellow.
Image overlay(const Image& base, const BinaryMask& gt, const BinaryMask& pred) {
  Image out(gt.width(), gt.height());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const int lum = (base(x, y, 0) + base(x, y, 1) + base(x, y, 2)) / 6;
      const bool t = gt(x, y), p = pred(x, y);
      const int r = p ? 255 : lum, gch = t ? 255 : lum, b = (t || p) ? 0 : lum;
      out(x, y, 0) = static_cast<std::uint8_t>(r);
      out(x, y, 1) = static_cast<std::uint8_t>(gch);
      out(x, y, 2) = static_cast<std::uint8_t>(b);
    }
  return out;
}

ordered_json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

int evaluate_lesion(const Globals& g, const EvalArgs& a, const PipelineConfig& cfg, const Manifest& m) {
  const double cutoff = a.cutoff.value_or(cfg.metrics.jaccard_cutoff);
  const fs::path out(a.out);
  if (a.overlays) fs::create_directories(out / "overlays");
  const TaskSpec task{};
  std::vector<MetricReport> reports(m.records.size());
  parallel_for(m.records.size(), g.jobs, [&](std::size_t i) {
    const auto& r = m.records[i];
    const auto pred = read_mask(require_file(fs::path(a.pred) / (r.case_id + ".png")));
    const auto gt = ground_truth(m, r, task, pred.width(), pred.height());
    reports[i] = metrics_from_confusion(confusion(pred, gt), cutoff);
    if (a.overlays) {
      const auto img = read_image(require_file(m.resolve(r.image_path)));
      require_same_shape(img, gt, "overlay");
      write_image(overlay(img, gt, pred), out / "overlays" / (r.case_id + ".png"));
    }
  });
  const auto mean = mean_report(reports);

  std::ostringstream csv;
  csv << "case_id,jaccard,thresholded_jaccard,dice,accuracy,sensitivity,specificity\n";
  auto row = [&](const std::string& id, const MetricReport& x) {
    csv << id << ',' << fmt(x.jaccard) << ',' << fmt(x.thresholded_jaccard) << ',' << fmt(x.dice)
        << ',' << fmt(x.accuracy) << ',' << fmt(x.sensitivity) << ',' << fmt(x.specificity) << '\n';
  };
  auto obj = [](const MetricReport& x) {
    return ordered_json{{"jaccard", x.jaccard},         {"thresholded_jaccard", x.thresholded_jaccard},
                        {"dice", x.dice},               {"accuracy", x.accuracy},
                        {"sensitivity", x.sensitivity}, {"specificity", x.specificity}};
  };
  ordered_json j;
  j["task"] = "lesion";
  j["jaccard_cutoff"] = cutoff;
  j["cases"] = ordered_json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    row(m.records[i].case_id, reports[i]);
    ordered_json o{{"case_id", m.records[i].case_id}};
    const auto metrics = obj(reports[i]);
    for (const auto& [k, v] : metrics.items()) o[k] = v;
    j["cases"].push_back(o);
  }
  row("mean", mean);
  j["mean"] = obj(mean);
  write_text(out / "report.csv", csv.str());
  write_text(out / "report.json", j.dump(2) + "\n");
  std::cerr << "mean thresholded Jaccard " << mean.thresholded_jaccard << " over " << reports.size()
            << " cases\n";
  return 0;
}

int evaluate_attributes(const Globals& g, const EvalArgs& a, const PipelineConfig& cfg,
                        const Manifest& m, const TaskSpec& task) {
  const int eh = cfg.metrics.attribute_eval_size[0], ew = cfg.metrics.attribute_eval_size[1];
  const fs::path out(a.out);
  std::vector<AttributeKind> kinds;
  if (task.attribute) {
    kinds = {*task.attribute};
  } else {
    kinds.assign(kAllAttributes.begin(), kAllAttributes.end());
  }
  struct Row {
    AttributeKind kind;
    PooledMetrics pooled;
  };
  std::vector<Row> rows;
  for (auto kind : kinds) {
    const fs::path dir = task.attribute ? fs::path(a.pred) : fs::path(a.pred) / std::string(to_string(kind));
    const fs::path ov = out / "overlays" / std::string(to_string(kind));
    if (a.overlays) fs::create_directories(ov);
    const TaskSpec t{Task::kAttribute, kind};
    std::vector<ConfusionCounts> counts(m.records.size());
    parallel_for(m.records.size(), g.jobs, [&](std::size_t i) {
      const auto& r = m.records[i];
      const auto pred = resize(read_mask(require_file(dir / (r.case_id + ".png"))), eh, ew);
      const auto gt = resize(ground_truth(m, r, t, pred.width(), pred.height()), eh, ew);
      counts[i] = confusion(pred, gt);
      if (a.overlays) {
        const auto img = resize(read_image(require_file(m.resolve(r.image_path))), eh, ew,
                                ResizeMode::kBilinear);
        write_image(overlay(img, gt, pred), ov / (r.case_id + ".png"));
      }
    });
    ConfusionCounts total;
    for (const auto& c : counts) total += c;
    rows.push_back({kind, pooled_from_confusion(total)});
  }

  std::ostringstream csv;
  csv << "attribute,jaccard,dice,tp,fp,fn,tn\n";
  ordered_json j;
  j["task"] = "attribute";
  j["eval_size"] = {eh, ew};
  j["attributes"] = ordered_json::array();
  double sum_j = 0.0, sum_d = 0.0;
  for (const auto& r : rows) {
    const auto& c = r.pooled.counts;
    csv << to_string(r.kind) << ',' << fmt(r.pooled.jaccard) << ',' << fmt(r.pooled.dice) << ','
        << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << '\n';
    j["attributes"].push_back({{"attribute", to_string(r.kind)},
                               {"jaccard", r.pooled.jaccard},
                               {"dice", r.pooled.dice},
                               {"counts", counts_json(c)}});
    sum_j += r.pooled.jaccard;
    sum_d += r.pooled.dice;
  }
  if (rows.size() == kAllAttributes.size()) {
    const double n = static_cast<double>(rows.size());
    csv << "average," << fmt(sum_j / n) << ',' << fmt(sum_d / n) << ",,,,\n";
    j["average"] = {{"jaccard", sum_j / n}, {"dice", sum_d / n}};
    std::cerr << "attribute average J " << sum_j / n << " D " << sum_d / n << "\n";
  }
  write_text(out / "report.csv", csv.str());
  write_text(out / "report.json", j.dump(2) + "\n");
  return 0;
}

int run_evaluate(const Globals& g, const EvalArgs& a) {
  const auto cfg = load_or_default(g);
  const auto task = parse_task_spec(a.task);
  if (a.cutoff && !(*a.cutoff >= 0.0 && *a.cutoff <= 1.0))
    throw ParameterError("--cutoff must lie in [0,1]");
  const auto m = load_manifest(a.manifest);
  if (m.records.empty()) throw ValidationError("manifest has no records");
  fs::create_directories(a.out);
  return task.task == Task::kLesion ? evaluate_lesion(g, a, cfg, m)
                                    : evaluate_attributes(g, a, cfg, m, task);
}

// ---------------------------------------------------------------------------
// dataset and architecture utilities

int run_subsample(const std::string& manifest, const std::string& attribute,
                  std::optional<std::uint64_t> seed, const std::string& out) {
  const auto m = load_manifest(manifest);
  const auto kind = parse_attribute(attribute);
  const auto result = subsample_negatives(m, kind, seed.value_or(m.seed));
  save_manifest(result, out);
  std::size_t pos = 0;
  for (const auto& r : result.records) pos += r.present(kind);
  std::cerr << "kept " << result.records.size() << " of " << m.records.size() << " records ("
            << pos << " positive, " << result.records.size() - pos << " negative)\n";
  return 0;
}

int run_folds(const std::string& manifest, int k, std::optional<std::uint64_t> seed,
              const std::string& stratify, const std::string& out) {
  const auto m = load_manifest(manifest, {.verify_ground_truth = false});
  std::optional<AttributeKind> by;
  if (!stratify.empty()) by = parse_attribute(stratify);
  save_manifest(assign_folds(m, k, seed.value_or(m.seed), by), out);
  return 0;
}

int run_archcheck(const std::string& base, const std::string& graph_file, std::vector<int> input,
                  bool as_json) {
  if (base.empty() == graph_file.empty()) throw ValidationError("give exactly one of --base or --graph");
  if (input.size() != 3) throw ValidationError("--input expects H,W,C");
  arch::ArchGraph g;
  if (!base.empty()) {
    g = arch::builtin_graph(base);
  } else {
    std::ifstream in(graph_file);
    if (!in) throw DataError("cannot open graph " + graph_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("graph " + graph_file + ": " + e.what());
    }
    g = arch::graph_from_json(j);
  }
  const auto report = arch::validate_unet_rules(g, {input[0], input[1], input[2]});
  if (as_json) {
    std::cout << arch::report_to_json(report).dump(2) << "\n";
  } else if (report.ok()) {
    std::cout << "ok: R1-R5 satisfied\n";
  } else {
    for (const auto& v : report.violations) std::cout << v.rule << ": " << v.message << "\n";
  }
  return report.ok() ? 0 : static_cast<int>(ExitCode::kValidation);
}

int main_impl(int argc, char** argv) {
  CLI::App app{"dermseg: skin lesion segmentation pipeline tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "pipeline configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

  AugmentArgs aug;
  auto* c_aug = app.add_subcommand("augment", "materialize augmented image/mask pairs");
  c_aug->add_option("--manifest", aug.manifest)->required()->check(CLI::ExistingFile);
  c_aug->add_option("--out", aug.out)->required();
  c_aug->add_option("--seed", aug.seed, "defaults to the manifest seed");
  c_aug->add_option("--replay", aug.replay, "directory of parameter logs to re-apply");

  PredictArgs pr;
  auto* c_pred = app.add_subcommand("predict", "TTA x fold-ensemble probability maps");
  c_pred->add_option("--manifest", pr.manifest)->required()->check(CLI::ExistingFile);
  c_pred->add_option("--predictor", pr.predictor, "baseline | fixture:<dir> | command:<cmd>")->required();
  c_pred->add_option("--task", pr.task, "lesion | attribute[:<kind>]");
  c_pred->add_option("--folds", pr.folds, "defaults to ensemble.folds");
  c_pred->add_option("--out", pr.out)->required();
  c_pred->add_flag("--no-resize", pr.no_resize, "predict at the stored image size");
  c_pred->add_flag("--identity-tta", pr.identity_tta, "skip test-time augmentation");

  std::vector<std::string> ens_dirs;
  std::string ens_out;
  auto* c_ens = app.add_subcommand("ensemble", "pixelwise mean of aligned map directories");
  c_ens->add_option("dirs", ens_dirs)->required()->check(CLI::ExistingDirectory);
  c_ens->add_option("--out", ens_out)->required();

  PostArgs post;
  auto* c_post = app.add_subcommand("postprocess", "dual-threshold reconstruction to binary masks");
  c_post->add_option("--maps", post.maps)->required();
  c_post->add_option("--task", post.task, "lesion | attribute[:<kind>]");
  c_post->add_option("--thresholds", post.thresholds, "T_H,T_L")->delimiter(',');
  c_post->add_flag("--grid-search", post.grid_search);
  c_post->add_option("--manifest", post.manifest, "ground truth for --grid-search");
  c_post->add_option("--lesion-masks", post.lesion_masks);
  c_post->add_option("--out", post.out)->required();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "metric reports against manifest ground truth");
  c_eval->add_option("--pred", ev.pred)->required();
  c_eval->add_option("--manifest", ev.manifest)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--task", ev.task, "lesion | attribute[:<kind>]");
  c_eval->add_option("--cutoff", ev.cutoff, "thresholded-Jaccard cutoff");
  c_eval->add_option("--out", ev.out)->required();
  c_eval->add_flag("--overlays", ev.overlays, "write ground truth / prediction overlay PNGs");

  std::string ss_manifest, ss_attr, ss_out;
  std::optional<std::uint64_t> ss_seed;
  auto* c_ss = app.add_subcommand("subsample", "balance negatives for one attribute");
  c_ss->add_option("--manifest", ss_manifest)->required()->check(CLI::ExistingFile);
  c_ss->add_option("--attribute", ss_attr)->required();
  c_ss->add_option("--seed", ss_seed);
  c_ss->add_option("--out", ss_out)->required();

  std::string f_manifest, f_strat, f_out;
  int f_k = 5;
  std::optional<std::uint64_t> f_seed;
  auto* c_folds = app.add_subcommand("folds", "assign cross-validation folds");
  c_folds->add_option("--manifest", f_manifest)->required()->check(CLI::ExistingFile);
  c_folds->add_option("--k", f_k);
  c_folds->add_option("--seed", f_seed);
  c_folds->add_option("--stratify", f_strat, "attribute to balance across folds");
  c_folds->add_option("--out", f_out)->required();

  std::string a_base, a_graph;
  std::vector<int> a_input{arch::kDefaultArchInput.height, arch::kDefaultArchInput.width,
                          arch::kDefaultArchInput.channels};
  bool a_json = false;
  auto* c_arch = app.add_subcommand("archcheck", "check an encoder-decoder graph against R1-R5");
  c_arch->add_option("--base", a_base, "builtin encoder name");
  c_arch->add_option("--graph", a_graph, "graph JSON file");
  c_arch->add_option("--input", a_input, "H,W,C")->delimiter(',');
  c_arch->add_flag("--json", a_json);

  auto* c_cfg = app.add_subcommand("config", "configuration utilities");
  c_cfg->require_subcommand(1);
  auto* c_dump = c_cfg->add_subcommand("dump", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kValidation);
  }

  if (*c_aug) return run_augment(g, aug);
  if (*c_pred) return run_predict(g, pr);
  if (*c_ens) return run_ensemble(g, ens_dirs, ens_out);
  if (*c_post) return run_postprocess(g, post);
  if (*c_eval) return run_evaluate(g, ev);
  if (*c_ss) return run_subsample(ss_manifest, ss_attr, ss_seed, ss_out);
  if (*c_folds) return run_folds(f_manifest, f_k, f_seed, f_strat, f_out);
  if (*c_arch) return run_archcheck(a_base, a_graph, a_input, a_json);
  if (*c_dump) {
    std::cout << config_to_json(load_or_default(g)).dump(2) << "\n";
    return 0;
  }
  return static_cast<int>(ExitCode::kValidation);
}

}  // namespace
}  // namespace dermseg::cli

int main(int argc, char** argv) {
  try {
    return dermseg::cli::main_impl(argc, argv);
  } catch (const dermseg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(dermseg::ExitCode::kData);
  }
}
