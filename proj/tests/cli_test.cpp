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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dermseg/dermseg.hpp"
#include "fixtures.hpp"
#include "support.hpp"

#ifndef DERMSEG_CLI_PATH
#error "DERMSEG_CLI_PATH must point at the dermseg binary"
#endif

namespace dermseg {
namespace {

namespace fs = std::filesystem;
using testing::slurp;
using testing::TempDir;

int run(const std::string& args) {
  const std::string cmd = std::string(DERMSEG_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

class CliDataset : public ::testing::Test {
 protected:
  void SetUp() override {
    cases_ = testing::planted_disk_cases(3, 48, 40, 7);
    testing::write_planted_dataset(dir_.path() / "data", cases_, 7);
  }
  fs::path data() const { return dir_.path() / "data"; }
  fs::path manifest() const { return data() / "manifest.jsonl"; }
  fs::path out(const std::string& s) const { return dir_.path() / s; }

  TempDir dir_{"cli"};
  std::vector<testing::PlantedCase> cases_;
};

TEST_F(CliDataset, PredictBaselineWritesMapsAndAudit) {
  ASSERT_EQ(run("predict --manifest " + q(manifest()) + " --predictor baseline --out " + q(out("p"))), 0);
  EXPECT_EQ(testing::png_count(out("p")), 3u);
  const auto audit = nlohmann::json::parse(slurp(out("p") / "audit.json"));
  ASSERT_EQ(audit["cases"].size(), 3u);
  for (const auto& c : audit["cases"]) EXPECT_EQ(c["predictions"], 25);
  EXPECT_EQ(audit["total_predictions"], 75);
  const auto map = read_probmap(out("p") / "case_000.png");
  EXPECT_EQ(map.width(), 48);
  EXPECT_EQ(map.height(), 40);
}

TEST_F(CliDataset, FixtureThroughIdentityTta) {
  fs::create_directories(out("fx"));
  std::mt19937_64 gen(1);
  for (const auto& c : cases_) write_probmap(testing::random_map(gen, 48, 40, 0.0f, 1.0f), out("fx") / (c.case_id + ".png"));
  ASSERT_EQ(run("predict --manifest " + q(manifest()) + " --predictor fixture:" + q(out("fx")) +
                " --identity-tta --no-resize --folds 1 --out " + q(out("p"))),
            0);
  for (const auto& c : cases_)
    EXPECT_EQ(slurp(out("p") / (c.case_id + ".png")), slurp(out("fx") / (c.case_id + ".png")));
}

TEST_F(CliDataset, MissingFixtureIsContractError) {
  fs::create_directories(out("empty"));
  EXPECT_EQ(run("predict --manifest " + q(manifest()) + " --predictor fixture:" + q(out("empty")) +
                " --no-resize --out " + q(out("p"))),
            4);
}

TEST(CliEnsemble, ArithmeticCopyAndOrder) {
  TempDir dir("cli_ens");
  for (const char* d : {"a", "b", "c"}) fs::create_directories(dir / d);
  std::mt19937_64 gen(2);
  for (const char* id : {"x", "y"}) {
    write_probmap(ProbabilityMap(8, 6, 0.2f), dir / "a" / (std::string(id) + ".png"));
    write_probmap(ProbabilityMap(8, 6, 0.8f), dir / "b" / (std::string(id) + ".png"));
    write_probmap(testing::random_map(gen, 8, 6, 0.0f, 1.0f), dir / "c" / (std::string(id) + ".png"));
  }
  const auto a = q(dir / "a"), b = q(dir / "b"), c = q(dir / "c");
  ASSERT_EQ(run("ensemble " + a + " " + b + " --out " + q(dir / "ab")), 0);
  const auto m = read_probmap(dir / "ab" / "x.png");
  for (float v : m.values()) EXPECT_NEAR(v, 0.5f, 1.0 / 65535);

  ASSERT_EQ(run("ensemble " + c + " --out " + q(dir / "copy")), 0);
  EXPECT_EQ(slurp(dir / "copy" / "y.png"), slurp(dir / "c" / "y.png"));

  ASSERT_EQ(run("ensemble " + a + " " + b + " " + c + " --out " + q(dir / "abc")), 0);
  ASSERT_EQ(run("ensemble " + c + " " + a + " " + b + " --out " + q(dir / "cab")), 0);
  EXPECT_EQ(slurp(dir / "abc" / "x.png"), slurp(dir / "cab" / "x.png"));

  fs::remove(dir / "c" / "y.png");
  EXPECT_EQ(run("ensemble " + a + " " + c + " --out " + q(dir / "bad")), 3);
}

TEST(CliPostprocess, FixedThresholdsMatchLibrary) {
  TempDir dir("cli_post");
  fs::create_directories(dir / "maps");
  std::mt19937_64 gen(4);
  std::vector<std::string> ids{"m0", "m1", "m2", "m3"};
  for (const auto& id : ids) write_probmap(testing::random_map(gen, 20, 16, 0.0f, 1.0f), dir / "maps" / (id + ".png"));
  ASSERT_EQ(run("postprocess --maps " + q(dir / "maps") + " --thresholds 0.8,0.45 --out " + q(dir / "out")), 0);
  for (const auto& id : ids) {
    const auto lib = lesion_postprocess(read_probmap(dir / "maps" / (id + ".png")), {0.8, 0.45});
    const auto cli = read_mask(dir / "out" / (id + ".png"));
    EXPECT_TRUE(std::equal(lib.values().begin(), lib.values().end(), cli.values().begin())) << id;
  }
}

TEST(CliPostprocess, GridSearchMatchesOracle) {
  TempDir dir("cli_grid");
  std::vector<ProbabilityMap> probs;
  std::vector<BinaryMask> gts;
  testing::planted_fixture(6, probs, gts);
  std::vector<testing::PlantedCase> cases;
  fs::create_directories(dir / "maps");
  fs::create_directories(dir / "data" / "masks");
  fs::create_directories(dir / "data" / "images");
  Manifest m;
  std::vector<ProbabilityMap> stored;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::string id = "g" + std::to_string(i);
    write_probmap(probs[i], dir / "maps" / (id + ".png"));
    stored.push_back(read_probmap(dir / "maps" / (id + ".png")));
    DatasetRecord r;
    r.case_id = id;
    r.image_path = "images/" + id + ".png";
    r.lesion_gt_path = "masks/" + id + ".png";
    write_mask(gts[i], dir / "data" / *r.lesion_gt_path);
    m.records.push_back(r);
  }
  save_manifest(m, dir / "data" / "manifest.jsonl");
  ASSERT_EQ(run("postprocess --maps " + q(dir / "maps") + " --grid-search --manifest " +
                q(dir / "data" / "manifest.jsonl") + " --out " + q(dir / "out")),
            0);
  const auto oracle = testing::oracle_grid(stored, gts, default_t_high_grid(), default_t_low_grid(), 0.65, 8);
  std::istringstream csv(slurp(dir / "out" / "gridsearch.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  double th = -1, tl = -1;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.back() == '1') std::sscanf(line.c_str(), "%lf,%lf", &th, &tl);
  }
  EXPECT_EQ(rows, oracle.evaluated);
  EXPECT_DOUBLE_EQ(th, oracle.t_high);
  EXPECT_DOUBLE_EQ(tl, oracle.t_low);
  const auto chosen = nlohmann::json::parse(slurp(dir / "out" / "thresholds.json"));
  EXPECT_DOUBLE_EQ(chosen["t_high"].get<double>(), oracle.t_high);
}

TEST(CliPostprocess, ArgumentErrors) {
  TempDir dir("cli_post_err");
  fs::create_directories(dir / "maps");
  write_probmap(ProbabilityMap(4, 4, 0.5f), dir / "maps" / "a.png");
  const auto maps = q(dir / "maps"), out = q(dir / "out");
  EXPECT_EQ(run("postprocess --maps " + maps + " --task attribute:streaks --thresholds 0.9,0.5 --out " + out), 2);
  EXPECT_EQ(run("postprocess --maps " + maps + " --out " + out), 2);
  EXPECT_EQ(run("postprocess --maps " + maps + " --thresholds 0.4,0.5 --out " + out), 2);
  EXPECT_EQ(run("postprocess --maps " + maps + " --task lesion:streaks --thresholds 0.9,0.5 --out " + out), 2);
}

TEST_F(CliDataset, EvaluatePerfectLesion) {
  fs::create_directories(out("pred"));
  for (const auto& c : cases_) write_mask(c.lesion, out("pred") / (c.case_id + ".png"));
  ASSERT_EQ(run("evaluate --pred " + q(out("pred")) + " --manifest " + q(manifest()) +
                " --overlays --out " + q(out("rep"))),
            0);
  const auto j = nlohmann::json::parse(slurp(out("rep") / "report.json"));
  for (const char* k : {"jaccard", "thresholded_jaccard", "dice", "accuracy", "sensitivity", "specificity"})
    EXPECT_EQ(j["mean"][k].get<double>(), 1.0) << k;
  EXPECT_EQ(testing::png_count(out("rep") / "overlays"), 3u);
  EXPECT_NE(slurp(out("rep") / "report.csv").find("\nmean,1,1,1,1,1,1\n"), std::string::npos);
}

TEST_F(CliDataset, EvaluateAttributesPooledAndAverage) {
  std::mt19937_64 gen(9);
  std::vector<std::vector<BinaryMask>> preds(kAttributeCount);
  for (auto k : kAllAttributes) {
    const fs::path d = out("apred") / std::string(to_string(k));
    fs::create_directories(d);
    for (const auto& c : cases_) {
      preds[index_of(k)].push_back(testing::random_mask(gen, 48, 40, 0.05));
      write_mask(preds[index_of(k)].back(), d / (c.case_id + ".png"));
    }
  }
  ASSERT_EQ(run("evaluate --task attribute --pred " + q(out("apred")) + " --manifest " + q(manifest()) +
                " --out " + q(out("rep"))),
            0);
  const auto j = nlohmann::json::parse(slurp(out("rep") / "report.json"));
  ASSERT_EQ(j["attributes"].size(), 5u);
  double sj = 0, sd = 0;
  for (auto k : kAllAttributes) {
    std::vector<BinaryMask> p, g;
    for (std::size_t i = 0; i < cases_.size(); ++i) {
      p.push_back(resize(preds[index_of(k)][i], 256, 256));
      g.push_back(resize(k == AttributeKind::kStreaks ? cases_[i].streaks : BinaryMask(48, 40), 256, 256));
    }
    const auto lib = pooled_attribute_metrics(p, g);
    const auto& row = j["attributes"][index_of(k)];
    EXPECT_EQ(row["attribute"], std::string(to_string(k)));
    EXPECT_EQ(row["jaccard"].get<double>(), lib.jaccard);
    EXPECT_EQ(row["dice"].get<double>(), lib.dice);
    sj += row["jaccard"].get<double>();
    sd += row["dice"].get<double>();
  }
  EXPECT_DOUBLE_EQ(j["average"]["jaccard"].get<double>(), sj / 5);
  EXPECT_DOUBLE_EQ(j["average"]["dice"].get<double>(), sd / 5);
}

TEST_F(CliDataset, AugmentDeterministicReplayAndDisabled) {
  const auto base = "augment --manifest " + q(manifest()) + " --seed 11 --out ";
  ASSERT_EQ(run(base + q(out("a1"))), 0);
  ASSERT_EQ(run(base + q(out("a2"))), 0);
  EXPECT_EQ(testing::tree_digest(out("a1")), testing::tree_digest(out("a2")));
  ASSERT_EQ(run("augment --manifest " + q(manifest()) + " --replay " + q(out("a1") / "params") +
                " --out " + q(out("a3"))),
            0);
  for (const auto& c : cases_)
    EXPECT_EQ(slurp(out("a3") / "images" / (c.case_id + ".png")),
              slurp(out("a1") / "images" / (c.case_id + ".png")));

  PipelineConfig cfg;
  for (auto* s : cfg.augment.switches()) s->enabled = false;
  std::ofstream(out("off.json")) << config_to_json(cfg).dump();
  ASSERT_EQ(run("--config " + q(out("off.json")) + " " + base + q(out("off"))), 0);
  for (const auto& c : cases_) {
    EXPECT_EQ(slurp(out("off") / "images" / (c.case_id + ".png")),
              slurp(data() / "images" / (c.case_id + ".png")));
    EXPECT_EQ(slurp(out("off") / "masks" / (c.case_id + "_lesion.png")),
              slurp(data() / "masks" / (c.case_id + "_lesion.png")));
  }
  // The written manifest is loadable and points at the new files.
  const auto m = load_manifest(out("a1") / "manifest.jsonl");
  EXPECT_EQ(m.records.size(), 3u);
}

TEST(CliDatasetTools, SubsampleAndFolds) {
  TempDir dir("cli_ss");
  Manifest m;
  for (int i = 0; i < 40; ++i) {
    DatasetRecord r;
    r.case_id = "r" + std::to_string(i);
    r.image_path = "x.png";
    r.attribute_present[index_of(AttributeKind::kStreaks)] = i % 8 == 0;
    m.records.push_back(r);
  }
  save_manifest(m, dir / "m.jsonl");
  ASSERT_EQ(run("subsample --manifest " + q(dir / "m.jsonl") + " --attribute streaks --seed 3 --out " + q(dir / "s.jsonl")), 0);
  const auto s = load_manifest(dir / "s.jsonl");
  EXPECT_EQ(s.records.size(), 10u);
  EXPECT_EQ(run("subsample --manifest " + q(dir / "m.jsonl") + " --attribute globules --out " + q(dir / "e.jsonl")), 3);
  EXPECT_EQ(run("subsample --manifest " + q(dir / "m.jsonl") + " --attribute hair --out " + q(dir / "e.jsonl")), 2);

  ASSERT_EQ(run("folds --manifest " + q(dir / "m.jsonl") + " --k 5 --seed 1 --stratify streaks --out " + q(dir / "f.jsonl")), 0);
  const auto f = load_manifest(dir / "f.jsonl");
  std::vector<int> sizes(5, 0);
  for (const auto& r : f.records) ++sizes[*r.fold];
  for (int n : sizes) EXPECT_EQ(n, 8);
}

TEST(CliArch, BuiltinsMutationsAndErrors) {
  for (const auto& e : arch::kBuiltinEncoders)
    EXPECT_EQ(run("archcheck --base " + std::string(e.name)), 0) << e.name;
  EXPECT_EQ(run("archcheck --base vgg16"), 2);
  TempDir dir("cli_arch");
  std::ofstream(dir / "bad.json") << testing::merge_to_concat(arch::builtin_graph("xception"), "add1").dump();
  EXPECT_EQ(run("archcheck --graph " + q(dir / "bad.json")), 2);
  const std::string cmd = std::string(DERMSEG_CLI_PATH) + " archcheck --json --graph " + q(dir / "bad.json") +
                          " > " + q(dir / "report.json");
  std::system(cmd.c_str());
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_FALSE(rep["ok"].get<bool>());
  EXPECT_EQ(rep["violations"][0]["rule"], "R2");
}

TEST(CliMisc, ConfigDumpAndUsageErrors) {
  TempDir dir("cli_cfg");
  const std::string cmd = std::string(DERMSEG_CLI_PATH) + " config dump > " + q(dir / "c.json");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto dumped = parse_config(nlohmann::json::parse(slurp(dir / "c.json")));
  EXPECT_EQ(config_to_json(dumped).dump(), config_to_json(PipelineConfig{}).dump());
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--config /nonexistent.json config dump"), 2);
  EXPECT_EQ(run("--help"), 0);
}

}  // namespace
}  // namespace dermseg
