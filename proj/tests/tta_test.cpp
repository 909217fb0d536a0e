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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "dermseg/png_io.hpp"
#include "dermseg/predictors.hpp"
#include "dermseg/tta.hpp"
#include "fixtures.hpp"
#include "support.hpp"

namespace dermseg {
namespace {

using testing::EquivariantPredictor;

TtaConfig pure_geometry() {
  TtaConfig c;
  c.contrast_strength = 0.0;
  c.sharpen_amount = 0.0;
  return c;
}

TEST(TtaExpand, DefaultOrderAndIdentitySlot) {
  std::mt19937_64 gen(3);
  const auto img = testing::random_image(gen, 7, 5);
  const auto vs = tta_expand(img);
  ASSERT_EQ(vs.size(), 5u);
  EXPECT_EQ(vs[0].kind, TtaKind::kIdentity);
  EXPECT_EQ(vs[1].kind, TtaKind::kHflip);
  EXPECT_EQ(vs[2].kind, TtaKind::kVflip);
  EXPECT_EQ(vs[3].kind, TtaKind::kRot90Contrast);
  EXPECT_EQ(vs[4].kind, TtaKind::kSharpen);
  EXPECT_EQ(vs[0].image.values(), img.values());
  EXPECT_EQ(vs[3].image.width(), 5);
  EXPECT_EQ(vs[3].image.height(), 7);
}

TEST(TtaExpand, EmptyConfigRejected) {
  TtaConfig c;
  c.variants.clear();
  EXPECT_THROW(tta_expand(Image(2, 2), c), ValidationError);
}

TEST(TtaExpand, NamesRoundTrip) {
  for (auto k : kAllTtaKinds) EXPECT_EQ(parse_tta_kind(to_string(k)), k);
  EXPECT_THROW(parse_tta_kind("rot180"), ValidationError);
}

TEST(TtaInverse, UndoesGeometry) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testing::random_map(gen, 3 + trial % 5, 4 + trial % 3, 0.0f, 1.0f);
    for (auto [fwd, kind] : {std::pair{+[](const ProbabilityMap& p) { return hflip(p); }, TtaKind::kHflip},
                             std::pair{+[](const ProbabilityMap& p) { return vflip(p); }, TtaKind::kVflip},
                             std::pair{+[](const ProbabilityMap& p) { return rot90_ccw(p); },
                                       TtaKind::kRot90Contrast}}) {
      const auto back = tta_inverse(kind, fwd(m));
      ASSERT_EQ(back.width(), m.width());
      ASSERT_EQ(back.height(), m.height());
      EXPECT_TRUE(std::equal(back.values().begin(), back.values().end(), m.values().begin()));
    }
  }
}

TEST(TtaMerge, MeanOfFiveConstants) {
  std::vector<ProbabilityMap> maps;
  std::vector<TtaKind> kinds(kAllTtaKinds.begin(), kAllTtaKinds.end());
  for (float v : {0.2f, 0.4f, 0.6f, 0.8f, 1.0f}) maps.emplace_back(4, 3, v);
  // The rotated slot must arrive in the rotated frame.
  maps[3] = ProbabilityMap(3, 4, 0.8f);
  const auto merged = tta_merge(maps, kinds);
  for (float v : merged.values()) EXPECT_NEAR(v, 0.6f, 1e-7);
}

TEST(TtaMerge, CountMismatch) {
  std::vector<ProbabilityMap> maps(2, ProbabilityMap(2, 2, 0.5f));
  std::vector<TtaKind> kinds{TtaKind::kIdentity};
  EXPECT_THROW(tta_merge(maps, kinds), DimensionError);
}

TEST(EnsembleMean, TwoMaps) {
  std::vector<ProbabilityMap> maps{ProbabilityMap(3, 3, 0.2f), ProbabilityMap(3, 3, 0.8f)};
  const auto m = ensemble_mean(maps);
  for (float v : m.values()) EXPECT_FLOAT_EQ(v, 0.5f);
}

TEST(EnsembleMean, PermutationInvariantBitwise) {
  std::mt19937_64 gen(5);
  std::vector<ProbabilityMap> maps;
  for (int i = 0; i < 7; ++i) maps.push_back(testing::random_map(gen, 9, 6, 0.0f, 1.0f));
  const auto ref = ensemble_mean(maps);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(maps.begin(), maps.end(), gen);
    const auto m = ensemble_mean(maps);
    EXPECT_TRUE(std::equal(m.values().begin(), m.values().end(), ref.values().begin()));
  }
}

TEST(EnsembleMean, Errors) {
  std::vector<ProbabilityMap> none;
  EXPECT_THROW(ensemble_mean(none), ValidationError);
  std::vector<ProbabilityMap> mixed{ProbabilityMap(2, 2), ProbabilityMap(2, 3)};
  EXPECT_THROW(ensemble_mean(mixed), DimensionError);
}

TEST(EquivariantPredictor, CommutesWithGeometry) {
  std::mt19937_64 gen(17);
  const auto img = testing::random_image(gen, 13, 9);
  const Image& ref = img;
  const EquivariantPredictor p;
  const NormalizedImage dummy = normalize(img, NormalizationScheme::kUnit, {});
  auto run = [&](const Image& im) { return p.predict({"c", im, dummy, TtaKind::kIdentity}); };
  const auto base = run(ref);
  const auto a = hflip(run(hflip(img)));
  const auto b = vflip(run(vflip(img)));
  const auto c = rot90_cw(run(rot90_ccw(img)));
  for (const auto* m : {&a, &b, &c})
    EXPECT_TRUE(std::equal(m->values().begin(), m->values().end(), base.values().begin()));
}

TEST(PredictWithTta, PermutationVariantsReproduceIdentity) {
  std::mt19937_64 gen(23);
  const EquivariantPredictor p;
  PredictOptions opt;
  opt.tta = pure_geometry();
  for (int trial = 0; trial < 5; ++trial) {
    const auto img = testing::random_image(gen, 10 + trial, 8 + 2 * trial);
    const NormalizedImage n = normalize(img, opt.scheme, opt.constants);
    const auto ident = p.predict({"x", img, n, TtaKind::kIdentity});
    const auto merged = predict_with_tta(p, img, "x", opt);
    EXPECT_TRUE(std::equal(merged.values().begin(), merged.values().end(), ident.values().begin()));
  }
}

TEST(PredictWithTta, WrongDimsIsContractError) {
  const testing::WrongSizePredictor p;
  EXPECT_THROW(predict_with_tta(p, Image(4, 4), "x"), PredictorContractError);
}

TEST(FoldEnsemble, AuditCountsFoldsTimesVariants) {
  const testing::ConstantPredictor p(0.3f);
  std::vector<const Predictor*> folds(5, &p);
  PredictionAudit audit;
  const auto m = fold_ensemble(folds, Image(6, 4), "x", {}, &audit);
  EXPECT_EQ(audit.count(), 25u);
  for (float v : m.values()) EXPECT_FLOAT_EQ(v, 0.3f);
}

TEST(FoldEnsemble, WrongFoldCount) {
  const testing::ConstantPredictor p(0.3f);
  std::vector<const Predictor*> folds(4, &p);
  EXPECT_THROW(fold_ensemble(folds, Image(6, 4), "x"), ValidationError);
}

TEST(FoldEnsemble, FlatMeanOverTwoModels) {
  const testing::ConstantPredictor lo(0.2f), hi(0.8f);
  std::vector<const Predictor*> folds{&lo, &hi};
  PredictOptions opt;
  opt.expected_folds = 2;
  const auto m = fold_ensemble(folds, Image(5, 5), "x", opt);
  for (float v : m.values()) EXPECT_FLOAT_EQ(v, 0.5f);
}

TEST(PredictCase, ResizesBackToOriginal) {
  const testing::ConstantPredictor p(0.7f);
  std::vector<const Predictor*> folds(5, &p);
  const auto m = predict_case(folds, Image(30, 20), "x", {}, ResizeTarget{16, 24});
  EXPECT_EQ(m.width(), 30);
  EXPECT_EQ(m.height(), 20);
  for (float v : m.values()) EXPECT_NEAR(v, 0.7f, 1e-6);
}

TEST(Baseline, FindsDarkDisk) {
  const auto img = testing::disk_lesion_image(64, 48, 30, 22, 12, 1);
  const auto m = baseline_saliency(img);
  const auto gt = testing::disk(64, 48, 30, 22, 12);
  const auto pred = threshold(m, 0.5);
  EXPECT_GT(testing::oracle_jaccard(pred, gt), 0.9);
}

TEST(Baseline, FlatImageIsZero) {
  Image img(10, 10, 128);
  const auto m = baseline_saliency(img);
  for (float v : m.values()) EXPECT_EQ(v, 0.0f);
}

TEST(Baseline, InvariantToBrightnessShift) {
  auto img = testing::disk_lesion_image(40, 40, 20, 20, 9, 2);
  auto shifted = img;
  for (auto& v : shifted.data()) v = static_cast<std::uint8_t>(v - 20);
  const auto a = baseline_saliency(img), b = baseline_saliency(shifted);
  for (std::size_t i = 0; i < a.pixel_count(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-5);
}

TEST(Fixture, MissingDirectoryOrCase) {
  EXPECT_THROW(FixturePredictor("/nonexistent/dermseg"), PredictorContractError);
  testing::TempDir dir("fixture_missing");
  const FixturePredictor p(dir.path());
  EXPECT_THROW(predict_with_tta(p, Image(4, 4), "nope"), PredictorContractError);
}

TEST(Fixture, QuantizedMapSurvivesFullTta) {
  std::mt19937_64 gen(29);
  testing::TempDir dir("fixture_tta");
  const auto stored = quantize_probmap(testing::random_map(gen, 12, 8, 0.0f, 1.0f));
  write_probmap(stored, dir.path() / "case_a.png");
  const FixturePredictor p(dir.path());
  std::vector<const Predictor*> folds(5, &p);
  const auto merged = fold_ensemble(folds, testing::random_image(gen, 12, 8), "case_a");
  for (std::size_t i = 0; i < stored.pixel_count(); ++i)
    EXPECT_NEAR(merged.values()[i], stored.values()[i], 1e-6);
}

TEST(Command, ScriptRoundTrip) {
  testing::TempDir dir("command");
  const auto map_path = dir.path() / "half.png";
  write_probmap(ProbabilityMap(6, 4, 0.5f), map_path);
  const auto rot_path = dir.path() / "half_rot.png";
  write_probmap(ProbabilityMap(4, 6, 0.5f), rot_path);
  // Emits the rotated-shape map for the fourth input of every batch.
  const auto script = dir.path() / "model.sh";
  {
    std::ofstream s(script);
    s << "#!/bin/sh\nn=0\nwhile read -r line; do n=$((n+1));"
      << " if [ $n -eq 4 ]; then echo '" << rot_path.string() << "'; else echo '"
      << map_path.string() << "'; fi; done\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  const CommandPredictor p(script.string(), dir.path() / "work");
  const auto m = predict_with_tta(p, Image(6, 4), "x");
  for (float v : m.values()) EXPECT_NEAR(v, 0.5f, 1e-4);

  const CommandPredictor bad("false", dir.path() / "work2");
  EXPECT_THROW(predict_with_tta(bad, Image(6, 4), "x"), PredictorContractError);
  const CommandPredictor short_out("echo " + map_path.string(),
                                   dir.path() / "work3");
  EXPECT_THROW(predict_with_tta(short_out, Image(6, 4), "x"), PredictorContractError);
}

}  // namespace
}  // namespace dermseg
