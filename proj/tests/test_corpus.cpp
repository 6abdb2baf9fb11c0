// tests/test_corpus.cpp

// Copyright 2026  The humorcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "humorcut/corpus.hpp"
#include "humorcut/synth.hpp"
#include "test_util.hpp"

using namespace humorcut;
using testutil::TempDir;
using testutil::write_file;

namespace {

// A 3-shot bundle with 2-d visual and text features.
void write_small_bundle(const std::filesystem::path& dir, const std::string& scenes, const std::string& shot1_vis) {
  write_file(dir / "title.json", R"({"title_id":"t","schema_version":1,"visual_dim":2,"text_dim":2})");
  write_file(dir / "shots.jsonl",
             "{\"shot_id\":0,\"start_s\":0,\"end_s\":1,\"visual_feat\":[1,0],\"text_feat\":[0,1]}\n"
             "{\"shot_id\":1,\"start_s\":1,\"end_s\":2,\"visual_feat\":" + shot1_vis + ",\"text_feat\":[0,1]}\n"
             "{\"shot_id\":2,\"start_s\":2,\"end_s\":3.5,\"visual_feat\":[0,1]}\n");
  write_file(dir / "scenes.jsonl", scenes);
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(LoadTitle, ThreeShotManifest) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":1}\n"
                               "{\"scene_id\":1,\"first_shot\":2,\"last_shot\":2}\n",
                     "[1,0.5]");
  const Title t = load_title(d.path());
  ASSERT_EQ(t.n_shots(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(t.shots[k].shot_id, k);
  EXPECT_TRUE(t.shots[2].text_feat.empty());
  ASSERT_TRUE(t.gt_scenes);
  EXPECT_EQ(t.gt_scenes->size(), 2u);
  EXPECT_FALSE(t.transcript);
  EXPECT_DOUBLE_EQ(t.duration(), 3.5);
}

TEST(LoadTitle, OverlappingScenesNameSceneId) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":10,\"first_shot\":0,\"last_shot\":1}\n"
                               "{\"scene_id\":11,\"first_shot\":1,\"last_shot\":2}\n",
                     "[1,0.5]");
  const std::string msg = error_of([&] { load_title(d.path()); });
  EXPECT_NE(msg.find("scene_id 11"), std::string::npos) << msg;
  EXPECT_NE(msg.find("overlap"), std::string::npos) << msg;
}

TEST(LoadTitle, GapAndShortCoverRejected) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":0}\n"
                               "{\"scene_id\":1,\"first_shot\":2,\"last_shot\":2}\n",
                     "[1,0.5]");
  EXPECT_NE(error_of([&] { load_title(d.path()); }).find("gap"), std::string::npos);
  write_file(d / "scenes.jsonl", "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":1}\n");
  EXPECT_NE(error_of([&] { load_title(d.path()); }).find("cover"), std::string::npos);
}

TEST(LoadTitle, NanFeatureRejected) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":2}\n", "[NaN,0.5]");
  const std::string msg = error_of([&] { load_title(d.path()); });
  EXPECT_NE(msg.find("shots[1].visual_feat[0]: non-finite"), std::string::npos) << msg;
}

TEST(LoadTitle, ParseErrorHasLineNumber) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":2}\n", "[1,0.5");
  const std::string msg = error_of([&] { load_title(d.path()); });
  EXPECT_NE(msg.find("shots.jsonl:2"), std::string::npos) << msg;
}

TEST(LoadTitle, DimensionMismatchRejected) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":2}\n", "[1,0.5,3]");
  EXPECT_NE(error_of([&] { load_title(d.path()); }).find("dimension mismatch"), std::string::npos);
}

TEST(LoadTitle, OutOfRangeCuratorSpanRejected) {
  TempDir d("corpus");
  write_small_bundle(d.path(), "{\"scene_id\":0,\"first_shot\":0,\"last_shot\":2}\n", "[1,0.5]");
  write_file(d / "curator.jsonl",
             "{\"scene_id\":0,\"start_s\":0,\"end_s\":3,\"first_shot\":1,\"last_shot\":5,\"curator_score\":1,"
             "\"is_funny\":true}\n");
  EXPECT_NE(error_of([&] { load_title(d.path()); }).find("curator[0]"), std::string::npos);
}

TEST(SaveLoad, SyntheticRoundTrip) {
  SynthConfig cfg;
  cfg.d_vis = 16;
  cfg.scenes_per_title = {4, 6};
  cfg.seed = 3;
  const Title t = generate_title(cfg, 1);
  TempDir d("corpus");
  save_title(t, d / "a");
  const Title u = load_title(d / "a");
  ASSERT_EQ(u.n_shots(), t.n_shots());
  for (int k = 0; k < t.n_shots(); ++k) {
    EXPECT_EQ(u.shots[k].start_s, t.shots[k].start_s);
    EXPECT_EQ(u.shots[k].caption, t.shots[k].caption);
    for (int i = 0; i < cfg.d_vis; ++i) EXPECT_NEAR(u.shots[k].visual_feat[i], t.shots[k].visual_feat[i], 1e-9);
    for (int i = 0; i < kTextDim; ++i) EXPECT_NEAR(u.shots[k].text_feat[i], t.shots[k].text_feat[i], 1e-9);
  }
  EXPECT_EQ(u.gt_scenes->size(), t.gt_scenes->size());
  EXPECT_EQ(u.transcript->back().text, t.transcript->back().text);
  EXPECT_EQ(u.laughter->probs, t.laughter->probs);
  EXPECT_EQ(u.audio_tags->size(), t.audio_tags->size());
  EXPECT_EQ(u.curator->size(), t.curator->size());
  // Saving the loaded title reproduces the same bytes.
  save_title(u, d / "b");
  for (const char* f : {"title.json", "shots.jsonl", "scenes.jsonl", "transcript.jsonl", "laughter.json",
                        "audio_tags.jsonl", "curator.jsonl"})
    EXPECT_EQ(testutil::read_file(d / "a" / f), testutil::read_file(d / "b" / f)) << f;
}

TEST(FuseFeatures, OnesThenZeros) {
  const std::vector<double> v(kProjectedVisualDim, 1.0), t(kTextDim, 0.0);
  const auto f = fuse_features(v, t);
  ASSERT_EQ(f.size(), 4864u);
  for (int i = 0; i < 4096; ++i) ASSERT_EQ(f[i], 1.0);
  for (int i = 4096; i < 4864; ++i) ASSERT_EQ(f[i], 0.0);
}

TEST(FuseFeatures, WrongDimensionsRejected) {
  EXPECT_THROW(fuse_features(std::vector<double>(512), std::vector<double>(kTextDim)), ValidationError);
  EXPECT_THROW(fuse_features(std::vector<double>(kProjectedVisualDim), std::vector<double>(767)), ValidationError);
}

TEST(FuseFeatures, InjectiveOnRandomPairs) {
  Rng rng(4);
  std::vector<double> v(kProjectedVisualDim), t(kTextDim);
  for (auto& x : v) x = rng.normal();
  for (auto& x : t) x = rng.normal();
  const auto base = fuse_features(v, t);
  for (int trial = 0; trial < 50; ++trial) {
    auto v2 = v, t2 = t;
    const std::size_t i = rng.below(kFusedDim);
    if (i < v2.size()) v2[i] += 1e-9;
    else t2[i - v2.size()] += 1e-9;
    EXPECT_NE(fuse_features(v2, t2), base);
  }
}

TEST(FusedMatrix, MissingTextIsZero) {
  SynthConfig cfg;
  cfg.d_vis = 8;
  cfg.scenes_per_title = {2, 2};
  Title t = generate_title(cfg, 0);
  t.shots[0].text_feat.clear();
  const Matrix emb = Matrix::Ones(t.n_shots(), kProjectedVisualDim);
  const Matrix m = fused_matrix(t, emb);
  EXPECT_EQ(m.rows(), t.n_shots());
  EXPECT_EQ(m.row(0).tail(kTextDim).norm(), 0.0);
  EXPECT_GT(m.row(1).tail(kTextDim).norm(), 0.0);
  EXPECT_EQ(fused_matrix(t, emb, true).rightCols(kTextDim).norm(), 0.0);
}

TEST(Partition, RejectsEveryNonPartition) {
  // Every two-scene list over 4 shots, including empty (last < first) scenes.
  for (int a = 0; a < 4; ++a)
    for (int b = a - 1; b < 5; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c - 1; d < 5; ++d) {
          const std::vector<SceneAnnotation> s{{0, a, b}, {1, c, d}};
          const bool valid = a == 0 && b >= a && c == b + 1 && d == 3;
          if (valid) EXPECT_NO_THROW(validate_partition(s, 4));
          else EXPECT_THROW(validate_partition(s, 4), ValidationError);
        }
}
