// tests/test_encoder.cpp

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

#include "humorcut/encoder.hpp"
#include "humorcut/mining.hpp"
#include "humorcut/synth.hpp"
#include "test_util.hpp"

using namespace humorcut;

namespace {

EncoderConfig small_encoder(int in_dim) {
  EncoderConfig cfg;
  cfg.in_dim = in_dim;
  cfg.hidden_dim = 64;
  cfg.bottleneck_dim = 16;
  cfg.out_dim = 64;
  cfg.epochs = 15;
  cfg.batch_size = 32;
  cfg.lr = 1e-3;
  cfg.seed = 5;
  return cfg;
}

// Noisy but separable titles: sigma is large enough that the untrained head
// violates the margin on many triplets.
struct SmallCorpus {
  std::vector<Title> titles;
  FeatureTable features;
  std::vector<Triplet> triplets;
};

SmallCorpus small_corpus() {
  SynthConfig cfg;
  cfg.d_vis = 16;
  cfg.scenes_per_title = {8, 10};
  cfg.shots_per_scene = {3, 5};
  cfg.within_scene_sigma = 0.15;
  cfg.seed = 21;
  SmallCorpus c;
  for (int i = 0; i < 3; ++i) {
    c.titles.push_back(generate_title(cfg, i));
    const auto& t = c.titles.back();
    c.features[t.title_id] = visual_matrix(t);
    const auto trips = mine_guided(t, 300, 3, mix_seed(2, i));
    c.triplets.insert(c.triplets.end(), trips.begin(), trips.end());
  }
  return c;
}

}  // namespace

TEST(ProjectionHead, OutputDimAndZeroBatch) {
  EncoderConfig cfg;
  cfg.in_dim = 512;
  const Network net = build_projection_head(cfg);
  EXPECT_EQ(net.out_dim(), 4096);
  const Matrix y = net.predict(Matrix::Zero(4, 512));
  EXPECT_EQ(y.cols(), 4096);
  EXPECT_TRUE(y.allFinite());
}

TEST(ProjectionHead, ArchitectureOrder) {
  const Network net = build_projection_head(small_encoder(8));
  std::vector<LayerKind> kinds;
  for (const auto& s : net.specs()) kinds.push_back(s.kind);
  EXPECT_EQ(kinds, (std::vector<LayerKind>{LayerKind::Linear, LayerKind::Gelu, LayerKind::Linear, LayerKind::Gelu,
                                           LayerKind::Linear, LayerKind::L2Normalize,
                                           LayerKind::WeightNormLinear}));
}

TEST(EncoderConfig, Validation) {
  auto cfg = small_encoder(8);
  cfg.alpha = -1;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = small_encoder(8);
  cfg.hidden_dim = 0;
  EXPECT_THROW(validate(cfg), ValidationError);
}

TEST(TrainEncoder, SeparableCorpusLossDrops) {
  const auto c = small_corpus();
  const auto res = train_encoder(c.triplets, c.features, small_encoder(16));
  ASSERT_GT(res.initial_loss, 0.1);
  ASSERT_EQ(res.loss_history.size(), 15u);
  EXPECT_LT(res.loss_history.back(), 0.1 * res.initial_loss)
      << "initial " << res.initial_loss << " final " << res.loss_history.back();
}

TEST(TrainEncoder, InactiveHingeLeavesWeights) {
  // Anchor and positive rows are identical, alpha = 0: every hinge is <= 0.
  FeatureTable f;
  Rng rng(3);
  Matrix m(6, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  m.row(1) = m.row(0);
  m.row(3) = m.row(2);
  f["x"] = m;
  std::vector<Triplet> trips{{0, 1, 4, TripletSource::Guided, "x"}, {2, 3, 5, TripletSource::Guided, "x"}};
  auto cfg = small_encoder(4);
  cfg.alpha = 0.0;
  cfg.epochs = 3;
  const auto res = train_encoder(trips, f, cfg);
  EXPECT_EQ(res.initial_loss, 0.0);
  for (double l : res.loss_history) EXPECT_EQ(l, 0.0);
  const Network fresh = build_projection_head(cfg);
  for (std::size_t k = 0; k < fresh.tensors().size(); ++k)
    EXPECT_EQ(res.net.tensors()[k].value, fresh.tensors()[k].value) << fresh.tensors()[k].name;
}

TEST(TrainEncoder, UnresolvableIndexRejected) {
  FeatureTable f;
  f["x"] = Matrix::Zero(3, 4);
  const std::vector<Triplet> bad_index{{0, 1, 7, TripletSource::Guided, "x"}};
  EXPECT_THROW(train_encoder(bad_index, f, small_encoder(4)), ValidationError);
  const std::vector<Triplet> bad_title{{0, 1, 2, TripletSource::Guided, "y"}};
  EXPECT_THROW(train_encoder(bad_title, f, small_encoder(4)), ValidationError);
}

TEST(TrainEncoder, SceneInvariantRechecked) {
  FeatureTable f;
  f["x"] = Matrix::Zero(4, 4);
  const std::map<std::string, std::vector<int>> labels{{"x", {0, 0, 1, 1}}};
  const std::vector<Triplet> bad{{0, 2, 3, TripletSource::Guided, "x"}};
  EXPECT_THROW(train_encoder(bad, f, small_encoder(4), &labels), ValidationError);
  const std::vector<Triplet> good{{0, 1, 3, TripletSource::Guided, "x"}};
  EXPECT_NO_THROW(train_encoder(good, f, small_encoder(4), &labels));
}

TEST(TrainEncoder, SameSeedSameCheckpointBytes) {
  const auto c = small_corpus();
  auto cfg = small_encoder(16);
  cfg.epochs = 2;
  testutil::TempDir d("enc");
  save_network(train_encoder(c.triplets, c.features, cfg).net, d / "a.ckpt");
  save_network(train_encoder(c.triplets, c.features, cfg).net, d / "b.ckpt");
  EXPECT_EQ(testutil::read_file(d / "a.ckpt"), testutil::read_file(d / "b.ckpt"));
}

TEST(EmbedShots, EmptyIdenticalAndEquivariant) {
  const Network net = build_projection_head(small_encoder(8));
  EXPECT_EQ(embed_shots(net, Matrix::Zero(0, 8)).rows(), 0);
  Rng rng(1);
  Matrix x(300, 8);  // spans more than one internal chunk
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  x.row(7) = x.row(3);
  const Matrix e = embed_shots(net, x);
  EXPECT_EQ(e.row(7), e.row(3));
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    ASSERT_TRUE(e.row(r).allFinite());
    ASSERT_GT(e.row(r).norm(), 0.0);
  }
  Matrix rev = x.colwise().reverse();
  EXPECT_TRUE(embed_shots(net, rev).isApprox(e.colwise().reverse()));
  EXPECT_THROW(embed_shots(net, Matrix::Zero(2, 9)), ValidationError);
}

TEST(ClusterNmi, ThreeSeparatedPoints) {
  Matrix e(9, 2);
  e << 0, 0, 0, 0, 0, 0, 10, 0, 10, 0, 10, 0, 0, 10, 0, 10, 0, 10;
  const std::vector<int> gt{0, 0, 0, 1, 1, 1, 2, 2, 2};
  EXPECT_DOUBLE_EQ(cluster_nmi(e, gt, 4), 1.0);
}

TEST(ClusterNmi, Errors) {
  const Matrix e = Matrix::Zero(2, 2);
  EXPECT_THROW(cluster_nmi(e, std::vector<int>{0, 0}, 0), ValidationError);
  EXPECT_THROW(cluster_nmi(e, std::vector<int>{0, 1, 2}, 0), ValidationError);
}

TEST(ClusterNmi, TrainedEncoderSeparatesScenes) {
  const auto c = small_corpus();
  const auto res = train_encoder(c.triplets, c.features, small_encoder(16));
  const auto& t = c.titles[0];
  const Matrix e = embed_shots(res.net, c.features.at(t.title_id));
  const auto labels = shot_scene_labels(*t.gt_scenes, t.n_shots());
  EXPECT_GT(cluster_nmi(e, labels, 1), 0.9);
}
