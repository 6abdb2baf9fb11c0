// humorcut/encoder.hpp

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

// Shot encoder: a projection head over frozen backbone features, trained
// with the triplet hinge on mined triplets, plus the k-means / NMI probe
// used to compare mining strategies.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "humorcut/metrics.hpp"
#include "humorcut/mining.hpp"
#include "humorcut/nnet.hpp"

namespace humorcut {

struct EncoderConfig {
  int in_dim = 512;
  int hidden_dim = 2048;
  int bottleneck_dim = 256;
  int out_dim = kProjectedVisualDim;
  double alpha = 1.0;
  int epochs = 25;
  int batch_size = 64;
  double lr = 1e-4;
  std::uint64_t seed = 0;
};

inline void to_json(json& j, const EncoderConfig& c) {
  j = json{{"in_dim", c.in_dim}, {"hidden_dim", c.hidden_dim}, {"bottleneck_dim", c.bottleneck_dim},
           {"out_dim", c.out_dim}, {"alpha", c.alpha}, {"epochs", c.epochs},
           {"batch_size", c.batch_size}, {"lr", c.lr}, {"seed", c.seed}};
}
inline void from_json(const json& j, EncoderConfig& c) {
  const EncoderConfig d;
  c.in_dim = j.value("in_dim", d.in_dim);
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  c.bottleneck_dim = j.value("bottleneck_dim", d.bottleneck_dim);
  c.out_dim = j.value("out_dim", d.out_dim);
  c.alpha = j.value("alpha", d.alpha);
  c.epochs = j.value("epochs", d.epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.lr = j.value("lr", d.lr);
  c.seed = j.value("seed", d.seed);
}

inline void validate(const EncoderConfig& c) {
  if (c.in_dim <= 0 || c.hidden_dim <= 0 || c.bottleneck_dim <= 0 || c.out_dim <= 0)
    throw ValidationError("encoder config: all dims must be > 0");
  if (c.alpha < 0) throw ValidationError("encoder config: alpha must be >= 0");
  if (c.epochs < 0 || c.batch_size <= 0) throw ValidationError("encoder config: epochs >= 0, batch_size > 0");
  if (!(c.lr > 0)) throw ValidationError("encoder config: lr must be > 0");
}

// Linear-GELU-Linear-GELU-Linear, L2-normalized bottleneck, then a
// weight-normalized projection to out_dim.
inline Network build_projection_head(const EncoderConfig& cfg) {
  validate(cfg);
  return Network({LayerSpec::linear(cfg.in_dim, cfg.hidden_dim), LayerSpec::gelu(),
                  LayerSpec::linear(cfg.hidden_dim, cfg.hidden_dim), LayerSpec::gelu(),
                  LayerSpec::linear(cfg.hidden_dim, cfg.bottleneck_dim), LayerSpec::l2_normalize(),
                  LayerSpec::weight_norm_linear(cfg.bottleneck_dim, cfg.out_dim)},
                 cfg.seed);
}

// Backbone features per title, one row per shot.
using FeatureTable = std::map<std::string, Matrix>;

struct EncoderTraining {
  Network net;
  double initial_loss = 0.0;         // mean hinge before the first update
  std::vector<double> loss_history;  // mean hinge per epoch, during training
};

namespace detail {

inline const Matrix& feature_rows(const FeatureTable& features, const Triplet& t) {
  const auto it = features.find(t.title_id);
  if (it == features.end()) throw ValidationError(cat("triplet references unknown title '", t.title_id, "'"));
  const auto n = it->second.rows();
  for (int idx : {t.anchor, t.positive, t.negative})
    if (idx < 0 || idx >= n)
      throw ValidationError(cat("triplet index ", idx, " out of range for title '", t.title_id, "' (", n, " shots)"));
  return it->second;
}

inline Matrix triplet_batch(std::span<const Triplet> triplets, std::span<const std::size_t> order,
                            const FeatureTable& features, int in_dim) {
  const auto b = static_cast<Eigen::Index>(order.size());
  Matrix x(3 * b, in_dim);
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto& t = triplets[order[i]];
    const Matrix& f = feature_rows(features, t);
    x.row(i) = f.row(t.anchor);
    x.row(b + i) = f.row(t.positive);
    x.row(2 * b + i) = f.row(t.negative);
  }
  return x;
}

}  // namespace detail

// Optional per-title scene labels let the trainer re-check the guided-mining
// invariant before using a triplet.
inline EncoderTraining train_encoder(std::span<const Triplet> triplets, const FeatureTable& features,
                                     const EncoderConfig& cfg,
                                     const std::map<std::string, std::vector<int>>* scene_labels = nullptr) {
  validate(cfg);
  for (const auto& [id, m] : features)
    if (m.cols() != cfg.in_dim)
      throw ValidationError(cat("title '", id, "': feature dim ", m.cols(), ", encoder expects ", cfg.in_dim));
  for (const auto& t : triplets) {
    detail::feature_rows(features, t);
    if (scene_labels && t.source == TripletSource::Guided) {
      const auto it = scene_labels->find(t.title_id);
      if (it != scene_labels->end()) {
        const auto& lab = it->second;
        if (lab.at(t.anchor) != lab.at(t.positive) || lab.at(t.anchor) == lab.at(t.negative))
          throw ValidationError(cat("guided triplet (", t.anchor, ",", t.positive, ",", t.negative, ") of '",
                                    t.title_id, "' violates the scene invariant"));
      }
    }
  }

  EncoderTraining res{build_projection_head(cfg), 0.0, {}};
  Network& net = res.net;
  Adam adam(net, AdamConfig{cfg.lr});

  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t bs = static_cast<std::size_t>(cfg.batch_size);

  if (!triplets.empty()) {
    double total = 0.0;
    for (std::size_t at = 0; at < order.size(); at += bs) {
      const auto chunk = std::span<const std::size_t>(order).subspan(at, std::min(bs, order.size() - at));
      const Matrix out = net.predict(detail::triplet_batch(triplets, chunk, features, cfg.in_dim));
      total += triplet_loss_batch(out, cfg.alpha).loss * static_cast<double>(chunk.size());
    }
    res.initial_loss = total / static_cast<double>(triplets.size());
  }

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(mix_seed(cfg.seed, 0xE90C0000ULL + static_cast<std::uint64_t>(epoch)));
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    int batch_no = 0;
    for (std::size_t at = 0; at < order.size(); at += bs, ++batch_no) {
      const auto chunk = std::span<const std::size_t>(order).subspan(at, std::min(bs, order.size() - at));
      const Matrix out = net.forward(detail::triplet_batch(triplets, chunk, features, cfg.in_dim), Mode::Train);
      const BatchLoss loss = triplet_loss_batch(out, cfg.alpha);
      if (!std::isfinite(loss.loss))
        throw RuntimeError(cat("train_encoder: non-finite loss at epoch ", epoch, ", batch ", batch_no));
      net.backward(loss.grad);
      adam.step(net);
      total += loss.loss * static_cast<double>(chunk.size());
    }
    res.loss_history.push_back(triplets.empty() ? 0.0 : total / static_cast<double>(triplets.size()));
  }
  return res;
}

inline Matrix embed_shots(const Network& net, const Matrix& shot_features) {
  if (shot_features.cols() != net.in_dim())
    throw ValidationError(cat("embed_shots: feature dim ", shot_features.cols(), ", encoder expects ", net.in_dim()));
  Matrix out(shot_features.rows(), net.out_dim());
  constexpr Eigen::Index kChunk = 256;
  for (Eigen::Index at = 0; at < shot_features.rows(); at += kChunk) {
    const Eigen::Index n = std::min(kChunk, shot_features.rows() - at);
    out.middleRows(at, n) = net.predict(shot_features.middleRows(at, n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clustering probe

struct KMeansResult {
  std::vector<int> assignment;
  double inertia = 0.0;
};

// Lloyd's algorithm from a k-means++ seeding.
inline KMeansResult kmeans(const Matrix& x, int k, Rng& rng, int max_iter = 300) {
  const Eigen::Index n = x.rows();
  if (k < 1 || n < k) throw ValidationError(cat("kmeans: ", n, " points for k = ", k));
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();

  Matrix centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2(i);
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  KMeansResult res;
  res.assignment.assign(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd best(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Matrix dist = (-2.0 * (x * centers.transpose())).colwise() + sq;
    const Eigen::VectorXd csq = centers.rowwise().squaredNorm();
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg = 0;
      double v = dist(i, 0) + csq(0);
      for (int c = 1; c < k; ++c)
        if (dist(i, c) + csq(c) < v) {
          v = dist(i, c) + csq(c);
          arg = c;
        }
      best(i) = std::max(0.0, v);
      if (res.assignment[i] != arg) {
        res.assignment[i] = static_cast<int>(arg);
        changed = true;
      }
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.assignment[i]) += x.row(i);
      ++counts[res.assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Empty cluster: restart it at the point farthest from its center.
        Eigen::Index far = 0;
        best.maxCoeff(&far);
        centers.row(c) = x.row(far);
        best(far) = 0.0;
      }
    }
  }
  res.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) res.inertia += (x.row(i) - centers.row(res.assignment[i])).squaredNorm();
  return res;
}

// k-means with k = number of distinct gt labels, `restarts` seeded runs,
// lowest inertia kept; NMI between that clustering and the gt labels.
inline double cluster_nmi(const Matrix& embeddings, std::span<const int> gt_labels, std::uint64_t seed,
                          int restarts = 10) {
  if (static_cast<Eigen::Index>(gt_labels.size()) != embeddings.rows())
    throw ValidationError("cluster_nmi: label count does not match embedding rows");
  const int k = static_cast<int>(std::set<int>(gt_labels.begin(), gt_labels.end()).size());
  if (k < 2) throw ValidationError("cluster_nmi: needs >= 2 distinct gt labels");
  if (embeddings.rows() < k) throw ValidationError("cluster_nmi: fewer points than clusters");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    auto run = kmeans(embeddings, k, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return nmi(best.assignment, gt_labels);
}

}  // namespace humorcut
