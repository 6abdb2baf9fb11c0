// humorcut/sbd.hpp

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

// Sliding-window scene boundary detection. Each shot is classified from the
// flattened features of itself and its N neighbours on each side; a shot
// flagged as boundary is the last shot of its scene.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/nnet.hpp"

namespace humorcut {

struct SbdConfig {
  int context_n = 2;
  int feat_dim = kFusedDim;
  std::vector<int> hidden_dims{8192, 4096, 1024};
  double dropout_p = 0.5;
  double threshold = 0.5;
  int pos_neg_ratio = 4;  // negatives per positive in each batch
  int epochs = 20;
  double lr = 1e-4;
  int batch_size = 32;
  std::uint64_t seed = 0;

  int window_dim() const { return (2 * context_n + 1) * feat_dim; }
};

inline void to_json(json& j, const SbdConfig& c) {
  j = json{{"context_n", c.context_n}, {"feat_dim", c.feat_dim}, {"hidden_dims", c.hidden_dims},
           {"dropout_p", c.dropout_p}, {"threshold", c.threshold}, {"pos_neg_ratio", c.pos_neg_ratio},
           {"epochs", c.epochs}, {"lr", c.lr}, {"batch_size", c.batch_size}, {"seed", c.seed}};
}
inline void from_json(const json& j, SbdConfig& c) {
  const SbdConfig d;
  c.context_n = j.value("context_n", d.context_n);
  c.feat_dim = j.value("feat_dim", d.feat_dim);
  c.hidden_dims = j.value("hidden_dims", d.hidden_dims);
  c.dropout_p = j.value("dropout_p", d.dropout_p);
  c.threshold = j.value("threshold", d.threshold);
  c.pos_neg_ratio = j.value("pos_neg_ratio", d.pos_neg_ratio);
  c.epochs = j.value("epochs", d.epochs);
  c.lr = j.value("lr", d.lr);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.seed = j.value("seed", d.seed);
}

inline void validate(const SbdConfig& c) {
  if (c.context_n < 0) throw ValidationError("sbd config: context_n must be >= 0");
  if (c.feat_dim <= 0) throw ValidationError("sbd config: feat_dim must be > 0");
  if (c.hidden_dims.size() != 3) throw ValidationError("sbd config: hidden_dims needs exactly three widths");
  for (int h : c.hidden_dims)
    if (h <= 0) throw ValidationError("sbd config: hidden widths must be > 0");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ValidationError("sbd config: threshold must be in (0,1)");
  if (!(c.dropout_p >= 0.0 && c.dropout_p < 1.0)) throw ValidationError("sbd config: dropout_p must be in [0,1)");
  if (c.pos_neg_ratio < 1) throw ValidationError("sbd config: pos_neg_ratio must be >= 1");
  if (c.epochs < 0 || c.batch_size < 2 || !(c.lr > 0))
    throw ValidationError("sbd config: epochs >= 0, batch_size >= 2, lr > 0");
}

// A title's windows, one row per center shot. label is 1 (boundary),
// 0 (non-boundary) or -1 (no ground truth).
struct WindowSet {
  Matrix features;
  std::vector<int> centers;
  std::vector<int> labels;

  std::size_t size() const { return centers.size(); }
  bool labeled() const {
    return !labels.empty() && std::none_of(labels.begin(), labels.end(), [](int l) { return l < 0; });
  }
};

// Boundary = last shot of a scene, except the title's final shot.
inline std::vector<int> boundary_labels(std::span<const SceneAnnotation> scenes, int n_shots) {
  std::vector<int> labels(static_cast<std::size_t>(n_shots), 0);
  for (const auto& s : scenes)
    if (s.last_shot < n_shots - 1) labels[s.last_shot] = 1;
  return labels;
}

// Per-title z-score of every feature column; a constant column maps to 0.
inline Matrix standardize_columns(const Matrix& x) {
  Matrix out = x;
  if (x.rows() == 0) return out;
  const RowVector mean = x.colwise().mean();
  out.rowwise() -= mean;
  const RowVector sd = (out.colwise().squaredNorm() / static_cast<double>(x.rows())).cwiseSqrt();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    if (sd(c) > 1e-12) out.col(c) /= sd(c);
    else out.col(c).setZero();
  }
  return out;
}

// Edges replicate the first / last row.
inline WindowSet build_windows(const Matrix& embeddings, int context_n,
                               const std::vector<SceneAnnotation>* gt_scenes = nullptr) {
  if (context_n < 0) throw ValidationError("build_windows: context_n must be >= 0");
  const auto n = static_cast<int>(embeddings.rows());
  const auto d = embeddings.cols();
  const int width = 2 * context_n + 1;
  WindowSet w;
  w.features.resize(n, width * d);
  for (int c = 0; c < n; ++c) {
    for (int o = -context_n; o <= context_n; ++o) {
      const int src = std::clamp(c + o, 0, n - 1);
      w.features.block(c, (o + context_n) * d, 1, d) = embeddings.row(src);
    }
    w.centers.push_back(c);
  }
  if (gt_scenes) {
    validate_partition(*gt_scenes, n);
    w.labels = boundary_labels(*gt_scenes, n);
  } else {
    w.labels.assign(static_cast<std::size_t>(n), -1);
  }
  return w;
}

inline WindowSet build_windows(const Title& title, const Matrix& embeddings, const SbdConfig& cfg) {
  if (embeddings.rows() != title.n_shots())
    throw ValidationError(cat("build_windows: ", embeddings.rows(), " embedding rows for ", title.n_shots(), " shots"));
  if (embeddings.cols() != cfg.feat_dim)
    throw ValidationError(cat("build_windows: feature dim ", embeddings.cols(), ", config expects ", cfg.feat_dim));
  return build_windows(embeddings, cfg.context_n, title.gt_scenes ? &*title.gt_scenes : nullptr);
}

// (Linear-ReLU-Dropout) x3, then Linear to two logits.
inline Network build_sbd_head(const SbdConfig& cfg) {
  validate(cfg);
  std::vector<LayerSpec> specs;
  int width = cfg.window_dim();
  for (int h : cfg.hidden_dims) {
    specs.push_back(LayerSpec::linear(width, h));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::dropout(cfg.dropout_p));
    width = h;
  }
  specs.push_back(LayerSpec::linear(width, 2));
  return Network(std::move(specs), cfg.seed);
}

struct SbdTraining {
  Network net;
  std::vector<double> loss_history;
};

// Every batch holds round(B / (1 + ratio)) positives and the rest negatives,
// both drawn with replacement; an epoch covers the pooled windows once in
// expectation.
inline SbdTraining train_sbd(std::span<const WindowSet> sets, const SbdConfig& cfg) {
  validate(cfg);
  struct Ref {
    std::size_t set;
    Eigen::Index row;
  };
  std::vector<Ref> pos, neg;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].features.cols() != cfg.window_dim())
      throw ValidationError(cat("train_sbd: window dim ", sets[s].features.cols(), ", expected ", cfg.window_dim()));
    if (!sets[s].labeled()) throw ValidationError("train_sbd: windows without labels");
    for (std::size_t i = 0; i < sets[s].size(); ++i)
      (sets[s].labels[i] == 1 ? pos : neg).push_back({s, static_cast<Eigen::Index>(i)});
  }
  if (pos.empty() || neg.empty()) throw ValidationError("train_sbd: single-class dataset");

  SbdTraining res{build_sbd_head(cfg), {}};
  Network& net = res.net;
  net.set_training_seed(mix_seed(cfg.seed, 0xD809ULL));
  Adam adam(net, AdamConfig{cfg.lr});
  Rng rng(mix_seed(cfg.seed, 0x5BDULL));

  const int b = cfg.batch_size;
  const int n_pos = std::clamp(static_cast<int>(std::lround(static_cast<double>(b) / (1 + cfg.pos_neg_ratio))), 1, b - 1);
  const std::size_t total = pos.size() + neg.size();
  const std::size_t batches = (total + static_cast<std::size_t>(b) - 1) / static_cast<std::size_t>(b);

  Matrix x(b, cfg.window_dim());
  std::vector<int> y(static_cast<std::size_t>(b));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double sum = 0.0;
    for (std::size_t batch = 0; batch < batches; ++batch) {
      for (int i = 0; i < b; ++i) {
        const bool positive = i < n_pos;
        const auto& pool = positive ? pos : neg;
        const Ref r = pool[rng.below(pool.size())];
        x.row(i) = sets[r.set].features.row(r.row);
        y[i] = positive ? 1 : 0;
      }
      const Matrix logits = net.forward(x, Mode::Train);
      const BatchLoss loss = softmax_ce(logits, y);
      if (!std::isfinite(loss.loss))
        throw RuntimeError(cat("train_sbd: non-finite loss at epoch ", epoch, ", batch ", batch));
      net.backward(loss.grad);
      adam.step(net);
      sum += loss.loss;
    }
    res.loss_history.push_back(sum / static_cast<double>(batches));
  }
  return res;
}

struct BoundaryPrediction {
  std::vector<double> probs;
  std::vector<bool> flags;
};

// probs = softmax probability of the boundary class; flag iff prob > threshold.
inline BoundaryPrediction predict_boundaries(const Network& head, const WindowSet& windows, double threshold = 0.5) {
  BoundaryPrediction out;
  if (windows.size() == 0) return out;
  const Eigen::VectorXd p = softmax_column(head.predict(windows.features), 1);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    out.probs.push_back(p(i));
    out.flags.push_back(p(i) > threshold);
  }
  return out;
}

// A flag at shot i closes a scene at i; the final scene always closes at n-1.
inline std::vector<SceneAnnotation> assemble_scenes(const std::vector<bool>& flags) {
  const int n = static_cast<int>(flags.size());
  if (n < 1) throw ValidationError("assemble_scenes: no shots");
  std::vector<SceneAnnotation> scenes;
  int start = 0;
  for (int i = 0; i < n; ++i) {
    if (flags[i] || i == n - 1) {
      scenes.push_back({static_cast<int>(scenes.size()), start, i});
      start = i + 1;
    }
  }
  return scenes;
}

}  // namespace humorcut
