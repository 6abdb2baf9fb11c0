// humorcut/nnet.hpp

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

// Small feed-forward network kernel: a fixed stack of layers with
// hand-written backward passes, the two losses the pipeline trains with,
// Adam, a central-difference gradient checker and a binary checkpoint format.
//
// All arithmetic is double precision. Rows are samples.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/error.hpp"
#include "humorcut/matrix.hpp"
#include "humorcut/rng.hpp"

namespace humorcut {

enum class LayerKind { Linear, WeightNormLinear, Gelu, Relu, Dropout, L2Normalize };
enum class Mode { Train, Eval };

inline const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::Linear: return "linear";
    case LayerKind::WeightNormLinear: return "weight_norm_linear";
    case LayerKind::Gelu: return "gelu";
    case LayerKind::Relu: return "relu";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::L2Normalize: return "l2_normalize";
  }
  return "?";
}

inline LayerKind parse_layer_kind(const std::string& s) {
  for (auto k : {LayerKind::Linear, LayerKind::WeightNormLinear, LayerKind::Gelu, LayerKind::Relu,
                 LayerKind::Dropout, LayerKind::L2Normalize})
    if (s == to_string(k)) return k;
  throw ValidationError(cat("unknown layer kind '", s, "'"));
}

struct LayerSpec {
  LayerKind kind = LayerKind::Linear;
  int in = 0;   // parametric layers only
  int out = 0;  // parametric layers only
  double p = 0.0;

  static LayerSpec linear(int in, int out) { return {LayerKind::Linear, in, out, 0.0}; }
  static LayerSpec weight_norm_linear(int in, int out) { return {LayerKind::WeightNormLinear, in, out, 0.0}; }
  static LayerSpec gelu() { return {LayerKind::Gelu, 0, 0, 0.0}; }
  static LayerSpec relu() { return {LayerKind::Relu, 0, 0, 0.0}; }
  static LayerSpec dropout(double p) { return {LayerKind::Dropout, 0, 0, p}; }
  static LayerSpec l2_normalize() { return {LayerKind::L2Normalize, 0, 0, 0.0}; }

  bool parametric() const { return kind == LayerKind::Linear || kind == LayerKind::WeightNormLinear; }
  bool operator==(const LayerSpec&) const = default;
};

inline void to_json(json& j, const LayerSpec& s) {
  j = json{{"kind", to_string(s.kind)}};
  if (s.parametric()) {
    j["in"] = s.in;
    j["out"] = s.out;
  }
  if (s.kind == LayerKind::Dropout) j["p"] = s.p;
}
inline void from_json(const json& j, LayerSpec& s) {
  s.kind = parse_layer_kind(j.at("kind").get<std::string>());
  s.in = j.value("in", 0);
  s.out = j.value("out", 0);
  s.p = j.value("p", 0.0);
}

// A named parameter tensor and its gradient (same shape).
struct Tensor {
  std::string name;
  Matrix value;
  Matrix grad;
};

namespace act {

inline constexpr double kL2Floor = 1e-12;

inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

// d/dx [x * Phi(x)] = Phi(x) + x * phi(x)
inline double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

}  // namespace act

class Network {
 public:
  Network() = default;

  Network(std::vector<LayerSpec> specs, std::uint64_t seed) : specs_(std::move(specs)), rng_(seed) {
    if (specs_.empty()) throw ValidationError("network: no layers");
    int width = -1;
    Rng init(mix_seed(seed, 0x1417ULL));
    state_.resize(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const auto& s = specs_[i];
      if (s.kind == LayerKind::Dropout && !(s.p >= 0.0 && s.p < 1.0))
        throw ValidationError(cat("layer ", i, ": dropout p must be in [0,1)"));
      if (!s.parametric()) continue;
      if (s.in <= 0 || s.out <= 0) throw ValidationError(cat("layer ", i, ": dims must be > 0"));
      if (width >= 0 && s.in != width)
        throw ValidationError(cat("layer ", i, ": input dim ", s.in, " does not match previous output ", width));
      width = s.out;
      state_[i].first_tensor = static_cast<int>(tensors_.size());
      // He-uniform for the (direction) weights.
      const double limit = std::sqrt(6.0 / s.in);
      Matrix w(s.out, s.in);
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = init.uniform(-limit, limit);
      if (s.kind == LayerKind::Linear) {
        add_tensor(cat("layer", i, ".weight"), std::move(w));
        add_tensor(cat("layer", i, ".bias"), Matrix::Zero(1, s.out));
      } else {
        add_tensor(cat("layer", i, ".v"), std::move(w));
        add_tensor(cat("layer", i, ".g"), Matrix::Ones(1, s.out));
        add_tensor(cat("layer", i, ".bias"), Matrix::Zero(1, s.out));
      }
    }
    if (width < 0) throw ValidationError("network: needs at least one parametric layer");
  }

  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  int in_dim() const {
    for (const auto& s : specs_)
      if (s.parametric()) return s.in;
    return 0;
  }
  int out_dim() const {
    for (auto it = specs_.rbegin(); it != specs_.rend(); ++it)
      if (it->parametric()) return it->out;
    return 0;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += static_cast<std::size_t>(t.value.size());
    return n;
  }

  // Forward pass that keeps the activations needed by backward().
  Matrix forward(const Matrix& x, Mode mode) {
    check_input(x);
    Matrix h = x;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      state_[i].input = h;
      h = apply(i, h, mode, &state_[i]);
    }
    has_cache_ = true;
    return h;
  }

  // Eval-mode forward without caching; safe to call concurrently.
  Matrix predict(const Matrix& x) const {
    check_input(x);
    Matrix h = x;
    for (std::size_t i = 0; i < specs_.size(); ++i) h = apply(i, h, Mode::Eval, nullptr);
    return h;
  }

  // Backward from dL/d(output) of the last forward(); overwrites every
  // tensor's grad and returns dL/d(input).
  Matrix backward(const Matrix& grad_out) {
    if (!has_cache_) throw RuntimeError("network: backward() without a preceding forward()");
    Matrix g = grad_out;
    for (std::size_t i = specs_.size(); i-- > 0;) g = back(i, g);
    return g;
  }

  void set_training_seed(std::uint64_t seed) { rng_ = Rng(seed); }

 private:
  struct LayerState {
    int first_tensor = -1;
    Matrix input;
    Matrix output;
    Matrix mask;
    Eigen::VectorXd norms;
  };

  void add_tensor(std::string name, Matrix value) {
    Matrix grad = Matrix::Zero(value.rows(), value.cols());
    tensors_.push_back({std::move(name), std::move(value), std::move(grad)});
  }

  void check_input(const Matrix& x) const {
    if (x.cols() != in_dim())
      throw ValidationError(cat("network: input has ", x.cols(), " columns, expected ", in_dim()));
    if (!x.allFinite()) throw ValidationError("network: non-finite input");
  }

  // Row i of the effective weight is g_i * v_i / |v_i|.
  Matrix effective_weight(std::size_t i) const {
    const int t = state_[i].first_tensor;
    const Matrix& v = tensors_[t].value;
    const Matrix& g = tensors_[t + 1].value;
    Matrix w = v;
    for (Eigen::Index r = 0; r < v.rows(); ++r) w.row(r) *= g(0, r) / v.row(r).norm();
    return w;
  }

  Matrix apply(std::size_t i, const Matrix& x, Mode mode, LayerState* cache) const {
    const auto& s = specs_[i];
    switch (s.kind) {
      case LayerKind::Linear: {
        const int t = state_[i].first_tensor;
        Matrix y = x * tensors_[t].value.transpose();
        y.rowwise() += tensors_[t + 1].value.row(0);
        return y;
      }
      case LayerKind::WeightNormLinear: {
        const int t = state_[i].first_tensor;
        Matrix y = x * effective_weight(i).transpose();
        y.rowwise() += tensors_[t + 2].value.row(0);
        return y;
      }
      case LayerKind::Gelu:
        return x.unaryExpr([](double v) { return act::gelu(v); });
      case LayerKind::Relu:
        return x.cwiseMax(0.0);
      case LayerKind::Dropout: {
        if (mode == Mode::Eval || s.p == 0.0) {
          if (cache) cache->mask.resize(0, 0);
          return x;
        }
        // Inverted dropout; the mask is drawn from the network's own stream.
        Matrix mask(x.rows(), x.cols());
        const double keep_scale = 1.0 / (1.0 - s.p);
        for (Eigen::Index r = 0; r < mask.rows(); ++r)
          for (Eigen::Index c = 0; c < mask.cols(); ++c) mask(r, c) = rng_.uniform() < s.p ? 0.0 : keep_scale;
        Matrix y = x.cwiseProduct(mask);
        if (cache) cache->mask = std::move(mask);
        return y;
      }
      case LayerKind::L2Normalize: {
        Eigen::VectorXd norms = x.rowwise().norm().cwiseMax(act::kL2Floor);
        Matrix y = x;
        for (Eigen::Index r = 0; r < y.rows(); ++r) y.row(r) /= norms(r);
        if (cache) {
          cache->norms = norms;
          cache->output = y;
        }
        return y;
      }
    }
    return x;
  }

  Matrix back(std::size_t i, const Matrix& g) {
    const auto& s = specs_[i];
    const Matrix& x = state_[i].input;
    switch (s.kind) {
      case LayerKind::Linear: {
        const int t = state_[i].first_tensor;
        tensors_[t].grad.noalias() = g.transpose() * x;
        tensors_[t + 1].grad = g.colwise().sum();
        return g * tensors_[t].value;
      }
      case LayerKind::WeightNormLinear: {
        const int t = state_[i].first_tensor;
        const Matrix& v = tensors_[t].value;
        const Matrix& gain = tensors_[t + 1].value;
        const Matrix w = effective_weight(i);
        const Matrix dw = g.transpose() * x;
        tensors_[t + 2].grad = g.colwise().sum();
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
          const double norm = v.row(r).norm();
          const RowVector dir = v.row(r) / norm;
          const double proj = dw.row(r).dot(dir);
          tensors_[t + 1].grad(0, r) = proj;
          tensors_[t].grad.row(r) = (gain(0, r) / norm) * (dw.row(r) - proj * dir);
        }
        return g * w;
      }
      case LayerKind::Gelu:
        return g.cwiseProduct(x.unaryExpr([](double v) { return act::gelu_grad(v); }));
      case LayerKind::Relu:
        return g.cwiseProduct(x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
      case LayerKind::Dropout:
        return state_[i].mask.size() == 0 ? g : Matrix(g.cwiseProduct(state_[i].mask));
      case LayerKind::L2Normalize: {
        const Matrix& y = state_[i].output;
        const Eigen::VectorXd& norms = state_[i].norms;
        Matrix dx(g.rows(), g.cols());
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          if (x.row(r).norm() > act::kL2Floor)
            dx.row(r) = (g.row(r) - y.row(r) * y.row(r).dot(g.row(r))) / norms(r);
          else
            dx.row(r) = g.row(r) / act::kL2Floor;
        }
        return dx;
      }
    }
    return g;
  }

  std::vector<LayerSpec> specs_;
  std::vector<Tensor> tensors_;
  std::vector<LayerState> state_;
  mutable Rng rng_{0};
  bool has_cache_ = false;
};

// ---------------------------------------------------------------------------
// Losses

struct TripletLoss {
  double loss = 0.0;
  RowVector grad_anchor;
  RowVector grad_positive;
  RowVector grad_negative;
};

// L = max(0, |a-p|^2 - |a-n|^2 + alpha). At the kink (L == 0 exactly) the
// zero subgradient is taken.
inline TripletLoss triplet_loss(const RowVector& fa, const RowVector& fp, const RowVector& fn, double alpha) {
  if (fa.size() != fp.size() || fa.size() != fn.size())
    throw ValidationError(cat("triplet_loss: dimension mismatch (", fa.size(), ", ", fp.size(), ", ", fn.size(), ")"));
  if (alpha < 0) throw ValidationError("triplet_loss: alpha must be >= 0");
  TripletLoss out;
  const double margin = (fa - fp).squaredNorm() - (fa - fn).squaredNorm() + alpha;
  out.grad_anchor = RowVector::Zero(fa.size());
  out.grad_positive = RowVector::Zero(fa.size());
  out.grad_negative = RowVector::Zero(fa.size());
  if (margin > 0.0) {
    out.loss = margin;
    out.grad_anchor = 2.0 * (fn - fp);
    out.grad_positive = -2.0 * (fa - fp);
    out.grad_negative = 2.0 * (fa - fn);
  }
  return out;
}

struct BatchLoss {
  double loss = 0.0;  // mean over samples
  Matrix grad;        // d(mean loss)/d(output)
  int active = 0;     // triplets with a positive hinge
};

// `out` stacks [anchors; positives; negatives], B rows each.
inline BatchLoss triplet_loss_batch(const Matrix& out, double alpha) {
  if (out.rows() % 3 != 0) throw ValidationError("triplet_loss_batch: rows must be a multiple of 3");
  const Eigen::Index b = out.rows() / 3;
  BatchLoss res;
  res.grad = Matrix::Zero(out.rows(), out.cols());
  if (b == 0) return res;
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto t = triplet_loss(out.row(i), out.row(b + i), out.row(2 * b + i), alpha);
    if (t.loss > 0.0) ++res.active;
    res.loss += t.loss;
    res.grad.row(i) = t.grad_anchor;
    res.grad.row(b + i) = t.grad_positive;
    res.grad.row(2 * b + i) = t.grad_negative;
  }
  res.loss /= static_cast<double>(b);
  res.grad /= static_cast<double>(b);
  return res;
}

// Mean softmax cross-entropy; gradient = (softmax - onehot) / B.
inline BatchLoss softmax_ce(const Matrix& logits, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows())
    throw ValidationError(cat("softmax_ce: ", labels.size(), " labels for ", logits.rows(), " rows"));
  BatchLoss res;
  res.grad = Matrix::Zero(logits.rows(), logits.cols());
  const Eigen::Index b = logits.rows();
  if (b == 0) return res;
  for (Eigen::Index i = 0; i < b; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= logits.cols())
      throw ValidationError(cat("softmax_ce: label ", y, " out of range [0, ", logits.cols(), ")"));
    const double mx = logits.row(i).maxCoeff();
    const RowVector e = (logits.row(i).array() - mx).exp().matrix();
    const double z = e.sum();
    res.loss += std::log(z) + mx - logits(i, y);
    res.grad.row(i) = e / z;
    res.grad(i, y) -= 1.0;
  }
  res.loss /= static_cast<double>(b);
  res.grad /= static_cast<double>(b);
  return res;
}

// Row-wise softmax probability of `cls`, computed stably.
inline Eigen::VectorXd softmax_column(const Matrix& logits, int cls) {
  Eigen::VectorXd p(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    const RowVector e = (logits.row(i).array() - mx).exp().matrix();
    p(i) = e(cls) / e.sum();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Optimizer

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Holds the moment estimates; the step counter t is
// advanced by each call to step().
class Adam {
 public:
  Adam(const Network& net, AdamConfig cfg) : cfg_(cfg) {
    for (const auto& t : net.tensors()) {
      m_.push_back(Matrix::Zero(t.value.rows(), t.value.cols()));
      v_.push_back(Matrix::Zero(t.value.rows(), t.value.cols()));
    }
  }

  void step(Network& net) {
    auto& tensors = net.tensors();
    if (tensors.size() != m_.size()) throw ValidationError("adam: tensor count changed");
    for (const auto& t : tensors)
      if (!t.grad.allFinite()) throw RuntimeError(cat("adam: non-finite gradient in ", t.name));
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      auto& p = tensors[k];
      if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols())
        throw ValidationError(cat("adam: gradient shape mismatch for ", p.name));
      m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * p.grad;
      v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * p.grad.cwiseAbs2();
      p.value.array() -= cfg_.lr * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + cfg_.eps);
    }
  }

  long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

// ---------------------------------------------------------------------------
// Gradient check

// (loss, dL/d(output)) for a network output.
using LossFn = std::function<std::pair<double, Matrix>(const Matrix&)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "tensor[index]"
};

// Compares backward() against central differences, in eval mode.
// Relative error is |a - n| / max(|a|, |n|, floor); the floor keeps
// parameters with vanishing gradient from dividing noise by noise.
// Networks above `full_limit` parameters are checked on a seeded sample of
// `sample` parameters.
inline GradCheckReport grad_check(Network& net, const LossFn& loss_fn, const Matrix& batch, double h = 1e-5,
                                  std::uint64_t seed = 0, std::size_t full_limit = 100000,
                                  std::size_t sample = 1000, double floor = 1e-6) {
  const Matrix out = net.forward(batch, Mode::Eval);
  net.backward(loss_fn(out).second);

  std::vector<std::pair<std::size_t, Eigen::Index>> coords;
  auto& tensors = net.tensors();
  const std::size_t total = net.parameter_count();
  if (total <= full_limit) {
    for (std::size_t t = 0; t < tensors.size(); ++t)
      for (Eigen::Index k = 0; k < tensors[t].value.size(); ++k) coords.emplace_back(t, k);
  } else {
    Rng rng(seed);
    for (std::size_t n = 0; n < sample; ++n) {
      std::uint64_t flat = rng.below(total);
      std::size_t t = 0;
      while (flat >= static_cast<std::uint64_t>(tensors[t].value.size())) {
        flat -= static_cast<std::uint64_t>(tensors[t].value.size());
        ++t;
      }
      coords.emplace_back(t, static_cast<Eigen::Index>(flat));
    }
  }

  GradCheckReport rep;
  for (const auto& [t, k] : coords) {
    double& w = tensors[t].value.data()[k];
    const double analytic = tensors[t].grad.data()[k];
    const double saved = w;
    w = saved + h;
    const double up = loss_fn(net.predict(batch)).first;
    w = saved - h;
    const double down = loss_fn(net.predict(batch)).first;
    w = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
    if (err > rep.max_rel_error) {
      rep.max_rel_error = err;
      rep.worst = cat(tensors[t].name, "[", k, "]");
    }
    ++rep.checked;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// Layout: "HCNN", uint32 version, uint64 header length, JSON header
// {version, layers, tensors:[{name, rows, cols}], meta}, then every tensor's
// values as little-endian float64, row-major, in header order.

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_network(const Network& net, const std::filesystem::path& path, const json& meta = json::object()) {
  json header{{"version", kCheckpointVersion}, {"layers", net.specs()}, {"meta", meta}};
  header["tensors"] = json::array();
  for (const auto& t : net.tensors())
    header["tensors"].push_back({{"name", t.name}, {"rows", t.value.rows()}, {"cols", t.value.cols()}});
  const std::string text = header.dump();
  const std::uint64_t len = text.size();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError(cat(path.string(), ": cannot open for writing"));
  out.write("HCNN", 4);
  out.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof(kCheckpointVersion));
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(len));
  for (const auto& t : net.tensors())
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(t.value.size() * static_cast<Eigen::Index>(sizeof(double))));
  if (!out) throw RuntimeError(cat(path.string(), ": write failed"));
}

struct LoadedNetwork {
  Network net;
  json meta;
};

inline LoadedNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(cat(path.string(), ": cannot open checkpoint"));
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::string(magic, 4) != "HCNN") throw ValidationError(cat(path.string(), ": not a checkpoint"));
  if (version != kCheckpointVersion)
    throw ValidationError(cat(path.string(), ": unsupported checkpoint version ", version));
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(cat(path.string(), ": bad checkpoint header: ", e.what()));
  }
  LoadedNetwork res{Network(header.at("layers").get<std::vector<LayerSpec>>(), 0), header.value("meta", json::object())};
  auto& tensors = res.net.tensors();
  const auto& listed = header.at("tensors");
  if (listed.size() != tensors.size()) throw ValidationError(cat(path.string(), ": tensor count mismatch"));
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    if (listed[k].at("name").get<std::string>() != tensors[k].name ||
        listed[k].at("rows").get<Eigen::Index>() != tensors[k].value.rows() ||
        listed[k].at("cols").get<Eigen::Index>() != tensors[k].value.cols())
      throw ValidationError(cat(path.string(), ": tensor ", k, " does not match the layer specs"));
    in.read(reinterpret_cast<char*>(tensors[k].value.data()),
            static_cast<std::streamsize>(tensors[k].value.size() * static_cast<Eigen::Index>(sizeof(double))));
  }
  if (!in) throw ValidationError(cat(path.string(), ": truncated checkpoint"));
  for (const auto& t : tensors)
    if (!t.value.allFinite()) throw ValidationError(cat(path.string(), ": non-finite values in ", t.name));
  return res;
}

}  // namespace humorcut
