// humorcut/scoring.hpp

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

// Humor score
//   s = w1*f1 + w2*f2 + w3*f3 + w4*exp(-f4 / t_c)
// over per-title min-max normalized f1..f3, plus weight fitting by simplex
// grid search or by regression mapped onto the simplex.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/humor_audio.hpp"
#include "humorcut/metrics.hpp"
#include "humorcut/rng.hpp"

namespace humorcut {

struct HumorFeatures {
  int scene_id = 0;
  int first_shot = 0;
  int last_shot = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  double f1 = 0.0;  // mean laughter
  double f2 = 0.0;  // above-threshold laughter fraction
  double f3 = 0.0;  // text scorer probability
  double f4 = 0.0;  // duration, seconds
  bool text_funny = false;
  GuardrailVerdict guardrail;
};

inline void to_json(json& j, const HumorFeatures& h) {
  j = json{{"scene_id", h.scene_id}, {"first_shot", h.first_shot}, {"last_shot", h.last_shot},
           {"start_s", h.start_s},   {"end_s", h.end_s},           {"f1", h.f1},
           {"f2", h.f2},             {"f3", h.f3},                 {"f4", h.f4},
           {"text_funny", h.text_funny}, {"guardrail", h.guardrail}};
}
inline void from_json(const json& j, HumorFeatures& h) {
  h.scene_id = j.at("scene_id").get<int>();
  h.first_shot = j.at("first_shot").get<int>();
  h.last_shot = j.at("last_shot").get<int>();
  h.start_s = j.at("start_s").get<double>();
  h.end_s = j.at("end_s").get<double>();
  h.f1 = j.at("f1").get<double>();
  h.f2 = j.at("f2").get<double>();
  h.f3 = j.at("f3").get<double>();
  h.f4 = j.at("f4").get<double>();
  h.text_funny = j.value("text_funny", false);
  h.guardrail = j.at("guardrail").get<GuardrailVerdict>();
}

struct ScoreWeights {
  std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
  double t_c = 60.0;
};

inline void validate(const ScoreWeights& s) {
  double sum = 0.0;
  for (double w : s.w) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("score weights: w1..w4 must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError(cat("score weights: sum is ", sum, ", expected 1"));
  if (!(s.t_c > 0.0) || !std::isfinite(s.t_c)) throw ValidationError("score weights: t_c must be > 0");
}

struct FittedWeights {
  ScoreWeights weights;
  std::string method = "default";
  double objective = 0.0;  // mean eval_metric over the fitting titles
};

inline void to_json(json& j, const FittedWeights& f) {
  j = json{{"w1", f.weights.w[0]}, {"w2", f.weights.w[1]}, {"w3", f.weights.w[2]}, {"w4", f.weights.w[3]},
           {"t_c", f.weights.t_c}, {"method", f.method},   {"objective", f.objective}};
}
inline void from_json(const json& j, FittedWeights& f) {
  const ScoreWeights d;
  f.weights.w = {j.value("w1", d.w[0]), j.value("w2", d.w[1]), j.value("w3", d.w[2]), j.value("w4", d.w[3])};
  f.weights.t_c = j.value("t_c", d.t_c);
  f.method = j.value("method", std::string("default"));
  f.objective = j.value("objective", 0.0);
  validate(f.weights);
}

inline FittedWeights load_weights(const std::filesystem::path& path) { return parse_json_file(path).get<FittedWeights>(); }

// Min-max over the title's candidates for f1..f3; a constant column maps to 0.5.
inline std::vector<HumorFeatures> normalize_features(std::span<const HumorFeatures> candidates) {
  if (candidates.empty()) throw ValidationError("normalize_features: no candidates");
  std::vector<HumorFeatures> out(candidates.begin(), candidates.end());
  auto column = [&](double HumorFeatures::*field) {
    double lo = out.front().*field, hi = lo;
    for (const auto& c : out) {
      lo = std::min(lo, c.*field);
      hi = std::max(hi, c.*field);
    }
    for (auto& c : out) c.*field = hi > lo ? (c.*field - lo) / (hi - lo) : 0.5;
  };
  column(&HumorFeatures::f1);
  column(&HumorFeatures::f2);
  column(&HumorFeatures::f3);
  return out;
}

inline std::array<double, 4> design_row(const HumorFeatures& f, double t_c) {
  return {f.f1, f.f2, f.f3, std::exp(-f.f4 / t_c)};
}

inline double humor_score(const HumorFeatures& f, const ScoreWeights& s) {
  const auto x = design_row(f, s.t_c);
  return s.w[0] * x[0] + s.w[1] * x[1] + s.w[2] * x[2] + s.w[3] * x[3];
}

struct RankedScene {
  int rank = 0;  // 1-based
  double score = 0.0;
  HumorFeatures features;
};

inline void to_json(json& j, const RankedScene& r) {
  j = json{{"rank", r.rank},
           {"score", r.score},
           {"scene_id", r.features.scene_id},
           {"start_s", r.features.start_s},
           {"end_s", r.features.end_s},
           {"features", {{"f1", r.features.f1}, {"f2", r.features.f2}, {"f3", r.features.f3}, {"f4", r.features.f4}}},
           {"guardrail", r.features.guardrail}};
}
inline void from_json(const json& j, RankedScene& r) {
  r.rank = j.at("rank").get<int>();
  r.score = j.at("score").get<double>();
  r.features.scene_id = j.at("scene_id").get<int>();
  r.features.start_s = j.at("start_s").get<double>();
  r.features.end_s = j.at("end_s").get<double>();
  const auto& f = j.at("features");
  r.features.f1 = f.at("f1").get<double>();
  r.features.f2 = f.at("f2").get<double>();
  r.features.f3 = f.at("f3").get<double>();
  r.features.f4 = f.at("f4").get<double>();
  r.features.guardrail = j.at("guardrail").get<GuardrailVerdict>();
}

namespace detail {

// Descending score; ties go to the earlier start, then the lower scene id.
inline std::vector<std::size_t> score_order(std::span<const HumorFeatures> c, std::span<const double> scores) {
  std::vector<std::size_t> idx(c.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (c[a].start_s != c[b].start_s) return c[a].start_s < c[b].start_s;
    return c[a].scene_id < c[b].scene_id;
  });
  return idx;
}

}  // namespace detail

inline std::vector<RankedScene> rank_scenes(std::span<const HumorFeatures> candidates, const ScoreWeights& w) {
  std::vector<double> scores;
  for (const auto& c : candidates) scores.push_back(humor_score(c, w));
  std::vector<RankedScene> out;
  int rank = 1;
  for (std::size_t i : detail::score_order(candidates, scores)) out.push_back({rank++, scores[i], candidates[i]});
  return out;
}

// ---------------------------------------------------------------------------
// Weight fitting

// One title's normalized candidates in the curator id space.
struct FitTitle {
  std::string title_id;
  std::vector<HumorFeatures> candidates;
  std::vector<int> gt_ranked;  // curator funny ids, best first
  std::vector<double> target;  // curator score per candidate, 0 when absent
  std::vector<int> funny;      // curator is_funny per candidate
};

// Funny curator entries by descending score; ties to the earlier start.
inline std::vector<int> curator_ranking(std::span<const CuratorAnnotation> curator) {
  std::vector<CuratorAnnotation> f;
  for (const auto& c : curator)
    if (c.is_funny) f.push_back(c);
  std::stable_sort(f.begin(), f.end(), [](const auto& a, const auto& b) {
    if (a.curator_score != b.curator_score) return a.curator_score > b.curator_score;
    return a.start_s < b.start_s;
  });
  std::vector<int> ids;
  for (const auto& c : f) ids.push_back(c.scene_id);
  return ids;
}

// candidates must already carry curator ids (gt scenes, or matched spans).
inline FitTitle make_fit_title(std::string title_id, std::span<const HumorFeatures> candidates,
                               std::span<const CuratorAnnotation> curator) {
  FitTitle t;
  t.title_id = std::move(title_id);
  t.candidates = normalize_features(candidates);
  t.gt_ranked = curator_ranking(curator);
  std::map<int, const CuratorAnnotation*> by_id;
  for (const auto& c : curator) by_id[c.scene_id] = &c;
  for (const auto& c : t.candidates) {
    const auto it = by_id.find(c.scene_id);
    t.target.push_back(it != by_id.end() ? it->second->curator_score : 0.0);
    t.funny.push_back(it != by_id.end() && it->second->is_funny ? 1 : 0);
  }
  return t;
}

inline void check_fit_titles(std::span<const FitTitle> titles) {
  if (titles.empty()) throw ValidationError("weight fitting: no annotated titles");
  for (const auto& t : titles) {
    if (t.gt_ranked.size() < 3)
      throw ValidationError(cat("weight fitting: title ", t.title_id, " has ", t.gt_ranked.size(),
                                " curator-ranked scenes, need >= 3"));
    if (t.candidates.empty()) throw ValidationError(cat("weight fitting: title ", t.title_id, " has no candidates"));
  }
}

inline double fit_objective(std::span<const FitTitle> titles, const ScoreWeights& w,
                            const RankMetricsConfig& metrics = {}) {
  double sum = 0.0;
  for (const auto& t : titles) {
    std::vector<int> pred;
    for (const auto& r : rank_scenes(t.candidates, w)) pred.push_back(r.features.scene_id);
    sum += eval_metric(t.gt_ranked, pred, metrics);
  }
  return sum / static_cast<double>(titles.size());
}

// Lattice {w >= 0, sum w = 1, w multiple of step}, lexicographically ascending.
inline std::vector<std::array<double, 4>> simplex_lattice(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ValidationError("simplex_lattice: step must be in (0,1]");
  const long k = std::lround(1.0 / step);
  if (std::abs(static_cast<double>(k) * step - 1.0) > 1e-9)
    throw ValidationError(cat("simplex_lattice: 1/step must be an integer, got step ", step));
  std::vector<std::array<double, 4>> out;
  const double kd = static_cast<double>(k);
  for (long a = 0; a <= k; ++a)
    for (long b = 0; a + b <= k; ++b)
      for (long c = 0; a + b + c <= k; ++c)
        out.push_back({a / kd, b / kd, c / kd, (k - a - b - c) / kd});
  return out;
}

inline FittedWeights fit_weights_grid(std::span<const FitTitle> titles, double step = 0.05, double t_c = 60.0,
                                      const RankMetricsConfig& metrics = {}) {
  check_fit_titles(titles);
  FittedWeights best;
  best.method = "grid";
  best.objective = -1.0;
  for (const auto& w : simplex_lattice(step)) {
    const ScoreWeights sw{w, t_c};
    const double obj = fit_objective(titles, sw, metrics);
    if (obj > best.objective) {
      best.weights = sw;
      best.objective = obj;
    }
  }
  return best;
}

enum class RegressionMethod { Linear, Logistic, Tree };

inline std::string to_string(RegressionMethod m) {
  switch (m) {
    case RegressionMethod::Linear: return "linear";
    case RegressionMethod::Logistic: return "logistic";
    case RegressionMethod::Tree: return "tree";
  }
  return "?";
}

inline RegressionMethod parse_regression_method(const std::string& s) {
  if (s == "linear") return RegressionMethod::Linear;
  if (s == "logistic") return RegressionMethod::Logistic;
  if (s == "tree") return RegressionMethod::Tree;
  throw ValidationError(cat("unknown regression method '", s, "' (linear | logistic | tree)"));
}

inline constexpr double kRidge = 1e-6;

namespace detail {

inline std::array<double, 4> clip_to_simplex(std::array<double, 4> c) {
  double sum = 0.0;
  for (auto& v : c) {
    v = std::isfinite(v) ? std::max(0.0, v) : 0.0;
    sum += v;
  }
  if (sum <= 0.0) return {0.25, 0.25, 0.25, 0.25};
  for (auto& v : c) v /= sum;
  return c;
}

struct Design {
  Eigen::MatrixXd x;  // n x 4
  Eigen::VectorXd y;
  Eigen::VectorXd label;
};

inline Design design(std::span<const FitTitle> titles, double t_c) {
  std::size_t n = 0;
  for (const auto& t : titles) n += t.candidates.size();
  Design d{Eigen::MatrixXd(n, 4), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  Eigen::Index r = 0;
  for (const auto& t : titles)
    for (std::size_t i = 0; i < t.candidates.size(); ++i, ++r) {
      const auto row = design_row(t.candidates[i], t_c);
      for (int c = 0; c < 4; ++c) d.x(r, c) = row[c];
      d.y(r) = t.target[i];
      d.label(r) = t.funny[i];
    }
  return d;
}

// Least squares with an intercept column; 1e-6 ridge on every coefficient.
inline std::array<double, 4> linear_fit(const Design& d) {
  const Eigen::Index n = d.x.rows();
  Eigen::MatrixXd a(n, 5);
  a.leftCols(4) = d.x;
  a.col(4).setOnes();
  Eigen::MatrixXd g = a.transpose() * a;
  g.diagonal().array() += kRidge;
  const Eigen::VectorXd beta = g.ldlt().solve(a.transpose() * d.y);
  return {beta(0), beta(1), beta(2), beta(3)};
}

// Mean log-loss by full-batch gradient descent, with intercept.
inline std::array<double, 4> logistic_fit(const Design& d, int iters = 20000, double lr = 0.5) {
  const double pos = d.label.sum();
  if (pos == 0.0 || pos == static_cast<double>(d.label.size()))
    throw ValidationError("logistic fit: all labels identical, no decision boundary");
  const Eigen::Index n = d.x.rows();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(4);
  double b0 = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd z = (d.x * beta).array() + b0;
    const Eigen::VectorXd p = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    const Eigen::VectorXd r = p - d.label;
    beta -= lr * ((d.x.transpose() * r) / static_cast<double>(n) + kRidge * beta);
    b0 -= lr * r.mean();
  }
  return {beta(0), beta(1), beta(2), beta(3)};
}

// Depth-limited CART on squared error; returns total impurity reduction per
// feature. Splits sit at midpoints between consecutive distinct values; ties
// keep the lower feature index, then the lower threshold.
inline void tree_grow(const Design& d, std::vector<Eigen::Index> rows, int depth, std::array<double, 4>& gain) {
  if (depth == 0 || rows.size() < 2) return;
  auto sse = [&](double s, double s2, double cnt) { return cnt > 0 ? s2 - s * s / cnt : 0.0; };
  const double cnt = static_cast<double>(rows.size());
  double mean = 0.0;
  for (auto r : rows) mean += d.y(r);
  mean /= cnt;
  // Targets are centred per node.
  std::map<Eigen::Index, double> yc;
  double tot = 0.0, tot2 = 0.0;
  for (auto r : rows) {
    const double v = d.y(r) - mean;
    yc[r] = v;
    tot += v;
    tot2 += v * v;
  }
  const double parent = sse(tot, tot2, cnt);
  if (!(parent > 0.0)) return;
  // Reductions within this relative margin count as ties.
  const double margin = 1e-9 * parent;
  double best = margin;
  int best_f = -1;
  double best_thr = 0.0;
  for (int f = 0; f < 4; ++f) {
    std::vector<Eigen::Index> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return d.x(a, f) < d.x(b, f); });
    double ls = 0.0, ls2 = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const double v = yc[sorted[i]];
      ls += v;
      ls2 += v * v;
      const double xv = d.x(sorted[i], f), xn = d.x(sorted[i + 1], f);
      if (xv == xn) continue;
      const double lc = static_cast<double>(i + 1);
      const double red = parent - sse(ls, ls2, lc) - sse(tot - ls, tot2 - ls2, cnt - lc);
      if (red > best + (best_f < 0 ? 0.0 : margin)) {
        best = red;
        best_f = f;
        best_thr = 0.5 * (xv + xn);
      }
    }
  }
  if (best_f < 0) return;
  gain[best_f] += best;
  std::vector<Eigen::Index> left, right;
  for (auto r : rows) (d.x(r, best_f) <= best_thr ? left : right).push_back(r);
  tree_grow(d, std::move(left), depth - 1, gain);
  tree_grow(d, std::move(right), depth - 1, gain);
}

}  // namespace detail

inline FittedWeights fit_weights_regression(std::span<const FitTitle> titles, RegressionMethod method,
                                            double t_c = 60.0, const RankMetricsConfig& metrics = {}) {
  check_fit_titles(titles);
  const auto d = detail::design(titles, t_c);
  std::array<double, 4> coef{};
  switch (method) {
    case RegressionMethod::Linear: coef = detail::linear_fit(d); break;
    case RegressionMethod::Logistic: coef = detail::logistic_fit(d); break;
    case RegressionMethod::Tree: {
      std::vector<Eigen::Index> rows(static_cast<std::size_t>(d.x.rows()));
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
      detail::tree_grow(d, std::move(rows), 3, coef);
      break;
    }
  }
  FittedWeights out;
  out.weights = {detail::clip_to_simplex(coef), t_c};
  out.method = to_string(method);
  out.objective = fit_objective(titles, out.weights, metrics);
  return out;
}

struct TitleSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Seeded shuffle; round(fraction * n) titles go to train, at least one on
// each side when there are two or more titles.
inline TitleSplit split_titles(std::vector<std::string> ids, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ValidationError("split_titles: fraction must be in (0,1]");
  if (ids.empty()) throw ValidationError("split_titles: no titles");
  std::sort(ids.begin(), ids.end());
  Rng rng(mix_seed(seed, 0x5B117ULL));
  rng.shuffle(std::span<std::string>(ids));
  auto n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(ids.size())));
  if (ids.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
  else n_train = 1;
  TitleSplit s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace humorcut
