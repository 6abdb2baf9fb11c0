// humorcut/metrics.hpp

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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "humorcut/error.hpp"

namespace humorcut {

namespace detail {

// Indices sorted by score, descending; ties keep original order.
inline std::vector<std::size_t> rank_order(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace detail

// Labels are 0/1 (nonzero = positive).
inline double average_precision(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw ValidationError(cat("average_precision: ", scores.size(), " scores, ", labels.size(), " labels"));
  const auto order = detail::rank_order(scores);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits == 0) throw ValidationError("average_precision: no positive labels");
  return sum / static_cast<double>(hits);
}

struct BestF1 {
  double f1 = 0.0;
  double threshold = 0.0;  // predict positive iff score > threshold; may be +-inf
};

// Sweeps +inf, the midpoints between consecutive distinct scores, and -inf.
// Ties on F1 resolve to the lowest threshold.
inline BestF1 best_f1(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw ValidationError(cat("best_f1: ", scores.size(), " scores, ", labels.size(), " labels"));
  const std::size_t positives =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  if (positives == 0 || positives == labels.size()) throw ValidationError("best_f1: needs both classes");

  const auto order = detail::rank_order(scores);
  constexpr double inf = std::numeric_limits<double>::infinity();
  BestF1 best{0.0, inf};  // accept-none: F1 = 0
  std::size_t tp = 0, predicted = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    // Admit the whole group of equal scores at once.
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      tp += labels[order[k]] != 0 ? 1 : 0;
      ++predicted;
      ++k;
    }
    const double thr = k < order.size() ? 0.5 * (s + scores[order[k]]) : -inf;
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + positives);
    if (f1 >= best.f1) best = {f1, thr};  // thresholds decrease, so >= keeps the lowest
  }
  return best;
}

// Mutual information over the arithmetic mean of the entropies, natural log.
// Both entropies zero -> 1; exactly one zero -> 0.
inline double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ValidationError(cat("nmi: length mismatch (", a.size(), " vs ", b.size(), ")"));
  if (a.empty()) throw ValidationError("nmi: empty labelings");
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  auto entropy = [n](const std::map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(ca);
  const double hb = entropy(cb);
  const bool za = ca.size() == 1, zb = cb.size() == 1;
  if (za && zb) return 1.0;
  if (za || zb) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += (c / n) * std::log(n * c / (ca[key.first] * cb[key.second]));
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Ranking overlap

struct RankMetricsConfig {
  std::vector<int> n_values{3, 5, 10};
};

inline void validate(const RankMetricsConfig& c) {
  if (c.n_values.empty()) throw ValidationError("rank metrics: n_values empty");
  for (std::size_t i = 0; i < c.n_values.size(); ++i) {
    if (c.n_values[i] <= 0) throw ValidationError("rank metrics: n_values must be positive");
    if (i > 0 && c.n_values[i] <= c.n_values[i - 1])
      throw ValidationError("rank metrics: n_values must be strictly increasing");
  }
}

namespace detail {

inline std::set<int> head_set(std::span<const int> ranked, int n) {
  const auto take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(n, 0)));
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take)};
}

inline std::size_t intersection_size(const std::set<int>& a, const std::set<int>& b) {
  std::size_t n = 0;
  for (int x : a) n += b.count(x);
  return n;
}

}  // namespace detail

// |gt_set ∩ predicted[:N]| / N. The denominator stays N for short lists.
inline double top_iou(const std::set<int>& gt_set, std::span<const int> predicted, int n) {
  if (n < 1) throw ValidationError("top_iou: N must be >= 1");
  return static_cast<double>(detail::intersection_size(detail::head_set(predicted, n), gt_set)) / n;
}

// |set(gt[:N]) ∩ set(predicted[:N])| / N.
inline double top_iou_align(std::span<const int> gt_ranked, std::span<const int> predicted, int n) {
  if (n < 1) throw ValidationError("top_iou_align: N must be >= 1");
  return static_cast<double>(
             detail::intersection_size(detail::head_set(gt_ranked, n), detail::head_set(predicted, n))) /
         n;
}

struct RankReport {
  std::vector<int> n_values;
  std::vector<double> top_iou;
  std::vector<double> top_iou_align;
  double eval_metric = 0.0;  // raw sum, in [0, 2*|n_values|]
  double normalized() const { return n_values.empty() ? 0.0 : eval_metric / (2.0 * n_values.size()); }
};

inline RankReport rank_report(std::span<const int> gt_ranked, std::span<const int> predicted,
                              const RankMetricsConfig& cfg = {}) {
  validate(cfg);
  const std::set<int> gt_set(gt_ranked.begin(), gt_ranked.end());
  RankReport r;
  r.n_values = cfg.n_values;
  for (int n : cfg.n_values) {
    r.top_iou.push_back(top_iou(gt_set, predicted, n));
    r.top_iou_align.push_back(top_iou_align(gt_ranked, predicted, n));
    r.eval_metric += r.top_iou.back() + r.top_iou_align.back();
  }
  return r;
}

inline double eval_metric(std::span<const int> gt_ranked, std::span<const int> predicted,
                          const RankMetricsConfig& cfg = {}) {
  return rank_report(gt_ranked, predicted, cfg).eval_metric;
}

// ---------------------------------------------------------------------------
// Scene correspondence

struct TimeSpan {
  int id = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

inline double temporal_iou(const TimeSpan& a, const TimeSpan& b) {
  const double inter = std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
  const double uni = std::max(a.end_s, b.end_s) - std::min(a.start_s, b.start_s);
  return uni > 0.0 ? inter / uni : 0.0;
}

// Greedy one-to-one matching by descending temporal IoU; pairs below
// `iou_threshold` stay unmatched. Returns, per predicted span, the matched
// gt id or a fresh id (above every gt id).
inline std::vector<int> match_scenes(std::span<const TimeSpan> gt, std::span<const TimeSpan> pred,
                                     double iou_threshold = 0.5) {
  struct Pair {
    double iou;
    std::size_t p, g;
  };
  std::vector<Pair> pairs;
  for (std::size_t p = 0; p < pred.size(); ++p)
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const double iou = temporal_iou(pred[p], gt[g]);
      if (iou > 0.0 && iou >= iou_threshold) pairs.push_back({iou, p, g});
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });
  std::vector<int> out(pred.size(), std::numeric_limits<int>::min());
  std::vector<bool> used(gt.size(), false);
  for (const auto& pr : pairs) {
    if (out[pr.p] != std::numeric_limits<int>::min() || used[pr.g]) continue;
    out[pr.p] = gt[pr.g].id;
    used[pr.g] = true;
  }
  int fresh = 0;
  for (const auto& g : gt) fresh = std::max(fresh, g.id + 1);
  for (auto& id : out)
    if (id == std::numeric_limits<int>::min()) id = fresh++;
  return out;
}

}  // namespace humorcut
