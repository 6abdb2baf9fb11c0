// tests/oracles.hpp

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

// Slow, direct reference implementations used to cross-check the library.
// None of them sort; each counts straight from the definitions.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace oracle {

// Position of item i in a descending stable ordering = number of items that
// precede it: strictly higher scores, or equal scores at a lower index.
inline int rank_of(const std::vector<double>& s, std::size_t i) {
  int r = 0;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (s[j] > s[i] || (s[j] == s[i] && j < i)) ++r;
  return r;
}

inline double average_precision(const std::vector<double>& s, const std::vector<int>& y) {
  double sum = 0.0;
  int p = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    ++p;
    const int k = rank_of(s, i);
    int hits = 0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[j] && rank_of(s, j) <= k) ++hits;
    sum += static_cast<double>(hits) / (k + 1);
  }
  return sum / p;
}

struct F1 {
  double f1;
  double threshold;
};

// Every threshold in {+inf, -inf} and every midpoint of two distinct
// scores that have no score strictly between them.
inline F1 best_f1(const std::vector<double>& s, const std::vector<int>& y) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> thr{inf, -inf};
  for (double a : s)
    for (double b : s) {
      if (!(a < b)) continue;
      bool adjacent = true;
      for (double c : s)
        if (c > a && c < b) adjacent = false;
      if (adjacent) thr.push_back(0.5 * (a + b));
    }
  int pos = 0;
  for (int v : y) pos += v != 0;
  F1 best{-1.0, inf};
  for (double t : thr) {
    int tp = 0, pred = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] > t) {
        ++pred;
        tp += y[i] != 0;
      }
    const double f = 2.0 * tp / (pred + pos);
    if (f > best.f1 || (f == best.f1 && t < best.threshold)) best = {f, t};
  }
  return best;
}

// I(A;B) as H(A) + H(B) - H(A,B).
inline double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  auto h = [&](auto key) {
    std::vector<std::pair<long long, int>> counts;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const long long k = key(i);
      auto it = std::find_if(counts.begin(), counts.end(), [&](auto& c) { return c.first == k; });
      if (it == counts.end()) counts.push_back({k, 1});
      else ++it->second;
    }
    double out = 0.0;
    for (auto& [_, c] : counts) out -= (c / n) * std::log(c / n);
    return std::make_pair(out, counts.size());
  };
  const auto [ha, ka] = h([&](std::size_t i) { return static_cast<long long>(a[i]); });
  const auto [hb, kb] = h([&](std::size_t i) { return static_cast<long long>(b[i]); });
  const auto [hab, kab] = h([&](std::size_t i) { return static_cast<long long>(a[i]) * 1000003LL + b[i]; });
  (void)kab;
  if (ka == 1 && kb == 1) return 1.0;
  if (ka == 1 || kb == 1) return 0.0;
  const double mi = ha + hb - hab;
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

inline double top_iou(const std::vector<int>& gt, const std::vector<int>& pred, int n) {
  std::vector<int> head;
  for (int i = 0; i < n && i < static_cast<int>(pred.size()); ++i)
    if (std::find(head.begin(), head.end(), pred[i]) == head.end()) head.push_back(pred[i]);
  int hit = 0;
  for (int x : head) hit += std::find(gt.begin(), gt.end(), x) != gt.end();
  return static_cast<double>(hit) / n;
}

inline double top_iou_align(const std::vector<int>& gt, const std::vector<int>& pred, int n) {
  std::vector<int> g(gt.begin(), gt.begin() + std::min<std::size_t>(gt.size(), n));
  return top_iou(g, pred, n);
}

inline double eval_metric(const std::vector<int>& gt, const std::vector<int>& pred) {
  double s = 0.0;
  for (int n : {3, 5, 10}) s += top_iou(gt, pred, n) + top_iou_align(gt, pred, n);
  return s;
}

}  // namespace oracle
