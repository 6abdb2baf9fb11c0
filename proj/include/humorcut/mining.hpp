// humorcut/mining.hpp

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

// Triplet generation. Guided mining uses ground-truth scenes: the positive
// shares the anchor's scene and the negative comes from a scene at most
// `scene_window` scenes away. The heuristic variants ignore annotations and
// use shot distance only.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/rng.hpp"

namespace humorcut {

enum class TripletSource { Guided, V1, V2, V3 };

inline const char* to_string(TripletSource s) {
  switch (s) {
    case TripletSource::Guided: return "guided";
    case TripletSource::V1: return "V1";
    case TripletSource::V2: return "V2";
    case TripletSource::V3: return "V3";
  }
  return "?";
}

inline TripletSource parse_triplet_source(const std::string& s) {
  if (s == "guided" || s == "Guided") return TripletSource::Guided;
  if (s == "V1" || s == "v1") return TripletSource::V1;
  if (s == "V2" || s == "v2") return TripletSource::V2;
  if (s == "V3" || s == "v3") return TripletSource::V3;
  throw ValidationError(cat("unknown triplet source '", s, "' (expected guided, V1, V2 or V3)"));
}

struct Triplet {
  int anchor = 0;
  int positive = 0;
  int negative = 0;
  TripletSource source = TripletSource::Guided;
  std::string title_id;

  bool operator==(const Triplet&) const = default;
};

inline void to_json(json& j, const Triplet& t) {
  j = json{{"title_id", t.title_id}, {"anchor", t.anchor}, {"positive", t.positive},
           {"negative", t.negative}, {"source", to_string(t.source)}};
}
inline void from_json(const json& j, Triplet& t) {
  j.at("title_id").get_to(t.title_id);
  j.at("anchor").get_to(t.anchor);
  j.at("positive").get_to(t.positive);
  j.at("negative").get_to(t.negative);
  t.source = parse_triplet_source(j.at("source").get<std::string>());
}

struct HeuristicWindow {
  int positive_radius;  // |pos - anchor| <= radius
  int negative_min;     // |neg - anchor| >= min
};

inline HeuristicWindow heuristic_window(TripletSource variant) {
  switch (variant) {
    case TripletSource::V1: return {3, 10};
    case TripletSource::V2: return {2, 15};
    case TripletSource::V3: return {1, 30};
    case TripletSource::Guided: break;
  }
  throw ValidationError("heuristic_window: guided mining has no shot window");
}

// Anchors are drawn across scenes in proportion to their ordered
// (anchor, positive) pair counts m*(m-1), so every same-scene pair is
// equally likely. The negative is uniform over all shots in scenes at
// distance 1..scene_window; the pool shrinks at title edges.
inline std::vector<Triplet> mine_guided(const Title& title, int n_triplets, int scene_window,
                                        std::uint64_t seed) {
  if (!title.gt_scenes) throw ValidationError(cat(title.title_id, ": guided mining needs gt_scenes"));
  if (n_triplets < 0) throw ValidationError("mine_guided: n_triplets must be >= 0");
  const auto& scenes = *title.gt_scenes;
  const int n_scenes = static_cast<int>(scenes.size());
  if (n_scenes < 2) throw ValidationError(cat(title.title_id, ": no eligible scene (title has a single scene)"));
  if (scene_window < 1)
    throw ValidationError(cat(title.title_id, ": empty negative pool (scene_window must be >= 1)"));

  std::vector<std::uint64_t> cumulative;
  std::uint64_t total_pairs = 0;
  for (const auto& s : scenes) {
    const auto m = static_cast<std::uint64_t>(s.size());
    total_pairs += m * (m - 1);
    cumulative.push_back(total_pairs);
  }
  if (total_pairs == 0)
    throw ValidationError(cat(title.title_id, ": no eligible scene (every scene has a single shot)"));

  Rng rng(seed);
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(n_triplets));
  for (int i = 0; i < n_triplets; ++i) {
    const std::uint64_t pick = rng.below(total_pairs);
    int s = 0;
    while (cumulative[s] <= pick) ++s;
    const auto& scene = scenes[s];

    const int anchor = scene.first_shot + static_cast<int>(rng.below(scene.size()));
    int positive = scene.first_shot + static_cast<int>(rng.below(scene.size() - 1));
    if (positive >= anchor) ++positive;

    const int lo = std::max(0, s - scene_window);
    const int hi = std::min(n_scenes - 1, s + scene_window);
    int pool = 0;
    for (int q = lo; q <= hi; ++q)
      if (q != s) pool += scenes[q].size();
    int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(pool)));
    int negative = -1;
    for (int q = lo; q <= hi && negative < 0; ++q) {
      if (q == s) continue;
      if (r < scenes[q].size()) negative = scenes[q].first_shot + r;
      else r -= scenes[q].size();
    }
    out.push_back({anchor, positive, negative, TripletSource::Guided, title.title_id});
  }
  return out;
}

// True if some anchor admits both a positive and a far negative.
inline bool heuristic_feasible(TripletSource variant, int n_shots) {
  const auto w = heuristic_window(variant);
  return n_shots >= 2 && n_shots - 1 >= w.negative_min;
}

// Shot-distance heuristics. Anchors are uniform over the shots that have a
// far negative; the positive is uniform in the +-radius window (clipped to
// the title) and the negative uniform over the far region.
inline std::vector<Triplet> mine_heuristic(TripletSource variant, int n_shots, int n_triplets,
                                           std::uint64_t seed, const std::string& title_id = {}) {
  const auto w = heuristic_window(variant);
  if (!heuristic_feasible(variant, n_shots))
    throw ValidationError(cat("infeasible variant ", to_string(variant), ": ", n_shots,
                              " shots admit no negative at distance >= ", w.negative_min));

  std::vector<int> anchors;
  for (int a = 0; a < n_shots; ++a)
    if (a - w.negative_min >= 0 || a + w.negative_min <= n_shots - 1) anchors.push_back(a);

  Rng rng(seed);
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(n_triplets));
  for (int i = 0; i < n_triplets; ++i) {
    const int anchor = anchors[rng.below(anchors.size())];

    const int plo = std::max(0, anchor - w.positive_radius);
    const int phi = std::min(n_shots - 1, anchor + w.positive_radius);
    int positive = plo + static_cast<int>(rng.below(static_cast<std::uint64_t>(phi - plo)));
    if (positive >= anchor) ++positive;

    // Far region: [0, anchor - min] and [anchor + min, n_shots - 1].
    const int left = std::max(0, anchor - w.negative_min + 1);
    const int right = std::max(0, n_shots - (anchor + w.negative_min));
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(left + right)));
    const int negative = r < left ? r : anchor + w.negative_min + (r - left);

    out.push_back({anchor, positive, negative, variant, title_id});
  }
  return out;
}

}  // namespace humorcut
