// humorcut/synth.hpp

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

// Deterministic synthetic corpus with planted scene structure, funny scenes
// and improper-humor scenes. Every title is a pure function of
// (config, title_index).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/rng.hpp"

namespace humorcut {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct SynthConfig {
  int n_titles = 4;
  IntRange scenes_per_title{12, 20};
  IntRange shots_per_scene{3, 8};
  int d_vis = 512;
  double within_scene_sigma = 0.05;
  double between_scene_separation = 1.0;
  double funny_scene_fraction = 0.3;
  double improper_scene_fraction = 0.1;
  std::uint64_t seed = 0;

  // Extensions. Defaults reproduce the plain generator.
  // Scene centroids (visual and text) live in corpus-wide random subspaces
  // of this rank (0 = the full sphere).
  int signal_rank = 0;
  // Probability that a scene reuses the previous scene's visual centroid
  // (same location, new conversation); only text then marks the cut.
  double visual_reuse_fraction = 0.0;
  double shot_min_s = 2.0;
  double shot_max_s = 6.0;
  IntRange sentences_per_scene{3, 6};
};

inline void to_json(json& j, const IntRange& r) { j = json::array({r.lo, r.hi}); }
inline void from_json(const json& j, IntRange& r) {
  r.lo = j.at(0).get<int>();
  r.hi = j.at(1).get<int>();
}

inline void to_json(json& j, const SynthConfig& c) {
  j = json{{"n_titles", c.n_titles},
           {"scenes_per_title", c.scenes_per_title},
           {"shots_per_scene", c.shots_per_scene},
           {"d_vis", c.d_vis},
           {"within_scene_sigma", c.within_scene_sigma},
           {"between_scene_separation", c.between_scene_separation},
           {"funny_scene_fraction", c.funny_scene_fraction},
           {"improper_scene_fraction", c.improper_scene_fraction},
           {"seed", c.seed},
           {"signal_rank", c.signal_rank},
           {"visual_reuse_fraction", c.visual_reuse_fraction},
           {"shot_min_s", c.shot_min_s},
           {"shot_max_s", c.shot_max_s},
           {"sentences_per_scene", c.sentences_per_scene}};
}

inline void from_json(const json& j, SynthConfig& c) {
  const SynthConfig d;
  c.n_titles = j.value("n_titles", d.n_titles);
  c.scenes_per_title = j.value("scenes_per_title", d.scenes_per_title);
  c.shots_per_scene = j.value("shots_per_scene", d.shots_per_scene);
  c.d_vis = j.value("d_vis", d.d_vis);
  c.within_scene_sigma = j.value("within_scene_sigma", d.within_scene_sigma);
  c.between_scene_separation = j.value("between_scene_separation", d.between_scene_separation);
  c.funny_scene_fraction = j.value("funny_scene_fraction", d.funny_scene_fraction);
  c.improper_scene_fraction = j.value("improper_scene_fraction", d.improper_scene_fraction);
  c.seed = j.value("seed", d.seed);
  c.signal_rank = j.value("signal_rank", d.signal_rank);
  c.visual_reuse_fraction = j.value("visual_reuse_fraction", d.visual_reuse_fraction);
  c.shot_min_s = j.value("shot_min_s", d.shot_min_s);
  c.shot_max_s = j.value("shot_max_s", d.shot_max_s);
  c.sentences_per_scene = j.value("sentences_per_scene", d.sentences_per_scene);
}

inline void validate(const SynthConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(cat("synth config: ", what));
  };
  require(c.n_titles >= 1, "n_titles must be >= 1");
  require(c.scenes_per_title.lo >= 1 && c.scenes_per_title.lo <= c.scenes_per_title.hi,
          "scenes_per_title range empty");
  require(c.shots_per_scene.lo >= 1 && c.shots_per_scene.lo <= c.shots_per_scene.hi,
          "shots_per_scene range empty");
  require(c.sentences_per_scene.lo >= 0 && c.sentences_per_scene.lo <= c.sentences_per_scene.hi,
          "sentences_per_scene range empty");
  require(c.d_vis >= 1, "d_vis must be >= 1");
  require(c.within_scene_sigma > 0, "within_scene_sigma must be > 0");
  require(c.between_scene_separation > 0, "between_scene_separation must be > 0");
  require(c.funny_scene_fraction >= 0 && c.improper_scene_fraction >= 0 &&
              c.funny_scene_fraction + c.improper_scene_fraction <= 1.0,
          "scene fractions must be >= 0 and sum to <= 1");
  require(c.signal_rank >= 0 && c.signal_rank <= c.d_vis, "signal_rank must be in [0, d_vis]");
  require(c.visual_reuse_fraction >= 0 && c.visual_reuse_fraction <= 1, "visual_reuse_fraction outside [0,1]");
  require(c.shot_min_s > 0 && c.shot_min_s <= c.shot_max_s, "shot duration range invalid");
}

namespace synth {

inline constexpr std::array<const char*, 15> kSubjects = {
    "the captain", "my neighbor", "the doctor", "a stranger", "the teacher",
    "her brother", "the mayor", "our driver", "the chef", "his partner",
    "the detective", "a tourist", "the manager", "my cousin", "the pilot"};
inline constexpr std::array<const char*, 15> kVerbs = {
    "opens", "carries", "finds", "repairs", "watches", "paints", "signs", "moves",
    "checks", "follows", "cleans", "borrows", "locks", "counts", "reads"};
inline constexpr std::array<const char*, 20> kObjects = {
    "the door", "a letter", "the map", "the car", "a ticket", "the window",
    "the report", "a basket", "the engine", "the garden", "a bottle", "the fence",
    "the ledger", "a lamp", "the bridge", "the boat", "a jacket", "the radio",
    "the table", "a bucket"};
inline constexpr std::array<const char*, 10> kFunnyMarkers = {
    "banana", "pratfall", "tickle", "goofy", "hiccup",
    "whoopee", "clown", "pun", "slapstick", "giggle"};

inline constexpr std::array<const char*, 4> kDenyLabels = {"crying", "screaming", "moaning", "grunting"};
inline constexpr std::array<const char*, 3> kBenignLabels = {"speech", "music", "applause"};

inline double round_to(double x, double quantum) { return std::round(x / quantum) * quantum; }

// Uniform direction on the unit sphere in `dim` dimensions.
inline std::vector<double> unit_vector(Rng& rng, int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

// Orthonormal basis (rank x dim) by Gram-Schmidt on gaussian draws.
inline std::vector<std::vector<double>> random_basis(Rng& rng, int rank, int dim) {
  std::vector<std::vector<double>> basis;
  while (static_cast<int>(basis.size()) < rank) {
    auto v = unit_vector(rng, dim);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) dot += v[d] * b[d];
      for (int d = 0; d < dim; ++d) v[d] -= dot * b[d];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<double> scene_centroid(Rng& rng, int dim, double scale,
                                          const std::vector<std::vector<double>>& basis) {
  if (basis.empty()) {
    auto v = unit_vector(rng, dim);
    for (auto& x : v) x *= scale;
    return v;
  }
  const auto coeffs = unit_vector(rng, static_cast<int>(basis.size()));
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (int d = 0; d < dim; ++d) v[d] += scale * coeffs[r] * basis[r][d];
  return v;
}

enum class SceneKind { Plain, Funny, Improper };

}  // namespace synth

inline std::string synth_title_id(int title_index) {
  std::string n = std::to_string(title_index);
  return "synth_" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n;
}

inline Title generate_title(const SynthConfig& cfg, int title_index) {
  using namespace synth;
  validate(cfg);
  Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(title_index)));

  Title t;
  t.title_id = synth_title_id(title_index);
  t.visual_dim = cfg.d_vis;
  t.text_dim = kTextDim;

  // Corpus-wide signal subspaces: identical for every title of one seed.
  std::vector<std::vector<double>> basis, text_basis;
  if (cfg.signal_rank > 0) {
    Rng basis_rng(mix_seed(cfg.seed, 0xBA515ULL));
    basis = random_basis(basis_rng, cfg.signal_rank, cfg.d_vis);
    text_basis = random_basis(basis_rng, cfg.signal_rank, kTextDim);
  }

  const int n_scenes = static_cast<int>(rng.range(cfg.scenes_per_title.lo, cfg.scenes_per_title.hi));

  // Scene roles: a seeded permutation picks funny, then improper scenes.
  std::vector<SceneKind> kind(static_cast<std::size_t>(n_scenes), SceneKind::Plain);
  std::vector<double> intensity(static_cast<std::size_t>(n_scenes), 0.0);
  {
    std::vector<int> order(static_cast<std::size_t>(n_scenes));
    for (int s = 0; s < n_scenes; ++s) order[s] = s;
    rng.shuffle(std::span<int>(order));
    const int n_funny = static_cast<int>(std::lround(cfg.funny_scene_fraction * n_scenes));
    const int n_improper = std::min(n_scenes - n_funny,
                                    static_cast<int>(std::lround(cfg.improper_scene_fraction * n_scenes)));
    for (int i = 0; i < n_funny; ++i) kind[order[i]] = SceneKind::Funny;
    for (int i = n_funny; i < n_funny + n_improper; ++i) kind[order[i]] = SceneKind::Improper;
    for (int s = 0; s < n_scenes; ++s)
      if (kind[s] != SceneKind::Plain) intensity[s] = round_to(rng.uniform(0.1, 1.0), 1e-4);
  }

  const auto drift_vis = unit_vector(rng, cfg.d_vis);
  const auto drift_text = unit_vector(rng, kTextDim);
  const double drift_step = 0.1 * cfg.within_scene_sigma;
  const double sigma = cfg.within_scene_sigma;

  std::vector<SceneAnnotation> scenes;
  std::vector<double> visual_centroid;
  double clock = 0.0;
  for (int s = 0; s < n_scenes; ++s) {
    const int n_shots = static_cast<int>(rng.range(cfg.shots_per_scene.lo, cfg.shots_per_scene.hi));
    if (s == 0 || !rng.bernoulli(cfg.visual_reuse_fraction))
      visual_centroid = scene_centroid(rng, cfg.d_vis, cfg.between_scene_separation, basis);
    const auto text_centroid = scene_centroid(rng, kTextDim, cfg.between_scene_separation, text_basis);

    SceneAnnotation scene{s, t.n_shots(), t.n_shots() + n_shots - 1};
    for (int k = 0; k < n_shots; ++k) {
      ShotRecord shot;
      shot.shot_id = t.n_shots();
      shot.start_s = clock;
      clock = round_to(clock + rng.uniform(cfg.shot_min_s, cfg.shot_max_s), 0.01);
      shot.end_s = clock;
      const double offset = drift_step * (k - 0.5 * (n_shots - 1));
      shot.visual_feat.resize(static_cast<std::size_t>(cfg.d_vis));
      for (int d = 0; d < cfg.d_vis; ++d)
        shot.visual_feat[d] = round_to(visual_centroid[d] + sigma * rng.normal() + offset * drift_vis[d], 1e-6);
      shot.text_feat.resize(kTextDim);
      for (int d = 0; d < kTextDim; ++d)
        shot.text_feat[d] = round_to(text_centroid[d] + sigma * rng.normal() + offset * drift_text[d], 1e-6);
      shot.caption = cat("scene ", s, " shot ", k);
      t.shots.push_back(std::move(shot));
    }
    scenes.push_back(scene);
  }
  t.gt_scenes = scenes;

  // Transcript: template sentences spread over each scene.
  std::vector<TranscriptSentence> transcript;
  for (int s = 0; s < n_scenes; ++s) {
    const double start = t.span_start(scenes[s]);
    const double len = t.span_end(scenes[s]) - start;
    const int n_sent = static_cast<int>(rng.range(cfg.sentences_per_scene.lo, cfg.sentences_per_scene.hi));
    const double p_marker = kind[s] == SceneKind::Plain ? 0.0 : 0.5 + 0.5 * intensity[s];
    const int forced = n_sent > 0 && kind[s] != SceneKind::Plain ? static_cast<int>(rng.below(n_sent)) : -1;
    for (int j = 0; j < n_sent; ++j) {
      TranscriptSentence sent;
      sent.index = static_cast<int>(transcript.size());
      sent.start_s = round_to(start + (j + 0.1) * len / n_sent, 0.01);
      sent.end_s = round_to(start + (j + 0.9) * len / n_sent, 0.01);
      std::string text = cat(kSubjects[rng.below(kSubjects.size())], " ", kVerbs[rng.below(kVerbs.size())],
                             " ", kObjects[rng.below(kObjects.size())]);
      const bool marker = rng.bernoulli(p_marker) || j == forced;
      if (marker) text += cat(" like a ", kFunnyMarkers[rng.below(kFunnyMarkers.size())]);
      sent.text = text + ".";
      transcript.push_back(std::move(sent));
    }
  }
  t.transcript = std::move(transcript);

  // Laughter: background <= 0.15, bursts >= 0.8 in funny and improper scenes.
  LaughterTrack laughter;
  laughter.hop_s = 0.5;
  const auto n_frames = static_cast<std::size_t>(std::ceil(t.duration() / laughter.hop_s));
  laughter.probs.resize(n_frames);
  for (auto& p : laughter.probs) p = round_to(rng.uniform(0.0, 0.15), 1e-4);
  for (int s = 0; s < n_scenes; ++s) {
    if (kind[s] == SceneKind::Plain) continue;
    // Frames lying fully inside the scene.
    const auto first = static_cast<std::size_t>(std::ceil(t.span_start(scenes[s]) / laughter.hop_s - 1e-9));
    const auto last_excl = static_cast<std::size_t>(std::floor(t.span_end(scenes[s]) / laughter.hop_s + 1e-9));
    if (last_excl <= first) continue;
    const std::size_t inside = last_excl - first;
    const double coverage = 0.3 + 0.5 * intensity[s];
    const double scene_frames = (t.span_end(scenes[s]) - t.span_start(scenes[s])) / laughter.hop_s;
    const std::size_t burst = std::min(inside, static_cast<std::size_t>(std::ceil(coverage * scene_frames)));
    const std::size_t offset = rng.below(inside - burst + 1);
    for (std::size_t f = first + offset; f < first + offset + burst; ++f)
      laughter.probs[f] = round_to(0.8 + 0.15 * intensity[s] + rng.uniform(0.0, 0.05), 1e-4);
  }
  t.laughter = std::move(laughter);

  // Audio tags: benign cues everywhere, sub-threshold distress cues in some
  // plain scenes, confident distress cues (>= 1.5 s) in improper scenes.
  std::vector<AudioTagEvent> tags;
  for (int s = 0; s < n_scenes; ++s) {
    const double start = t.span_start(scenes[s]);
    const double end = t.span_end(scenes[s]);
    const double len = end - start;
    tags.push_back({round_to(start + 0.1 * len, 0.01), round_to(end - 0.1 * len, 0.01),
                    kBenignLabels[rng.below(kBenignLabels.size())], round_to(rng.uniform(0.6, 0.95), 1e-4)});
    if (kind[s] == SceneKind::Improper) {
      const int n_events = static_cast<int>(rng.range(1, 2));
      for (int e = 0; e < n_events; ++e) {
        const double dur = std::min(rng.uniform(1.5, 3.0), len - 0.5);
        const double at = start + 0.25 + rng.uniform(0.0, std::max(0.0, len - 0.5 - dur));
        tags.push_back({round_to(at, 0.01), round_to(at + dur, 0.01), kDenyLabels[rng.below(kDenyLabels.size())],
                        round_to(rng.uniform(0.5, 1.0), 1e-4)});
      }
    } else if (rng.bernoulli(0.3)) {
      const double dur = std::min(rng.uniform(1.0, 3.0), len - 0.5);
      const double at = start + 0.25 + rng.uniform(0.0, std::max(0.0, len - 0.5 - dur));
      tags.push_back({round_to(at, 0.01), round_to(at + dur, 0.01), kDenyLabels[rng.below(kDenyLabels.size())],
                      round_to(rng.uniform(0.02, 0.25), 1e-4)});
    }
  }
  std::stable_sort(tags.begin(), tags.end(),
                   [](const AudioTagEvent& a, const AudioTagEvent& b) { return a.start_s < b.start_s; });
  t.audio_tags = std::move(tags);

  // Curators annotate the planted funny scenes; score = planted intensity.
  std::vector<CuratorAnnotation> curator;
  for (int s = 0; s < n_scenes; ++s) {
    if (kind[s] != SceneKind::Funny) continue;
    CuratorAnnotation c;
    c.scene_id = s;
    c.start_s = t.span_start(scenes[s]);
    c.end_s = t.span_end(scenes[s]);
    c.first_shot = scenes[s].first_shot;
    c.last_shot = scenes[s].last_shot;
    c.curator_score = intensity[s];
    c.is_funny = true;
    curator.push_back(c);
  }
  t.curator = std::move(curator);

  validate_title(t);
  return t;
}

// Indices of the improper scenes planted in a synthetic title, recovered from
// its confident deny-list tags (the generator's only source of them).
inline std::vector<int> planted_improper_scenes(const Title& t) {
  std::vector<int> out;
  if (!t.gt_scenes || !t.audio_tags) return out;
  for (const auto& s : *t.gt_scenes) {
    for (const auto& e : *t.audio_tags) {
      const bool deny = std::find_if(synth::kDenyLabels.begin(), synth::kDenyLabels.end(), [&](const char* l) {
                          return e.label == l;
                        }) != synth::kDenyLabels.end();
      if (deny && e.prob >= 0.5 && e.start_s >= t.span_start(s) && e.end_s <= t.span_end(s)) {
        out.push_back(s.scene_id);
        break;
      }
    }
  }
  return out;
}

inline void write_lexicon(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError(cat(path.string(), ": cannot open for writing"));
  for (const char* w : synth::kFunnyMarkers) out << w << '\n';
}

// Writes <root>/synth.json, <root>/lexicon.txt and one bundle per title.
inline void write_synth_corpus(const SynthConfig& cfg, const std::filesystem::path& root) {
  validate(cfg);
  std::filesystem::create_directories(root);
  write_json(root / "synth.json", json(cfg));
  write_lexicon(root / "lexicon.txt");
  for (int i = 0; i < cfg.n_titles; ++i) {
    const Title t = generate_title(cfg, i);
    save_title(t, root / t.title_id);
  }
}

}  // namespace humorcut
