// humorcut/pipeline.hpp

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

// End-to-end orchestration. Per title:
//   embed -> fuse -> detect boundaries -> assemble scenes -> spoiler skip
//   -> text score, laughter, guardrail -> normalize -> score -> rank
// with every intermediate written under <out>/<title_id>/.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/encoder.hpp"
#include "humorcut/humor_audio.hpp"
#include "humorcut/humor_text.hpp"
#include "humorcut/matrix.hpp"
#include "humorcut/metrics.hpp"
#include "humorcut/mining.hpp"
#include "humorcut/sbd.hpp"
#include "humorcut/scoring.hpp"

namespace humorcut {

namespace fs = std::filesystem;

struct MiningConfig {
  std::string source = "guided";
  int triplets_per_title = 420;
  int scene_window = 3;
};

struct FitConfig {
  std::string method = "grid";  // grid | linear | logistic | tree
  double step = 0.05;
  double train_fraction = 0.6;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string scorer = "oracle";
  double spoiler_skip_fraction = 0.2;
  double text_threshold = kHumorThreshold;
  double match_iou = 0.5;
  bool visual_only = false;
  MiningConfig mining;
  EncoderConfig encoder;
  SbdConfig sbd;
  GuardrailConfig guardrail;
  LaughterFeatureConfig laughter;
  FitConfig fit;
  ScoreWeights weights;
  RankMetricsConfig rank_metrics;
  std::string encoder_checkpoint;
  std::string sbd_checkpoint;
  std::string weights_path;
};

inline void to_json(json& j, const PipelineConfig& c) {
  j = json{{"seed", c.seed},
           {"scorer", c.scorer},
           {"spoiler_skip_fraction", c.spoiler_skip_fraction},
           {"text_threshold", c.text_threshold},
           {"match_iou", c.match_iou},
           {"visual_only", c.visual_only},
           {"mining",
            {{"source", c.mining.source},
             {"triplets_per_title", c.mining.triplets_per_title},
             {"scene_window", c.mining.scene_window}}},
           {"encoder", c.encoder},
           {"sbd", c.sbd},
           {"guardrail", c.guardrail},
           {"laughter", {{"theta_laugh", c.laughter.theta_laugh}}},
           {"fit", {{"method", c.fit.method}, {"step", c.fit.step}, {"train_fraction", c.fit.train_fraction}}},
           {"weights", FittedWeights{c.weights, "config", 0.0}},
           {"rank_metrics", {{"n_values", c.rank_metrics.n_values}}},
           {"encoder_checkpoint", c.encoder_checkpoint},
           {"sbd_checkpoint", c.sbd_checkpoint},
           {"weights_path", c.weights_path}};
}

inline void from_json(const json& j, PipelineConfig& c) {
  const PipelineConfig d;
  c.seed = j.value("seed", d.seed);
  c.scorer = j.value("scorer", d.scorer);
  c.spoiler_skip_fraction = j.value("spoiler_skip_fraction", d.spoiler_skip_fraction);
  c.text_threshold = j.value("text_threshold", d.text_threshold);
  c.match_iou = j.value("match_iou", d.match_iou);
  c.visual_only = j.value("visual_only", d.visual_only);
  if (j.contains("mining")) {
    const auto& m = j["mining"];
    c.mining.source = m.value("source", d.mining.source);
    c.mining.triplets_per_title = m.value("triplets_per_title", d.mining.triplets_per_title);
    c.mining.scene_window = m.value("scene_window", d.mining.scene_window);
  }
  if (j.contains("encoder")) c.encoder = j["encoder"].get<EncoderConfig>();
  if (j.contains("sbd")) c.sbd = j["sbd"].get<SbdConfig>();
  if (j.contains("guardrail")) c.guardrail = j["guardrail"].get<GuardrailConfig>();
  if (j.contains("laughter")) c.laughter.theta_laugh = j["laughter"].value("theta_laugh", d.laughter.theta_laugh);
  if (j.contains("fit")) {
    const auto& f = j["fit"];
    c.fit.method = f.value("method", d.fit.method);
    c.fit.step = f.value("step", d.fit.step);
    c.fit.train_fraction = f.value("train_fraction", d.fit.train_fraction);
  }
  if (j.contains("weights")) c.weights = j["weights"].get<FittedWeights>().weights;
  if (j.contains("rank_metrics")) c.rank_metrics.n_values = j["rank_metrics"].value("n_values", d.rank_metrics.n_values);
  c.encoder_checkpoint = j.value("encoder_checkpoint", d.encoder_checkpoint);
  c.sbd_checkpoint = j.value("sbd_checkpoint", d.sbd_checkpoint);
  c.weights_path = j.value("weights_path", d.weights_path);
}

inline void validate(const PipelineConfig& c) {
  if (!(c.spoiler_skip_fraction >= 0.0 && c.spoiler_skip_fraction < 1.0))
    throw ValidationError("pipeline config: spoiler_skip_fraction must be in [0,1)");
  if (!(c.text_threshold > 0.0 && c.text_threshold < 1.0))
    throw ValidationError("pipeline config: text_threshold must be in (0,1)");
  if (!(c.match_iou > 0.0 && c.match_iou <= 1.0)) throw ValidationError("pipeline config: match_iou must be in (0,1]");
  parse_triplet_source(c.mining.source);
  if (c.mining.triplets_per_title < 1) throw ValidationError("pipeline config: triplets_per_title must be >= 1");
  if (c.fit.method != "grid") parse_regression_method(c.fit.method);
  if (!(c.fit.train_fraction > 0.0 && c.fit.train_fraction <= 1.0))
    throw ValidationError("pipeline config: fit.train_fraction must be in (0,1]");
  validate(c.encoder);
  validate(c.sbd);
  validate(c.guardrail);
  validate(c.laughter);
  validate(c.weights);
  validate(c.rank_metrics);
  ScorerHandle::parse(c.scorer);
}

inline PipelineConfig load_pipeline_config(const fs::path& path) {
  auto c = parse_json_file(path).get<PipelineConfig>();
  validate(c);
  return c;
}

// Sub-seeds all derive from the global seed.
inline PipelineConfig resolve_seeds(PipelineConfig c) {
  c.encoder.seed = mix_seed(c.seed, 0xE1C0DEULL);
  c.sbd.seed = mix_seed(c.seed, 0x5BD5BDULL);
  return c;
}

inline std::uint64_t mining_seed(std::uint64_t seed, std::size_t title_index) {
  return mix_seed(seed, 0x313E0000ULL + title_index);
}

// ---------------------------------------------------------------------------
// Stage plumbing

inline constexpr const char* kFailureMarker = "FAILED";

// Runs one stage; on error writes <dir>/FAILED naming the stage and rethrows
// with the stage prefixed, keeping the error class.
template <typename Fn>
auto run_stage(const std::string& stage, const fs::path& dir, Fn&& fn) -> decltype(fn()) {
  auto mark = [&](const std::string& what) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / kFailureMarker);
    out << json{{"stage", stage}, {"error", what}}.dump() << '\n';
  };
  try {
    return fn();
  } catch (const ValidationError& e) {
    mark(e.what());
    throw ValidationError(cat("stage ", stage, ": ", e.what()));
  } catch (const std::exception& e) {
    mark(e.what());
    throw RuntimeError(cat("stage ", stage, ": ", e.what()));
  }
}

inline std::vector<Title> load_corpus(const fs::path& root) {
  std::vector<Title> titles;
  for (const auto& dir : list_title_dirs(root)) titles.push_back(load_title(dir));
  if (titles.empty()) throw ValidationError(cat(root.string(), ": no title bundles found"));
  return titles;
}

// ---------------------------------------------------------------------------
// Training

inline std::vector<Triplet> mine_corpus(std::span<const Title> titles, const MiningConfig& m, std::uint64_t seed) {
  const auto source = parse_triplet_source(m.source);
  std::vector<Triplet> out;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    const auto& t = titles[i];
    const auto s = mining_seed(seed, i);
    const auto batch = source == TripletSource::Guided
                           ? mine_guided(t, m.triplets_per_title, m.scene_window, s)
                           : mine_heuristic(source, t.n_shots(), m.triplets_per_title, s, t.title_id);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

inline EncoderTraining train_encoder_on(std::span<const Title> titles, std::span<const Triplet> triplets,
                                        const EncoderConfig& cfg) {
  FeatureTable features;
  std::map<std::string, std::vector<int>> labels;
  for (const auto& t : titles) {
    features[t.title_id] = visual_matrix(t);
    if (t.gt_scenes) labels[t.title_id] = shot_scene_labels(*t.gt_scenes, t.n_shots());
  }
  return train_encoder(triplets, features, cfg, &labels);
}

// Fused, per-title standardized shot features fed to the boundary windows.
inline Matrix sbd_features(const Title& t, const Matrix& embeddings, bool visual_only) {
  return standardize_columns(fused_matrix(t, embeddings, visual_only));
}

inline SbdTraining train_sbd_on(std::span<const Title> titles, const Network& encoder, const SbdConfig& cfg,
                                bool visual_only) {
  std::vector<WindowSet> sets;
  for (const auto& t : titles) {
    if (!t.gt_scenes) throw ValidationError(cat(t.title_id, ": SBD training needs gt_scenes"));
    sets.push_back(build_windows(t, sbd_features(t, embed_shots(encoder, visual_matrix(t)), visual_only), cfg));
  }
  return train_sbd(sets, cfg);
}

// ---------------------------------------------------------------------------
// Per-title stages

struct Detection {
  Matrix embeddings;  // projected, one row per shot
  BoundaryPrediction boundaries;
  std::vector<SceneAnnotation> scenes;
};

inline Detection detect_scenes(const Title& t, const Network& encoder, const Network& sbd, const PipelineConfig& cfg) {
  Detection d;
  d.embeddings = embed_shots(encoder, visual_matrix(t));
  const auto windows = build_windows(t, sbd_features(t, d.embeddings, cfg.visual_only), cfg.sbd);
  d.boundaries = predict_boundaries(sbd, windows, cfg.sbd.threshold);
  d.scenes = assemble_scenes(d.boundaries.flags);
  return d;
}

inline void write_detection(const Title& t, const Detection& d, const fs::path& dir) {
  fs::create_directories(dir);
  write_matrix_bin(d.embeddings, (dir / "embeddings.bin").string());
  std::vector<json> b;
  for (std::size_t i = 0; i < d.boundaries.probs.size(); ++i)
    b.push_back({{"shot_id", t.shots[i].shot_id}, {"prob", d.boundaries.probs[i]}, {"boundary", d.boundaries.flags[i]}});
  write_jsonl(dir / "boundaries.jsonl", b);
  write_jsonl(dir / "pred_scenes.jsonl", d.scenes);
}

// Drops scenes starting after (1 - fraction) of the runtime.
inline std::vector<SceneAnnotation> spoiler_skip(const Title& t, std::span<const SceneAnnotation> scenes,
                                                 double fraction) {
  const double cutoff = (1.0 - fraction) * t.duration();
  std::vector<SceneAnnotation> out;
  for (const auto& s : scenes)
    if (!(t.span_start(s) > cutoff)) out.push_back(s);
  return out;
}

inline std::vector<HumorFeatures> tag_humor(const Title& t, std::span<const SceneAnnotation> scenes, TextScorer& scorer,
                                            const PipelineConfig& cfg) {
  static const std::vector<TranscriptSentence> kNoTranscript;
  static const std::vector<AudioTagEvent> kNoTags;
  const auto& transcript = t.transcript ? *t.transcript : kNoTranscript;
  const auto& tags = t.audio_tags ? *t.audio_tags : kNoTags;
  std::vector<HumorFeatures> out;
  for (const auto& s : scenes) {
    HumorFeatures h;
    h.scene_id = s.scene_id;
    h.first_shot = s.first_shot;
    h.last_shot = s.last_shot;
    h.start_s = t.span_start(s);
    h.end_s = t.span_end(s);
    if (t.laughter) {
      const auto lf = laughter_features(*t.laughter, h.start_s, h.end_s, cfg.laughter);
      h.f1 = lf.f1;
      h.f2 = lf.f2;
    }
    const auto sentences = sentences_in_span(transcript, h.start_s, h.end_s);
    try {
      const auto ts = score_scene_text(sentences, scorer, cfg.text_threshold);
      h.f3 = ts.score;
      h.text_funny = ts.is_funny;
    } catch (const std::exception& e) {
      throw RuntimeError(cat("scene ", s.scene_id, ": ", e.what()));
    }
    h.f4 = h.end_s - h.start_s;
    h.guardrail = guardrail_filter(tags, h.start_s, h.end_s, cfg.guardrail);
    out.push_back(std::move(h));
  }
  return out;
}

// Guardrail rejects leave before normalization.
inline std::vector<RankedScene> rank_candidates(std::span<const HumorFeatures> features, const ScoreWeights& w) {
  std::vector<HumorFeatures> kept;
  for (const auto& f : features)
    if (!f.guardrail.reject) kept.push_back(f);
  if (kept.empty()) return {};
  const auto norm = normalize_features(kept);
  return rank_scenes(norm, w);
}

// ---------------------------------------------------------------------------
// Evaluation

inline std::vector<TimeSpan> gt_spans(const Title& t) {
  std::vector<TimeSpan> out;
  if (t.gt_scenes)
    for (const auto& s : *t.gt_scenes) out.push_back({s.scene_id, t.span_start(s), t.span_end(s)});
  return out;
}

// Predicted scene id -> gt scene id (or a fresh id when unmatched).
inline std::map<int, int> match_to_gt(const Title& t, std::span<const SceneAnnotation> pred, double iou) {
  std::vector<TimeSpan> ps;
  for (const auto& s : pred) ps.push_back({s.scene_id, t.span_start(s), t.span_end(s)});
  const auto gt = gt_spans(t);
  const auto ids = match_scenes(gt, ps, iou);
  std::map<int, int> out;
  for (std::size_t i = 0; i < pred.size(); ++i) out[pred[i].scene_id] = ids[i];
  return out;
}

// Curator entries eligible after the spoiler skip.
inline std::vector<CuratorAnnotation> eligible_curator(const Title& t, double spoiler_fraction) {
  std::vector<CuratorAnnotation> out;
  if (!t.curator) return out;
  const double cutoff = (1.0 - spoiler_fraction) * t.duration();
  for (const auto& c : *t.curator)
    if (!(c.start_s > cutoff)) out.push_back(c);
  return out;
}

inline json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct TitleEval {
  json report;
  std::optional<RankReport> ranking;
};

inline TitleEval evaluate_title(const Title& t, const Detection& d, std::span<const RankedScene> ranking,
                                const PipelineConfig& cfg) {
  TitleEval ev;
  json& r = ev.report;
  r["title_id"] = t.title_id;
  r["n_pred_scenes"] = d.scenes.size();
  if (t.gt_scenes) {
    const auto labels = boundary_labels(*t.gt_scenes, t.n_shots());
    r["n_gt_scenes"] = t.gt_scenes->size();
    const bool both = std::count(labels.begin(), labels.end(), 1) > 0 && std::count(labels.begin(), labels.end(), 0) > 0;
    if (both) {
      r["AP"] = average_precision(d.boundaries.probs, labels);
      const auto f1 = best_f1(d.boundaries.probs, labels);
      r["best_F1"] = f1.f1;
      r["best_F1_threshold"] = nullable(f1.threshold);
    } else {
      r["AP"] = nullptr;
      r["best_F1"] = nullptr;
      r["best_F1_threshold"] = nullptr;
    }
    const auto scene_lab = shot_scene_labels(*t.gt_scenes, t.n_shots());
    r["NMI"] = t.gt_scenes->size() >= 2 ? json(cluster_nmi(d.embeddings, scene_lab, mix_seed(cfg.seed, 0x4E41ULL)))
                                        : json(nullptr);
  }
  const auto curator = eligible_curator(t, cfg.spoiler_skip_fraction);
  const auto gt_ranked = curator_ranking(curator);
  if (t.gt_scenes && !gt_ranked.empty()) {
    const auto ids = match_to_gt(t, d.scenes, cfg.match_iou);
    std::vector<int> pred;
    for (const auto& rs : ranking) pred.push_back(ids.at(rs.features.scene_id));
    const auto rep = rank_report(gt_ranked, pred, cfg.rank_metrics);
    json per_n = json::array();
    for (std::size_t i = 0; i < rep.n_values.size(); ++i)
      per_n.push_back({{"N", rep.n_values[i]}, {"topIOU", rep.top_iou[i]}, {"topIOU_align", rep.top_iou_align[i]}});
    r["ranking"] = {{"n_curator_funny", gt_ranked.size()},
                    {"per_N", per_n},
                    {"eval_metric", rep.eval_metric},
                    {"eval_metric_normalized", rep.normalized()}};
    ev.ranking = rep;
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Weight fitting on predicted scenes, ids mapped into curator space

inline std::optional<FitTitle> fit_title_from(const Title& t, const Detection& d, std::span<const HumorFeatures> features,
                                              const PipelineConfig& cfg) {
  if (!t.gt_scenes || !t.curator) return std::nullopt;
  const auto ids = match_to_gt(t, d.scenes, cfg.match_iou);
  std::vector<HumorFeatures> kept;
  for (auto f : features) {
    if (f.guardrail.reject) continue;
    f.scene_id = ids.at(f.scene_id);
    kept.push_back(f);
  }
  if (kept.empty()) return std::nullopt;
  return make_fit_title(t.title_id, kept, eligible_curator(t, cfg.spoiler_skip_fraction));
}

inline FittedWeights fit_weights(std::span<const FitTitle> titles, const PipelineConfig& cfg) {
  if (cfg.fit.method == "grid") return fit_weights_grid(titles, cfg.fit.step, cfg.weights.t_c, cfg.rank_metrics);
  return fit_weights_regression(titles, parse_regression_method(cfg.fit.method), cfg.weights.t_c, cfg.rank_metrics);
}

// ---------------------------------------------------------------------------
// run-all

struct Models {
  Network encoder;
  Network sbd;
};

inline std::unique_ptr<TextScorer> scorer_for(const PipelineConfig& cfg, const Title& t) {
  return make_scorer(ScorerHandle::parse(cfg.scorer), t);
}

struct TitleRun {
  Detection detection;
  std::vector<HumorFeatures> features;
};

inline TitleRun run_title_front(const Title& t, const Models& m, const PipelineConfig& cfg, const fs::path& dir) {
  TitleRun r;
  r.detection = run_stage("detect-scenes", dir, [&] {
    auto d = detect_scenes(t, m.encoder, m.sbd, cfg);
    write_detection(t, d, dir);
    return d;
  });
  r.features = run_stage("tag-humor", dir, [&] {
    const auto kept = spoiler_skip(t, r.detection.scenes, cfg.spoiler_skip_fraction);
    auto scorer = scorer_for(cfg, t);
    auto f = tag_humor(t, kept, *scorer, cfg);
    write_jsonl(dir / "humor_features.jsonl", f);
    return f;
  });
  return r;
}

// Trains on the train split (or loads checkpoints), fits weights on the train
// split, then runs every title and writes per-title artifacts plus
// <out>/summary.json.
inline json run_all(PipelineConfig cfg, const fs::path& corpus_root, const fs::path& out) {
  validate(cfg);
  cfg = resolve_seeds(cfg);
  fs::create_directories(out);
  const auto titles = run_stage("load", out, [&] { return load_corpus(corpus_root); });

  std::vector<std::string> ids;
  for (const auto& t : titles) ids.push_back(t.title_id);
  const auto split = split_titles(ids, cfg.fit.train_fraction, cfg.seed);
  std::vector<Title> train;
  for (const auto& t : titles)
    if (std::find(split.train.begin(), split.train.end(), t.title_id) != split.train.end()) train.push_back(t);

  const fs::path models_dir = out / "models";
  fs::create_directories(models_dir);
  json summary{{"split", {{"train", split.train}, {"test", split.test}}}};

  Network encoder = run_stage("train-encoder", models_dir, [&] {
    if (!cfg.encoder_checkpoint.empty()) return load_network(cfg.encoder_checkpoint).net;
    const auto triplets = mine_corpus(train, cfg.mining, cfg.seed);
    write_jsonl(models_dir / "triplets.jsonl", triplets);
    auto tr = train_encoder_on(train, triplets, cfg.encoder);
    save_network(tr.net, models_dir / "encoder.ckpt", {{"config", cfg.encoder}, {"loss_history", tr.loss_history}});
    summary["encoder"] = {{"initial_loss", tr.initial_loss}, {"loss_history", tr.loss_history}};
    return std::move(tr.net);
  });
  Network sbd = run_stage("train-sbd", models_dir, [&] {
    if (!cfg.sbd_checkpoint.empty()) return load_network(cfg.sbd_checkpoint).net;
    auto tr = train_sbd_on(train, encoder, cfg.sbd, cfg.visual_only);
    save_network(tr.net, models_dir / "sbd.ckpt", {{"config", cfg.sbd}, {"loss_history", tr.loss_history}});
    summary["sbd"] = {{"loss_history", tr.loss_history}};
    return std::move(tr.net);
  });
  const Models models{std::move(encoder), std::move(sbd)};

  std::map<std::string, TitleRun> runs;
  for (const auto& t : titles) runs.emplace(t.title_id, run_title_front(t, models, cfg, out / t.title_id));

  FittedWeights weights = run_stage("fit-weights", out, [&] {
    if (!cfg.weights_path.empty()) return load_weights(cfg.weights_path);
    std::vector<FitTitle> fit;
    for (const auto& t : train)
      if (auto ft = fit_title_from(t, runs.at(t.title_id).detection, runs.at(t.title_id).features, cfg))
        if (ft->gt_ranked.size() >= 3) fit.push_back(std::move(*ft));
    if (fit.empty()) return FittedWeights{cfg.weights, "config", 0.0};
    return fit_weights(fit, cfg);
  });
  write_json(out / "weights.json", weights);
  summary["weights"] = weights;

  json per_title = json::array();
  std::map<std::string, std::vector<double>> agg;  // split -> eval_metric
  std::map<std::string, std::vector<double>> agg3;  // split -> topIOU at first N
  for (const auto& t : titles) {
    const fs::path dir = out / t.title_id;
    const auto& run = runs.at(t.title_id);
    const auto ranking = run_stage("rank", dir, [&] {
      auto r = rank_candidates(run.features, weights.weights);
      write_jsonl(dir / "ranking.jsonl", r);
      return r;
    });
    const auto ev = run_stage("evaluate", dir, [&] {
      auto e = evaluate_title(t, run.detection, ranking, cfg);
      write_json(dir / "eval_report.json", e.report);
      return e;
    });
    const bool is_train = std::find(split.train.begin(), split.train.end(), t.title_id) != split.train.end();
    json entry = ev.report;
    entry["split"] = is_train ? "train" : "test";
    per_title.push_back(entry);
    if (ev.ranking) {
      for (const char* key : {"all", is_train ? "train" : "test"}) {
        agg[key].push_back(ev.ranking->eval_metric);
        agg3[key].push_back(ev.ranking->top_iou.front());
      }
    }
  }
  summary["titles"] = per_title;
  json means = json::object();
  for (const auto& [key, v] : agg) {
    double s = 0.0, s3 = 0.0, mn3 = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      s += v[i];
      s3 += agg3[key][i];
      mn3 = std::min(mn3, agg3[key][i]);
    }
    means[key] = {{"n_titles", v.size()},
                  {"eval_metric", s / static_cast<double>(v.size())},
                  {"topIOU_first_N", s3 / static_cast<double>(v.size())},
                  {"topIOU_first_N_min", mn3}};
  }
  summary["means"] = means;
  write_json(out / "summary.json", summary);
  return summary;
}

}  // namespace humorcut
