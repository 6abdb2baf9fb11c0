// tests/acceptance.cpp

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

// Acceptance runner. Prints one line per criterion:
//   PASS <name> <measurements>
//   FAIL <name> <measurements>
// Exit status is 1 when any criterion fails.
//
//   acceptance                  run everything
//   acceptance fusion e2e       run the named criteria only

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "humorcut/encoder.hpp"
#include "humorcut/humor_audio.hpp"
#include "humorcut/humor_text.hpp"
#include "humorcut/metrics.hpp"
#include "humorcut/mining.hpp"
#include "humorcut/pipeline.hpp"
#include "humorcut/sbd.hpp"
#include "humorcut/scoring.hpp"
#include "humorcut/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace humorcut;
namespace fs = std::filesystem;

namespace {

const std::string kCli = HUMORCUT_CLI;
const fs::path kConfigs = fs::path(HUMORCUT_SOURCE_DIR) / "configs";

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check without stopping the criterion.
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json config(const std::string& name) { return parse_json_file(kConfigs / name); }

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = testutil::read_file(e.path());
  return out;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed, double scale) {
  Rng rng(seed);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

// ---------------------------------------------------------------------------

// Relative-error floor: a gradient below 1e-5 must match to |a - n| < 1e-9.
constexpr double kGradFloor = 1e-5;

void gradient_fidelity(Outcome& o) {
  const auto t0 = Clock::now();
  EncoderConfig enc;  // full-size head: 512 -> 2048 -> 2048 -> 256 -> 4096
  Network head = build_projection_head(enc);
  const LossFn triplet = [&](const Matrix& out) {
    const auto l = triplet_loss_batch(out, enc.alpha);
    return std::make_pair(l.loss, l.grad);
  };
  const auto a = grad_check(head, triplet, random_matrix(3 * 2, enc.in_dim, 1, 0.5), 1e-5, 1, 100000, 1000,
                            kGradFloor);

  SbdConfig sbd;  // full 5 x 4864 window input
  sbd.hidden_dims = {256, 128, 64};
  Network cls = build_sbd_head(sbd);
  const std::vector<int> labels{0, 1, 1, 0};
  const LossFn ce = [&](const Matrix& out) {
    const auto l = softmax_ce(out, labels);
    return std::make_pair(l.loss, l.grad);
  };
  const auto b = grad_check(cls, ce, random_matrix(4, sbd.window_dim(), 2, 1.0), 1e-5, 2, 100000, 1000,
                            kGradFloor);
  const double secs = seconds_since(t0);

  o.detail << "projection_head params=" << head.parameter_count() << " checked=" << a.checked
           << " max_rel=" << a.max_rel_error << "; sbd_head in=" << sbd.window_dim()
           << " params=" << cls.parameter_count() << " checked=" << b.checked << " max_rel=" << b.max_rel_error
           << "; " << secs << " s";
  o.check(a.max_rel_error < 1e-4, "projection head error >= 1e-4 at " + a.worst);
  o.check(b.max_rel_error < 1e-4, "sbd head error >= 1e-4 at " + b.worst);
  o.check(secs < 60.0, "runtime >= 60 s");
}

// ---------------------------------------------------------------------------

void metric_oracles(Outcome& o) {
  constexpr double kTol = 1e-12;
  double worst = 0.0;
  long cases = 0;
  auto near = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b));
    return std::abs(a - b) <= kTol;
  };
  bool ok = true;

  // Every label vector up to 12 items; scores on a coarse grid so ties occur.
  Rng rng(2026);
  for (int n = 1; n <= 12; ++n) {
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> y(n);
      std::vector<double> s(n);
      for (int i = 0; i < n; ++i) {
        y[i] = (mask >> i) & 1;
        s[i] = static_cast<double>(rng.below(5)) / 4.0;
      }
      ok &= near(average_precision(s, y), oracle::average_precision(s, y));
      if (mask != (1 << n) - 1) {
        const auto a = best_f1(s, y);
        const auto b = oracle::best_f1(s, y);
        ok &= near(a.f1, b.f1) && a.threshold == b.threshold;
      }
      ++cases;
    }
  }

  // Every pair of labelings of 6 items over 3 symbols.
  {
    std::vector<std::vector<int>> all;
    for (int code = 0; code < 729; ++code) {
      std::vector<int> v(6);
      for (int i = 0, c = code; i < 6; ++i, c /= 3) v[i] = c % 3;
      all.push_back(v);
    }
    for (const auto& a : all)
      for (const auto& b : all) {
        ok &= near(nmi(a, b), oracle::nmi(a, b));
        ++cases;
      }
  }

  // Every predicted ordering of 6 scenes against a fixed reference, with
  // predictions drawn from a pool of 8 ids.
  {
    const std::vector<int> gt{4, 1, 5, 0, 3, 2};
    const std::set<int> gs(gt.begin(), gt.end());
    std::vector<int> pool{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<int> pick(8, 0);
    std::fill(pick.begin(), pick.begin() + 6, 1);
    do {
      std::vector<int> chosen;
      for (int i = 0; i < 8; ++i)
        if (pick[i]) chosen.push_back(pool[i]);
      std::sort(chosen.begin(), chosen.end());
      do {
        for (int k : {1, 3, 5, 10}) {
          ok &= near(top_iou(gs, chosen, k), oracle::top_iou(gt, chosen, k));
          ok &= near(top_iou_align(gt, chosen, k), oracle::top_iou_align(gt, chosen, k));
        }
        ok &= near(eval_metric(gt, chosen), oracle::eval_metric(gt, chosen));
        ++cases;
      } while (std::next_permutation(chosen.begin(), chosen.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }

  // 1000 random cases up to size 12 for everything.
  Rng r2(77);
  for (int c = 0; c < 1000; ++c) {
    const int n = 2 + static_cast<int>(r2.below(11));
    std::vector<int> y(n), la(n), lb(n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
      y[i] = r2.bernoulli(0.4);
      s[i] = r2.bernoulli(0.3) ? 0.5 : r2.uniform();
      la[i] = static_cast<int>(r2.below(4));
      lb[i] = static_cast<int>(r2.below(1 + r2.below(5)));
    }
    y[0] = 1;
    y[1] = 0;
    ok &= near(average_precision(s, y), oracle::average_precision(s, y));
    ok &= near(best_f1(s, y).f1, oracle::best_f1(s, y).f1);
    ok &= best_f1(s, y).threshold == oracle::best_f1(s, y).threshold;
    ok &= near(nmi(la, lb), oracle::nmi(la, lb));
    std::vector<int> g(n), p;
    std::iota(g.begin(), g.end(), 0);
    r2.shuffle(std::span<int>(g));
    for (int i = 0; i < n; ++i) p.push_back(static_cast<int>(r2.below(2 * n)));
    const std::set<int> gs(g.begin(), g.end());
    for (int k : {1, 3, 5, 10, 12}) {
      ok &= near(top_iou(gs, p, k), oracle::top_iou(g, p, k));
      ok &= near(top_iou_align(g, p, k), oracle::top_iou_align(g, p, k));
    }
    ok &= near(eval_metric(g, p), oracle::eval_metric(g, p));
    ++cases;
  }

  const double ap = average_precision(std::vector<double>{0.9, 0.8, 0.7}, std::vector<int>{1, 0, 1});
  const std::vector<int> ranking{7, 3, 9, 1, 4, 0, 2, 8, 6, 5, 11, 10};
  const double ident = eval_metric(ranking, ranking);
  o.detail << "cases=" << cases << " max_abs_diff=" << worst << " AP_hand=" << ap << " eval_identical=" << ident;
  o.check(ok, "library disagrees with brute force");
  o.check(std::abs(ap - 5.0 / 6.0) <= kTol, "AP hand case != 5/6");
  o.check(std::abs(ident - 6.0) <= kTol, "eval_metric(identical) != 6");
}

// ---------------------------------------------------------------------------

void mining_nmi(Outcome& o) {
  const auto t0 = Clock::now();
  const json cfg = config("mining_nmi.json");
  const auto sc = cfg["synth"].get<SynthConfig>();
  const auto ec = cfg["encoder"].get<EncoderConfig>();
  const int n_train = cfg["n_train_titles"];
  const int per_title = cfg["triplets_per_title"];
  const int window = cfg["guided_scene_window"];
  const std::uint64_t seed_base = cfg["mining_seed_base"];
  const std::uint64_t nmi_seed = cfg["nmi_seed"];

  std::vector<Title> titles;
  FeatureTable ft;
  std::map<std::string, std::vector<int>> labels;
  for (int i = 0; i < sc.n_titles; ++i) {
    titles.push_back(generate_title(sc, i));
    const auto& t = titles.back();
    ft[t.title_id] = visual_matrix(t);
    labels[t.title_id] = shot_scene_labels(*t.gt_scenes, t.n_shots());
  }
  std::map<TripletSource, double> score;
  for (auto src : {TripletSource::Guided, TripletSource::V1, TripletSource::V2, TripletSource::V3}) {
    std::vector<Triplet> trips;
    for (int i = 0; i < n_train; ++i) {
      const auto& t = titles[i];
      const auto b = src == TripletSource::Guided
                         ? mine_guided(t, per_title, window, seed_base + i)
                         : mine_heuristic(src, t.n_shots(), per_title, seed_base + i, t.title_id);
      trips.insert(trips.end(), b.begin(), b.end());
    }
    const auto net = train_encoder(trips, ft, ec).net;
    double s = 0.0;
    for (int i = n_train; i < sc.n_titles; ++i) {
      const auto& t = titles[i];
      s += cluster_nmi(embed_shots(net, ft[t.title_id]), labels[t.title_id], nmi_seed);
    }
    score[src] = s / (sc.n_titles - n_train);
    o.detail << to_string(src) << "=" << score[src] << " ";
  }
  const double secs = seconds_since(t0);
  o.detail << "held_out_titles=" << sc.n_titles - n_train << " " << secs << " s";
  for (auto v : {TripletSource::V1, TripletSource::V2, TripletSource::V3})
    o.check(score[TripletSource::Guided] > score[v], std::string("guided NMI not above ") + to_string(v));
  o.check(secs < 15 * 60, "runtime >= 15 min");
}

// ---------------------------------------------------------------------------

void modality_fusion(Outcome& o) {
  const auto t0 = Clock::now();
  const json cfg = config("fusion.json");
  const auto sc = cfg["synth"].get<SynthConfig>();
  const auto pc = resolve_seeds(cfg["pipeline"].get<PipelineConfig>());
  const int n_train = cfg["n_train_titles"];

  std::vector<Title> titles;
  for (int i = 0; i < sc.n_titles; ++i) titles.push_back(generate_title(sc, i));
  const std::vector<Title> train(titles.begin(), titles.begin() + n_train);
  const auto triplets = mine_corpus(train, pc.mining, pc.seed);
  const auto encoder = train_encoder_on(train, triplets, pc.encoder).net;

  std::map<bool, double> ap;
  for (bool visual_only : {false, true}) {
    const auto sbd = train_sbd_on(train, encoder, pc.sbd, visual_only).net;
    auto c = pc;
    c.visual_only = visual_only;
    double s = 0.0;
    for (int i = n_train; i < sc.n_titles; ++i) {
      const auto d = detect_scenes(titles[i], encoder, sbd, c);
      s += average_precision(d.boundaries.probs, boundary_labels(*titles[i].gt_scenes, titles[i].n_shots()));
    }
    ap[visual_only] = s / (sc.n_titles - n_train);
  }
  const double gain = ap[false] - ap[true];
  o.detail << "fused_AP=" << ap[false] << " visual_only_AP=" << ap[true] << " gain=" << gain << " "
           << seconds_since(t0) << " s";
  o.check(gain >= 0.02, "fused gain < 0.02 AP");
}

// ---------------------------------------------------------------------------

void boundary_round_trip(Outcome& o) {
  Rng rng(404);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(300));
    std::vector<SceneAnnotation> gt;
    int first = 0;
    for (int i = 0; i < n; ++i) {
      if (i == n - 1 || rng.bernoulli(0.25)) {
        gt.push_back({static_cast<int>(gt.size()), first, i});
        first = i + 1;
      }
    }
    const auto labels = boundary_labels(gt, n);
    const auto back = assemble_scenes(std::vector<bool>(labels.begin(), labels.end()));
    bool same = back.size() == gt.size();
    for (std::size_t i = 0; same && i < gt.size(); ++i)
      same = back[i].scene_id == gt[i].scene_id && back[i].first_shot == gt[i].first_shot &&
             back[i].last_shot == gt[i].last_shot;
    mismatches += same ? 0 : 1;
  }
  o.detail << "partitions=1000 mismatches=" << mismatches;
  o.check(mismatches == 0, "round trip changed a partition");
}

// ---------------------------------------------------------------------------

class FixedScorer final : public TextScorer {
 public:
  explicit FixedScorer(double p) : p_(p) {}
  double score(std::span<const TranscriptSentence>) override { return p_; }

 private:
  double p_;
};

void text_protocol(Outcome& o) {
  Rng rng(10);
  int bad_sample = 0, bad_chunks = 0;
  for (int c = 0; c < 10000; ++c) {
    const int s = 11 + static_cast<int>(rng.below(490));
    std::vector<std::string> texts;
    for (int i = 0; i < s; ++i) texts.push_back(cat("sentence ", i));
    const auto r = sample_train_sentences(texts, rng.below(1u << 30));
    const std::set<int> idx(r.indices.begin(), r.indices.end());
    bool ok = idx.count(0) && idx.count(1) && idx.count(s - 2) && idx.count(s - 1);
    for (std::size_t i = 1; i < r.indices.size(); ++i) ok = ok && r.indices[i - 1] < r.indices[i];
    bad_sample += ok ? 0 : 1;

    const int m = 1 + static_cast<int>(rng.below(120));
    std::vector<std::string> sent;
    for (int i = 0; i < m; ++i) sent.push_back(cat("s", c, "_", i));
    std::vector<std::string> joined;
    for (const auto& chunk : segment_subtexts(std::span<const std::string>(sent)))
      joined.insert(joined.end(), chunk.begin(), chunk.end());
    bad_chunks += joined == sent ? 0 : 1;
  }
  std::vector<TranscriptSentence> scene;
  for (int i = 0; i < 25; ++i) scene.push_back({i, 2.0 * i, 2.0 * i + 1.5, cat("line ", i)});
  FixedScorer at(0.56), above(std::nextafter(0.56, 1.0)), below(0.5);
  const bool at_funny = score_scene_text(scene, at).is_funny;
  const bool above_funny = score_scene_text(scene, above).is_funny;
  const bool below_funny = score_scene_text(scene, below).is_funny;
  o.detail << "sample_cases=10000 sample_violations=" << bad_sample << " chunk_violations=" << bad_chunks
           << " mean=0.56->" << (at_funny ? "funny" : "not_funny");
  o.check(bad_sample == 0, "sampled indices violate invariants");
  o.check(bad_chunks == 0, "chunks do not concatenate losslessly");
  o.check(!at_funny && above_funny && !below_funny, "threshold is not strict at 0.56");
}

// ---------------------------------------------------------------------------

void guardrail_recall(Outcome& o) {
  int improper = 0, caught = 0, clean = 0, false_rejects = 0;
  auto sweep = [&](const SynthConfig& cfg) {
    for (int i = 0; i < cfg.n_titles; ++i) {
      const Title t = generate_title(cfg, i);
      const auto planted = planted_improper_scenes(t);
      const std::set<int> bad(planted.begin(), planted.end());
      for (const auto& s : *t.gt_scenes) {
        const bool reject = guardrail_filter(*t.audio_tags, t.span_start(s), t.span_end(s)).reject;
        if (bad.count(s.scene_id)) {
          ++improper;
          caught += reject ? 1 : 0;
        } else {
          ++clean;
          false_rejects += reject ? 1 : 0;
        }
      }
    }
  };
  sweep(config("e2e_synth.json").get<SynthConfig>());
  SynthConfig dense;
  dense.n_titles = 20;
  dense.d_vis = 8;
  dense.improper_scene_fraction = 0.25;
  dense.seed = 99;
  sweep(dense);
  o.detail << "improper=" << improper << " rejected=" << caught << " clean=" << clean
           << " false_rejects=" << false_rejects;
  o.check(improper > 0 && caught == improper, "recall below 100%");
  o.check(false_rejects == 0, "clean scenes rejected");
}

// ---------------------------------------------------------------------------

void end_to_end(Outcome& o) {
  testutil::TempDir d("accept_e2e");
  const auto synth = testutil::run_command(kCli + " synth --config " + (kConfigs / "e2e_synth.json").string() +
                                           " --out " + (d / "corpus").string());
  if (synth.exit_code != 0) {
    o.check(false, "synth failed: " + synth.output);
    return;
  }
  auto run = [&](const std::string& tag, const std::string& scorer, json& means, double& secs) {
    const auto t0 = Clock::now();
    const auto r = testutil::run_command(kCli + " run-all --corpus " + (d / "corpus").string() + " --config " +
                                         (kConfigs / "e2e_pipeline.json").string() + " --scorer " + scorer +
                                         " --out " + (d / tag).string());
    secs = seconds_since(t0);
    if (r.exit_code != 0) {
      o.check(false, tag + " run-all failed: " + r.output);
      return false;
    }
    means = parse_json_file(d / tag / "summary.json")["means"];
    return true;
  };
  json om, lm;
  double os = 0, ls = 0;
  if (run("oracle", "oracle", om, os)) {
    o.detail << "oracle: topIOU_3_mean=" << om["all"]["topIOU_first_N"] << " topIOU_3_min="
             << om["all"]["topIOU_first_N_min"] << " eval_all=" << om["all"]["eval_metric"]
             << " eval_test=" << om["test"]["eval_metric"] << " " << os << " s; ";
    o.check(om["all"]["topIOU_first_N_min"].get<double>() == 1.0, "oracle topIOU_3 below 1 on some title");
    o.check(om["all"]["eval_metric"].get<double>() >= 5.0, "oracle eval_metric < 5 over all titles");
    o.check(om["test"]["eval_metric"].get<double>() >= 5.0, "oracle eval_metric < 5 on held-out titles");
    o.check(os < 300.0, "oracle run-all >= 5 min");
  }
  const std::string lexicon = "lexicon:" + (d / "corpus" / "lexicon.txt").string();
  if (run("lexicon", lexicon, lm, ls)) {
    o.detail << "lexicon: topIOU_3_mean=" << lm["all"]["topIOU_first_N"] << " topIOU_3_min="
             << lm["all"]["topIOU_first_N_min"] << " eval_all=" << lm["all"]["eval_metric"] << " " << ls << " s";
    o.check(lm["all"]["topIOU_first_N_min"].get<double>() >= 2.0 / 3.0 - 1e-12,
            "lexicon topIOU_3 below 2/3 on some title");
    o.check(ls < 300.0, "lexicon run-all >= 5 min");
  }
}

// ---------------------------------------------------------------------------

HumorFeatures candidate(int id, double f1, double f2, double f3, double f4) {
  HumorFeatures h;
  h.scene_id = id;
  h.start_s = 40.0 * id;
  h.end_s = h.start_s + f4;
  h.f1 = f1;
  h.f2 = f2;
  h.f3 = f3;
  h.f4 = f4;
  return h;
}

// Curator score equals f1; the other features are independent noise.
FitTitle f1_only_title(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<HumorFeatures> c;
  std::vector<CuratorAnnotation> cur;
  for (int i = 0; i < n; ++i) {
    const double f1 = rng.uniform(0.05, 1.0);
    c.push_back(candidate(i, f1, rng.uniform(), rng.uniform(), rng.uniform(5.0, 35.0)));
    CuratorAnnotation a;
    a.scene_id = i;
    a.start_s = c.back().start_s;
    a.end_s = c.back().end_s;
    a.curator_score = f1;
    a.is_funny = f1 > 0.4;
    cur.push_back(a);
  }
  return make_fit_title(cat("f1only_", seed), c, cur);
}

// Curator score is an arbitrary mix, so the objective surface has structure.
FitTitle mixed_title(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<HumorFeatures> c;
  std::vector<CuratorAnnotation> cur;
  for (int i = 0; i < n; ++i) {
    c.push_back(candidate(i, rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(5.0, 35.0)));
    CuratorAnnotation a;
    a.scene_id = i;
    a.start_s = c.back().start_s;
    a.end_s = c.back().end_s;
    a.curator_score = 0.5 * c.back().f2 + 0.3 * c.back().f3 + 0.2 * rng.uniform();
    a.is_funny = a.curator_score > 0.3;
    cur.push_back(a);
  }
  return make_fit_title(cat("mixed_", seed), c, cur);
}

void weight_fitting(Outcome& o) {
  const double step = 0.05;
  const auto lattice = simplex_lattice(step);
  std::vector<FitTitle> mixed{mixed_title(1, 18), mixed_title(2, 22), mixed_title(3, 15)};
  const auto got = fit_weights_grid(mixed, step);
  bool on_lattice = false, dominates = true;
  for (const auto& w : lattice) {
    on_lattice |= w == got.weights.w;
    dominates &= got.objective >= fit_objective(mixed, {w, got.weights.t_c});
  }
  const double recomputed = fit_objective(mixed, got.weights);

  std::vector<FitTitle> f1only{f1_only_title(11, 20), f1_only_title(12, 24)};
  const auto f1fit = fit_weights_grid(f1only, step);
  const auto& w = f1fit.weights.w;
  const bool w1_dominant = w[0] > w[1] && w[0] > w[2] && w[0] > w[3];
  o.detail << "lattice_points=" << lattice.size() << " objective=" << got.objective << " recomputed=" << recomputed
           << " f1_only_weights=[" << w[0] << "," << w[1] << "," << w[2] << "," << w[3] << "]";
  o.check(lattice.size() == 1771, "step 0.05 lattice does not have 1771 points");
  o.check(on_lattice, "fitted weights are not a lattice point");
  o.check(dominates && recomputed == got.objective, "a lattice point beats the fitted weights");
  o.check(w1_dominant, "f1-only construction is not w1-dominant");
}

// ---------------------------------------------------------------------------

void determinism(Outcome& o) {
  testutil::TempDir d("accept_det");
  const std::string cfg = " --config " + (kConfigs / "tiny_pipeline.json").string();
  auto arg = [&](const std::string& rel) { return (d / rel).string(); };
  int failures = 0, commands = 0;
  auto run = [&](const std::string& cmd) {
    ++commands;
    const auto r = testutil::run_command(kCli + " " + cmd);
    if (r.exit_code != 0) {
      ++failures;
      o.check(false, cmd + " exited " + std::to_string(r.exit_code));
    }
  };
  std::vector<std::string> mismatched;
  for (const char* rep : {"a", "b"}) {
    const std::string R = rep;
    const std::string corpus = arg(R + "/corpus");
    const std::string title = corpus + "/synth_001";
    run("synth --config " + (kConfigs / "tiny_synth.json").string() + " --out " + corpus);
    for (const char* v : {"guided", "V1", "V2", "V3"})
      run(std::string("mine --variant ") + v + " --n 40 --seed 5 --title " + title + " --out " +
          arg(R + "/out/mine_" + v + ".jsonl"));
    run("train-encoder --corpus " + corpus + cfg + " --out " + arg(R + "/out/enc.ckpt"));
    run("train-sbd --corpus " + corpus + " --encoder " + arg(R + "/out/enc.ckpt") + cfg + " --out " +
        arg(R + "/out/sbd.ckpt"));
    run("detect-scenes --title " + title + " --encoder " + arg(R + "/out/enc.ckpt") + " --sbd " +
        arg(R + "/out/sbd.ckpt") + cfg + " --out " + arg(R + "/out/det"));
    run("tag-humor --title " + title + " --scenes " + arg(R + "/out/det/pred_scenes.jsonl") + cfg + " --out " +
        arg(R + "/out/det"));
    run("fit-weights --corpus " + corpus + cfg + " --step 0.25 --out " + arg(R + "/out/w.json"));
    run("rank --features " + arg(R + "/out/det/humor_features.jsonl") + " --weights " + arg(R + "/out/w.json") + cfg +
        " --out " + arg(R + "/out/det/ranking.jsonl"));
    run("evaluate --title " + title + " --run " + arg(R + "/out/det") + cfg + " --out " + arg(R + "/out/eval.json"));
    run("run-all --corpus " + corpus + cfg + " --out " + arg(R + "/out/run"));
  }
  if (failures == 0) {
    const auto a = tree_bytes(d / "a"), b = tree_bytes(d / "b");
    for (const auto& [k, v] : a)
      if (!b.count(k) || b.at(k) != v) mismatched.push_back(k);
    for (const auto& [k, v] : b)
      if (!a.count(k)) mismatched.push_back(k);
    o.detail << "commands=" << commands << " artifacts=" << a.size() << " differing=" << mismatched.size();
    for (const auto& m : mismatched) o.detail << " " << m;
    o.check(mismatched.empty(), "rerun artifacts differ");
    o.check(a.size() > 30, "too few artifacts compared");
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"gradient_fidelity", gradient_fidelity},
      {"metric_oracles", metric_oracles},
      {"guided_mining_nmi", mining_nmi},
      {"modality_fusion", modality_fusion},
      {"boundary_round_trip", boundary_round_trip},
      {"text_protocol", text_protocol},
      {"guardrail_recall", guardrail_recall},
      {"end_to_end", end_to_end},
      {"weight_fitting", weight_fitting},
      {"determinism", determinism},
  };
  CLI::App app("humorcut acceptance runner");
  std::vector<std::string> only;
  app.add_option("criteria", only, "Criterion names to run (default: all)");
  CLI11_PARSE(app, argc, argv);
  for (const auto& name : only)
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
      std::cerr << "unknown criterion: " << name << "\n";
      return 2;
    }

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " " << o.detail.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
