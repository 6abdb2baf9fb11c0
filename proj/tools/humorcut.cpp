// tools/humorcut.cpp

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

// Command-line front end. Exit status: 0 success, 1 validation or usage
// error, 2 runtime error.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "humorcut/pipeline.hpp"
#include "humorcut/synth.hpp"

using namespace humorcut;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

void add_common(CLI::App* app, Common& c, bool out_required = true) {
  app->add_option("--seed", c.seed, "Global random seed");
  app->add_option("--config", c.config, "Configuration file (JSON)");
  auto* o = app->add_option("--out", c.out, "Output path");
  if (out_required) o->required();
}

// --scorer beats HUMORCUT_SCORER beats the config file.
PipelineConfig pipeline_config(const Common& c, const std::string& scorer_flag = {}) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : parse_json_file(c.config).get<PipelineConfig>();
  if (c.seed) cfg.seed = *c.seed;
  if (const char* env = std::getenv("HUMORCUT_SCORER"); env && *env) cfg.scorer = env;
  if (!scorer_flag.empty()) cfg.scorer = scorer_flag;
  validate(cfg);
  return resolve_seeds(cfg);
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// A ranking file (records with "rank") or a curator file (records with
// "curator_score"), turned into a best-first list of ids.
std::vector<int> read_ranked_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(cat(path.string(), ": cannot open"));
  std::vector<json> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ValidationError(cat(path.string(), ":", line_no, ": parse error: ", e.what()));
    }
  }
  if (!rows.empty() && rows.front().contains("curator_score")) {
    std::vector<CuratorAnnotation> c;
    for (const auto& r : rows) c.push_back(r.get<CuratorAnnotation>());
    return curator_ranking(c);
  }
  std::vector<std::pair<int, int>> ranked;
  for (const auto& r : rows) {
    if (!r.contains("rank") || !r.contains("scene_id"))
      throw ValidationError(cat(path.string(), ": records need rank and scene_id (or curator_score)"));
    ranked.emplace_back(r["rank"].get<int>(), r["scene_id"].get<int>());
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> ids;
  for (const auto& [_, id] : ranked) ids.push_back(id);
  return ids;
}

json rank_report_json(const RankReport& rep) {
  json per_n = json::array();
  for (std::size_t i = 0; i < rep.n_values.size(); ++i)
    per_n.push_back({{"N", rep.n_values[i]}, {"topIOU", rep.top_iou[i]}, {"topIOU_align", rep.top_iou_align[i]}});
  return {{"per_N", per_n}, {"eval_metric", rep.eval_metric}, {"eval_metric_normalized", rep.normalized()}};
}

Detection read_detection(const Title& t, const fs::path& run) {
  Detection d;
  d.embeddings = read_matrix_bin((run / "embeddings.bin").string());
  for (const auto& b : read_jsonl<json>(run / "boundaries.jsonl")) {
    d.boundaries.probs.push_back(b.at("prob").get<double>());
    d.boundaries.flags.push_back(b.at("boundary").get<bool>());
  }
  d.scenes = read_jsonl<SceneAnnotation>(run / "pred_scenes.jsonl");
  validate_partition(d.scenes, t.n_shots(), "pred_scenes");
  if (d.embeddings.rows() != t.n_shots() || static_cast<int>(d.boundaries.probs.size()) != t.n_shots())
    throw ValidationError(cat(run.string(), ": artifacts do not match title ", t.title_id, " (", t.n_shots(), " shots)"));
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"humorcut: funny-scene extraction over per-shot features"};
  app.require_subcommand(1);

  // synth
  Common synth_c;
  int synth_titles = -1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_common(synth, synth_c);
  synth->add_option("--n-titles", synth_titles, "Override the number of titles");

  // mine
  Common mine_c;
  std::string mine_title, mine_variant = "guided";
  int mine_n = 420, mine_window = 3;
  auto* mine = app.add_subcommand("mine", "Mine triplets from one title");
  add_common(mine, mine_c);
  mine->add_option("--title", mine_title, "Title bundle directory")->required();
  mine->add_option("--variant", mine_variant, "guided | V1 | V2 | V3");
  mine->add_option("--n", mine_n, "Number of triplets");
  mine->add_option("--window", mine_window, "Scene window for guided negatives");

  // train-encoder
  Common te_c;
  std::string te_corpus, te_triplets;
  auto* te = app.add_subcommand("train-encoder", "Train the shot projection head");
  add_common(te, te_c);
  te->add_option("--corpus", te_corpus, "Corpus root")->required();
  te->add_option("--triplets", te_triplets, "Triplets file (mined from the corpus when omitted)");

  // train-sbd
  Common ts_c;
  std::string ts_corpus, ts_encoder;
  auto* ts = app.add_subcommand("train-sbd", "Train the boundary classifier");
  add_common(ts, ts_c);
  ts->add_option("--corpus", ts_corpus, "Corpus root")->required();
  ts->add_option("--encoder", ts_encoder, "Encoder checkpoint")->required();

  // detect-scenes
  Common ds_c;
  std::string ds_title, ds_encoder, ds_sbd;
  auto* ds = app.add_subcommand("detect-scenes", "Embed shots, detect boundaries and assemble scenes");
  add_common(ds, ds_c);
  ds->add_option("--title", ds_title, "Title bundle directory")->required();
  ds->add_option("--encoder", ds_encoder, "Encoder checkpoint")->required();
  ds->add_option("--sbd", ds_sbd, "SBD checkpoint")->required();

  // tag-humor
  Common th_c;
  std::string th_title, th_scenes, th_scorer;
  auto* th = app.add_subcommand("tag-humor", "Laughter, text and guardrail features per scene");
  add_common(th, th_c);
  th->add_option("--title", th_title, "Title bundle directory")->required();
  th->add_option("--scenes", th_scenes, "Scenes file (default: the title's gt scenes)");
  th->add_option("--scorer", th_scorer, "oracle | lexicon:<path> | external:<command>");

  // rank
  Common rk_c;
  std::string rk_features, rk_weights;
  auto* rk = app.add_subcommand("rank", "Score and rank tagged scenes");
  add_common(rk, rk_c);
  rk->add_option("--features", rk_features, "humor_features.jsonl")->required();
  rk->add_option("--weights", rk_weights, "weights.json (default: config weights)");

  // fit-weights
  Common fw_c;
  std::string fw_corpus, fw_method, fw_scorer;
  double fw_step = 0.0;
  auto* fw = app.add_subcommand("fit-weights", "Fit humor-score weights on gt scenes");
  add_common(fw, fw_c);
  fw->add_option("--corpus", fw_corpus, "Corpus root")->required();
  fw->add_option("--method", fw_method, "grid | linear | logistic | tree");
  fw->add_option("--step", fw_step, "Grid step");
  fw->add_option("--scorer", fw_scorer, "oracle | lexicon:<path> | external:<command>");

  // evaluate
  Common ev_c;
  std::string ev_gt, ev_pred, ev_title, ev_run;
  auto* ev = app.add_subcommand("evaluate", "Ranking and boundary metrics");
  add_common(ev, ev_c);
  ev->add_option("--gt", ev_gt, "Reference ranking or curator file");
  ev->add_option("--pred", ev_pred, "Predicted ranking file");
  ev->add_option("--title", ev_title, "Title bundle directory (full report)");
  ev->add_option("--run", ev_run, "Directory holding the title's pipeline artifacts");

  // run-all
  Common ra_c;
  std::string ra_corpus, ra_scorer;
  auto* ra = app.add_subcommand("run-all", "Train, detect, tag, fit, rank and evaluate a corpus");
  add_common(ra, ra_c);
  ra->add_option("--corpus", ra_corpus, "Corpus root")->required();
  ra->add_option("--scorer", ra_scorer, "oracle | lexicon:<path> | external:<command>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*synth) {
      SynthConfig cfg = synth_c.config.empty() ? SynthConfig{} : parse_json_file(synth_c.config).get<SynthConfig>();
      if (synth_c.seed) cfg.seed = *synth_c.seed;
      if (synth_titles >= 0) cfg.n_titles = synth_titles;
      write_synth_corpus(cfg, synth_c.out);
      std::cout << "wrote " << cfg.n_titles << " titles to " << synth_c.out << "\n";
    } else if (*mine) {
      const Title t = load_title(mine_title);
      const auto source = parse_triplet_source(mine_variant);
      const std::uint64_t seed = mine_c.seed.value_or(0);
      const auto triplets = source == TripletSource::Guided
                                ? mine_guided(t, mine_n, mine_window, seed)
                                : mine_heuristic(source, t.n_shots(), mine_n, seed, t.title_id);
      ensure_parent(mine_c.out);
      write_jsonl(mine_c.out, triplets);
      std::cout << "mined " << triplets.size() << " triplets\n";
    } else if (*te) {
      const auto cfg = pipeline_config(te_c);
      const auto titles = load_corpus(te_corpus);
      const auto triplets =
          te_triplets.empty() ? mine_corpus(titles, cfg.mining, cfg.seed) : read_jsonl<Triplet>(te_triplets);
      const auto tr = train_encoder_on(titles, triplets, cfg.encoder);
      ensure_parent(te_c.out);
      save_network(tr.net, te_c.out, {{"config", cfg.encoder}, {"loss_history", tr.loss_history}});
      std::cout << "encoder: initial loss " << tr.initial_loss << ", final "
                << (tr.loss_history.empty() ? tr.initial_loss : tr.loss_history.back()) << "\n";
    } else if (*ts) {
      const auto cfg = pipeline_config(ts_c);
      const auto titles = load_corpus(ts_corpus);
      const auto enc = load_network(ts_encoder).net;
      const auto tr = train_sbd_on(titles, enc, cfg.sbd, cfg.visual_only);
      ensure_parent(ts_c.out);
      save_network(tr.net, ts_c.out, {{"config", cfg.sbd}, {"loss_history", tr.loss_history}});
      std::cout << "sbd: final loss " << (tr.loss_history.empty() ? 0.0 : tr.loss_history.back()) << "\n";
    } else if (*ds) {
      const auto cfg = pipeline_config(ds_c);
      const Title t = load_title(ds_title);
      const auto enc = load_network(ds_encoder).net;
      const auto sbd = load_network(ds_sbd).net;
      const auto d = run_stage("detect-scenes", ds_c.out, [&] {
        auto r = detect_scenes(t, enc, sbd, cfg);
        write_detection(t, r, ds_c.out);
        return r;
      });
      std::cout << d.scenes.size() << " scenes\n";
    } else if (*th) {
      const auto cfg = pipeline_config(th_c, th_scorer);
      const Title t = load_title(th_title);
      std::vector<SceneAnnotation> scenes;
      if (!th_scenes.empty()) {
        scenes = read_jsonl<SceneAnnotation>(th_scenes);
        validate_partition(scenes, t.n_shots(), "scenes");
      } else if (t.gt_scenes) {
        scenes = *t.gt_scenes;
      } else {
        throw ValidationError("tag-humor: --scenes required for titles without gt scenes");
      }
      run_stage("tag-humor", th_c.out, [&] {
        const auto kept = spoiler_skip(t, scenes, cfg.spoiler_skip_fraction);
        auto scorer = scorer_for(cfg, t);
        const auto f = tag_humor(t, kept, *scorer, cfg);
        fs::create_directories(th_c.out);
        write_jsonl(fs::path(th_c.out) / "humor_features.jsonl", f);
        std::cout << f.size() << " candidates\n";
        return 0;
      });
    } else if (*rk) {
      const auto cfg = pipeline_config(rk_c);
      const auto weights = rk_weights.empty() ? cfg.weights : load_weights(rk_weights).weights;
      const auto features = read_jsonl<HumorFeatures>(rk_features);
      const auto ranking = rank_candidates(features, weights);
      ensure_parent(rk_c.out);
      write_jsonl(rk_c.out, ranking);
      std::cout << ranking.size() << " ranked scenes\n";
    } else if (*fw) {
      auto cfg = pipeline_config(fw_c, fw_scorer);
      if (!fw_method.empty()) cfg.fit.method = fw_method;
      if (fw_step > 0.0) cfg.fit.step = fw_step;
      validate(cfg);
      std::vector<FitTitle> fit;
      for (const auto& t : load_corpus(fw_corpus)) {
        if (!t.gt_scenes || !t.curator) continue;
        const auto kept = spoiler_skip(t, *t.gt_scenes, cfg.spoiler_skip_fraction);
        auto scorer = scorer_for(cfg, t);
        std::vector<HumorFeatures> f;
        for (auto& h : tag_humor(t, kept, *scorer, cfg))
          if (!h.guardrail.reject) f.push_back(h);
        if (f.empty()) continue;
        fit.push_back(make_fit_title(t.title_id, f, eligible_curator(t, cfg.spoiler_skip_fraction)));
      }
      const auto w = fit_weights(fit, cfg);
      ensure_parent(fw_c.out);
      write_json(fw_c.out, w);
      std::cout << json(w).dump() << "\n";
    } else if (*ev) {
      const auto cfg = pipeline_config(ev_c);
      json report;
      if (!ev_gt.empty() || !ev_pred.empty()) {
        if (ev_gt.empty() || ev_pred.empty()) throw ValidationError("evaluate: --gt and --pred go together");
        report = rank_report_json(rank_report(read_ranked_ids(ev_gt), read_ranked_ids(ev_pred), cfg.rank_metrics));
      } else if (!ev_title.empty() && !ev_run.empty()) {
        const Title t = load_title(ev_title);
        const auto d = read_detection(t, ev_run);
        const auto ranking = read_jsonl<RankedScene>(fs::path(ev_run) / "ranking.jsonl");
        report = evaluate_title(t, d, ranking, cfg).report;
      } else {
        throw ValidationError("evaluate: give --gt/--pred, or --title/--run");
      }
      ensure_parent(ev_c.out);
      write_json(ev_c.out, report);
      std::cout << report.dump(2) << "\n";
    } else if (*ra) {
      auto cfg = pipeline_config(ra_c, ra_scorer);
      const auto summary = run_all(cfg, ra_corpus, ra_c.out);
      std::cout << summary["means"].dump(2) << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
