// humorcut/corpus.hpp

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

// Canonical data model for one title and its manifest bundle:
//
//   <dir>/title.json        {title_id, schema_version, visual_dim, text_dim}
//   <dir>/shots.jsonl       one ShotRecord per line
//   <dir>/scenes.jsonl      ground-truth SceneAnnotation (optional)
//   <dir>/transcript.jsonl  TranscriptSentence (optional)
//   <dir>/laughter.json     {hop_s, probs} (optional)
//   <dir>/audio_tags.jsonl  AudioTagEvent (optional)
//   <dir>/curator.jsonl     CuratorAnnotation (optional)
//
// All numbers are decimal text, read back as double.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string_view>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "humorcut/error.hpp"
#include "humorcut/matrix.hpp"

namespace humorcut {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kProjectedVisualDim = 4096;
inline constexpr int kTextDim = 768;
inline constexpr int kFusedDim = kProjectedVisualDim + kTextDim;  // 4864

struct ShotRecord {
  int shot_id = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<double> visual_feat;
  std::vector<double> text_feat;  // empty = missing, treated as zeros
  std::string caption;
};

struct SceneAnnotation {
  int scene_id = 0;
  int first_shot = 0;
  int last_shot = 0;  // inclusive

  int size() const { return last_shot - first_shot + 1; }
  bool operator==(const SceneAnnotation&) const = default;
};

struct TranscriptSentence {
  int index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
};

struct LaughterTrack {
  double hop_s = 0.5;
  std::vector<double> probs;  // frame i covers [i*hop_s, (i+1)*hop_s)
};

struct AudioTagEvent {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
  double prob = 0.0;
};

struct CuratorAnnotation {
  int scene_id = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<int> first_shot;
  std::optional<int> last_shot;
  double curator_score = 0.0;
  bool is_funny = false;
};

struct Title {
  std::string title_id;
  int visual_dim = 0;
  int text_dim = kTextDim;
  std::vector<ShotRecord> shots;
  std::optional<std::vector<SceneAnnotation>> gt_scenes;
  std::optional<std::vector<TranscriptSentence>> transcript;
  std::optional<LaughterTrack> laughter;
  std::optional<std::vector<AudioTagEvent>> audio_tags;
  std::optional<std::vector<CuratorAnnotation>> curator;

  int n_shots() const { return static_cast<int>(shots.size()); }
  double duration() const { return shots.empty() ? 0.0 : shots.back().end_s; }
  double span_start(const SceneAnnotation& s) const { return shots[s.first_shot].start_s; }
  double span_end(const SceneAnnotation& s) const { return shots[s.last_shot].end_s; }
};

// ---------------------------------------------------------------------------
// JSON mapping

namespace detail {

// Feature arrays may carry null (nlohmann's spelling of NaN); keep it as NaN
// so validation reports a finite-value error with the field path.
inline std::vector<double> feature_array(const json& j) {
  if (!j.is_array()) throw json::type_error::create(302, "feature vector must be an array", &j);
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
  return v;
}

// Python's json module writes NaN / Infinity as bare tokens. Rewrite them
// (outside string literals) to null so the record parses and the finiteness
// check can name the field.
inline std::string nonfinite_tokens_to_null(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) out += line[++i];
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    bool replaced = false;
    for (const char* tok : {"-Infinity", "Infinity", "NaN"}) {
      const std::string_view t(tok);
      if (line.compare(i, t.size(), t) == 0) {
        out += "null";
        i += t.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out += c;
  }
  return out;
}

}  // namespace detail

inline void to_json(json& j, const ShotRecord& s) {
  j = json{{"shot_id", s.shot_id}, {"start_s", s.start_s}, {"end_s", s.end_s},
           {"visual_feat", s.visual_feat}, {"text_feat", s.text_feat}, {"caption", s.caption}};
}
inline void from_json(const json& j, ShotRecord& s) {
  j.at("shot_id").get_to(s.shot_id);
  j.at("start_s").get_to(s.start_s);
  j.at("end_s").get_to(s.end_s);
  s.visual_feat = detail::feature_array(j.at("visual_feat"));
  s.text_feat = j.contains("text_feat") && !j["text_feat"].is_null()
                    ? detail::feature_array(j["text_feat"])
                    : std::vector<double>{};
  s.caption = j.value("caption", std::string{});
}

inline void to_json(json& j, const SceneAnnotation& s) {
  j = json{{"scene_id", s.scene_id}, {"first_shot", s.first_shot}, {"last_shot", s.last_shot}};
}
inline void from_json(const json& j, SceneAnnotation& s) {
  j.at("scene_id").get_to(s.scene_id);
  j.at("first_shot").get_to(s.first_shot);
  j.at("last_shot").get_to(s.last_shot);
}

inline void to_json(json& j, const TranscriptSentence& s) {
  j = json{{"index", s.index}, {"start_s", s.start_s}, {"end_s", s.end_s}, {"text", s.text}};
}
inline void from_json(const json& j, TranscriptSentence& s) {
  j.at("index").get_to(s.index);
  j.at("start_s").get_to(s.start_s);
  j.at("end_s").get_to(s.end_s);
  j.at("text").get_to(s.text);
}

inline void to_json(json& j, const LaughterTrack& t) {
  j = json{{"hop_s", t.hop_s}, {"probs", t.probs}};
}
inline void from_json(const json& j, LaughterTrack& t) {
  j.at("hop_s").get_to(t.hop_s);
  j.at("probs").get_to(t.probs);
}

inline void to_json(json& j, const AudioTagEvent& e) {
  j = json{{"start_s", e.start_s}, {"end_s", e.end_s}, {"label", e.label}, {"prob", e.prob}};
}
inline void from_json(const json& j, AudioTagEvent& e) {
  j.at("start_s").get_to(e.start_s);
  j.at("end_s").get_to(e.end_s);
  j.at("label").get_to(e.label);
  j.at("prob").get_to(e.prob);
}

inline void to_json(json& j, const CuratorAnnotation& c) {
  j = json{{"scene_id", c.scene_id}, {"start_s", c.start_s}, {"end_s", c.end_s},
           {"curator_score", c.curator_score}, {"is_funny", c.is_funny}};
  if (c.first_shot) j["first_shot"] = *c.first_shot;
  if (c.last_shot) j["last_shot"] = *c.last_shot;
}
inline void from_json(const json& j, CuratorAnnotation& c) {
  j.at("scene_id").get_to(c.scene_id);
  j.at("start_s").get_to(c.start_s);
  j.at("end_s").get_to(c.end_s);
  j.at("curator_score").get_to(c.curator_score);
  j.at("is_funny").get_to(c.is_funny);
  if (j.contains("first_shot")) c.first_shot = j["first_shot"].get<int>();
  if (j.contains("last_shot")) c.last_shot = j["last_shot"].get<int>();
}

// ---------------------------------------------------------------------------
// Line-delimited I/O

inline json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(cat(path.string(), ": cannot open"));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(cat(path.string(), ": parse error: ", e.what()));
  }
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(cat(path.string(), ": cannot open"));
  std::vector<T> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(detail::nonfinite_tokens_to_null(line)).get<T>());
    } catch (const json::exception& e) {
      throw ValidationError(cat(path.string(), ":", line_no, ": parse error: ", e.what()));
    }
  }
  return out;
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& records) {
  std::ofstream out(path);
  if (!out) throw RuntimeError(cat(path.string(), ": cannot open for writing"));
  for (const auto& r : records) out << json(r).dump() << '\n';
  if (!out) throw RuntimeError(cat(path.string(), ": write failed"));
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw RuntimeError(cat(path.string(), ": cannot open for writing"));
  out << j.dump(2) << '\n';
  if (!out) throw RuntimeError(cat(path.string(), ": write failed"));
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void require_finite(std::span<const double> v, const std::string& field) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw ValidationError(cat(field, "[", i, "]: non-finite value"));
}

}  // namespace detail

// Checks that `scenes` partition [0, n_shots): ordered, gap-free, non-empty.
inline void validate_partition(std::span<const SceneAnnotation> scenes, int n_shots,
                               const std::string& field = "gt_scenes") {
  using detail::require;
  int next = 0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const auto& s = scenes[i];
    const std::string where = cat(field, "[", i, "] (scene_id ", s.scene_id, ")");
    require(s.first_shot <= s.last_shot, cat(where, ": empty scene"));
    require(s.first_shot >= next, cat(where, ": overlaps previous scene"));
    require(s.first_shot == next, cat(where, ": gap before scene"));
    require(s.last_shot < n_shots, cat(where, ": last_shot out of range"));
    next = s.last_shot + 1;
  }
  require(next == n_shots, cat(field, ": scenes do not cover all ", n_shots, " shots"));
}

inline void validate_title(const Title& t) {
  using detail::require;
  using detail::require_finite;
  require(!t.title_id.empty(), "title_id: empty");
  require(t.visual_dim > 0, "visual_dim: must be positive");
  require(t.text_dim > 0, "text_dim: must be positive");
  require(!t.shots.empty(), "shots: title has no shots");

  for (std::size_t k = 0; k < t.shots.size(); ++k) {
    const auto& s = t.shots[k];
    const std::string where = cat("shots[", k, "]");
    require(s.shot_id == static_cast<int>(k), cat(where, ".shot_id: expected ", k, ", got ", s.shot_id));
    require(std::isfinite(s.start_s) && std::isfinite(s.end_s), cat(where, ": non-finite time"));
    require(s.start_s < s.end_s, cat(where, ": start_s must be < end_s"));
    if (k > 0) {
      require(s.start_s > t.shots[k - 1].start_s, cat(where, ".start_s: shots not ordered"));
      require(t.shots[k - 1].end_s <= s.start_s + 1e-6, cat(where, ": overlaps previous shot"));
    }
    require(static_cast<int>(s.visual_feat.size()) == t.visual_dim,
            cat(where, ".visual_feat: dimension mismatch (expected ", t.visual_dim, ", got ",
                s.visual_feat.size(), ")"));
    require_finite(s.visual_feat, cat(where, ".visual_feat"));
    require(s.text_feat.empty() || static_cast<int>(s.text_feat.size()) == t.text_dim,
            cat(where, ".text_feat: dimension mismatch (expected ", t.text_dim, ", got ",
                s.text_feat.size(), ")"));
    require_finite(s.text_feat, cat(where, ".text_feat"));
  }

  if (t.gt_scenes) validate_partition(*t.gt_scenes, t.n_shots());

  if (t.transcript) {
    const auto& tr = *t.transcript;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const std::string where = cat("transcript[", i, "]");
      require(tr[i].index == static_cast<int>(i), cat(where, ".index: not contiguous"));
      require(std::isfinite(tr[i].start_s) && std::isfinite(tr[i].end_s),
              cat(where, ": non-finite time"));
      require(tr[i].start_s <= tr[i].end_s, cat(where, ": start_s > end_s"));
      if (i > 0) require(tr[i].start_s >= tr[i - 1].start_s, cat(where, ".start_s: decreasing"));
    }
  }

  if (t.laughter) {
    require(t.laughter->hop_s > 0 && std::isfinite(t.laughter->hop_s), "laughter.hop_s: must be > 0");
    const auto& p = t.laughter->probs;
    for (std::size_t i = 0; i < p.size(); ++i)
      require(p[i] >= 0.0 && p[i] <= 1.0, cat("laughter.probs[", i, "]: outside [0,1]"));
  }

  if (t.audio_tags) {
    const auto& tags = *t.audio_tags;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      const std::string where = cat("audio_tags[", i, "]");
      require(tags[i].start_s < tags[i].end_s, cat(where, ": start_s must be < end_s"));
      require(tags[i].prob >= 0.0 && tags[i].prob <= 1.0, cat(where, ".prob: outside [0,1]"));
    }
  }

  if (t.curator) {
    const auto& cur = *t.curator;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const auto& c = cur[i];
      const std::string where = cat("curator[", i, "]");
      require(std::isfinite(c.curator_score) && c.curator_score >= 0.0,
              cat(where, ".curator_score: must be >= 0"));
      require(c.start_s < c.end_s, cat(where, ": start_s must be < end_s"));
      require(c.first_shot.has_value() == c.last_shot.has_value(),
              cat(where, ": shot span needs both first_shot and last_shot"));
      if (c.first_shot) {
        require(*c.first_shot >= 0 && *c.first_shot <= *c.last_shot && *c.last_shot < t.n_shots(),
                cat(where, ": shot span out of range"));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Bundle load / save

inline Title load_title(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError(cat(dir.string(), ": not a directory"));
  Title t;
  const json header = parse_json_file(dir / "title.json");
  try {
    header.at("title_id").get_to(t.title_id);
    header.at("visual_dim").get_to(t.visual_dim);
    t.text_dim = header.value("text_dim", kTextDim);
    const int version = header.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ValidationError(cat("title.json: unsupported schema_version ", version));
  } catch (const json::exception& e) {
    throw ValidationError(cat((dir / "title.json").string(), ": ", e.what()));
  }
  t.shots = read_jsonl<ShotRecord>(dir / "shots.jsonl");
  if (fs::exists(dir / "scenes.jsonl")) t.gt_scenes = read_jsonl<SceneAnnotation>(dir / "scenes.jsonl");
  if (fs::exists(dir / "transcript.jsonl"))
    t.transcript = read_jsonl<TranscriptSentence>(dir / "transcript.jsonl");
  if (fs::exists(dir / "laughter.json")) {
    try {
      t.laughter = parse_json_file(dir / "laughter.json").get<LaughterTrack>();
    } catch (const json::exception& e) {
      throw ValidationError(cat((dir / "laughter.json").string(), ": ", e.what()));
    }
  }
  if (fs::exists(dir / "audio_tags.jsonl"))
    t.audio_tags = read_jsonl<AudioTagEvent>(dir / "audio_tags.jsonl");
  if (fs::exists(dir / "curator.jsonl")) t.curator = read_jsonl<CuratorAnnotation>(dir / "curator.jsonl");
  try {
    validate_title(t);
  } catch (const ValidationError& e) {
    throw ValidationError(cat(dir.string(), ": ", e.what()));
  }
  return t;
}

inline void save_title(const Title& t, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  validate_title(t);
  fs::create_directories(dir);
  write_json(dir / "title.json", json{{"title_id", t.title_id},
                                      {"schema_version", kSchemaVersion},
                                      {"visual_dim", t.visual_dim},
                                      {"text_dim", t.text_dim}});
  write_jsonl(dir / "shots.jsonl", t.shots);
  if (t.gt_scenes) write_jsonl(dir / "scenes.jsonl", *t.gt_scenes);
  if (t.transcript) write_jsonl(dir / "transcript.jsonl", *t.transcript);
  if (t.laughter) {
    std::ofstream out(dir / "laughter.json");
    out << json(*t.laughter).dump() << '\n';
  }
  if (t.audio_tags) write_jsonl(dir / "audio_tags.jsonl", *t.audio_tags);
  if (t.curator) write_jsonl(dir / "curator.jsonl", *t.curator);
}

// Title directories under a corpus root (those holding a title.json), sorted.
inline std::vector<std::filesystem::path> list_title_dirs(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw ValidationError(cat(root.string(), ": not a directory"));
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / "title.json")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

// ---------------------------------------------------------------------------
// Features

inline std::vector<double> fuse_features(std::span<const double> visual, std::span<const double> text) {
  if (visual.size() != static_cast<std::size_t>(kProjectedVisualDim))
    throw ValidationError(cat("fuse_features: visual dimension ", visual.size(), ", expected ",
                              kProjectedVisualDim));
  if (text.size() != static_cast<std::size_t>(kTextDim))
    throw ValidationError(cat("fuse_features: text dimension ", text.size(), ", expected ", kTextDim));
  std::vector<double> out;
  out.reserve(kFusedDim);
  out.insert(out.end(), visual.begin(), visual.end());
  out.insert(out.end(), text.begin(), text.end());
  return out;
}

// Raw backbone features, one row per shot.
inline Matrix visual_matrix(const Title& t) {
  Matrix m(t.n_shots(), t.visual_dim);
  for (int k = 0; k < t.n_shots(); ++k)
    for (int d = 0; d < t.visual_dim; ++d) m(k, d) = t.shots[k].visual_feat[d];
  return m;
}

// Fused [embedding | text] rows. Missing text_feat, or visual_only, gives
// zeros in the text block.
inline Matrix fused_matrix(const Title& t, const Matrix& embeddings, bool visual_only = false) {
  if (embeddings.rows() != t.n_shots())
    throw ValidationError(cat("fused_matrix: ", embeddings.rows(), " embedding rows for ", t.n_shots(),
                              " shots"));
  if (t.text_dim != kTextDim)
    throw ValidationError(cat("fused_matrix: text_dim ", t.text_dim, ", expected ", kTextDim));
  const std::vector<double> zeros(kTextDim, 0.0);
  Matrix m(t.n_shots(), kFusedDim);
  for (int k = 0; k < t.n_shots(); ++k) {
    const auto& text = (visual_only || t.shots[k].text_feat.empty()) ? zeros : t.shots[k].text_feat;
    const auto row = embeddings.row(k);
    const auto fused = fuse_features(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                                     text);
    m.row(k) = Eigen::Map<const RowVector>(fused.data(), kFusedDim);
  }
  return m;
}

// Scene label per shot (index into the scene list).
inline std::vector<int> shot_scene_labels(std::span<const SceneAnnotation> scenes, int n_shots) {
  std::vector<int> labels(static_cast<std::size_t>(n_shots), -1);
  for (std::size_t s = 0; s < scenes.size(); ++s)
    for (int k = scenes[s].first_shot; k <= scenes[s].last_shot; ++k) labels[k] = static_cast<int>(s);
  return labels;
}

}  // namespace humorcut
