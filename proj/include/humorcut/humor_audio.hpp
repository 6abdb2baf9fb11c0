// humorcut/humor_audio.hpp

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

// Laughter statistics over a time span, and the audio-tag guardrail that
// rejects scenes carrying distress cues.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"

namespace humorcut {

struct LaughterFeatureConfig {
  double theta_laugh = 0.5;
};

inline void validate(const LaughterFeatureConfig& c) {
  if (!(c.theta_laugh > 0.0 && c.theta_laugh < 1.0)) throw ValidationError("laughter config: theta_laugh must be in (0,1)");
}

struct LaughterFeatures {
  double f1 = 0.0;  // mean probability
  double f2 = 0.0;  // fraction of time at or above theta_laugh
};

namespace detail {

inline void check_span(double start_s, double end_s, const char* who) {
  if (!std::isfinite(start_s) || !std::isfinite(end_s) || end_s <= start_s)
    throw ValidationError(cat(who, ": invalid span [", start_s, ", ", end_s, ")"));
}

inline double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Frames partially inside the span count in proportion to their overlap.
inline LaughterFeatures laughter_features(const LaughterTrack& track, double start_s, double end_s,
                                          const LaughterFeatureConfig& cfg = {}) {
  detail::check_span(start_s, end_s, "laughter_features");
  validate(cfg);
  if (!(track.hop_s > 0.0)) throw ValidationError("laughter_features: hop_s must be > 0");
  LaughterFeatures f;
  const auto n = static_cast<long>(track.probs.size());
  const long first = std::max(0L, static_cast<long>(std::floor(start_s / track.hop_s)));
  const long last = std::min(n - 1, static_cast<long>(std::ceil(end_s / track.hop_s)));
  double weight = 0.0, mean = 0.0, above = 0.0;
  for (long i = first; i <= last; ++i) {
    const double w = detail::overlap(i * track.hop_s, (i + 1) * track.hop_s, start_s, end_s) / track.hop_s;
    if (w <= 0.0) continue;
    const double p = track.probs[static_cast<std::size_t>(i)];
    weight += w;
    mean += w * p;
    if (p >= cfg.theta_laugh) above += w;
  }
  if (weight <= 0.0) return f;
  f.f1 = std::clamp(mean / weight, 0.0, 1.0);
  f.f2 = std::clamp(above / weight, 0.0, 1.0);
  return f;
}

// ---------------------------------------------------------------------------
// Guardrail

struct GuardrailConfig {
  std::set<std::string> deny_labels{"crying", "screaming", "moaning", "grunting"};
  double theta_deny = 0.3;
  double d_min = 1.0;  // seconds
};

inline void validate(const GuardrailConfig& c) {
  if (!(c.theta_deny > 0.0 && c.theta_deny <= 1.0)) throw ValidationError("guardrail config: theta_deny must be in (0,1]");
  if (!(c.d_min >= 0.0) || !std::isfinite(c.d_min)) throw ValidationError("guardrail config: d_min must be >= 0");
}

inline void to_json(json& j, const GuardrailConfig& c) {
  j = json{{"deny_labels", c.deny_labels}, {"theta_deny", c.theta_deny}, {"d_min", c.d_min}};
}
inline void from_json(const json& j, GuardrailConfig& c) {
  const GuardrailConfig d;
  c.deny_labels.clear();
  for (const auto& l : j.value("deny_labels", d.deny_labels)) c.deny_labels.insert(detail::lower(l));
  c.theta_deny = j.value("theta_deny", d.theta_deny);
  c.d_min = j.value("d_min", d.d_min);
  validate(c);
}

inline GuardrailConfig load_guardrail_config(const std::filesystem::path& path) {
  return parse_json_file(path).get<GuardrailConfig>();
}

struct GuardrailReason {
  std::string label;
  double duration_s = 0.0;
};

struct GuardrailVerdict {
  bool reject = false;
  std::vector<GuardrailReason> reasons;  // sorted by label
};

inline void to_json(json& j, const GuardrailVerdict& v) {
  j = json{{"verdict", v.reject ? "reject" : "keep"}, {"reasons", json::array()}};
  for (const auto& r : v.reasons) j["reasons"].push_back({{"label", r.label}, {"duration_s", r.duration_s}});
}
inline void from_json(const json& j, GuardrailVerdict& v) {
  const auto s = j.at("verdict").get<std::string>();
  if (s != "keep" && s != "reject") throw ValidationError(cat("guardrail verdict: unknown value '", s, "'"));
  v.reject = s == "reject";
  v.reasons.clear();
  for (const auto& r : j.value("reasons", json::array()))
    v.reasons.push_back({r.at("label").get<std::string>(), r.at("duration_s").get<double>()});
}

// Per deny label, sums the in-span duration of its events with
// prob >= theta_deny. Labels compare case-insensitively.
inline GuardrailVerdict guardrail_filter(std::span<const AudioTagEvent> tags, double start_s, double end_s,
                                         const GuardrailConfig& cfg = {}) {
  detail::check_span(start_s, end_s, "guardrail_filter");
  std::set<std::string> deny;
  for (const auto& l : cfg.deny_labels) deny.insert(detail::lower(l));
  std::map<std::string, double> total;
  for (const auto& e : tags) {
    if (e.prob < cfg.theta_deny) continue;
    const auto label = detail::lower(e.label);
    if (!deny.count(label)) continue;
    const double d = detail::overlap(e.start_s, e.end_s, start_s, end_s);
    if (d > 0.0) total[label] += d;
  }
  GuardrailVerdict v;
  for (const auto& [label, d] : total) {
    if (d >= cfg.d_min) v.reasons.push_back({label, d});
  }
  v.reject = !v.reasons.empty();
  return v;
}

}  // namespace humorcut
