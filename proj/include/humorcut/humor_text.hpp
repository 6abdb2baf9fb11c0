// humorcut/humor_text.hpp

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

// Long-text humor tagging around a pluggable sentence scorer.
//
// Training inputs are cut to 10 sentences: the first two, the last two and
// one random sentence from each of six equal strata of the middle. At test
// time a transcript is split into consecutive 10-sentence chunks, each chunk
// is scored, and the mean is compared against the decision threshold.
//
// External scorers run as a child process speaking one JSON object per line:
//   request  {"id": <int>, "sentences": [<string>, ...]}
//   response {"id": <int>, "score": <number in [0,1]>}

#pragma once

#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "humorcut/corpus.hpp"
#include "humorcut/rng.hpp"

namespace humorcut {

inline constexpr int kTrainSentences = 10;
inline constexpr int kChunkSentences = 10;
inline constexpr int kMinTailChunk = 3;
inline constexpr double kHumorThreshold = 0.56;

struct SampledInput {
  std::vector<int> indices;
  std::vector<std::string> sentences;
};

inline SampledInput sample_train_sentences(std::span<const std::string> sentences, std::uint64_t seed) {
  const int s = static_cast<int>(sentences.size());
  if (s < 1) throw ValidationError("sample_train_sentences: needs at least one sentence");
  SampledInput out;
  if (s <= kTrainSentences) {
    for (int i = 0; i < s; ++i) out.indices.push_back(i);
  } else {
    Rng rng(seed);
    out.indices = {0, 1};
    // Middle range [2, s-3] has s-4 >= 7 entries; six equal-width strata.
    const int lo = 2;
    const int len = s - 4;
    for (int j = 0; j < 6; ++j) {
      const int a = lo + (j * len) / 6;
      const int b = lo + ((j + 1) * len) / 6;  // exclusive
      out.indices.push_back(a + static_cast<int>(rng.below(static_cast<std::uint64_t>(b - a))));
    }
    out.indices.push_back(s - 2);
    out.indices.push_back(s - 1);
  }
  for (int i : out.indices) out.sentences.push_back(sentences[i]);
  return out;
}

// [begin, end) ranges of consecutive 10-sentence chunks. A tail shorter than
// three sentences folds into the previous chunk unless it is the only one.
inline std::vector<std::pair<std::size_t, std::size_t>> subtext_ranges(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t at = 0; at < n; at += kChunkSentences) out.emplace_back(at, std::min(n, at + kChunkSentences));
  if (out.size() > 1) {
    const auto tail = out.back().second - out.back().first;
    if (tail < static_cast<std::size_t>(kMinTailChunk)) {
      const auto end = out.back().second;
      out.pop_back();
      out.back().second = end;
    }
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> segment_subtexts(std::span<const T> sentences) {
  if (sentences.empty()) throw ValidationError("segment_subtexts: needs at least one sentence");
  std::vector<std::vector<T>> chunks;
  for (const auto& [b, e] : subtext_ranges(sentences.size())) chunks.emplace_back(sentences.begin() + b, sentences.begin() + e);
  return chunks;
}

// ---------------------------------------------------------------------------
// Scorers

class TextScorer {
 public:
  virtual ~TextScorer() = default;
  // Humor probability of one chunk, in [0, 1].
  virtual double score(std::span<const TranscriptSentence> chunk) = 0;
};

// Fraction of sentences containing at least one marker word.
class LexiconScorer final : public TextScorer {
 public:
  explicit LexiconScorer(std::set<std::string> markers) : markers_(std::move(markers)) {}

  static LexiconScorer from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(cat("lexicon: cannot open ", path));
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      const auto w = normalize(line);
      if (!w.empty()) words.insert(w);
    }
    if (words.empty()) throw ValidationError(cat("lexicon: ", path, " has no words"));
    return LexiconScorer(std::move(words));
  }

  double score(std::span<const TranscriptSentence> chunk) override {
    if (chunk.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& s : chunk) hits += contains_marker(s.text) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(chunk.size());
  }

  bool contains_marker(const std::string& text) const {
    std::string word;
    for (char c : text + " ") {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!word.empty()) {
        if (markers_.count(word)) return true;
        word.clear();
      }
    }
    return false;
  }

 private:
  static std::string normalize(const std::string& s) {
    std::string out;
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }

  std::set<std::string> markers_;
};

// Ground-truth scorer for annotated titles: a sentence whose midpoint falls in
// a curator-marked funny span scores 0.6 + 0.4 * score / max_score, any other
// sentence scores 0; a chunk scores the mean of its sentences.
class OracleScorer final : public TextScorer {
 public:
  explicit OracleScorer(const Title& title) {
    if (title.curator) spans_ = *title.curator;
    for (const auto& c : spans_) max_score_ = std::max(max_score_, c.curator_score);
  }

  double score(std::span<const TranscriptSentence> chunk) override {
    if (chunk.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : chunk) {
      const double mid = 0.5 * (s.start_s + s.end_s);
      for (const auto& c : spans_) {
        if (c.is_funny && mid >= c.start_s && mid < c.end_s) {
          sum += 0.6 + 0.4 * (max_score_ > 0 ? c.curator_score / max_score_ : 1.0);
          break;
        }
      }
    }
    return sum / static_cast<double>(chunk.size());
  }

 private:
  std::vector<CuratorAnnotation> spans_;
  double max_score_ = 0.0;
};

// Child process speaking the line protocol on stdin / stdout.
class ExternalScorer final : public TextScorer {
 public:
  explicit ExternalScorer(const std::string& command, int timeout_ms = 30000) : timeout_ms_(timeout_ms) {
    ::signal(SIGPIPE, SIG_IGN);
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) throw RuntimeError("scorer: pipe() failed");
    pid_ = ::fork();
    if (pid_ < 0) throw RuntimeError("scorer: fork() failed");
    if (pid_ == 0) {
      ::setpgid(0, 0);
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid_, pid_);
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
  }

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  ~ExternalScorer() override {
    if (write_fd_ >= 0) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    if (pid_ > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, &status, WNOHANG) != 0) return;
        ::usleep(10000);
      }
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }

  double score(std::span<const TranscriptSentence> chunk) override {
    const long id = next_id_++;
    json req{{"id", id}, {"sentences", json::array()}};
    for (const auto& s : chunk) req["sentences"].push_back(s.text);
    write_line(req.dump());
    const std::string line = read_line();
    json resp;
    try {
      resp = json::parse(line);
    } catch (const json::exception&) {
      throw RuntimeError(cat("scorer protocol violation: unparseable response '", line, "'"));
    }
    if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_integer() || resp["id"].get<long>() != id)
      throw RuntimeError(cat("scorer protocol violation: expected id ", id, " in '", line, "'"));
    if (!resp.contains("score") || !resp["score"].is_number())
      throw RuntimeError(cat("scorer protocol violation: missing score in '", line, "'"));
    const double s = resp["score"].get<double>();
    if (!(s >= 0.0 && s <= 1.0)) throw RuntimeError(cat("scorer protocol violation: score ", s, " outside [0,1]"));
    return s;
  }

 private:
  void write_line(const std::string& text) {
    const std::string buf = text + "\n";
    std::size_t done = 0;
    while (done < buf.size()) {
      const ssize_t n = ::write(write_fd_, buf.data() + done, buf.size() - done);
      if (n <= 0) throw RuntimeError("scorer: process closed its input");
      done += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    for (;;) {
      const auto nl = pending_.find('\n');
      if (nl != std::string::npos) {
        std::string line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw RuntimeError(cat("scorer: timed out after ", timeout_ms_, " ms"));
      pollfd pfd{read_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0) throw RuntimeError("scorer: poll() failed");
      if (ready == 0) continue;
      char buf[4096];
      const ssize_t n = ::read(read_fd_, buf, sizeof buf);
      if (n <= 0) throw RuntimeError("scorer: process exited before responding");
      pending_.append(buf, static_cast<std::size_t>(n));
    }
  }

  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  int timeout_ms_;
  long next_id_ = 0;
  std::string pending_;
};

enum class ScorerKind { Oracle, Lexicon, External };

struct ScorerHandle {
  ScorerKind kind = ScorerKind::Oracle;
  std::string config;  // lexicon path or external command

  // "oracle" | "lexicon:<path>" | "external:<command>"
  static ScorerHandle parse(const std::string& spec) {
    if (spec == "oracle") return {ScorerKind::Oracle, {}};
    if (spec.rfind("lexicon:", 0) == 0) return {ScorerKind::Lexicon, spec.substr(8)};
    if (spec.rfind("external:", 0) == 0) return {ScorerKind::External, spec.substr(9)};
    throw ValidationError(cat("unknown scorer spec '", spec, "' (oracle | lexicon:<path> | external:<command>)"));
  }
};

inline std::unique_ptr<TextScorer> make_scorer(const ScorerHandle& h, const Title& title) {
  switch (h.kind) {
    case ScorerKind::Oracle: return std::make_unique<OracleScorer>(title);
    case ScorerKind::Lexicon: return std::make_unique<LexiconScorer>(LexiconScorer::from_file(h.config));
    case ScorerKind::External: return std::make_unique<ExternalScorer>(h.config);
  }
  throw ValidationError("make_scorer: unknown kind");
}

// ---------------------------------------------------------------------------

struct TextScore {
  double score = 0.0;
  bool is_funny = false;
  std::vector<double> per_chunk;
};

// Mean chunk score; funny iff mean > threshold. An empty transcript scores 0.
inline TextScore score_scene_text(std::span<const TranscriptSentence> sentences, TextScorer& scorer,
                                  double threshold = kHumorThreshold) {
  TextScore out;
  if (sentences.empty()) return out;
  const auto ranges = subtext_ranges(sentences.size());
  for (std::size_t c = 0; c < ranges.size(); ++c) {
    double s = 0.0;
    try {
      s = scorer.score(sentences.subspan(ranges[c].first, ranges[c].second - ranges[c].first));
    } catch (const std::exception& e) {
      throw RuntimeError(cat("text scorer failed on chunk ", c, ": ", e.what()));
    }
    if (!(s >= 0.0 && s <= 1.0)) throw RuntimeError(cat("text scorer returned ", s, " for chunk ", c));
    out.per_chunk.push_back(s);
  }
  double sum = 0.0;
  for (double s : out.per_chunk) sum += s;
  out.score = sum / static_cast<double>(out.per_chunk.size());
  out.is_funny = out.score > threshold;
  return out;
}

// Sentences whose midpoint lies in [start_s, end_s).
inline std::vector<TranscriptSentence> sentences_in_span(std::span<const TranscriptSentence> transcript, double start_s,
                                                         double end_s) {
  std::vector<TranscriptSentence> out;
  for (const auto& s : transcript) {
    const double mid = 0.5 * (s.start_s + s.end_s);
    if (mid >= start_s && mid < end_s) out.push_back(s);
  }
  return out;
}

}  // namespace humorcut
