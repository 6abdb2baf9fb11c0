// humorcut/matrix.hpp

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

#include <Eigen/Dense>

#include <cstdint>
#include <fstream>
#include <string>

#include "humorcut/error.hpp"

namespace humorcut {

// Row-major: one row per sample (shot, window, triplet member).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// embeddings.bin: magic "HCEM", uint32 version, uint64 rows, uint64 cols,
// then rows*cols little-endian float64 values, row-major.
inline constexpr std::uint32_t kEmbeddingFileVersion = 1;

inline void write_matrix_bin(const Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError(cat("cannot open ", path, " for writing"));
  const char magic[4] = {'H', 'C', 'E', 'M'};
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&kEmbeddingFileVersion), sizeof(kEmbeddingFileVersion));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!out) throw RuntimeError(cat("write failed: ", path));
}

inline Matrix read_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(cat("cannot open ", path));
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in || std::string(magic, 4) != "HCEM")
    throw ValidationError(cat(path, ": not an embeddings file"));
  if (version != kEmbeddingFileVersion)
    throw ValidationError(cat(path, ": unsupported embeddings version ", version));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw ValidationError(cat(path, ": truncated payload"));
  return m;
}

}  // namespace humorcut
