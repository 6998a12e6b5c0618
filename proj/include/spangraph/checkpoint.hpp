// Copyright 2026 The SpanGraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/gnn.hpp"
#include "spangraph/graph_io.hpp"
#include "spangraph/matrix.hpp"

namespace spangraph {

inline constexpr std::array<char, 4> kWeightMagic{'S', 'P', 'G', 'W'};

// Layout: "SPGW", u64 layer count, (u64 rows, u64 cols) per layer, then each
// layer's row-major float64 values. All integers little-endian.
inline void save_weights(const std::vector<Matrix>& weights, const std::filesystem::path& path) {
  auto out = detail::open_output(path, true);
  out.write(kWeightMagic.data(), 4);
  detail::write_le<std::uint64_t>(out, weights.size());
  for (const auto& w : weights) {
    detail::write_le<std::uint64_t>(out, w.rows());
    detail::write_le<std::uint64_t>(out, w.cols());
  }
  for (const auto& w : weights) {
    for (double v : w.values()) detail::write_le<double>(out, v);
  }
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

inline std::vector<Matrix> load_weights(const std::filesystem::path& path) {
  auto in = detail::open_input(path, true);
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (in.gcount() != 4 || magic != kWeightMagic) throw ParseError(path.string(), 0, "missing SPGW magic");
  const auto layers = detail::read_le<std::uint64_t>(in, path.string());
  if (layers > 1024) throw ParseError(path.string(), 0, "implausible layer count");
  std::vector<Matrix> weights;
  weights.reserve(layers);
  for (std::uint64_t l = 0; l < layers; ++l) {
    const auto rows = detail::read_le<std::uint64_t>(in, path.string());
    const auto cols = detail::read_le<std::uint64_t>(in, path.string());
    weights.emplace_back(rows, cols);
  }
  for (auto& w : weights) {
    for (double& v : w.values()) v = detail::read_le<double>(in, path.string());
  }
  return weights;
}

inline GnnModel load_model(LayerType type, const std::filesystem::path& path) {
  GnnModel m{type, load_weights(path)};
  m.validate();
  return m;
}

}  // namespace spangraph
