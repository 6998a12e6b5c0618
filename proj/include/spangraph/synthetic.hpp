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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/graph_io.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/random.hpp"

namespace spangraph {

enum class SyntheticKind { kSbm, kPreferentialAttachment };

inline SyntheticKind parse_synthetic_kind(std::string_view s) {
  if (s == "sbm") return SyntheticKind::kSbm;
  if (s == "pa" || s == "preferential-attachment") return SyntheticKind::kPreferentialAttachment;
  throw ConfigError("unknown generator '" + std::string(s) + "' (expected sbm, pa)");
}

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kSbm;
  std::size_t nodes = 1000;
  std::size_t classes = 4;
  std::size_t feature_dim = 16;
  double p_in = 0.02;           // sbm: within-block edge probability
  double p_out = 0.002;         // sbm: between-block edge probability
  std::size_t pa_edges = 3;     // pa: edges attached per new node
  double feature_signal = 1.0;  // scale of the class centroids
  double feature_noise = 1.0;   // std-dev of per-node Gaussian noise
  std::uint64_t seed = 0;

  void validate() const {
    if (classes < 2) throw ConfigError("classes must be >= 2");
    if (nodes < classes) {
      throw ConfigError("nodes (" + std::to_string(nodes) + ") must be >= classes (" +
                        std::to_string(classes) + ")");
    }
    if (nodes > 0xfffffffeULL) throw ConfigError("too many nodes");
    if (feature_dim == 0) throw ConfigError("feature_dim must be >= 1");
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
      throw ConfigError("edge probabilities must be in [0, 1]");
    }
    if (kind == SyntheticKind::kPreferentialAttachment && (pa_edges == 0 || pa_edges >= nodes)) {
      throw ConfigError("pa_edges must be in [1, nodes)");
    }
    if (!(feature_noise >= 0.0) || !std::isfinite(feature_signal)) {
      throw ConfigError("feature scales must be finite and noise >= 0");
    }
  }
};

/// Contiguous blocks: node i belongs to block floor(i * classes / nodes).
inline std::size_t block_of(std::size_t node, std::size_t nodes, std::size_t classes) {
  return node * classes / nodes;
}

namespace detail {

inline std::size_t block_begin(std::size_t block, std::size_t nodes, std::size_t classes) {
  // smallest i with i * classes / nodes >= block
  return (block * nodes + classes - 1) / classes;
}

// Bernoulli(p) trials over [begin, end) using geometric skips.
template <typename Emit>
void bernoulli_range(std::size_t begin, std::size_t end, double p, Rng& rng, Emit&& emit) {
  if (p <= 0.0 || begin >= end) return;
  if (p >= 1.0) {
    for (std::size_t i = begin; i < end; ++i) emit(i);
    return;
  }
  const double log_q = std::log1p(-p);
  std::size_t i = begin;
  while (true) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    const double skip = std::floor(std::log(u) / log_q);
    if (skip >= static_cast<double>(end - i)) return;
    i += static_cast<std::size_t>(skip);
    emit(i);
    ++i;
    if (i >= end) return;
  }
}

inline std::vector<Edge> sbm_edges(const SyntheticSpec& spec, Rng& rng) {
  std::vector<Edge> edges;
  const std::size_t n = spec.nodes;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t bu = block_of(u, n, spec.classes);
    for (std::size_t b = bu; b < spec.classes; ++b) {
      const std::size_t begin = std::max(u + 1, block_begin(b, n, spec.classes));
      const std::size_t end = block_begin(b + 1, n, spec.classes);
      bernoulli_range(begin, end, b == bu ? spec.p_in : spec.p_out, rng, [&](std::size_t v) {
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      });
    }
  }
  return edges;
}

// Barabasi-Albert: a seed clique of pa_edges + 1 nodes, then every new node
// links to pa_edges distinct targets chosen proportionally to degree.
inline std::vector<Edge> pa_edges(const SyntheticSpec& spec, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<NodeId> endpoints;
  const std::size_t m = spec.pa_edges;
  for (std::size_t u = 0; u <= m; ++u) {
    for (std::size_t v = u + 1; v <= m; ++v) {
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      endpoints.push_back(static_cast<NodeId>(u));
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  std::vector<NodeId> targets;
  for (std::size_t v = m + 1; v < spec.nodes; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, static_cast<NodeId>(v)});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return edges;
}

}  // namespace detail

/// Labels are block ids; features are class centroid + Gaussian noise;
/// splits are 60/20/20 stratified per class.
inline Graph generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.nodes;
  Rng edge_rng(derive_seed(spec.seed, 0, "edges"));
  auto edges = spec.kind == SyntheticKind::kSbm ? detail::sbm_edges(spec, edge_rng)
                                                : detail::pa_edges(spec, edge_rng);
  Graph g = Graph::from_edges(n, std::move(edges));

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(block_of(i, n, spec.classes));

  Rng feat_rng(derive_seed(spec.seed, 0, "features"));
  Matrix centroids(spec.classes, spec.feature_dim);
  for (double& v : centroids.values()) v = spec.feature_signal * standard_normal(feat_rng);
  Matrix features(n, spec.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = centroids.row(static_cast<std::size_t>(labels[i]));
    auto row = features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = c[j] + spec.feature_noise * standard_normal(feat_rng);
  }

  Rng split_rng(derive_seed(spec.seed, 0, "splits"));
  std::vector<Split> splits(n, Split::kNone);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    std::vector<NodeId> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(labels[i]) == c) members.push_back(static_cast<NodeId>(i));
    }
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      const std::size_t j = i + uniform_below(split_rng, members.size() - i);
      std::swap(members[i], members[j]);
    }
    const std::size_t n_train = members.size() * 6 / 10;
    const std::size_t n_val = members.size() * 2 / 10;
    for (std::size_t i = 0; i < members.size(); ++i) {
      splits[members[i]] = i < n_train ? Split::kTrain : (i < n_train + n_val ? Split::kVal : Split::kTest);
    }
  }
  return std::move(g).with_node_data(std::move(features), std::move(labels), std::move(splits));
}

struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::filesystem::path splits;

  static DatasetPaths in(const std::filesystem::path& dir) {
    return {dir / "edges.txt", dir / "features.csv", dir / "labels.txt", dir / "splits.txt"};
  }
};

inline DatasetPaths write_dataset(const Graph& g, const std::filesystem::path& dir) {
  const auto paths = DatasetPaths::in(dir);
  std::filesystem::create_directories(dir);
  write_edge_list(g, paths.edges);
  write_features_csv(g.features(), paths.features);
  write_labels(g.labels(), paths.labels);
  write_splits(g.splits(), paths.splits);
  return paths;
}

inline Graph load_dataset(const DatasetPaths& paths) {
  return load_graph(paths.edges, paths.features, paths.labels, paths.splits);
}

}  // namespace spangraph
