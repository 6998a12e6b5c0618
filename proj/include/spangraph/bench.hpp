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
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/random.hpp"
#include "spangraph/sampler.hpp"

namespace spangraph {

/// Uniform random simple graph with exactly `num_edges` distinct edges.
inline Graph random_graph(std::size_t num_nodes, std::size_t num_edges, std::uint64_t seed) {
  if (num_nodes < 2) throw ConfigError("random graph needs at least 2 nodes");
  const double max_edges = static_cast<double>(num_nodes) * static_cast<double>(num_nodes - 1) / 2.0;
  if (static_cast<double>(num_edges) > 0.5 * max_edges) {
    throw ConfigError("random graph too dense: " + std::to_string(num_edges) + " edges on " +
                      std::to_string(num_nodes) + " nodes");
  }
  Rng rng(derive_seed(seed, 0, "random-graph"));
  std::vector<Edge> edges;
  edges.reserve(num_edges + num_edges / 8);
  std::size_t target = num_edges;
  // Oversample, deduplicate, then top up until the count is exact.
  while (true) {
    while (edges.size() < target) {
      auto u = static_cast<NodeId>(uniform_below(rng, num_nodes));
      auto v = static_cast<NodeId>(uniform_below(rng, num_nodes));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      edges.push_back({u, v});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() >= num_edges) break;
    target = num_edges + (num_edges - edges.size());
  }
  // Drop surplus uniformly so the kept set does not favor small ids.
  for (std::size_t i = 0; i < num_edges; ++i) {
    const std::size_t j = i + uniform_below(rng, edges.size() - i);
    std::swap(edges[i], edges[j]);
  }
  edges.resize(num_edges);
  return Graph::from_edges(num_nodes, std::move(edges));
}

struct SamplingBenchmark {
  std::vector<double> direct_ms;
  std::vector<double> two_step_ms;

  static double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  }
  double median_direct_ms() const { return median(direct_ms); }
  double median_two_step_ms() const { return median(two_step_ms); }
  double speedup() const {
    const double t = median_two_step_ms();
    return t > 0.0 ? median_direct_ms() / t : 0.0;
  }
};

/// Wall-clock comparison of direct_sample and two_step_sample at equal s2.
/// Runs alternate between the two methods.
inline SamplingBenchmark bench_sampling(const Graph& g, const EdgeProbabilities& probs, std::size_t s1,
                                        std::size_t s2, std::size_t runs, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  SamplingBenchmark out;
  std::size_t sink = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    auto t0 = clock::now();
    sink += direct_sample(g, probs, s2, derive_seed(seed, r, "bench-direct")).size();
    out.direct_ms.push_back(ms(clock::now() - t0));

    t0 = clock::now();
    sink += two_step_sample(g, probs, {s1, s2, derive_seed(seed, r, "bench-two-step")}).size();
    out.two_step_ms.push_back(ms(clock::now() - t0));
  }
  if (sink != 2 * runs * s2) throw ConsistencyError("benchmark returned wrong sample sizes");
  return out;
}

}  // namespace spangraph
