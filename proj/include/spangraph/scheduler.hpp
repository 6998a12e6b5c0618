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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/random.hpp"
#include "spangraph/sampler.hpp"
#include "spangraph/subgraph.hpp"

namespace spangraph {

struct ScheduleConfig {
  double alpha_up = 0.5;  // edge-ratio cap
  double beta = 0.1;      // fraction dropped when the cap would be reached
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  SamplerKind sampler = SamplerKind::kVm;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
};

/// Largest k with k / num_edges <= alpha_up, evaluated in double precision
/// exactly as the edge ratio is reported.
inline std::size_t edge_cap(double alpha_up, std::size_t num_edges) {
  if (num_edges == 0) return 0;
  const double m = static_cast<double>(num_edges);
  auto k = static_cast<std::size_t>(std::floor(alpha_up * m));
  if (k > num_edges) k = num_edges;
  while (k < num_edges && static_cast<double>(k + 1) / m <= alpha_up) ++k;
  while (k > 0 && static_cast<double>(k) / m > alpha_up) --k;
  return k;
}

inline void validate(const ScheduleConfig& cfg, const Graph& g) {
  if (!(cfg.alpha_up > 0.0 && cfg.alpha_up <= 1.0)) {
    throw ConfigError("alpha_up must be in (0, 1], got " + std::to_string(cfg.alpha_up));
  }
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) {
    throw ConfigError("beta must be in [0, 1), got " + std::to_string(cfg.beta));
  }
  if (cfg.alpha_up * static_cast<double>(g.num_edges()) < 1.0) {
    throw ConfigError("alpha_up * |E| must be >= 1 (|E| = " + std::to_string(g.num_edges()) + ")");
  }
  if (cfg.s2 == 0 || cfg.s2 > cfg.s1 || cfg.s1 > g.num_edges()) {
    throw ConfigError("need 0 < s2 <= s1 <= |E|; got s1=" + std::to_string(cfg.s1) +
                      " s2=" + std::to_string(cfg.s2) + " |E|=" + std::to_string(g.num_edges()));
  }
}

struct EpochState {
  std::size_t epoch_index = 0;
  SpanningSubgraph subgraph;
  double edge_ratio = 0.0;
  std::size_t dropped_this_epoch = 0;
  std::size_t added_this_epoch = 0;
  bool drop_branch = false;
  SampleStats sampling;
};

/// Empty spanning subgraph at epoch 0.
inline EpochState init_schedule(const Graph& g, const ScheduleConfig& cfg) {
  validate(cfg, g);
  return EpochState{0, SpanningSubgraph(g), 0.0, 0, 0, false, {}};
}

/// Removes floor(beta * |active|) active edges chosen uniformly. Returns the
/// number removed.
inline std::size_t random_drop(SpanningSubgraph& sub, double beta, std::uint64_t seed) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must be in [0, 1)");
  const auto count = static_cast<std::size_t>(std::floor(beta * static_cast<double>(sub.size()) + 1e-9));
  if (count == 0) return 0;
  Rng rng(mix64(seed));
  const auto positions = detail::uniform_distinct(sub.size(), count, rng);
  std::vector<EdgeId> victims;
  victims.reserve(count);
  const auto active = sub.active();
  for (auto pos : positions) victims.push_back(active[pos]);
  for (EdgeId e : victims) sub.erase(e);
  return count;
}

/// active := active U delta. If that would exceed `cap`, a uniformly random
/// subset of the new edges is discarded so the result lands exactly on cap.
/// Returns the number of edges added.
inline std::size_t graph_update(SpanningSubgraph& sub, std::span<const EdgeId> delta, std::size_t cap,
                                std::uint64_t seed) {
  std::vector<EdgeId> fresh;
  fresh.reserve(delta.size());
  {
    detail::FlatIdSet seen(delta.size());
    for (EdgeId e : delta) {
      if (e >= sub.parent().num_edges()) {
        throw RangeError("delta edge " + std::to_string(e) + " outside parent edge set");
      }
      if (!sub.contains(e) && seen.insert(e)) fresh.push_back(e);
    }
  }
  const std::size_t room = cap > sub.size() ? cap - sub.size() : 0;
  if (fresh.size() > room) {
    Rng rng(mix64(seed));
    for (std::size_t i = 0; i < room; ++i) {
      const std::size_t j = i + uniform_below(rng, fresh.size() - i);
      std::swap(fresh[i], fresh[j]);
    }
    fresh.resize(room);
  }
  for (EdgeId e : fresh) sub.insert(e);
  return fresh.size();
}

/// One scheduler epoch: select delta, then drop-then-merge when
/// |active| + |delta| >= alpha_up * |E|, else merge.
inline EpochState step_epoch(EpochState state, const Graph& g, const EdgeProbabilities& probs,
                             const ScheduleConfig& cfg) {
  if (state.epoch_index >= cfg.epochs) {
    throw ConfigError("schedule exhausted at epoch " + std::to_string(state.epoch_index));
  }
  const std::size_t i = state.epoch_index;
  state.sampling = {};
  const auto delta =
      two_step_sample(g, probs, {cfg.s1, cfg.s2, derive_seed(cfg.seed, i, "sample")}, &state.sampling);

  const std::size_t cap = edge_cap(cfg.alpha_up, g.num_edges());
  state.drop_branch = static_cast<double>(state.subgraph.size() + delta.size()) >=
                      cfg.alpha_up * static_cast<double>(g.num_edges());
  state.dropped_this_epoch =
      state.drop_branch ? random_drop(state.subgraph, cfg.beta, derive_seed(cfg.seed, i, "drop")) : 0;
  state.added_this_epoch = graph_update(state.subgraph, delta, cap, derive_seed(cfg.seed, i, "truncate"));

  if (state.subgraph.size() > cap) throw ConsistencyError("edge cap violated");
  state.edge_ratio = state.subgraph.edge_ratio();
  state.epoch_index = i + 1;
  return state;
}

}  // namespace spangraph
