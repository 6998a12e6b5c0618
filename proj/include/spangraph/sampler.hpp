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
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/propagation.hpp"
#include "spangraph/random.hpp"

namespace spangraph {

enum class SamplerKind { kVm, kGnr, kUniform };

inline std::string_view to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::kVm: return "vm";
    case SamplerKind::kGnr: return "gnr";
    case SamplerKind::kUniform: return "uniform";
  }
  return "uniform";
}

inline SamplerKind parse_sampler_kind(std::string_view s) {
  if (s == "vm") return SamplerKind::kVm;
  if (s == "gnr") return SamplerKind::kGnr;
  if (s == "uniform") return SamplerKind::kUniform;
  throw ConfigError("unknown sampler '" + std::string(s) + "' (expected vm, gnr, uniform)");
}

/// Unnormalized per-canonical-edge sampling weights with their prefix sums.
class EdgeProbabilities {
 public:
  EdgeProbabilities() = default;

  static EdgeProbabilities from_weights(SamplerKind kind, std::vector<double> weights) {
    EdgeProbabilities p;
    p.kind_ = kind;
    p.cumulative_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
        throw WeightingError("edge " + std::to_string(i) + " has invalid weight " +
                             std::to_string(weights[i]));
      }
      acc += weights[i];
      p.cumulative_[i] = acc;
    }
    if (!weights.empty() && !(acc > 0.0)) throw EmptyDistributionError("all edge weights are zero");
    p.total_ = acc;
    p.weights_ = std::move(weights);
    return p;
  }

  SamplerKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> cumulative() const noexcept { return cumulative_; }
  double total() const noexcept { return total_; }

  double probability(EdgeId e) const { return weights_[e] / total_; }

  std::vector<double> normalized() const {
    std::vector<double> out(weights_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = weights_[i] / total_;
    return out;
  }

 private:
  SamplerKind kind_ = SamplerKind::kUniform;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

/// Variance-minimizing weights: 1/deg(u) + 1/deg(v) on original degrees.
inline EdgeProbabilities vm_weights(const Graph& g) {
  if (g.num_edges() == 0) throw EmptyDistributionError("graph has no edges");
  std::vector<double> w(g.num_edges());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    w[i] = 1.0 / static_cast<double>(g.degree(e.u)) + 1.0 / static_cast<double>(g.degree(e.v));
  }
  return EdgeProbabilities::from_weights(SamplerKind::kVm, std::move(w));
}

/// Gradient-noise-reducing weights. The directed pair (v,u) is weighted by
/// the L2 norm of column u of the full-graph propagation matrix; a canonical
/// edge sums both directions.
inline EdgeProbabilities gnr_weights(const Graph& g, const PropagationMatrix& p) {
  if (g.num_edges() == 0) throw EmptyDistributionError("graph has no edges");
  if (p.size() != g.num_nodes() || p.nnz() != 2 * g.num_edges() + g.num_nodes()) {
    throw ConsistencyError("propagation matrix does not cover the full graph edge set");
  }
  const auto prow = p.row_ptr();
  const auto pcol = p.col_index();
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto nbrs = g.neighbors(static_cast<NodeId>(v));
    bool consistent = prow[v + 1] - prow[v] == nbrs.size() + 1;
    bool self = false;
    std::size_t j = 0;
    for (std::size_t k = prow[v]; consistent && k < prow[v + 1]; ++k) {
      if (pcol[k] == v && !self) {
        self = true;
      } else if (j < nbrs.size() && pcol[k] == nbrs[j]) {
        ++j;
      } else {
        consistent = false;
      }
    }
    if (!consistent || !self) {
      throw ConsistencyError("propagation row " + std::to_string(v) +
                             " does not match the graph's neighborhood");
    }
  }
  const auto norms = column_norms(p);
  std::vector<double> w(g.num_edges());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    w[i] = norms[e.u] + norms[e.v];
  }
  return EdgeProbabilities::from_weights(SamplerKind::kGnr, std::move(w));
}

inline EdgeProbabilities uniform_weights(const Graph& g) {
  if (g.num_edges() == 0) throw EmptyDistributionError("graph has no edges");
  return EdgeProbabilities::from_weights(SamplerKind::kUniform, std::vector<double>(g.num_edges(), 1.0));
}

/// Weights of `kind`; gnr uses the full-graph matrix of `prop_kind`.
inline EdgeProbabilities make_probabilities(const Graph& g, SamplerKind kind, PropagationKind prop_kind) {
  switch (kind) {
    case SamplerKind::kVm: return vm_weights(g);
    case SamplerKind::kGnr: return gnr_weights(g, build_full_propagation(g, prop_kind));
    case SamplerKind::kUniform: return uniform_weights(g);
  }
  return uniform_weights(g);
}

struct SampleRequest {
  std::size_t s1 = 0;  // first-step pool size
  std::size_t s2 = 0;  // returned edge count
  std::uint64_t seed = 0;
};

struct SampleStats {
  std::size_t weighted_draws = 0;
  std::size_t rejections = 0;
  std::size_t fallback_filled = 0;  // edges added by uniform fill after rejection cap
};

namespace detail {

/// Open-addressing set of 32-bit ids (ids must not equal 0xffffffff).
class FlatIdSet {
 public:
  explicit FlatIdSet(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected + 1) cap <<= 1;
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
  }

  bool insert(std::uint32_t id) {
    std::size_t i = static_cast<std::size_t>(mix64(id)) & mask_;
    while (true) {
      if (slots_[i] == id) return false;
      if (slots_[i] == kEmpty) {
        slots_[i] = id;
        return true;
      }
      i = (i + 1) & mask_;
    }
  }

  bool contains(std::uint32_t id) const {
    std::size_t i = static_cast<std::size_t>(mix64(id)) & mask_;
    while (slots_[i] != kEmpty) {
      if (slots_[i] == id) return true;
      i = (i + 1) & mask_;
    }
    return false;
  }

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;
  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
};

/// `count` distinct values from [0, n), uniformly, in draw order.
inline std::vector<std::uint32_t> uniform_distinct(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  if (count * 2 <= n) {
    FlatIdSet seen(count);
    while (out.size() < count) {
      const auto x = static_cast<std::uint32_t>(uniform_below(rng, n));
      if (seen.insert(x)) out.push_back(x);
    }
    return out;
  }
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_below(rng, n - i);
    std::swap(all[i], all[j]);
    out.push_back(all[i]);
  }
  return out;
}

/// Weighted sampling without replacement of `count` positions from [0, n):
/// builds the prefix-sum array over weight_at(0..n-1), then repeats binary
/// search draws, rejecting duplicates. After more than 100*count consecutive
/// rejections, fills uniformly from the positions not yet chosen.
template <typename WeightAt>
std::vector<std::uint32_t> weighted_distinct(std::size_t n, WeightAt&& weight_at, std::size_t count,
                                             Rng& rng, SampleStats* stats) {
  std::vector<double> cum(n);
  double total = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight_at(i);
    if (w > 0.0) last_positive = i;
    total += w;
    cum[i] = total;
  }

  std::vector<std::uint32_t> out;
  out.reserve(count);
  FlatIdSet chosen(count);
  const std::size_t max_failures = 100 * count;
  std::size_t failures = 0;
  if (total > 0.0) {
    while (out.size() < count && failures <= max_failures) {
      const double r = uniform01(rng) * total;
      std::size_t pos = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
      if (pos >= n) pos = last_positive;
      if (stats) ++stats->weighted_draws;
      if (chosen.insert(static_cast<std::uint32_t>(pos))) {
        out.push_back(static_cast<std::uint32_t>(pos));
        failures = 0;
      } else {
        ++failures;
        if (stats) ++stats->rejections;
      }
    }
  }
  if (out.size() < count) {
    std::vector<std::uint32_t> rest;
    rest.reserve(n - out.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!chosen.contains(static_cast<std::uint32_t>(i))) rest.push_back(static_cast<std::uint32_t>(i));
    }
    const std::size_t need = count - out.size();
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + uniform_below(rng, rest.size() - i);
      std::swap(rest[i], rest[j]);
      out.push_back(rest[i]);
    }
    if (stats) stats->fallback_filled += need;
  }
  return out;
}

inline void check_probabilities(const Graph& g, const EdgeProbabilities& probs) {
  if (probs.size() != g.num_edges()) {
    throw ConsistencyError("probabilities cover " + std::to_string(probs.size()) + " edges, graph has " +
                           std::to_string(g.num_edges()));
  }
}

}  // namespace detail

/// Two-step selection: a uniform pool of s1 distinct edges, then s2
/// distinct edges from the pool with probability proportional to weight.
inline std::vector<EdgeId> two_step_sample(const Graph& g, const EdgeProbabilities& probs,
                                           const SampleRequest& req, SampleStats* stats = nullptr) {
  detail::check_probabilities(g, probs);
  if (req.s2 == 0 || req.s2 > req.s1 || req.s1 > g.num_edges()) {
    throw RequestError("need 0 < s2 <= s1 <= |E|; got s1=" + std::to_string(req.s1) +
                       " s2=" + std::to_string(req.s2) + " |E|=" + std::to_string(g.num_edges()));
  }
  Rng rng(mix64(req.seed));
  const auto pool = detail::uniform_distinct(g.num_edges(), req.s1, rng);
  const auto weights = probs.weights();
  const auto picked = detail::weighted_distinct(
      pool.size(), [&](std::size_t i) { return weights[pool[i]]; }, req.s2, rng, stats);
  std::vector<EdgeId> out;
  out.reserve(picked.size());
  for (auto i : picked) out.push_back(pool[i]);
  return out;
}

/// Weighted selection of s2 distinct edges directly from the whole edge set.
inline std::vector<EdgeId> direct_sample(const Graph& g, const EdgeProbabilities& probs, std::size_t s2,
                                         std::uint64_t seed, SampleStats* stats = nullptr) {
  detail::check_probabilities(g, probs);
  if (s2 > g.num_edges()) {
    throw RequestError("s2=" + std::to_string(s2) + " exceeds |E|=" + std::to_string(g.num_edges()));
  }
  Rng rng(mix64(seed));
  const auto weights = probs.weights();
  auto picked = detail::weighted_distinct(
      weights.size(), [&](std::size_t i) { return weights[i]; }, s2, rng, stats);
  return std::vector<EdgeId>(picked.begin(), picked.end());
}

}  // namespace spangraph
