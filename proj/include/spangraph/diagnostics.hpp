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
#include <span>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/gnn.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/propagation.hpp"
#include "spangraph/random.hpp"
#include "spangraph/sampler.hpp"
#include "spangraph/subgraph.hpp"

namespace spangraph {

/// Subgraph-vs-full gradient and pre-activation differences at fixed weights.
struct NoiseReport {
  std::size_t epoch = 0;
  double edge_ratio = 0.0;
  std::vector<double> gradient_noise;  // ||grad_sub - grad_full||_F per layer
  std::vector<double> z_difference;    // ||Z_sub - Z_full||_F per layer

  double total_noise() const {
    double acc = 0.0;
    for (double v : gradient_noise) acc += v * v;
    return std::sqrt(acc);
  }
  double total_z_difference() const {
    double acc = 0.0;
    for (double v : z_difference) acc += v * v;
    return std::sqrt(acc);
  }
};

inline NoiseReport gradient_noise(const GnnModel& model, const PropagationMatrix& p_full,
                                  const SpanningSubgraph& sub, const Matrix& features,
                                  std::span<const int> labels, std::span<const NodeId> train_nodes) {
  const PropagationMatrix p_sub = build_propagation(sub, p_full.kind());
  const auto full = forward(model, p_full, features);
  const auto part = forward(model, p_sub, features);
  const auto g_full = loss_and_backward(model, full.tape, full.logits, labels, train_nodes, p_full);
  const auto g_part = loss_and_backward(model, part.tape, part.logits, labels, train_nodes, p_sub);
  NoiseReport r;
  r.edge_ratio = sub.edge_ratio();
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    r.gradient_noise.push_back(frobenius_norm(g_part.gradients[l] - g_full.gradients[l]));
    r.z_difference.push_back(frobenius_norm(part.tape.pre_activation[l] - full.tape.pre_activation[l]));
  }
  return r;
}

inline NoiseReport gradient_noise(const GnnModel& model, const SpanningSubgraph& sub, const Matrix& features,
                                  std::span<const int> labels, std::span<const NodeId> train_nodes) {
  return gradient_noise(model, build_full_propagation(sub.parent(), propagation_for(model.layer_type)), sub,
                        features, labels, train_nodes);
}

/// Mean total gradient noise over `samples` subgraphs of `budget` edges
/// drawn with direct_sample under `probs`.
inline double mean_sampled_noise(const GnnModel& model, const Graph& g, const EdgeProbabilities& probs,
                                 std::size_t budget, std::size_t samples, std::uint64_t seed,
                                 std::span<const NodeId> train_nodes) {
  const auto p_full = build_full_propagation(g, propagation_for(model.layer_type));
  double acc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    SpanningSubgraph sub(g);
    for (EdgeId e : direct_sample(g, probs, budget, derive_seed(seed, i, "noise"))) sub.insert(e);
    acc += gradient_noise(model, p_full, sub, g.features(), g.labels(), train_nodes).total_noise();
  }
  return samples ? acc / static_cast<double>(samples) : 0.0;
}

/// Monte-Carlo study of the inverse-probability estimator of the edge part
/// of the aggregation P * X~.
struct VarianceReport {
  Matrix estimator_mean;       // mean of xi over the samples
  Matrix exact_aggregation;    // sum_e b_e
  double estimator_variance = 0.0;  // mean of ||xi - exact||_F^2
  double standard_error = 0.0;      // of estimator_variance
  double analytic_variance = 0.0;   // sum_e ||b_e||^2 (1/pi_e - 1)
  SamplerKind kind = SamplerKind::kUniform;
  std::size_t samples = 0;
  std::size_t edge_budget = 0;
};

/// Edge contributions b_e = P[u,v] x_v (to row u) and P[v,u] x_u (to row v).
struct EdgeContribution {
  std::vector<double> to_u;
  std::vector<double> to_v;
};

inline std::vector<EdgeContribution> edge_contributions(const Graph& g, const PropagationMatrix& p,
                                                        const Matrix& transformed) {
  std::vector<EdgeContribution> out(g.num_edges());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    const double puv = p.at(e.u, e.v);
    const double pvu = p.at(e.v, e.u);
    auto xu = transformed.row(e.u);
    auto xv = transformed.row(e.v);
    out[i].to_u.resize(xv.size());
    out[i].to_v.resize(xu.size());
    for (std::size_t j = 0; j < xv.size(); ++j) {
      out[i].to_u[j] = puv * xv[j];
      out[i].to_v[j] = pvu * xu[j];
    }
  }
  return out;
}

/// Inclusion probability of every edge when `budget` edges are expected:
/// min(1, budget * p_e).
inline std::vector<double> inclusion_probabilities(const EdgeProbabilities& probs, std::size_t budget) {
  std::vector<double> pi(probs.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double p = probs.probability(static_cast<EdgeId>(i));
    if (!(p > 0.0)) {
      throw WeightingError("edge " + std::to_string(i) + " has zero sampling probability");
    }
    pi[i] = std::min(1.0, static_cast<double>(budget) * p);
  }
  return pi;
}

/// Matrix used as x~ in the estimator: the layer-0 map applied to the
/// neighbor aggregate (whole W0 for GCN, lower half of W0 for SAGE-mean).
inline Matrix aggregation_weights(const GnnModel& model) {
  const Matrix& w0 = model.weights.front();
  if (model.layer_type == LayerType::kGcn) return w0;
  const std::size_t d = w0.rows() / 2;
  Matrix out(d, w0.cols());
  for (std::size_t r = 0; r < d; ++r) {
    auto src = w0.row(d + r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

/// Edges are kept independently with probability pi_e = min(1, budget * p_e);
/// xi = sum over kept edges of b_e / pi_e is unbiased for sum_e b_e.
inline VarianceReport embedding_variance(const Graph& g, const EdgeProbabilities& probs, std::size_t edge_budget,
                                         std::size_t samples, const Matrix& features, const Matrix& weights,
                                         PropagationKind prop_kind, std::uint64_t seed) {
  if (samples < 2) throw ConfigError("embedding_variance needs at least 2 samples");
  if (edge_budget == 0 || edge_budget > g.num_edges()) {
    throw ConfigError("edge budget must be in [1, |E|]");
  }
  detail::check_probabilities(g, probs);
  const auto pi = inclusion_probabilities(probs, edge_budget);
  const Matrix transformed = matmul(features, weights);
  const auto p = build_full_propagation(g, prop_kind);
  const auto contrib = edge_contributions(g, p, transformed);
  const std::size_t dim = transformed.cols();

  VarianceReport r;
  r.kind = probs.kind();
  r.samples = samples;
  r.edge_budget = edge_budget;
  r.exact_aggregation = Matrix(g.num_nodes(), dim);
  for (std::size_t i = 0; i < contrib.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    double sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      r.exact_aggregation(e.u, j) += contrib[i].to_u[j];
      r.exact_aggregation(e.v, j) += contrib[i].to_v[j];
      sq += contrib[i].to_u[j] * contrib[i].to_u[j] + contrib[i].to_v[j] * contrib[i].to_v[j];
    }
    r.analytic_variance += sq * (1.0 / pi[i] - 1.0);
  }

  r.estimator_mean = Matrix(g.num_nodes(), dim);
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  Matrix xi(g.num_nodes(), dim);
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s, "variance"));
    std::fill(xi.values().begin(), xi.values().end(), 0.0);
    for (std::size_t i = 0; i < contrib.size(); ++i) {
      if (!(uniform01(rng) < pi[i])) continue;
      const auto& e = g.edge(static_cast<EdgeId>(i));
      const double inv = 1.0 / pi[i];
      for (std::size_t j = 0; j < dim; ++j) {
        xi(e.u, j) += contrib[i].to_u[j] * inv;
        xi(e.v, j) += contrib[i].to_v[j] * inv;
      }
    }
    r.estimator_mean += xi;
    double d = 0.0;
    {
      auto a = xi.values();
      auto b = r.exact_aggregation.values();
      for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
    }
    sum_d += d;
    sum_d2 += d * d;
  }
  const double m = static_cast<double>(samples);
  for (double& v : r.estimator_mean.values()) v /= m;
  r.estimator_variance = sum_d / m;
  const double var_d = std::max(0.0, (sum_d2 - m * r.estimator_variance * r.estimator_variance) / (m - 1.0));
  r.standard_error = std::sqrt(var_d / m);
  return r;
}

/// Directed-edge footprint of a run.
struct MemoryProxy {
  std::size_t peak_directed_edges = 0;  // max over epochs of 2|active| + |V|
  double bytes_estimate = 0.0;
};

inline std::size_t directed_edge_count(std::size_t active_edges, std::size_t num_nodes) {
  return 2 * active_edges + num_nodes;
}

inline MemoryProxy memory_proxy(std::span<const std::size_t> active_edges_per_epoch, std::size_t num_nodes,
                                double bytes_per_edge) {
  MemoryProxy m;
  for (auto a : active_edges_per_epoch) {
    m.peak_directed_edges = std::max(m.peak_directed_edges, directed_edge_count(a, num_nodes));
  }
  m.bytes_estimate = static_cast<double>(m.peak_directed_edges) * bytes_per_edge;
  return m;
}

}  // namespace spangraph
