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
#include <string_view>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/propagation.hpp"
#include "spangraph/random.hpp"

namespace spangraph {

enum class LayerType { kGcn, kSageMean };

inline std::string_view to_string(LayerType t) { return t == LayerType::kGcn ? "gcn" : "sage"; }

inline LayerType parse_layer_type(std::string_view s) {
  if (s == "gcn") return LayerType::kGcn;
  if (s == "sage" || s == "sage-mean") return LayerType::kSageMean;
  throw ConfigError("unknown model '" + std::string(s) + "' (expected gcn, sage)");
}

/// GCN layers use the symmetric normalization; SAGE-mean uses row means.
inline PropagationKind propagation_for(LayerType t) {
  return t == LayerType::kGcn ? PropagationKind::kGcnSymmetric : PropagationKind::kMeanRow;
}

/// Layer weights. ReLU follows every layer but the last. A SAGE-mean layer
/// consumes [H | P H], so its weight has twice the input rows.
struct GnnModel {
  LayerType layer_type = LayerType::kGcn;
  std::vector<Matrix> weights;

  std::size_t num_layers() const noexcept { return weights.size(); }
  std::size_t fan_in_factor() const noexcept { return layer_type == LayerType::kSageMean ? 2 : 1; }
  std::size_t in_dim() const { return weights.front().rows() / fan_in_factor(); }
  std::size_t out_dim() const { return weights.back().cols(); }

  void validate() const {
    if (weights.empty()) throw ShapeError("model has no layers");
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (weights[l].rows() % fan_in_factor() != 0) {
        throw ShapeError("layer " + std::to_string(l) + " weight rows not divisible by " +
                         std::to_string(fan_in_factor()));
      }
      if (l > 0 && weights[l].rows() != fan_in_factor() * weights[l - 1].cols()) {
        throw ShapeError("layer " + std::to_string(l) + " weight " + shape_string(weights[l]) +
                         " does not chain from " + shape_string(weights[l - 1]));
      }
    }
  }

  /// Glorot-uniform initialization. Layer dims: in -> hidden x (layers-1) -> out.
  static GnnModel init(LayerType type, std::size_t in_dim, std::size_t hidden_dim, std::size_t out_dim,
                       std::size_t num_layers, std::uint64_t seed) {
    if (num_layers == 0) throw ConfigError("num_layers must be >= 1");
    if (in_dim == 0 || out_dim == 0 || (num_layers > 1 && hidden_dim == 0)) {
      throw ConfigError("layer dimensions must be positive");
    }
    GnnModel m;
    m.layer_type = type;
    Rng rng(derive_seed(seed, 0, "init"));
    for (std::size_t l = 0; l < num_layers; ++l) {
      const std::size_t din = l == 0 ? in_dim : hidden_dim;
      const std::size_t dout = l + 1 == num_layers ? out_dim : hidden_dim;
      const std::size_t rows = m.fan_in_factor() * din;
      const double bound = std::sqrt(6.0 / static_cast<double>(rows + dout));
      Matrix w(rows, dout);
      for (double& v : w.values()) v = (2.0 * uniform01(rng) - 1.0) * bound;
      m.weights.push_back(std::move(w));
    }
    return m;
  }
};

/// Forward intermediates. inputs[l] is H^(l) (inputs[0] = features),
/// aggregated[l] is P H^(l) for GCN or [H^(l) | P H^(l)] for SAGE,
/// pre_activation[l] is Z^(l+1).
struct BackwardTape {
  std::vector<Matrix> inputs;
  std::vector<Matrix> aggregated;
  std::vector<Matrix> pre_activation;
};

struct ForwardResult {
  Matrix logits;
  BackwardTape tape;
};

inline void relu_inplace(Matrix& m) {
  for (double& v : m.values()) v = v > 0.0 ? v : 0.0;
}

inline ForwardResult forward(const GnnModel& model, const PropagationMatrix& p, const Matrix& features) {
  model.validate();
  if (features.cols() != model.in_dim()) {
    throw ShapeError("feature dim " + std::to_string(features.cols()) + " != model input dim " +
                     std::to_string(model.in_dim()));
  }
  if (features.rows() != p.size()) {
    throw ShapeError("feature rows " + std::to_string(features.rows()) + " != propagation size " +
                     std::to_string(p.size()));
  }
  ForwardResult out;
  auto& tape = out.tape;
  Matrix h = features;
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    Matrix agg = model.layer_type == LayerType::kGcn ? spmm(p, h) : hconcat(h, spmm(p, h));
    Matrix z = matmul(agg, model.weights[l]);
    tape.inputs.push_back(std::move(h));
    tape.aggregated.push_back(std::move(agg));
    h = z;
    if (l + 1 < model.num_layers()) relu_inplace(h);
    tape.pre_activation.push_back(std::move(z));
  }
  out.logits = std::move(h);
  return out;
}

struct LossAndGradients {
  double loss = 0.0;
  std::vector<Matrix> gradients;  // one per layer, shaped like the weights
  Matrix output_delta;            // dLoss/dlogits; zero outside the train rows
};

/// Mean softmax cross-entropy over `train_nodes`, back-propagated through
/// P^T and the ReLU masks.
inline LossAndGradients loss_and_backward(const GnnModel& model, const BackwardTape& tape,
                                          const Matrix& logits, std::span<const int> labels,
                                          std::span<const NodeId> train_nodes, const PropagationMatrix& p) {
  if (train_nodes.empty()) throw TrainingError("empty train mask");
  if (labels.size() != logits.rows()) throw ShapeError("label count does not match logits rows");
  if (tape.inputs.size() != model.num_layers()) throw ShapeError("tape does not match model depth");

  const std::size_t classes = logits.cols();
  const double scale = 1.0 / static_cast<double>(train_nodes.size());
  LossAndGradients out;
  Matrix delta(logits.rows(), classes);
  std::vector<double> prob(classes);
  for (NodeId v : train_nodes) {
    const int label = labels[v];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw RangeError("train node " + std::to_string(v) + " has label " + std::to_string(label) +
                       " outside [0, " + std::to_string(classes) + ")");
    }
    auto row = logits.row(v);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      prob[c] = std::exp(row[c] - mx);
      sum += prob[c];
    }
    out.loss += (std::log(sum) + mx - row[static_cast<std::size_t>(label)]) * scale;
    auto drow = delta.row(v);
    for (std::size_t c = 0; c < classes; ++c) drow[c] = prob[c] / sum * scale;
    drow[static_cast<std::size_t>(label)] -= scale;
  }
  out.output_delta = delta;

  out.gradients.resize(model.num_layers());
  for (std::size_t l = model.num_layers(); l-- > 0;) {
    out.gradients[l] = matmul_tn(tape.aggregated[l], delta);
    if (l == 0) break;
    Matrix d_agg = matmul_nt(delta, model.weights[l]);
    Matrix d_h;
    if (model.layer_type == LayerType::kGcn) {
      d_h = spmm_transposed(p, d_agg);
    } else {
      const std::size_t d = tape.inputs[l].cols();
      d_h = column_block(d_agg, 0, d);
      d_h += spmm_transposed(p, column_block(d_agg, d, d));
    }
    const Matrix& z = tape.pre_activation[l - 1];
    auto dv = d_h.values();
    auto zv = z.values();
    for (std::size_t i = 0; i < dv.size(); ++i) {
      if (!(zv[i] > 0.0)) dv[i] = 0.0;
    }
    delta = std::move(d_h);
  }
  return out;
}

struct TrainState {
  GnnModel model;
  double learning_rate = 0.1;
  std::vector<double> losses;
  std::uint64_t seed = 0;
};

/// W <- W - lr * grad. Throws NumericalError on non-finite gradients and
/// leaves the weights untouched.
inline void sgd_step(TrainState& state, const std::vector<Matrix>& gradients) {
  if (!(state.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  auto& weights = state.model.weights;
  if (gradients.size() != weights.size()) throw ShapeError("gradient count does not match layers");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (gradients[l].rows() != weights[l].rows() || gradients[l].cols() != weights[l].cols()) {
      throw ShapeError("gradient " + shape_string(gradients[l]) + " vs weight " + shape_string(weights[l]));
    }
    if (!all_finite(gradients[l])) {
      throw NumericalError("non-finite gradient in layer " + std::to_string(l));
    }
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    auto w = weights[l].values();
    auto g = gradients[l].values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= state.learning_rate * g[i];
  }
}

struct EvalMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

/// Accuracy and macro-F1 over `nodes`; the F1 average runs over classes
/// present among the labels or predictions of those nodes.
inline EvalMetrics evaluate_logits(const Matrix& logits, std::span<const int> labels,
                                   std::span<const NodeId> nodes) {
  EvalMetrics m;
  if (nodes.empty()) return m;
  const std::size_t classes = logits.cols();
  std::vector<std::size_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  std::vector<bool> present(classes, false);
  std::size_t correct = 0;
  for (NodeId v : nodes) {
    auto row = logits.row(v);
    const auto pred = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    const int truth = labels[v];
    present[pred] = true;
    if (truth >= 0 && static_cast<std::size_t>(truth) < classes) present[static_cast<std::size_t>(truth)] = true;
    if (truth >= 0 && pred == static_cast<std::size_t>(truth)) {
      ++correct;
      ++tp[pred];
    } else {
      ++fp[pred];
      if (truth >= 0 && static_cast<std::size_t>(truth) < classes) ++fn[static_cast<std::size_t>(truth)];
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(nodes.size());
  double f1_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (!present[c]) continue;
    ++counted;
    const double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
    f1_sum += denom > 0.0 ? 2.0 * static_cast<double>(tp[c]) / denom : 0.0;
  }
  m.macro_f1 = counted ? f1_sum / static_cast<double>(counted) : 0.0;
  return m;
}

/// Evaluation always runs on the full-graph propagation matrix.
inline EvalMetrics evaluate(const GnnModel& model, const PropagationMatrix& p_full, const Matrix& features,
                            std::span<const int> labels, std::span<const NodeId> nodes) {
  return evaluate_logits(forward(model, p_full, features).logits, labels, nodes);
}

}  // namespace spangraph
