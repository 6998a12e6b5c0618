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


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "spangraph/spangraph.hpp"

namespace spangraph {
namespace {

struct Instance {
  Graph graph;
  Matrix features;
  std::vector<int> labels;
  std::vector<NodeId> train;
};

Instance random_instance(std::size_t n, std::size_t dim, std::size_t classes, std::mt19937_64& rng) {
  Instance in{Graph::from_edges(n, testing::random_edges(n, 0.3, rng)), testing::random_matrix(n, dim, rng), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    in.labels.push_back(static_cast<int>(rng() % classes));
    if (rng() % 3 != 0) in.train.push_back(static_cast<NodeId>(i));
  }
  if (in.train.empty()) in.train.push_back(0);
  return in;
}

TEST(Forward, IdentityPassesFeaturesThrough) {
  const Graph g = Graph::from_edges(3, {});
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const GnnModel model{LayerType::kGcn, {Matrix::identity(2)}};
  const Matrix x{{1.0, -2.0}, {3.5, 0.0}, {-1.0, 4.0}};
  EXPECT_EQ(forward(model, p, x).logits, x);
}

TEST(Forward, TwoNodeMeanRow) {
  const auto p = build_full_propagation(testing::path_graph(2), PropagationKind::kMeanRow);
  const GnnModel model{LayerType::kGcn, {Matrix{{1.0}}}};
  EXPECT_EQ(forward(model, p, Matrix{{2.0}, {4.0}}).logits, (Matrix{{3.0}, {3.0}}));
}

TEST(Forward, ZeroWeights) {
  std::mt19937_64 rng(1);
  const auto in = random_instance(8, 3, 2, rng);
  for (auto type : {LayerType::kGcn, LayerType::kSageMean}) {
    auto model = GnnModel::init(type, 3, 5, 2, 2, 0);
    for (auto& w : model.weights) std::fill(w.values().begin(), w.values().end(), 0.0);
    const auto logits = forward(model, build_full_propagation(in.graph, propagation_for(type)), in.features).logits;
    for (double v : logits.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Forward, ShapeMismatch) {
  const Graph g = testing::path_graph(3);
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const auto model = GnnModel::init(LayerType::kGcn, 4, 3, 2, 2, 0);
  EXPECT_THROW(forward(model, p, Matrix(3, 5)), ShapeError);
  EXPECT_THROW(forward(model, p, Matrix(4, 4)), ShapeError);
  GnnModel broken{LayerType::kGcn, {Matrix(4, 3), Matrix(2, 2)}};
  EXPECT_THROW(forward(broken, p, Matrix(3, 4)), ShapeError);
}

TEST(Forward, SageConcatenatesSelfAndNeighborMean) {
  const auto p = build_full_propagation(testing::path_graph(2), PropagationKind::kMeanRow);
  // Rows of W: self weight then neighbor-mean weight.
  const GnnModel model{LayerType::kSageMean, {Matrix{{1.0}, {10.0}}}};
  EXPECT_EQ(forward(model, p, Matrix{{2.0}, {4.0}}).logits, (Matrix{{32.0}, {34.0}}));
}

TEST(Loss, UniformLogitsGiveLogK) {
  const Graph g = Graph::from_edges(4, {{0, 1}});
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  for (std::size_t k : {2u, 3u, 7u}) {
    GnnModel model{LayerType::kGcn, {Matrix(2, k)}};
    const Matrix x{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}, {7.0, 8.0}};
    const auto fwd = forward(model, p, x);
    const std::vector<int> labels{0, 1, 0, 1};
    const std::vector<NodeId> train{0, 1, 2, 3};
    const auto res = loss_and_backward(model, fwd.tape, fwd.logits, labels, train, p);
    EXPECT_NEAR(res.loss, std::log(static_cast<double>(k)), 1e-15);
  }
}

TEST(Loss, SaturatedCorrectPrediction) {
  const Graph g = Graph::from_edges(2, {});
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const GnnModel model{LayerType::kGcn, {Matrix::identity(2)}};
  const Matrix x{{800.0, 0.0}, {0.0, 800.0}};
  const auto fwd = forward(model, p, x);
  const std::vector<int> labels{0, 1};
  const std::vector<NodeId> train{0, 1};
  const auto res = loss_and_backward(model, fwd.tape, fwd.logits, labels, train, p);
  EXPECT_EQ(res.loss, 0.0);
  for (double v : res.gradients[0].values()) EXPECT_EQ(v, 0.0);
}

TEST(Loss, EmptyTrainMask) {
  const Graph g = testing::path_graph(2);
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const GnnModel model{LayerType::kGcn, {Matrix{{1.0}}}};
  const auto fwd = forward(model, p, Matrix{{1.0}, {2.0}});
  const std::vector<int> labels{0, 0};
  EXPECT_THROW(loss_and_backward(model, fwd.tape, fwd.logits, labels, {}, p), TrainingError);
}

TEST(Loss, NonTrainRowsOfDeltaAreZero) {
  std::mt19937_64 rng(4);
  const auto in = random_instance(10, 3, 3, rng);
  const auto p = build_full_propagation(in.graph, PropagationKind::kGcnSymmetric);
  const auto model = GnnModel::init(LayerType::kGcn, 3, 4, 3, 2, 1);
  const auto fwd = forward(model, p, in.features);
  const auto res = loss_and_backward(model, fwd.tape, fwd.logits, in.labels, in.train, p);
  for (NodeId v = 0; v < 10; ++v) {
    if (std::find(in.train.begin(), in.train.end(), v) != in.train.end()) continue;
    for (double d : res.output_delta.row(v)) EXPECT_EQ(d, 0.0);
  }
}

void expect_gradients_match(LayerType type, std::size_t layers, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 5 + rng() % 16;
  const auto in = random_instance(n, 4, 3, rng);
  SpanningSubgraph sub(in.graph);
  std::vector<Edge> kept;
  for (EdgeId e = 0; e < in.graph.num_edges(); ++e) {
    if (rng() % 4 != 0) {
      sub.insert(e);
      kept.push_back(in.graph.edge(e));
    }
  }
  const auto p = build_propagation(sub, propagation_for(type));
  const auto model = GnnModel::init(type, 4, 5, 3, layers, seed);
  const auto fwd = forward(model, p, in.features);
  const auto res = loss_and_backward(model, fwd.tape, fwd.logits, in.labels, in.train, p);
  const Matrix dense = testing::dense_propagation(n, kept, propagation_for(type));
  EXPECT_NEAR(res.loss, testing::dense_loss(model, dense, in.features, in.labels, in.train), 1e-12);
  const auto fd = testing::finite_difference_gradients(model, dense, in.features, in.labels, in.train, 1e-5);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t i = 0; i < fd[l].size(); ++i) {
      const double a = res.gradients[l].values()[i];
      const double b = fd[l].values()[i];
      // Relative error with an absolute floor for entries that vanish.
      const double rel = std::abs(a - b) / std::max(1e-6, std::max(std::abs(a), std::abs(b)));
      EXPECT_LT(rel, 1e-4) << "layer " << l << " entry " << i << " analytic " << a << " numeric " << b;
    }
  }
}

TEST(Backward, GcnMatchesFiniteDifferences) {
  for (std::size_t layers = 1; layers <= 3; ++layers)
    for (std::uint64_t seed = 0; seed < 5; ++seed) expect_gradients_match(LayerType::kGcn, layers, seed);
}

TEST(Backward, SageMatchesFiniteDifferences) {
  for (std::size_t layers = 1; layers <= 3; ++layers)
    for (std::uint64_t seed = 0; seed < 5; ++seed) expect_gradients_match(LayerType::kSageMean, layers, 100 + seed);
}

TEST(Sgd, ZeroGradientsLeaveWeights) {
  TrainState s{GnnModel{LayerType::kGcn, {Matrix{{1.0, 2.0}}}}, 0.1, {}, 0};
  sgd_step(s, {Matrix(1, 2)});
  EXPECT_EQ(s.model.weights[0], (Matrix{{1.0, 2.0}}));
}

TEST(Sgd, SingleStepArithmetic) {
  TrainState s{GnnModel{LayerType::kGcn, {Matrix{{1.0}}}}, 0.1, {}, 0};
  sgd_step(s, {Matrix{{2.0}}});
  EXPECT_DOUBLE_EQ(s.model.weights[0](0, 0), 0.8);
}

TEST(Sgd, NonFiniteGradientLeavesWeightsUntouched) {
  TrainState s{GnnModel{LayerType::kGcn, {Matrix{{1.0}}, Matrix{{1.0}}}}, 0.1, {}, 0};
  EXPECT_THROW(sgd_step(s, {Matrix{{1.0}}, Matrix{{std::nan("")}}}), NumericalError);
  EXPECT_EQ(s.model.weights[0](0, 0), 1.0);
  EXPECT_THROW(sgd_step(s, {Matrix{{1.0}}, Matrix{{INFINITY}}}), NumericalError);
}

TEST(Sgd, TwoStepsVersusSummedGradient) {
  // Constant gradients: two steps equal one step at the sum.
  TrainState a{GnnModel{LayerType::kGcn, {Matrix{{1.0, -1.0}, {0.5, 2.0}}}}, 0.25, {}, 0};
  TrainState b = a;
  const Matrix g1{{1.0, 2.0}, {-4.0, 0.5}};
  const Matrix g2{{0.5, -1.0}, {2.0, 1.5}};
  sgd_step(a, {g1});
  sgd_step(a, {g2});
  Matrix sum = g1;
  sum += g2;
  sgd_step(b, {sum});
  EXPECT_EQ(a.model.weights[0], b.model.weights[0]);

  // Gradients recomputed at the moved weights differ, so the identity fails
  // once the gradient depends on the weights.
  const Graph g = testing::path_graph(3);
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const Matrix x{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const std::vector<int> labels{0, 1, 1};
  const std::vector<NodeId> train{0, 1, 2};
  TrainState c{GnnModel{LayerType::kGcn, {Matrix{{0.3, -0.2}, {0.1, 0.4}}}}, 0.5, {}, 0};
  TrainState d = c;
  const auto grad = [&](const GnnModel& m) {
    const auto f = forward(m, p, x);
    return loss_and_backward(m, f.tape, f.logits, labels, train, p).gradients;
  };
  const auto first = grad(c.model);
  sgd_step(c, first);
  const auto second = grad(c.model);
  sgd_step(c, second);
  auto doubled = first;
  doubled[0] += first[0];
  sgd_step(d, doubled);
  EXPECT_GT(frobenius_norm(c.model.weights[0] - d.model.weights[0]), 1e-6);
}

TEST(Evaluate, PerfectLogits) {
  const Matrix logits{{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};
  const std::vector<int> labels{0, 1, 0};
  const std::vector<NodeId> nodes{0, 1, 2};
  const auto m = evaluate_logits(logits, labels, nodes);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.macro_f1, 1.0);
}

TEST(Evaluate, DegeneratePredictor) {
  const Matrix logits{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
  const std::vector<int> labels{0, 1, 0, 1};
  const std::vector<NodeId> nodes{0, 1, 2, 3};
  const auto m = evaluate_logits(logits, labels, nodes);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0 / 3.0);
}

TEST(Evaluate, EmptyEdgeTrainingRuns) {
  SyntheticSpec spec;
  spec.nodes = 40;
  spec.classes = 2;
  spec.feature_dim = 4;
  Graph g = generate_synthetic(spec);
  const SpanningSubgraph empty(g);
  const auto p_sub = build_propagation(empty, PropagationKind::kGcnSymmetric);
  TrainState s{GnnModel::init(LayerType::kGcn, 4, 8, 2, 2, 0), 0.5, {}, 0};
  const auto train = g.nodes_in(Split::kTrain);
  for (int i = 0; i < 5; ++i) {
    const auto f = forward(s.model, p_sub, g.features());
    sgd_step(s, loss_and_backward(s.model, f.tape, f.logits, g.labels(), train, p_sub).gradients);
  }
  const auto m = evaluate(s.model, build_full_propagation(g, PropagationKind::kGcnSymmetric), g.features(),
                          g.labels(), g.nodes_in(Split::kVal));
  EXPECT_GE(m.accuracy, 0.0);
  EXPECT_LE(m.accuracy, 1.0);
}

TEST(Equivariance, PermutingNodesPermutesLogits) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 10;
    const auto edges = testing::random_edges(n, 0.3, rng);
    const Matrix x = testing::random_matrix(n, 3, rng);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> permuted;
    for (const auto& e : edges) permuted.push_back({perm[e.u], perm[e.v]});
    Matrix px(n, 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 3; ++j) px(perm[i], j) = x(i, j);
    for (auto type : {LayerType::kGcn, LayerType::kSageMean}) {
      const auto model = GnnModel::init(type, 3, 6, 4, 2, static_cast<std::uint64_t>(trial));
      const auto a = forward(model, build_full_propagation(Graph::from_edges(n, edges), propagation_for(type)), x);
      const auto b =
          forward(model, build_full_propagation(Graph::from_edges(n, permuted), propagation_for(type)), px);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(a.logits(i, c), b.logits(perm[i], c), 1e-12);
    }
  }
}

TEST(Init, GlorotBoundsAndSeeding) {
  const auto a = GnnModel::init(LayerType::kSageMean, 6, 10, 3, 3, 5);
  EXPECT_EQ(a.weights[0].rows(), 12u);
  EXPECT_EQ(a.weights[1].rows(), 20u);
  EXPECT_EQ(a.weights[2].cols(), 3u);
  a.validate();
  for (const auto& w : a.weights) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (double v : w.values()) EXPECT_LE(std::abs(v), bound);
  }
  EXPECT_EQ(a.weights, GnnModel::init(LayerType::kSageMean, 6, 10, 3, 3, 5).weights);
  EXPECT_NE(a.weights, GnnModel::init(LayerType::kSageMean, 6, 10, 3, 3, 6).weights);
}

TEST(Checkpoint, RoundTrip) {
  const auto dir = testing::temp_dir("checkpoint");
  const auto model = GnnModel::init(LayerType::kSageMean, 5, 7, 3, 3, 2);
  save_weights(model.weights, dir / "w.spgw");
  EXPECT_EQ(testing::read_text(dir / "w.spgw").substr(0, 4), "SPGW");
  const auto back = load_model(LayerType::kSageMean, dir / "w.spgw");
  EXPECT_EQ(back.weights, model.weights);
  testing::write_text(dir / "bad.spgw", "XXXX");
  EXPECT_THROW(load_weights(dir / "bad.spgw"), ParseError);
}

TEST(Training, FullGraphEquivalence) {
  SyntheticSpec spec;
  spec.nodes = 120;
  spec.classes = 3;
  spec.feature_dim = 6;
  spec.p_in = 0.1;
  spec.p_out = 0.01;
  const Graph g = generate_synthetic(spec);
  RunConfig cfg;
  cfg.epochs = 30;
  cfg.hidden = 8;
  cfg.seed = 3;
  cfg.baseline = Baseline::kFull;
  const auto full = run_training(g, cfg);
  cfg.baseline = Baseline::kSpanGnn;
  cfg.alpha_up = 1.0;
  cfg.beta = 0.0;
  cfg.s1 = cfg.s2 = g.num_edges();
  const auto span = run_training(g, cfg);
  ASSERT_EQ(full.epochs.size(), span.epochs.size());
  for (std::size_t i = 0; i < full.epochs.size(); ++i) {
    EXPECT_EQ(full.epochs[i].loss, span.epochs[i].loss);
    EXPECT_EQ(full.epochs[i].val_acc, span.epochs[i].val_acc);
    EXPECT_EQ(span.epochs[i].edge_ratio, 1.0);
  }
  EXPECT_EQ(full.model.weights, span.model.weights);
}

TEST(Training, LossStaysFinite) {
  SyntheticSpec spec;
  spec.nodes = 300;
  const Graph g = generate_synthetic(spec);
  for (auto type : {LayerType::kGcn, LayerType::kSageMean}) {
    RunConfig cfg;
    cfg.model = type;
    cfg.epochs = 60;
    cfg.hidden = 16;
    cfg.lr = 0.5;
    for (const auto& m : run_training(g, cfg).epochs) EXPECT_TRUE(std::isfinite(m.loss));
  }
}

}  // namespace
}  // namespace spangraph
