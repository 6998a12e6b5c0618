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
#include <random>

#include "oracles.hpp"
#include "spangraph/spangraph.hpp"

namespace spangraph {
namespace {

using testing::read_text;
using testing::temp_dir;
using testing::write_text;

TEST(LoadGraph, ReversedDuplicateCollapses) {
  const auto dir = temp_dir("reversed");
  write_text(dir / "e.txt", "0 1\n1 2\n1 0\n");
  write_text(dir / "f.csv", "1\n2\n3\n");
  write_text(dir / "l.txt", "0\n1\n0\n");
  write_text(dir / "s.txt", "train\nval\ntest\n");
  const Graph g = load_graph(dir / "e.txt", dir / "f.csv", dir / "l.txt", dir / "s.txt");
  EXPECT_EQ(g.num_nodes(), 3u);
  ASSERT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.edge(0), (Edge{0, 1}));
  EXPECT_EQ(g.edge(1), (Edge{1, 2}));
  EXPECT_EQ(g.nodes_in(Split::kTrain), std::vector<NodeId>{0});
}

TEST(LoadGraph, EmptyEdgeFileWithDeclaredNodes) {
  const auto dir = temp_dir("empty_edges");
  write_text(dir / "e.txt", "# nothing here\nnodes 4\n");
  const Graph g = load_topology(dir / "e.txt");
  EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(g.num_edges(), 0u);
  for (NodeId v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 0u);
}

TEST(LoadGraph, NodeIdBeyondDeclaredCount) {
  const auto dir = temp_dir("range");
  write_text(dir / "e.txt", "nodes 4\n5 1\n");
  EXPECT_THROW(load_topology(dir / "e.txt"), RangeError);
}

TEST(LoadGraph, MalformedLineReportsLineNumber) {
  const auto dir = temp_dir("malformed");
  write_text(dir / "e.txt", "# header\n0 1\n1 x\n");
  try {
    load_topology(dir / "e.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadGraph, FeatureRowMismatch) {
  const auto dir = temp_dir("shape");
  write_text(dir / "e.txt", "0 1\n1 2\n");
  write_text(dir / "f.csv", "1,2\n3,4\n");
  write_text(dir / "l.txt", "0\n1\n0\n");
  write_text(dir / "s.txt", "train\nval\ntest\n");
  EXPECT_THROW(load_graph(dir / "e.txt", dir / "f.csv", dir / "l.txt", dir / "s.txt"), ShapeError);
}

TEST(LoadGraph, RaggedFeatureCsv) {
  const auto dir = temp_dir("ragged");
  write_text(dir / "f.csv", "1,2\n3\n");
  EXPECT_THROW(read_features(dir / "f.csv"), ParseError);
}

TEST(LoadGraph, UnknownSplitName) {
  const auto dir = temp_dir("split");
  write_text(dir / "s.txt", "train\nholdout\n");
  EXPECT_THROW(read_splits(dir / "s.txt"), ParseError);
}

TEST(LoadGraph, BinaryFeatures) {
  const auto dir = temp_dir("binary");
  const Matrix f{{0.5, -1.25}, {2.0, 3.0}, {0.0, 7.5}};
  write_features_binary(f, dir / "f.bin");
  EXPECT_EQ(read_text(dir / "f.bin").substr(0, 4), "SPGF");
  EXPECT_EQ(read_features(dir / "f.bin"), f);
}

TEST(LoadGraph, CsrInvariants) {
  std::mt19937_64 rng(7);
  const auto edges = testing::random_edges(30, 0.2, rng);
  const Graph g = Graph::from_edges(30, edges);
  const auto rp = g.row_ptr();
  EXPECT_TRUE(std::is_sorted(rp.begin(), rp.end()));
  EXPECT_EQ(rp.back(), 2 * g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto nb = g.neighbors(v);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t k = 0; k < nb.size(); ++k) {
      EXPECT_NE(nb[k], v);
      const Edge& e = g.edge(g.entry_edge()[rp[v] + k]);
      EXPECT_EQ(std::min<NodeId>(v, nb[k]), e.u);
      EXPECT_EQ(std::max<NodeId>(v, nb[k]), e.v);
    }
  }
  for (std::size_t i = 1; i < g.num_edges(); ++i) EXPECT_LT(g.edge(i - 1), g.edge(i));
}

TEST(LoadGraph, SelfLoopsAreNotStored) {
  const Graph g = Graph::from_edges(3, {{1, 1}, {0, 2}});
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(1), 0u);
}

TEST(LoadGraph, RoundTripReproducesEdges) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng() % 40;
    Graph g = Graph::from_edges(n, testing::random_edges(n, 0.15, rng));
    Matrix f = testing::random_matrix(n, 3, rng);
    std::vector<int> labels(n);
    std::vector<Split> splits(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng() % 4) - 1;
      splits[i] = static_cast<Split>(rng() % 4);
    }
    g = std::move(g).with_node_data(f, labels, splits);
    const auto dir = temp_dir("roundtrip");
    const auto paths = write_dataset(g, dir);
    const Graph h = load_dataset(paths);
    ASSERT_EQ(h.num_nodes(), g.num_nodes());
    EXPECT_TRUE(std::ranges::equal(h.edges(), g.edges()));
    EXPECT_TRUE(std::ranges::equal(h.labels(), g.labels()));
    EXPECT_TRUE(std::ranges::equal(h.splits(), g.splits()));
    EXPECT_EQ(h.features(), g.features());
  }
}

TEST(Propagation, TriangleGcnAllThirds) {
  const Graph g = testing::triangle();
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(p.at(r, c), 1.0 / 3.0, 1e-15);
}

TEST(Propagation, EmptySubgraphIsIdentity) {
  const Graph g = testing::path_graph(4);
  const SpanningSubgraph sub(g);
  EXPECT_EQ(build_propagation(sub, PropagationKind::kMeanRow).to_dense(), Matrix::identity(4));
  EXPECT_EQ(build_propagation(sub, PropagationKind::kGcnSymmetric).to_dense(), Matrix::identity(4));
}

TEST(Propagation, TwoNodePathMeanRow) {
  const auto p = build_full_propagation(testing::path_graph(2), PropagationKind::kMeanRow);
  EXPECT_EQ(p.to_dense(), (Matrix{{0.5, 0.5}, {0.5, 0.5}}));
}

TEST(Propagation, SubgraphDegreesFromActiveEdgesOnly) {
  const Graph g = testing::path_graph(4);
  SpanningSubgraph sub(g);
  sub.insert(1);  // edge (1,2)
  const auto p = build_propagation(sub, PropagationKind::kGcnSymmetric);
  EXPECT_EQ(p.at(0, 0), 1.0);
  EXPECT_EQ(p.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(p.at(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(p.at(2, 2), 0.5);
}

TEST(Propagation, MatchesDenseOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng() % 15;
    const Graph g = Graph::from_edges(n, testing::random_edges(n, 0.3, rng));
    SpanningSubgraph sub(g);
    std::vector<Edge> chosen;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (rng() % 2) {
        sub.insert(e);
        chosen.push_back(g.edge(e));
      }
    }
    for (auto kind : {PropagationKind::kGcnSymmetric, PropagationKind::kMeanRow}) {
      const Matrix got = build_propagation(sub, kind).to_dense();
      const Matrix want = testing::dense_propagation(n, chosen, kind);
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got.values()[i], want.values()[i], 1e-15);
    }
  }
}

TEST(Propagation, MeanRowRowsSumToOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const Graph g = Graph::from_edges(n, testing::random_edges(n, 0.2, rng));
    SpanningSubgraph sub(g);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (rng() % 3) sub.insert(e);
    const auto p = build_propagation(sub, PropagationKind::kMeanRow);
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t k = p.row_ptr()[r]; k < p.row_ptr()[r + 1]; ++k) s += p.values()[k];
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Propagation, GcnSymmetricIsExactlySymmetric) {
  std::mt19937_64 rng(9);
  const Graph g = Graph::from_edges(40, testing::random_edges(40, 0.15, rng));
  SpanningSubgraph sub(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (rng() % 2) sub.insert(e);
  const Matrix d = build_propagation(sub, PropagationKind::kGcnSymmetric).to_dense();
  for (std::size_t r = 0; r < 40; ++r)
    for (std::size_t c = 0; c < 40; ++c) EXPECT_EQ(d(r, c), d(c, r));
}

TEST(Propagation, SpanningPropertyUnderInsertion) {
  const Graph g = testing::path_graph(5);
  SpanningSubgraph sub(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    sub.insert(e);
    EXPECT_EQ(sub.num_nodes(), 5u);
    EXPECT_EQ(build_propagation(sub, PropagationKind::kMeanRow).size(), 5u);
  }
}

TEST(ColumnNorms, Identity) {
  const Graph g = Graph::from_edges(3, {});
  EXPECT_EQ(column_norms(build_full_propagation(g, PropagationKind::kMeanRow)), std::vector<double>(3, 1.0));
}

TEST(ColumnNorms, Triangle) {
  for (double v : column_norms(build_full_propagation(testing::triangle(), PropagationKind::kGcnSymmetric)))
    EXPECT_NEAR(v, 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(ColumnNorms, StarCenterDominatesMeanRow) {
  const auto norms = column_norms(build_full_propagation(testing::star_graph(3), PropagationKind::kMeanRow));
  EXPECT_NEAR(norms[0], 0.9013878188659973, 1e-15);
  for (std::size_t leaf = 1; leaf <= 3; ++leaf) {
    EXPECT_NEAR(norms[leaf], 0.5590169943749475, 1e-15);
    EXPECT_GT(norms[0], norms[leaf]);
  }
}

TEST(Spmm, MatchesDenseProduct) {
  std::mt19937_64 rng(13);
  const Graph g = Graph::from_edges(25, testing::random_edges(25, 0.2, rng));
  const auto p = build_full_propagation(g, PropagationKind::kGcnSymmetric);
  const Matrix x = testing::random_matrix(25, 4, rng);
  const Matrix want = testing::dense_mul(p.to_dense(), x);
  const Matrix got = spmm(p, x);
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got.values()[i], want.values()[i], 1e-13);
  Matrix pt(25, 25);
  const Matrix pd = p.to_dense();
  for (std::size_t r = 0; r < 25; ++r)
    for (std::size_t c = 0; c < 25; ++c) pt(r, c) = pd(c, r);
  const Matrix want_t = testing::dense_mul(pt, x);
  const Matrix got_t = spmm_transposed(p, x);
  for (std::size_t i = 0; i < got_t.size(); ++i) EXPECT_NEAR(got_t.values()[i], want_t.values()[i], 1e-13);
}

}  // namespace
}  // namespace spangraph
