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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/matrix.hpp"

namespace spangraph {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Canonical undirected edge, u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Split : std::uint8_t { kNone, kTrain, kVal, kTest };

/// Immutable undirected graph. Edges are canonical (u < v), sorted and
/// unique; the CSR holds both directions of every edge and no self-loops.
class Graph {
 public:
  Graph() = default;

  /// Canonicalizes, drops self-loops, and deduplicates. Throws RangeError
  /// for endpoints >= num_nodes.
  static Graph from_edges(std::size_t num_nodes, std::vector<Edge> edges) {
    for (auto& e : edges) {
      if (e.u >= num_nodes || e.v >= num_nodes) {
        throw RangeError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") references node >= num_nodes=" + std::to_string(num_nodes));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.num_nodes_ = num_nodes;
    g.edges_ = std::move(edges);
    g.build_csr();
    g.features_ = Matrix(num_nodes, 0);
    g.labels_.assign(num_nodes, -1);
    g.splits_.assign(num_nodes, Split::kNone);
    return g;
  }

  /// Attaches node features, labels (-1 = unlabeled) and splits.
  Graph with_node_data(Matrix features, std::vector<int> labels, std::vector<Split> splits) && {
    if (features.rows() != num_nodes_) {
      throw ShapeError("feature rows " + std::to_string(features.rows()) +
                       " != num_nodes " + std::to_string(num_nodes_));
    }
    if (labels.size() != num_nodes_) {
      throw ShapeError("label count " + std::to_string(labels.size()) +
                       " != num_nodes " + std::to_string(num_nodes_));
    }
    if (splits.size() != num_nodes_) {
      throw ShapeError("split count " + std::to_string(splits.size()) +
                       " != num_nodes " + std::to_string(num_nodes_));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < -1) {
        throw RangeError("label " + std::to_string(labels[i]) + " at node " + std::to_string(i));
      }
    }
    features_ = std::move(features);
    labels_ = std::move(labels);
    splits_ = std::move(splits);
    return std::move(*this);
  }

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  /// Symmetrized CSR. row_ptr has num_nodes + 1 entries ending at 2|E|.
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> col_index() const noexcept { return col_; }
  /// Canonical edge index of each CSR entry.
  std::span<const EdgeId> entry_edge() const noexcept { return entry_edge_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return std::span<const NodeId>(col_).subspan(row_ptr_[v], row_ptr_[v + 1] - row_ptr_[v]);
  }
  std::size_t degree(NodeId v) const { return row_ptr_[v + 1] - row_ptr_[v]; }

  const Matrix& features() const noexcept { return features_; }
  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const Split> splits() const noexcept { return splits_; }

  std::size_t num_classes() const {
    int max_label = -1;
    for (int l : labels_) max_label = std::max(max_label, l);
    return static_cast<std::size_t>(max_label + 1);
  }

  /// Labeled nodes assigned to `split`, ascending.
  std::vector<NodeId> nodes_in(Split split) const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < num_nodes_; ++i) {
      if (splits_[i] == split && labels_[i] >= 0) out.push_back(static_cast<NodeId>(i));
    }
    return out;
  }

 private:
  void build_csr() {
    row_ptr_.assign(num_nodes_ + 1, 0);
    for (const auto& e : edges_) {
      ++row_ptr_[e.u + 1];
      ++row_ptr_[e.v + 1];
    }
    for (std::size_t i = 0; i < num_nodes_; ++i) row_ptr_[i + 1] += row_ptr_[i];
    col_.resize(2 * edges_.size());
    entry_edge_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
    // Sorted edge order fills every row in ascending column order: a row x
    // first receives its smaller neighbors (edges (a,x)), then larger ones.
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      col_[cursor[e.u]] = e.v;
      entry_edge_[cursor[e.u]++] = static_cast<EdgeId>(i);
      col_[cursor[e.v]] = e.u;
      entry_edge_[cursor[e.v]++] = static_cast<EdgeId>(i);
    }
  }

  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_;
  std::vector<EdgeId> entry_edge_;
  Matrix features_;
  std::vector<int> labels_;
  std::vector<Split> splits_;
};

}  // namespace spangraph
