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
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/parallel.hpp"
#include "spangraph/subgraph.hpp"

namespace spangraph {

enum class PropagationKind {
  kGcnSymmetric,  // 1 / sqrt(dhat(v) dhat(u)), dhat = degree + 1
  kMeanRow,       // 1 / dhat(v), rows sum to one
};

inline std::string_view to_string(PropagationKind k) {
  return k == PropagationKind::kGcnSymmetric ? "gcn-symmetric" : "mean-row";
}

/// Sparse propagation matrix in CSR form: the chosen edges in both
/// directions plus one self-loop per node, columns ascending in each row.
class PropagationMatrix {
 public:
  PropagationMatrix() = default;
  PropagationMatrix(PropagationKind kind, std::size_t n, std::vector<std::size_t> row_ptr,
                    std::vector<NodeId> col, std::vector<double> val)
      : kind_(kind), n_(n), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {}

  PropagationKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return val_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> col_index() const noexcept { return col_; }
  std::span<const double> values() const noexcept { return val_; }

  /// Entry (row, col); zero when structurally absent.
  double at(std::size_t row, std::size_t col) const {
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
      if (col_[k] == col) return val_[k];
    }
    return 0.0;
  }

  Matrix to_dense() const {
    Matrix d(n_, n_);
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_[k]) = val_[k];
    }
    return d;
  }

  /// Off-diagonal entries / 2, i.e. the number of undirected edges encoded.
  std::size_t num_edges() const { return (nnz() - n_) / 2; }

 private:
  PropagationKind kind_ = PropagationKind::kGcnSymmetric;
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_;
  std::vector<double> val_;
};

/// Propagation matrix over the active edges of `sub`; degrees are counted
/// over the active edges only.
inline PropagationMatrix build_propagation(const SpanningSubgraph& sub, PropagationKind kind) {
  const Graph& g = sub.parent();
  const std::size_t n = g.num_nodes();
  const auto grow = g.row_ptr();
  const auto gcol = g.col_index();
  const auto gedge = g.entry_edge();
  const std::vector<bool> active = sub.mask();

  std::vector<std::size_t> row_ptr(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t count = 1;  // self-loop
    for (std::size_t k = grow[v]; k < grow[v + 1]; ++k) count += active[gedge[k]] ? 1 : 0;
    row_ptr[v + 1] = row_ptr[v] + count;
  }
  std::vector<double> dhat(n);
  for (std::size_t v = 0; v < n; ++v) dhat[v] = static_cast<double>(row_ptr[v + 1] - row_ptr[v]);

  std::vector<NodeId> col(row_ptr[n]);
  std::vector<double> val(row_ptr[n]);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t out = row_ptr[v];
    bool self_done = false;
    const auto emit = [&](NodeId u) {
      col[out] = u;
      val[out] = kind == PropagationKind::kGcnSymmetric ? 1.0 / std::sqrt(dhat[v] * dhat[u])
                                                        : 1.0 / dhat[v];
      ++out;
    };
    for (std::size_t k = grow[v]; k < grow[v + 1]; ++k) {
      if (!active[gedge[k]]) continue;
      if (!self_done && gcol[k] > v) {
        emit(static_cast<NodeId>(v));
        self_done = true;
      }
      emit(gcol[k]);
    }
    if (!self_done) emit(static_cast<NodeId>(v));
  }
  return PropagationMatrix(kind, n, std::move(row_ptr), std::move(col), std::move(val));
}

inline PropagationMatrix build_full_propagation(const Graph& g, PropagationKind kind) {
  return build_propagation(SpanningSubgraph::full(g), kind);
}

/// L2 norm of every column.
inline std::vector<double> column_norms(const PropagationMatrix& p) {
  std::vector<double> sq(p.size(), 0.0);
  const auto rp = p.row_ptr();
  const auto col = p.col_index();
  const auto val = p.values();
  for (std::size_t r = 0; r < p.size(); ++r) {
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) sq[col[k]] += val[k] * val[k];
  }
  for (double& s : sq) s = std::sqrt(s);
  return sq;
}

/// p * x
inline Matrix spmm(const PropagationMatrix& p, const Matrix& x) {
  if (x.rows() != p.size()) {
    throw ShapeError("spmm: P is " + std::to_string(p.size()) + " square, X is " + shape_string(x));
  }
  Matrix out(x.rows(), x.cols());
  const auto rp = p.row_ptr();
  const auto col = p.col_index();
  const auto val = p.values();
  const std::size_t avg_row = p.size() ? p.nnz() / p.size() + 1 : 1;
  parallel_rows(p.size(), avg_row * x.cols(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto dst = out.row(r);
      for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
        const double w = val[k];
        auto src = x.row(col[k]);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
      }
    }
  });
  return out;
}

/// p^T * x
inline Matrix spmm_transposed(const PropagationMatrix& p, const Matrix& x) {
  if (x.rows() != p.size()) {
    throw ShapeError("spmm_transposed: P is " + std::to_string(p.size()) + " square, X is " +
                     shape_string(x));
  }
  Matrix out(x.rows(), x.cols());
  const auto rp = p.row_ptr();
  const auto col = p.col_index();
  const auto val = p.values();
  for (std::size_t r = 0; r < p.size(); ++r) {
    auto src = x.row(r);
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      const double w = val[k];
      auto dst = out.row(col[k]);
      for (std::size_t j = 0; j < src.size(); ++j) dst[j] += w * src[j];
    }
  }
  return out;
}

}  // namespace spangraph
