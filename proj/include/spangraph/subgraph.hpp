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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"

namespace spangraph {

/// Edge subset of a parent graph over the full parent node set. Membership
/// is O(1); the active list supports uniform selection by position.
class SpanningSubgraph {
 public:
  explicit SpanningSubgraph(const Graph& parent)
      : parent_(&parent), position_(parent.num_edges(), kAbsent) {}

  static SpanningSubgraph full(const Graph& parent) {
    SpanningSubgraph s(parent);
    for (std::size_t e = 0; e < parent.num_edges(); ++e) s.insert(static_cast<EdgeId>(e));
    return s;
  }

  const Graph& parent() const noexcept { return *parent_; }
  std::size_t num_nodes() const noexcept { return parent_->num_nodes(); }
  std::size_t size() const noexcept { return active_.size(); }
  bool empty() const noexcept { return active_.empty(); }

  /// Active canonical edge ids in insertion-dependent order.
  std::span<const EdgeId> active() const noexcept { return active_; }

  bool contains(EdgeId e) const { return e < position_.size() && position_[e] != kAbsent; }

  double edge_ratio() const {
    const auto total = parent_->num_edges();
    return total == 0 ? 0.0 : static_cast<double>(active_.size()) / static_cast<double>(total);
  }

  /// Returns false if already present.
  bool insert(EdgeId e) {
    check(e);
    if (position_[e] != kAbsent) return false;
    position_[e] = static_cast<std::uint32_t>(active_.size());
    active_.push_back(e);
    return true;
  }

  /// Returns false if absent. Swaps the last active edge into the hole.
  bool erase(EdgeId e) {
    check(e);
    const auto pos = position_[e];
    if (pos == kAbsent) return false;
    const EdgeId last = active_.back();
    active_[pos] = last;
    position_[last] = pos;
    active_.pop_back();
    position_[e] = kAbsent;
    return true;
  }

  /// Active mask indexed by canonical edge id.
  std::vector<bool> mask() const {
    std::vector<bool> m(position_.size(), false);
    for (EdgeId e : active_) m[e] = true;
    return m;
  }

  /// Active edge ids ascending.
  std::vector<EdgeId> sorted_active() const {
    std::vector<EdgeId> out;
    out.reserve(active_.size());
    for (std::size_t e = 0; e < position_.size(); ++e) {
      if (position_[e] != kAbsent) out.push_back(static_cast<EdgeId>(e));
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kAbsent = 0xffffffffu;

  void check(EdgeId e) const {
    if (e >= position_.size()) {
      throw RangeError("edge index " + std::to_string(e) + " >= " + std::to_string(position_.size()));
    }
  }

  const Graph* parent_;
  std::vector<EdgeId> active_;
  std::vector<std::uint32_t> position_;
};

}  // namespace spangraph
