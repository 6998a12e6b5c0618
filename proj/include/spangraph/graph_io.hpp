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
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/text.hpp"

namespace spangraph {

struct EdgeListFile {
  std::optional<std::size_t> declared_nodes;
  std::vector<Edge> edges;  // as read, not canonicalized

  std::size_t num_nodes() const {
    if (declared_nodes) return *declared_nodes;
    NodeId max_id = 0;
    bool any = false;
    for (const auto& e : edges) {
      max_id = std::max({max_id, e.u, e.v});
      any = true;
    }
    return any ? static_cast<std::size_t>(max_id) + 1 : 0;
  }
};

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  return out;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& source) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ParseError(source, 0, "truncated binary file");
  }
  return value;
}

}  // namespace detail

/// One "u v" pair per line; '#' comments; optional leading "nodes N".
inline EdgeListFile read_edge_list(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  EdgeListFile out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto tokens = split_whitespace(text);
    if (!seen_content && tokens.size() == 2 && tokens[0] == "nodes") {
      seen_content = true;
      const auto n = parse_number<std::uint64_t>(tokens[1]);
      if (!n) throw ParseError(path.string(), line_no, "bad node count '" + std::string(tokens[1]) + "'");
      out.declared_nodes = *n;
      continue;
    }
    seen_content = true;
    if (tokens.size() != 2) {
      throw ParseError(path.string(), line_no, "expected 'u v', got '" + std::string(text) + "'");
    }
    const auto u = parse_number<std::uint32_t>(tokens[0]);
    const auto v = parse_number<std::uint32_t>(tokens[1]);
    if (!u || !v) {
      throw ParseError(path.string(), line_no, "bad node id in '" + std::string(text) + "'");
    }
    if (out.declared_nodes && (*u >= *out.declared_nodes || *v >= *out.declared_nodes)) {
      throw RangeError(path.string() + ":" + std::to_string(line_no) + ": node id >= declared " +
                       std::to_string(*out.declared_nodes));
    }
    out.edges.push_back({*u, *v});
  }
  return out;
}

inline Graph load_topology(const std::filesystem::path& edge_list_path) {
  auto file = read_edge_list(edge_list_path);
  const std::size_t n = file.num_nodes();
  return Graph::from_edges(n, std::move(file.edges));
}

inline constexpr std::array<char, 4> kFeatureMagic{'S', 'P', 'G', 'F'};

/// CSV (one row per node) or the binary SPGF format, detected by magic.
inline Matrix read_features(const std::filesystem::path& path) {
  {
    auto probe = detail::open_input(path, true);
    std::array<char, 4> magic{};
    probe.read(magic.data(), 4);
    if (probe.gcount() == 4 && magic == kFeatureMagic) {
      const auto rows = detail::read_le<std::uint64_t>(probe, path.string());
      const auto cols = detail::read_le<std::uint64_t>(probe, path.string());
      Matrix m(rows, cols);
      std::vector<float> buf(cols);
      for (std::uint64_t r = 0; r < rows; ++r) {
        if (!probe.read(reinterpret_cast<char*>(buf.data()),
                        static_cast<std::streamsize>(cols * sizeof(float)))) {
          throw ParseError(path.string(), 0, "truncated feature payload at row " + std::to_string(r));
        }
        for (std::uint64_t c = 0; c < cols; ++c) m(r, c) = buf[c];
      }
      return m;
    }
  }
  auto in = detail::open_input(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_on(text, ',');
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(cols) + " columns, got " + std::to_string(fields.size()));
    }
    for (auto f : fields) {
      const auto v = parse_number<double>(f);
      if (!v) throw ParseError(path.string(), line_no, "bad real '" + std::string(f) + "'");
      values.push_back(*v);
    }
    ++rows;
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

inline std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto v = parse_number<int>(text);
    if (!v || *v < -1) throw ParseError(path.string(), line_no, "bad label '" + std::string(text) + "'");
    labels.push_back(*v);
  }
  return labels;
}

inline std::vector<Split> read_splits(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<Split> splits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text == "train") {
      splits.push_back(Split::kTrain);
    } else if (text == "val") {
      splits.push_back(Split::kVal);
    } else if (text == "test") {
      splits.push_back(Split::kTest);
    } else if (text == "none") {
      splits.push_back(Split::kNone);
    } else {
      throw ParseError(path.string(), line_no, "bad split '" + std::string(text) + "'");
    }
  }
  return splits;
}

inline Graph load_graph(const std::filesystem::path& edge_list_path,
                        const std::filesystem::path& features_path,
                        const std::filesystem::path& labels_path,
                        const std::filesystem::path& splits_path) {
  Graph g = load_topology(edge_list_path);
  return std::move(g).with_node_data(read_features(features_path), read_labels(labels_path),
                                     read_splits(splits_path));
}

inline void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "nodes " << g.num_nodes() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void write_features_csv(const Matrix& features, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    auto row = features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

/// Binary SPGF: magic, u64 rows, u64 cols, row-major float32.
inline void write_features_binary(const Matrix& features, const std::filesystem::path& path) {
  auto out = detail::open_output(path, true);
  out.write(kFeatureMagic.data(), 4);
  detail::write_le<std::uint64_t>(out, features.rows());
  detail::write_le<std::uint64_t>(out, features.cols());
  for (double v : features.values()) detail::write_le<float>(out, static_cast<float>(v));
}

inline void write_labels(std::span<const int> labels, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (int l : labels) out << l << '\n';
}

inline const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
    case Split::kNone: return "none";
  }
  return "none";
}

inline void write_splits(std::span<const Split> splits, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (Split s : splits) out << split_name(s) << '\n';
}

}  // namespace spangraph
