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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spangraph/errors.hpp"
#include "spangraph/gnn.hpp"
#include "spangraph/sampler.hpp"
#include "spangraph/synthetic.hpp"
#include "spangraph/text.hpp"

namespace spangraph {

enum class Baseline { kSpanGnn, kDropEdge, kFull };

inline std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::kSpanGnn: return "spangnn";
    case Baseline::kDropEdge: return "dropedge";
    case Baseline::kFull: return "full";
  }
  return "spangnn";
}

inline Baseline parse_baseline(std::string_view s) {
  if (s == "spangnn") return Baseline::kSpanGnn;
  if (s == "dropedge") return Baseline::kDropEdge;
  if (s == "full") return Baseline::kFull;
  throw ConfigError("unknown baseline '" + std::string(s) + "' (expected spangnn, dropedge, full)");
}

/// Everything a `train` or `compare` run needs. Counts of 0 for s1/s2 mean
/// "derive from |E|" (see resolve_sample_sizes).
struct RunConfig {
  std::filesystem::path edges, features, labels, splits;
  std::optional<SyntheticSpec> generator;

  LayerType model = LayerType::kGcn;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  double lr = 0.5;
  std::size_t epochs = 200;

  double alpha_up = 0.5;
  double beta = 0.1;
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  SamplerKind sampler = SamplerKind::kVm;
  Baseline baseline = Baseline::kSpanGnn;

  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  std::size_t diag_every = 0;      // 0 disables per-epoch diagnostics
  std::size_t var_samples = 32;
  double bytes_per_edge = 0.0;     // 0 -> 8 * hidden
};

namespace detail {

template <typename T>
T parse_setting(std::string_view key, std::string_view value) {
  const auto v = parse_number<T>(value);
  if (!v) throw ConfigError("bad value '" + std::string(value) + "' for " + std::string(key));
  return *v;
}

inline SyntheticSpec& generator_of(RunConfig& cfg) {
  if (!cfg.generator) cfg.generator = SyntheticSpec{};
  return *cfg.generator;
}

}  // namespace detail

/// Applies one key=value setting. Flag spellings with dashes are accepted
/// (alpha-up == alpha_up).
inline void apply_setting(RunConfig& cfg, std::string key, std::string_view value) {
  for (char& c : key) c = c == '-' ? '_' : c;
  value = trim(value);
  using detail::parse_setting;
  if (key == "edges") cfg.edges = std::string(value);
  else if (key == "features") cfg.features = std::string(value);
  else if (key == "labels") cfg.labels = std::string(value);
  else if (key == "splits") cfg.splits = std::string(value);
  else if (key == "data") {
    const auto paths = DatasetPaths::in(std::string(value));
    cfg.edges = paths.edges;
    cfg.features = paths.features;
    cfg.labels = paths.labels;
    cfg.splits = paths.splits;
  } else if (key == "gen" || key == "gen_kind") detail::generator_of(cfg).kind = parse_synthetic_kind(value);
  else if (key == "gen_nodes") detail::generator_of(cfg).nodes = parse_setting<std::size_t>(key, value);
  else if (key == "gen_classes") detail::generator_of(cfg).classes = parse_setting<std::size_t>(key, value);
  else if (key == "gen_feature_dim") detail::generator_of(cfg).feature_dim = parse_setting<std::size_t>(key, value);
  else if (key == "gen_p_in") detail::generator_of(cfg).p_in = parse_setting<double>(key, value);
  else if (key == "gen_p_out") detail::generator_of(cfg).p_out = parse_setting<double>(key, value);
  else if (key == "gen_pa_edges") detail::generator_of(cfg).pa_edges = parse_setting<std::size_t>(key, value);
  else if (key == "gen_signal") detail::generator_of(cfg).feature_signal = parse_setting<double>(key, value);
  else if (key == "gen_noise") detail::generator_of(cfg).feature_noise = parse_setting<double>(key, value);
  else if (key == "gen_seed") detail::generator_of(cfg).seed = parse_setting<std::uint64_t>(key, value);
  else if (key == "model") cfg.model = parse_layer_type(value);
  else if (key == "hidden") cfg.hidden = parse_setting<std::size_t>(key, value);
  else if (key == "layers") cfg.layers = parse_setting<std::size_t>(key, value);
  else if (key == "lr") cfg.lr = parse_setting<double>(key, value);
  else if (key == "epochs") cfg.epochs = parse_setting<std::size_t>(key, value);
  else if (key == "alpha_up") cfg.alpha_up = parse_setting<double>(key, value);
  else if (key == "beta") cfg.beta = parse_setting<double>(key, value);
  else if (key == "s1") cfg.s1 = parse_setting<std::size_t>(key, value);
  else if (key == "s2") cfg.s2 = parse_setting<std::size_t>(key, value);
  else if (key == "sampler") cfg.sampler = parse_sampler_kind(value);
  else if (key == "baseline") cfg.baseline = parse_baseline(value);
  else if (key == "seed") cfg.seed = parse_setting<std::uint64_t>(key, value);
  else if (key == "out") cfg.out = std::string(value);
  else if (key == "diag_every") cfg.diag_every = parse_setting<std::size_t>(key, value);
  else if (key == "var_samples") cfg.var_samples = parse_setting<std::size_t>(key, value);
  else if (key == "bytes_per_edge") cfg.bytes_per_edge = parse_setting<double>(key, value);
  else throw ConfigError("unknown setting '" + key + "'");
}

/// key=value lines; '#' starts a comment line; blank lines ignored.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))));
  }
  return out;
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  for (const auto& [k, v] : read_config_file(path)) apply_setting(cfg, k, v);
}

/// Fills unset sample sizes: s1 = ceil(|E| / 10), s2 = ceil(s1 / 5).
inline void resolve_sample_sizes(RunConfig& cfg, std::size_t num_edges) {
  if (cfg.s1 == 0) cfg.s1 = std::max<std::size_t>(1, (num_edges + 9) / 10);
  if (cfg.s2 == 0) cfg.s2 = std::max<std::size_t>(1, (cfg.s1 + 4) / 5);
  cfg.s1 = std::min(cfg.s1, num_edges);
}

inline void validate(const RunConfig& cfg) {
  if (!cfg.generator && (cfg.edges.empty() || cfg.features.empty() || cfg.labels.empty() || cfg.splits.empty())) {
    throw ConfigError("need dataset paths (edges, features, labels, splits or data=DIR) or generator settings");
  }
  if (!cfg.generator) {
    for (const auto* p : {&cfg.edges, &cfg.features, &cfg.labels, &cfg.splits}) {
      if (!std::filesystem::exists(*p)) throw ConfigError("missing file " + p->string());
    }
  } else {
    cfg.generator->validate();
  }
  if (!(cfg.lr > 0.0)) throw ConfigError("lr must be > 0");
  if (cfg.layers == 0) throw ConfigError("layers must be >= 1");
  if (cfg.hidden == 0) throw ConfigError("hidden must be >= 1");
  if (!(cfg.alpha_up > 0.0 && cfg.alpha_up <= 1.0)) throw ConfigError("alpha_up must be in (0, 1]");
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) throw ConfigError("beta must be in [0, 1)");
  if (cfg.diag_every > 0 && cfg.var_samples < 2) throw ConfigError("var_samples must be >= 2");
}

inline Graph load_run_graph(const RunConfig& cfg) {
  if (cfg.generator) return generate_synthetic(*cfg.generator);
  return load_graph(cfg.edges, cfg.features, cfg.labels, cfg.splits);
}

}  // namespace spangraph
