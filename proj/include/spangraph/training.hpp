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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "spangraph/config.hpp"
#include "spangraph/diagnostics.hpp"
#include "spangraph/errors.hpp"
#include "spangraph/gnn.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/propagation.hpp"
#include "spangraph/random.hpp"
#include "spangraph/sampler.hpp"
#include "spangraph/scheduler.hpp"
#include "spangraph/subgraph.hpp"
#include "spangraph/text.hpp"

namespace spangraph {

struct EpochMetrics {
  std::size_t epoch = 0;
  double loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double val_macro_f1 = 0.0;
  double edge_ratio = 0.0;
  std::size_t active_edges = 0;
  std::int64_t sampling_time_ms = 0;
  std::int64_t train_time_ms = 0;
  std::size_t peak_edges_so_far = 0;  // directed edges incl. self-loops
};

struct DiagnosticsRow {
  std::size_t epoch = 0;
  std::vector<double> noise_norms;  // per layer
  double z_diff_norm = 0.0;         // over all layers
  double var_xi = 0.0;
  std::size_t peak_edges = 0;
};

struct RunResult {
  std::vector<EpochMetrics> epochs;
  std::vector<DiagnosticsRow> diagnostics;
  GnnModel model;
  MemoryProxy memory;
  std::size_t fallback_epochs = 0;  // epochs where weighted sampling hit the rejection cap

  double best_val_acc() const {
    double best = 0.0;
    for (const auto& e : epochs) best = std::max(best, e.val_acc);
    return best;
  }
  double best_val_macro_f1() const {
    double best = 0.0;
    for (const auto& e : epochs) best = std::max(best, e.val_macro_f1);
    return best;
  }
  double mean_sampling_ms() const {
    if (epochs.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& e : epochs) acc += static_cast<double>(e.sampling_time_ms);
    return acc / static_cast<double>(epochs.size());
  }
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

namespace detail {

inline std::int64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

/// Trains one variant. SpanGNN grows a spanning subgraph through the
/// scheduler; DropEdge trains on a fresh uniform subset of the original
/// edges each epoch; Full trains on the whole graph. Every epoch performs one
/// full-batch gradient step and evaluates on the full-graph matrix.
inline RunResult run_training(const Graph& g, RunConfig cfg, const EpochCallback& on_epoch = {}) {
  if (g.num_edges() == 0 && cfg.baseline == Baseline::kSpanGnn) {
    throw ConfigError("SpanGNN needs a graph with at least one edge");
  }
  if (g.features().cols() == 0) throw ShapeError("graph has no node features");
  resolve_sample_sizes(cfg, g.num_edges());

  const auto train_nodes = g.nodes_in(Split::kTrain);
  const auto val_nodes = g.nodes_in(Split::kVal);
  if (train_nodes.empty()) throw TrainingError("empty train mask");
  const std::size_t classes = std::max<std::size_t>(g.num_classes(), 2);

  const PropagationKind prop_kind = propagation_for(cfg.model);
  const PropagationMatrix p_full = build_full_propagation(g, prop_kind);

  ScheduleConfig sched{cfg.alpha_up, cfg.beta, cfg.s1, cfg.s2, cfg.sampler, cfg.epochs, cfg.seed};
  EdgeProbabilities probs;
  std::optional<EpochState> state;
  if (cfg.baseline == Baseline::kSpanGnn) {
    state = init_schedule(g, sched);
    probs = make_probabilities(g, cfg.sampler, prop_kind);
  } else if (cfg.diag_every > 0 && g.num_edges() > 0) {
    probs = uniform_weights(g);
  }

  TrainState train;
  train.model = GnnModel::init(cfg.model, g.features().cols(), cfg.hidden, classes, cfg.layers, cfg.seed);
  train.learning_rate = cfg.lr;
  train.seed = cfg.seed;

  const double bytes_per_edge = cfg.bytes_per_edge > 0.0 ? cfg.bytes_per_edge : 8.0 * static_cast<double>(cfg.hidden);
  RunResult result;
  std::vector<std::size_t> active_history;
  std::size_t peak = 0;
  const std::size_t dropedge_keep =
      g.num_edges() - static_cast<std::size_t>(std::floor(cfg.beta * static_cast<double>(g.num_edges()) + 1e-9));

  for (std::size_t i = 0; i < cfg.epochs; ++i) {
    EpochMetrics m;
    m.epoch = i;

    auto t0 = std::chrono::steady_clock::now();
    std::optional<SpanningSubgraph> dropedge_sub;
    const SpanningSubgraph* sub = nullptr;
    if (state) {
      state = step_epoch(std::move(*state), g, probs, sched);
      if (state->sampling.fallback_filled > 0) ++result.fallback_epochs;
      sub = &state->subgraph;
    } else if (cfg.baseline == Baseline::kDropEdge) {
      Rng rng(derive_seed(cfg.seed, i, "dropedge"));
      dropedge_sub.emplace(g);
      for (auto e : detail::uniform_distinct(g.num_edges(), dropedge_keep, rng)) dropedge_sub->insert(e);
      sub = &*dropedge_sub;
    }
    m.sampling_time_ms = detail::elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    const PropagationMatrix p_sub = sub ? build_propagation(*sub, prop_kind) : PropagationMatrix{};
    const PropagationMatrix& p_train = sub ? p_sub : p_full;
    m.active_edges = sub ? sub->size() : g.num_edges();
    m.edge_ratio = sub ? sub->edge_ratio() : (g.num_edges() ? 1.0 : 0.0);

    const auto fwd = forward(train.model, p_train, g.features());
    const auto grads = loss_and_backward(train.model, fwd.tape, fwd.logits, g.labels(), train_nodes, p_train);
    if (!std::isfinite(grads.loss)) {
      throw NumericalError("non-finite loss at epoch " + std::to_string(i));
    }
    m.loss = grads.loss;
    train.losses.push_back(grads.loss);
    sgd_step(train, grads.gradients);
    m.train_time_ms = detail::elapsed_ms(t0);

    const auto logits = forward(train.model, p_full, g.features()).logits;
    m.train_acc = evaluate_logits(logits, g.labels(), train_nodes).accuracy;
    const auto val = evaluate_logits(logits, g.labels(), val_nodes);
    m.val_acc = val.accuracy;
    m.val_macro_f1 = val.macro_f1;

    active_history.push_back(m.active_edges);
    peak = std::max(peak, directed_edge_count(m.active_edges, g.num_nodes()));
    m.peak_edges_so_far = peak;

    if (cfg.diag_every > 0 && (i + 1) % cfg.diag_every == 0 && g.num_edges() > 0) {
      const SpanningSubgraph diag_sub = sub ? *sub : SpanningSubgraph::full(g);
      const auto noise = gradient_noise(train.model, p_full, diag_sub, g.features(), g.labels(), train_nodes);
      DiagnosticsRow d;
      d.epoch = i;
      d.noise_norms = noise.gradient_noise;
      d.z_diff_norm = noise.total_z_difference();
      d.var_xi = embedding_variance(g, probs, std::max<std::size_t>(1, m.active_edges), cfg.var_samples,
                                    g.features(), aggregation_weights(train.model), prop_kind,
                                    derive_seed(cfg.seed, i, "diag"))
                     .estimator_variance;
      d.peak_edges = peak;
      result.diagnostics.push_back(std::move(d));
    }

    result.epochs.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  result.model = std::move(train.model);
  result.memory = memory_proxy(active_history, g.num_nodes(), bytes_per_edge);
  return result;
}

// CSV schemas. metrics.csv holds only run-determined values so that equal
// configs produce byte-identical files; wall-clock timings go to timing.csv.
inline constexpr std::string_view kMetricsHeader =
    "epoch,loss,train_acc,val_acc,val_macro_f1,edge_ratio,active_edges,peak_edges_so_far";
inline constexpr std::string_view kTimingHeader = "epoch,sampling_time_ms,train_time_ms";

inline void write_metrics_row(std::ostream& out, const EpochMetrics& m) {
  out << m.epoch << ',' << format_double(m.loss) << ',' << format_double(m.train_acc) << ','
      << format_double(m.val_acc) << ',' << format_double(m.val_macro_f1) << ',' << format_double(m.edge_ratio)
      << ',' << m.active_edges << ',' << m.peak_edges_so_far << '\n';
}

inline void write_timing_row(std::ostream& out, const EpochMetrics& m) {
  out << m.epoch << ',' << m.sampling_time_ms << ',' << m.train_time_ms << '\n';
}

inline void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& m : rows) write_metrics_row(out, m);
}

inline void write_timing_csv(std::ostream& out, const std::vector<EpochMetrics>& rows) {
  out << kTimingHeader << '\n';
  for (const auto& m : rows) write_timing_row(out, m);
}

inline std::string diagnostics_header(std::size_t layers) {
  std::string h = "epoch,sampler";
  for (std::size_t l = 0; l < layers; ++l) h += ",noise_norm_l" + std::to_string(l);
  h += ",z_diff_norm,var_xi,peak_edges";
  return h;
}

inline void write_diagnostics_row(std::ostream& out, std::string_view sampler, const DiagnosticsRow& d) {
  out << d.epoch << ',' << sampler;
  for (double v : d.noise_norms) out << ',' << format_double(v);
  out << ',' << format_double(d.z_diff_norm) << ',' << format_double(d.var_xi) << ',' << d.peak_edges << '\n';
}

/// A compare variant: "spangnn-vm", "spangnn-gnr", "spangnn-uniform",
/// "dropedge" or "full", optionally followed by ":ALPHA_OR_BETA" and "@SEED".
struct Variant {
  std::string label;
  Baseline baseline = Baseline::kSpanGnn;
  SamplerKind sampler = SamplerKind::kVm;
  std::optional<double> ratio;  // alpha_up for spangnn, beta for dropedge
  std::optional<std::uint64_t> seed;

  RunConfig apply(RunConfig cfg) const {
    cfg.baseline = baseline;
    if (baseline == Baseline::kSpanGnn) cfg.sampler = sampler;
    if (ratio) (baseline == Baseline::kDropEdge ? cfg.beta : cfg.alpha_up) = *ratio;
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

inline Variant parse_variant(std::string_view text) {
  Variant v;
  v.label = std::string(trim(text));
  std::string_view rest = v.label;
  if (const auto at = rest.find('@'); at != std::string_view::npos) {
    const auto s = parse_number<std::uint64_t>(rest.substr(at + 1));
    if (!s) throw ConfigError("bad seed in variant '" + v.label + "'");
    v.seed = *s;
    rest = rest.substr(0, at);
  }
  if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
    const auto r = parse_number<double>(rest.substr(colon + 1));
    if (!r) throw ConfigError("bad ratio in variant '" + v.label + "'");
    v.ratio = *r;
    rest = rest.substr(0, colon);
  }
  if (rest == "full") {
    v.baseline = Baseline::kFull;
  } else if (rest == "dropedge") {
    v.baseline = Baseline::kDropEdge;
  } else if (rest.starts_with("spangnn-")) {
    v.baseline = Baseline::kSpanGnn;
    v.sampler = parse_sampler_kind(rest.substr(8));
  } else {
    throw ConfigError("unknown variant '" + v.label + "'");
  }
  return v;
}

struct CompareResult {
  std::vector<Variant> variants;
  std::vector<RunResult> runs;
};

/// Runs every variant sequentially on the same graph.
inline CompareResult run_compare(const Graph& g, const RunConfig& base, const std::vector<Variant>& variants) {
  if (variants.size() < 2) throw ConfigError("compare needs at least 2 variants");
  CompareResult out;
  out.variants = variants;
  for (const auto& v : variants) {
    RunConfig cfg = v.apply(base);
    out.runs.push_back(run_training(g, cfg));
  }
  return out;
}

inline constexpr std::string_view kSummaryHeader =
    "variant,best_val_acc,best_val_macro_f1,final_edge_ratio,peak_directed_edges,peak_bytes,mean_sampling_ms";

inline void write_compare_csv(std::ostream& out, const CompareResult& r) {
  out << "variant," << kMetricsHeader << '\n';
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    for (const auto& m : r.runs[i].epochs) {
      out << r.variants[i].label << ',';
      write_metrics_row(out, m);
    }
  }
}

inline void write_compare_timing_csv(std::ostream& out, const CompareResult& r) {
  out << "variant," << kTimingHeader << '\n';
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    for (const auto& m : r.runs[i].epochs) {
      out << r.variants[i].label << ',';
      write_timing_row(out, m);
    }
  }
}

inline void write_summary_csv(std::ostream& out, const CompareResult& r) {
  out << kSummaryHeader << '\n';
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto& run = r.runs[i];
    out << r.variants[i].label << ',' << format_double(run.best_val_acc()) << ','
        << format_double(run.best_val_macro_f1()) << ','
        << format_double(run.epochs.empty() ? 0.0 : run.epochs.back().edge_ratio) << ','
        << run.memory.peak_directed_edges << ',' << format_double(run.memory.bytes_estimate) << ','
        << format_fixed(run.mean_sampling_ms(), 3) << '\n';
  }
}

inline void write_compare_diagnostics_csv(std::ostream& out, const CompareResult& r, std::size_t layers) {
  out << diagnostics_header(layers) << '\n';
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    for (const auto& d : r.runs[i].diagnostics) write_diagnostics_row(out, r.variants[i].label, d);
  }
}

}  // namespace spangraph
