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

// spangraph command-line entry point: train, compare, sample-inspect,
// bench-sampling, gen-data.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spangraph/spangraph.hpp"

namespace {

using namespace spangraph;

// Run settings exposed as flags; each maps onto a RunConfig key.
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"--alpha-up", "upper bound on the edge ratio"},
    {"--beta", "fraction of edges dropped when the cap is hit (DropEdge: fraction removed)"},
    {"--s1", "first-step pool size (0 = |E|/10)"},
    {"--s2", "edges selected per epoch (0 = s1/5)"},
    {"--sampler", "edge weights: vm, gnr, uniform"},
    {"--baseline", "spangnn, dropedge, full"},
    {"--model", "gcn or sage"},
    {"--layers", "number of layers"},
    {"--hidden", "hidden dimension"},
    {"--lr", "learning rate"},
    {"--epochs", "training epochs"},
    {"--seed", "run seed"},
    {"--out", "output directory"},
    {"--data", "dataset directory (edges.txt, features.csv, labels.txt, splits.txt)"},
    {"--edges", "edge list path"},
    {"--features", "feature file path"},
    {"--labels", "label file path"},
    {"--splits", "split file path"},
    {"--diag-every", "diagnostics interval in epochs (0 = off)"},
    {"--var-samples", "Monte-Carlo samples for the variance diagnostic"},
};

struct RunFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> overrides;  // --set key=value

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    for (const auto& [flag, help] : kRunFlags) app->add_option(flag, values[flag], help);
    app->add_option("--set", overrides, "extra key=value setting (repeatable)");
  }

  // Config file first, then flags.
  RunConfig resolve(const CLI::App* app) const {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
      apply_setting(cfg, o.substr(0, eq), o.substr(eq + 1));
    }
    for (const auto& [flag, value] : values) {
      if (app->count(flag) > 0) apply_setting(cfg, flag.substr(2), value);
    }
    validate(cfg);
    return cfg;
  }
};

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

int cmd_train(const RunConfig& cfg) {
  const Graph g = load_run_graph(cfg);
  std::filesystem::create_directories(cfg.out);
  std::cerr << "graph: " << g.num_nodes() << " nodes, " << g.num_edges() << " edges, " << g.num_classes()
            << " classes\n";
  const auto run = run_training(g, cfg, [](const EpochMetrics& m) {
    if (m.epoch % 10 == 0) {
      std::cerr << "epoch " << m.epoch << " loss " << format_fixed(m.loss, 4) << " val_acc "
                << format_fixed(m.val_acc, 4) << " edge_ratio " << format_fixed(m.edge_ratio, 4) << '\n';
    }
  });
  {
    auto out = open_out(cfg.out / "metrics.csv");
    write_metrics_csv(out, run.epochs);
  }
  {
    auto out = open_out(cfg.out / "timing.csv");
    write_timing_csv(out, run.epochs);
  }
  if (!run.diagnostics.empty()) {
    auto out = open_out(cfg.out / "diagnostics.csv");
    out << diagnostics_header(run.model.num_layers()) << '\n';
    const std::string label = cfg.baseline == Baseline::kSpanGnn
                                  ? "spangnn-" + std::string(to_string(cfg.sampler))
                                  : std::string(to_string(cfg.baseline));
    for (const auto& d : run.diagnostics) write_diagnostics_row(out, label, d);
  }
  save_weights(run.model.weights, cfg.out / "weights.spgw");
  if (run.fallback_epochs > 0) {
    std::cerr << "warning: weighted sampling fell back to uniform fill in " << run.fallback_epochs
              << " epochs (skewed weights)\n";
  }
  std::cout << "best_val_acc " << format_fixed(run.best_val_acc(), 4) << "\nbest_val_macro_f1 "
            << format_fixed(run.best_val_macro_f1(), 4) << "\npeak_directed_edges "
            << run.memory.peak_directed_edges << "\npeak_bytes_estimate " << format_double(run.memory.bytes_estimate)
            << '\n';
  return 0;
}

int cmd_compare(RunConfig cfg, const std::vector<std::string>& variant_specs) {
  std::vector<Variant> variants;
  for (const auto& v : variant_specs) variants.push_back(parse_variant(v));
  if (cfg.diag_every == 0) cfg.diag_every = 10;
  const Graph g = load_run_graph(cfg);
  std::filesystem::create_directories(cfg.out);
  const auto result = run_compare(g, cfg, variants);
  {
    auto out = open_out(cfg.out / "compare.csv");
    write_compare_csv(out, result);
  }
  {
    auto out = open_out(cfg.out / "compare_timing.csv");
    write_compare_timing_csv(out, result);
  }
  {
    auto out = open_out(cfg.out / "summary.csv");
    write_summary_csv(out, result);
  }
  {
    auto out = open_out(cfg.out / "diagnostics.csv");
    write_compare_diagnostics_csv(out, result, cfg.layers);
  }
  write_summary_csv(std::cout, result);
  return 0;
}

struct InspectOptions {
  std::string edges;
  std::string data;
  std::string sampler = "vm";
  std::string model = "gcn";
  std::string out;
};

int cmd_sample_inspect(const InspectOptions& o) {
  std::filesystem::path edge_path = o.edges;
  if (edge_path.empty()) {
    if (o.data.empty()) throw ConfigError("sample-inspect needs --edges or --data");
    edge_path = DatasetPaths::in(o.data).edges;
  }
  const Graph g = load_topology(edge_path);
  const auto probs = make_probabilities(g, parse_sampler_kind(o.sampler), propagation_for(parse_layer_type(o.model)));
  std::ofstream file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "edge_index,u,v,weight,normalized_prob\n";
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    out << i << ',' << e.u << ',' << e.v << ',' << format_double(probs.weights()[i]) << ','
        << format_double(probs.probability(static_cast<EdgeId>(i))) << '\n';
  }
  return 0;
}

struct BenchOptions {
  std::size_t num_edges = 1000000;
  std::size_t num_nodes = 0;
  std::size_t s1 = 10000;
  std::size_t s2 = 1000;
  std::size_t runs = 9;
  std::string sampler = "vm";
  std::uint64_t seed = 0;
};

int cmd_bench_sampling(const BenchOptions& o) {
  const std::size_t nodes = o.num_nodes ? o.num_nodes : std::max<std::size_t>(o.num_edges / 5, 64);
  const Graph g = random_graph(nodes, o.num_edges, o.seed);
  const auto probs = make_probabilities(g, parse_sampler_kind(o.sampler), PropagationKind::kGcnSymmetric);
  const auto b = bench_sampling(g, probs, o.s1, o.s2, o.runs, o.seed);
  std::cout << "method,run,time_ms\n";
  for (std::size_t r = 0; r < b.direct_ms.size(); ++r) {
    std::cout << "direct," << r << ',' << format_fixed(b.direct_ms[r], 4) << '\n';
    std::cout << "two_step," << r << ',' << format_fixed(b.two_step_ms[r], 4) << '\n';
  }
  std::cerr << "edges " << g.num_edges() << " s1 " << o.s1 << " s2 " << o.s2 << " median_direct_ms "
            << format_fixed(b.median_direct_ms(), 4) << " median_two_step_ms " << format_fixed(b.median_two_step_ms(), 4)
            << " speedup " << format_fixed(b.speedup(), 2) << '\n';
  return 0;
}

struct GenOptions {
  SyntheticSpec spec;
  std::string kind = "sbm";
  std::string out = "data";
  bool binary_features = false;
};

int cmd_gen_data(GenOptions o) {
  o.spec.kind = parse_synthetic_kind(o.kind);
  const Graph g = generate_synthetic(o.spec);
  const auto paths = write_dataset(g, o.out);
  if (o.binary_features) {
    std::filesystem::remove(paths.features);
    write_features_binary(g.features(), std::filesystem::path(o.out) / "features.bin");
  }
  std::cerr << "wrote " << g.num_nodes() << " nodes, " << g.num_edges() << " edges to " << o.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning-subgraph GNN training"};
  app.require_subcommand(1);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "train one variant, write metrics.csv and weights.spgw");
  train_flags.attach(train);

  RunFlags compare_flags;
  std::vector<std::string> variants;
  auto* compare = app.add_subcommand("compare", "train several variants and emit aligned CSVs");
  compare_flags.attach(compare);
  compare->add_option("--variants", variants, "e.g. spangnn-vm spangnn-gnr dropedge full (name[:ratio][@seed])")
      ->delimiter(',')
      ->required();

  InspectOptions inspect_opts;
  auto* inspect = app.add_subcommand("sample-inspect", "print per-edge sampling weights as CSV");
  inspect->add_option("--edges", inspect_opts.edges, "edge list path");
  inspect->add_option("--data", inspect_opts.data, "dataset directory");
  inspect->add_option("--sampler", inspect_opts.sampler, "vm, gnr, uniform");
  inspect->add_option("--model", inspect_opts.model, "gcn or sage (propagation used by gnr)");
  inspect->add_option("--out", inspect_opts.out, "output CSV (default stdout)");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench-sampling", "time direct vs two-step sampling");
  bench->add_option("--num-edges", bench_opts.num_edges, "edges in the synthetic graph");
  bench->add_option("--num-nodes", bench_opts.num_nodes, "nodes (default num-edges / 5)");
  bench->add_option("--s1", bench_opts.s1, "first-step pool size");
  bench->add_option("--s2", bench_opts.s2, "second-step size");
  bench->add_option("--runs", bench_opts.runs, "timed repetitions");
  bench->add_option("--sampler", bench_opts.sampler, "vm, gnr, uniform");
  bench->add_option("--seed", bench_opts.seed, "seed");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen->add_option("--kind", gen_opts.kind, "sbm or pa");
  gen->add_option("--nodes", gen_opts.spec.nodes, "node count");
  gen->add_option("--classes", gen_opts.spec.classes, "class / block count");
  gen->add_option("--feature-dim", gen_opts.spec.feature_dim, "feature dimension");
  gen->add_option("--p-in", gen_opts.spec.p_in, "sbm within-block probability");
  gen->add_option("--p-out", gen_opts.spec.p_out, "sbm between-block probability");
  gen->add_option("--pa-edges", gen_opts.spec.pa_edges, "pa edges per new node");
  gen->add_option("--signal", gen_opts.spec.feature_signal, "centroid scale");
  gen->add_option("--noise", gen_opts.spec.feature_noise, "feature noise std-dev");
  gen->add_option("--seed", gen_opts.spec.seed, "seed");
  gen->add_option("--out", gen_opts.out, "output directory");
  gen->add_flag("--binary-features", gen_opts.binary_features, "write features.bin (SPGF) instead of CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*train) return cmd_train(train_flags.resolve(train));
    if (*compare) return cmd_compare(compare_flags.resolve(compare), variants);
    if (*inspect) return cmd_sample_inspect(inspect_opts);
    if (*bench) return cmd_bench_sampling(bench_opts);
    if (*gen) return cmd_gen_data(gen_opts);
  } catch (const spangraph::Error& e) {
    std::cerr << e.what() << '\n';
    return spangraph::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
