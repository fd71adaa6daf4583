// rd: regular-decomposition toolkit.
// Subcommands: generate, fit, classify, experiment, render.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regdec/classifier.hpp"
#include "regdec/graph.hpp"
#include "regdec/matching.hpp"
#include "regdec/render.hpp"
#include "regdec/serialize.hpp"
#include "regdec/solver.hpp"

namespace fs = std::filesystem;
using namespace regdec;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

// Every output directory gets a manifest tying outputs to the run.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& params, std::uint64_t seed,
                    const std::vector<std::string>& outputs, double elapsed_ms) {
  json m{{"command", command},
         {"params", params},
         {"seed", seed},
         {"outputs", outputs},
         {"elapsed_ms", elapsed_ms}};
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

Graph read_graph_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_edge_list(in, n);
}

MaskedGraph read_ternary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return load_ternary_matrix(in);
}

std::vector<std::vector<double>> density_of(const BlockStats& s) { return s.p; }

struct GenerateOpts {
  int k = 2;
  int block_size = 0;
  std::vector<int> block_sizes;
  double within = -1.0, cross = -1.0;
  bool p_uniform = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateOpts& o) {
  const auto t0 = Clock::now();
  SbmSpec spec;
  if (!o.block_sizes.empty()) {
    spec.block_sizes = o.block_sizes;
  } else {
    if (o.block_size <= 0) throw std::runtime_error("need --block-size or --block-sizes");
    spec.block_sizes.assign(o.k, o.block_size);
  }
  const int k = spec.num_blocks();
  spec.seed = o.seed;
  if (o.p_uniform) {
    spec.p = SbmSpec::uniform_random(k, 1, o.seed).p;
  } else if (o.within >= 0.0 && o.cross >= 0.0) {
    spec.p.assign(k, std::vector<double>(k, o.cross));
    for (int i = 0; i < k; ++i) spec.p[i][i] = o.within;
  } else {
    throw std::runtime_error("need --p-uniform or both --p-within and --p-cross");
  }
  spec.validate();
  if (spec.has_duplicate_rows())
    std::cerr << "warning: P has identical rows; blocks are indistinguishable\n";

  auto [g, planted] = generate_sbm(spec);
  fs::create_directories(o.out_dir);
  {
    std::ofstream os(fs::path(o.out_dir) / "graph.edges");
    write_edge_list(os, g);
  }
  {
    std::ofstream os(fs::path(o.out_dir) / "labels.csv");
    write_labels(os, planted);
  }
  write_file(fs::path(o.out_dir) / "spec.json",
             json{{"block_sizes", spec.block_sizes}, {"p", spec.p}, {"seed", spec.seed}}
                     .dump(2) +
                 "\n");
  write_manifest(o.out_dir, "generate",
                 json{{"k", k},
                      {"block_sizes", spec.block_sizes},
                      {"p_uniform", o.p_uniform},
                      {"within", o.within},
                      {"cross", o.cross}},
                 o.seed, {"graph.edges", "labels.csv", "spec.json"}, ms_since(t0));
  std::cout << "generated " << g.num_nodes() << " nodes, " << g.edge_count()
            << " edges -> " << o.out_dir << "\n";
  return 0;
}

struct FitOpts {
  std::string graph_path;
  std::string ternary_path;
  int n = 0;
  SolverConfig cfg;
  std::string out_dir = ".";
};

// A fit can leave blocks empty; compact them before building the model.
ClassifierModel build_model_from_fit(const Graph& g, const Partition& part) {
  auto sizes = part.block_sizes();
  std::vector<int> remap(part.k, -1);
  int kk = 0;
  for (int b = 0; b < part.k; ++b)
    if (sizes[b] > 0) remap[b] = kk++;
  std::vector<int> a(part.n);
  for (int i = 0; i < part.n; ++i) a[i] = remap[part.assignment[i]];
  return build_model(g, Partition(kk, std::move(a)));
}

template <class GraphT>
int run_fit(const GraphT& g, const FitOpts& o) {
  const auto t0 = Clock::now();
  FitResult fit = greedy_mdl(g, o.cfg);
  std::cout << "k    total_bits\n";
  for (auto [k, total] : fit.per_k_totals)
    std::cout << k << (k < 10 ? "    " : "   ") << total << "\n";
  std::cout << "k* = " << fit.k_star << "\n";

  const BlockStats stats = block_stats(g, fit.partition);
  fs::create_directories(o.out_dir);
  write_file(fs::path(o.out_dir) / "fit.json",
             to_json(fit, density_of(stats)).dump(2) + "\n");
  {
    std::ofstream os(fs::path(o.out_dir) / "labels.csv");
    write_labels(os, fit.partition);
  }
  // The fitted graph doubles as a sample model for out-of-sample labeling.
  if constexpr (std::is_same_v<GraphT, Graph>) {
    const ClassifierModel model = build_model_from_fit(g, fit.partition);
    write_file(fs::path(o.out_dir) / "model.json", to_json(model).dump(2) + "\n");
  }
  write_manifest(o.out_dir, "fit",
                 json{{"graph", o.graph_path.empty() ? o.ternary_path : o.graph_path},
                      {"k_min", o.cfg.k_min},
                      {"k_max", o.cfg.k_max},
                      {"restarts", o.cfg.restarts},
                      {"max_inner_iters", o.cfg.max_inner_iters},
                      {"stop_at_first_min", o.cfg.stop_at_first_minimum},
                      {"masked", !o.ternary_path.empty()}},
                 o.cfg.seed, {"fit.json", "labels.csv"}, ms_since(t0));
  return 0;
}

struct ClassifyOpts {
  std::string model_path;
  std::string graph_path;
  int n = 0;
  std::string out_dir = ".";
};

int cmd_classify(const ClassifyOpts& o) {
  const auto t0 = Clock::now();
  std::ifstream ms(o.model_path);
  if (!ms) throw std::runtime_error("cannot read " + o.model_path);
  const ClassifierModel model = model_from_json(json::parse(ms));
  const Graph g = read_graph_file(o.graph_path, o.n);
  for (int id : model.sample_ids)
    if (id < 0 || id >= g.num_nodes())
      throw std::runtime_error("model sample node " + std::to_string(id) +
                               " not in graph");
  const auto t1 = Clock::now();
  const Partition labels = extend_partition(g, model);
  const double classify_ms = ms_since(t1);
  fs::create_directories(o.out_dir);
  {
    std::ofstream os(fs::path(o.out_dir) / "labels.csv");
    write_labels(os, labels);
  }
  const int classified = g.num_nodes() - model.sample_size();
  std::cout << "classified " << classified << " nodes in " << classify_ms << " ms ("
            << (classified > 0 ? classify_ms / classified : 0.0) << " ms/node)\n";
  write_manifest(o.out_dir, "classify",
                 json{{"model", o.model_path},
                      {"graph", o.graph_path},
                      {"n", o.n},
                      {"classify_ms", classify_ms},
                      {"nodes_classified", classified}},
                 0, {"labels.csv"}, ms_since(t0));
  return 0;
}

struct ExperimentOpts {
  std::string kind;
  int k = 10;
  int block_size = 200;
  std::vector<int> n0_list = {50, 100, 150, 200};
  int trials = 10;
  int instances = 100;
  double within = 0.8, cross = 0.1;
  bool p_uniform = true;
  int k_max = 8;
  int restarts = 10;
  std::vector<double> q_list = {0.0, 0.2, 0.4, 0.6};
  bool fit_sample = false;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir = ".";
};

int cmd_experiment(const ExperimentOpts& o) {
  const auto t0 = Clock::now();
  fs::create_directories(o.out_dir);
  SbmSpec spec;
  spec.block_sizes.assign(o.k, o.block_size);
  spec.seed = o.seed;
  if (o.p_uniform)
    spec.p = SbmSpec::uniform_random(o.k, 1, o.seed).p;
  else
    spec.p = SbmSpec::planted(o.k, o.block_size, o.within, o.cross, o.seed).p;
  std::vector<std::string> outputs;

  if (o.kind == "success-curve") {
    SolverConfig scfg;
    scfg.restarts = o.restarts;
    scfg.seed = o.seed;
    scfg.threads = o.threads;
    const auto pts = success_curve(spec, o.n0_list, o.trials, o.instances, o.seed,
                                   o.fit_sample, scfg);
    std::ofstream os(fs::path(o.out_dir) / "success_curve.csv");
    write_success_csv(os, pts);
    for (const auto& p : pts)
      std::cout << "n0=" << p.n0 << " success=" << p.success << "\n";
    outputs.push_back("success_curve.csv");
  } else if (o.kind == "mdl-scan") {
    auto [g, planted] = generate_sbm(spec);
    SolverConfig cfg;
    cfg.restarts = o.restarts;
    cfg.k_min = 1;
    cfg.k_max = o.k_max;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const FitResult fit = greedy_mdl(g, cfg);
    std::ofstream os(fs::path(o.out_dir) / "mdl_scan.csv");
    os << "k,total_bits\n";
    for (auto [k, total] : fit.per_k_totals) os << k << "," << total << "\n";
    std::cout << "k* = " << fit.k_star << " (planted " << o.k << ")\n";
    outputs.push_back("mdl_scan.csv");
  } else if (o.kind == "missing-sweep") {
    auto [g, planted] = generate_sbm(spec);
    SolverConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    std::ofstream os(fs::path(o.out_dir) / "missing_sweep.csv");
    os << "q,agreement\n";
    for (double q : o.q_list) {
      const MaskedGraph m = drop_links(g, q, o.seed + 1);
      const ArgmaxResult r = argmax_k(m, o.k, cfg);
      const double agree = match_partitions(r.partition, planted).agreement;
      os << q << "," << agree << "\n";
      std::cout << "q=" << q << " agreement=" << agree << "\n";
    }
    outputs.push_back("missing_sweep.csv");
  } else {
    throw CLI::ValidationError("unknown experiment kind: " + o.kind);
  }
  write_manifest(o.out_dir, "experiment",
                 json{{"kind", o.kind},
                      {"k", o.k},
                      {"block_size", o.block_size},
                      {"trials", o.trials},
                      {"instances", o.instances}},
                 o.seed, outputs, ms_since(t0));
  return 0;
}

struct RenderOpts {
  std::string graph_path;
  std::string ternary_path;
  std::string labels_path;
  int n = 0;
  std::string out_path = "render.pgm";
};

int cmd_render(const RenderOpts& o) {
  std::ifstream ls(o.labels_path);
  if (!ls) throw std::runtime_error("cannot read " + o.labels_path);
  const Partition labels = read_labels(ls);
  std::ofstream os(o.out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + o.out_path);
  if (!o.ternary_path.empty()) {
    render_pgm(os, read_ternary_file(o.ternary_path), labels);
  } else {
    render_pgm(os, read_graph_file(o.graph_path, o.n > 0 ? o.n : labels.n), labels);
  }
  std::cout << "wrote " << o.out_path << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular decomposition of dense graphs: MDL block-model fitting,\n"
               "missing-data tolerance and sample-based scaling."};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* cgen = app.add_subcommand("generate", "draw a graph from a block model");
  cgen->add_option("--k", gen.k, "number of blocks");
  cgen->add_option("--block-size", gen.block_size, "common block size");
  cgen->add_option("--block-sizes", gen.block_sizes, "per-block sizes");
  cgen->add_option("--p-within", gen.within, "within-block link probability");
  cgen->add_option("--p-cross", gen.cross, "cross-block link probability");
  cgen->add_flag("--p-uniform", gen.p_uniform, "draw P entries i.i.d. Uniform(0,1)");
  cgen->add_option("--seed", gen.seed, "RNG seed")->required();
  cgen->add_option("--out-dir", gen.out_dir, "output directory");

  FitOpts fit;
  auto* cfit = app.add_subcommand("fit", "greedy two-part MDL fit");
  cfit->add_option("--graph", fit.graph_path, "edge-list file");
  cfit->add_option("--ternary", fit.ternary_path, "ternary CSV (masked fit)");
  cfit->add_option("--n", fit.n, "node count (edge-list input)");
  cfit->add_option("--k-min", fit.cfg.k_min, "scan lower bound");
  cfit->add_option("--k-max", fit.cfg.k_max, "scan upper bound");
  cfit->add_option("--restarts", fit.cfg.restarts, "restarts per k");
  cfit->add_option("--max-inner-iters", fit.cfg.max_inner_iters, "iteration cap");
  cfit->add_flag("--stop-at-first-min", fit.cfg.stop_at_first_minimum,
                 "stop the scan at the first minimum");
  cfit->add_option("--seed", fit.cfg.seed, "RNG seed")->required();
  cfit->add_option("--threads", fit.cfg.threads, "parallel restarts (0 = auto)");
  cfit->add_option("--out-dir", fit.out_dir, "output directory");

  ClassifyOpts cls;
  auto* ccls = app.add_subcommand("classify", "label all nodes from a sample model");
  ccls->add_option("--model", cls.model_path, "model JSON from fit")->required();
  ccls->add_option("--graph", cls.graph_path, "edge-list file")->required();
  ccls->add_option("--n", cls.n, "node count")->required();
  ccls->add_option("--out-dir", cls.out_dir, "output directory");

  ExperimentOpts exp;
  auto* cexp = app.add_subcommand("experiment", "seeded experiment harnesses");
  cexp->add_option("--kind", exp.kind, "success-curve | mdl-scan | missing-sweep")
      ->required();
  cexp->add_option("--k", exp.k, "number of blocks");
  cexp->add_option("--block-size", exp.block_size, "block size");
  cexp->add_option("--n0-list", exp.n0_list, "sample sizes (success-curve)");
  cexp->add_option("--trials", exp.trials, "trials per point");
  cexp->add_option("--instances", exp.instances, "classification instances per trial");
  cexp->add_option("--p-within", exp.within, "within-block probability");
  cexp->add_option("--p-cross", exp.cross, "cross-block probability");
  bool planted_p = false;
  cexp->add_flag("--p-planted", planted_p, "use within/cross P instead of uniform");
  cexp->add_option("--k-max", exp.k_max, "scan upper bound (mdl-scan)");
  cexp->add_option("--restarts", exp.restarts, "solver restarts");
  cexp->add_option("--q-list", exp.q_list, "missing fractions (missing-sweep)");
  cexp->add_flag("--fit-sample", exp.fit_sample,
                 "label the sample by the MDL fit instead of planted labels");
  cexp->add_option("--seed", exp.seed, "RNG seed")->required();
  cexp->add_option("--threads", exp.threads, "parallel restarts (0 = auto)");
  cexp->add_option("--out-dir", exp.out_dir, "output directory");

  RenderOpts ren;
  auto* cren = app.add_subcommand("render", "block-sorted adjacency heatmap (PGM)");
  cren->add_option("--graph", ren.graph_path, "edge-list file");
  cren->add_option("--ternary", ren.ternary_path, "ternary CSV");
  cren->add_option("--labels", ren.labels_path, "label CSV")->required();
  cren->add_option("--n", ren.n, "node count (edge-list input)");
  cren->add_option("--out", ren.out_path, "output PGM path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1; // any parse failure is a usage error
  }

  try {
    if (*cgen) return cmd_generate(gen);
    if (*cfit) {
      if (!fit.ternary_path.empty()) return run_fit(read_ternary_file(fit.ternary_path), fit);
      if (fit.graph_path.empty() || fit.n <= 0)
        throw CLI::ValidationError("fit needs --ternary, or --graph with --n");
      return run_fit(read_graph_file(fit.graph_path, fit.n), fit);
    }
    if (*ccls) return cmd_classify(cls);
    if (*cexp) {
      exp.p_uniform = !planted_p;
      return cmd_experiment(exp);
    }
    if (*cren) return cmd_render(ren);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
