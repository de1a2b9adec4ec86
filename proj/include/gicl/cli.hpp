#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gicl/gicl.hpp"

namespace gicl::cli {

inline std::string fmt(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

/// Ordered key/value document, serializable as "key = value" lines or JSON.
class Document {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  template <class T>
    requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
  void add(const std::string& key, T value) {
    add(key, std::to_string(value));
  }

  void write_text(std::ostream& out) const {
    for (const auto& [k, v] : rows_) out << k << " = " << v << "\n";
  }

  void write_json(std::ostream& out) const {
    nlohmann::ordered_json doc;
    for (const auto& [k, v] : rows_) doc[k] = v;
    out << doc.dump(2) << "\n";
  }

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      write_json(out);
    } else {
      write_text(out);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

namespace detail {

inline EdgeListParseResult load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  auto result = parse_edge_list(in);
  if (result.self_loops_dropped > 0) {
    std::cerr << "warning: dropped " << result.self_loops_dropped << " self-loop(s) from " << path
              << "\n";
  }
  if (result.duplicate_edges > 0) {
    std::cerr << "warning: collapsed " << result.duplicate_edges << " duplicate edge(s) from "
              << path << "\n";
  }
  return result;
}

inline Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file: " + path);
  return read_partition(in);
}

inline void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

inline std::vector<double> parse_beta_list(const std::string& csv) {
  std::vector<double> betas;
  std::stringstream stream(csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    betas.push_back(std::stod(token));
  }
  if (betas.empty()) throw std::runtime_error("empty beta list");
  return betas;
}

struct FitFlags {
  int k_up = 20;
  int restarts = 10;
  std::uint64_t seed = 42;
  double n0 = 1.0, eta0 = 1.0, zeta0 = 1.0;
  std::string init = "kmeans";
  int kmeans_iters = 5;
  bool no_merge = false;
  bool no_merge_reentry = false;
  int max_sweeps = 300;

  void attach(CLI::App* cmd, bool with_restarts = true) {
    cmd->add_option("--k-up", k_up, "initial (upper-bound) cluster count")->check(CLI::PositiveNumber);
    if (with_restarts) {
      cmd->add_option("--restarts", restarts, "independent restarts")->check(CLI::PositiveNumber);
    }
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--prior-n0", n0, "Dirichlet hyperparameter");
    cmd->add_option("--prior-eta0", eta0, "Beta edge hyperparameter");
    cmd->add_option("--prior-zeta0", zeta0, "Beta non-edge hyperparameter");
    cmd->add_option("--init", init, "initial partition method")
        ->check(CLI::IsMember({"random", "kmeans"}));
    cmd->add_option("--kmeans-iters", kmeans_iters, "k-means assignment steps")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-merge-phase", no_merge, "skip the hierarchical merge phase");
    cmd->add_flag("--no-merge-reentry", no_merge_reentry,
                  "run the merge phase once instead of alternating with swaps");
    cmd->add_option("--max-sweeps", max_sweeps, "hard cap on swap sweeps")
        ->check(CLI::PositiveNumber);
  }

  Priors priors() const { return Priors{n0, eta0, zeta0}; }

  InitConfig init_config() const {
    InitConfig cfg;
    cfg.k_up = k_up;
    cfg.method = init == "random" ? InitConfig::Method::random : InitConfig::Method::kmeans;
    cfg.kmeans_iters = kmeans_iters;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
  }

  FitOptions fit_options() const {
    FitOptions options;
    options.merge_phase = !no_merge;
    options.merge_reentry = !no_merge_reentry;
    options.max_sweeps = max_sweeps;
    return options;
  }
};

}  // namespace detail

inline int run(const std::vector<std::string>& arguments) {
  CLI::App app{"Greedy exact-ICL clustering for directed binary networks"};
  app.require_subcommand(1);

  // ---- fit ----------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "cluster a graph by maximizing the exact ICL");
  std::string fit_graph_path;
  std::string fit_output = "gicl_fit";
  std::string fit_format = "text";
  detail::FitFlags fit_flags;
  fit->add_option("graph", fit_graph_path, "edge-list file")->required();
  fit->add_option("-o,--output", fit_output, "output prefix (.result, .partition)");
  fit->add_option("--format", fit_format, "result document format")
      ->check(CLI::IsMember({"text", "json"}));
  fit_flags.attach(fit);
  fit->callback([&]() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto loaded = detail::load_graph(fit_graph_path);
    const DirectedGraph& g = loaded.graph;
    const Priors priors = fit_flags.priors();
    const auto result = fit_with_restarts(g, priors, fit_flags.init_config(), fit_flags.fit_options());
    const auto t1 = std::chrono::steady_clock::now();

    // report the from-scratch value of the returned partition, closing the
    // loop between the fitter, the statistics module and the serialized files
    const double exact = icl_exact(compute_stats(g, result.best.partition), priors);
    const double asymptotic = icl_asymptotic(g, result.best.partition);

    Document doc;
    doc.add("command", std::string("fit"));
    doc.add("graph", fit_graph_path);
    doc.add("n_nodes", static_cast<long long>(g.n_nodes()));
    doc.add("n_edges", g.n_edges());
    doc.add("duplicate_edges", loaded.duplicate_edges);
    doc.add("self_loops_dropped", loaded.self_loops_dropped);
    doc.add("k_up", fit_flags.k_up);
    doc.add("init", fit_flags.init);
    doc.add("kmeans_iters", fit_flags.kmeans_iters);
    doc.add("restarts", fit_flags.restarts);
    doc.add("seed", fit_flags.seed);
    doc.add("prior_n0", fit_flags.n0);
    doc.add("prior_eta0", fit_flags.eta0);
    doc.add("prior_zeta0", fit_flags.zeta0);
    doc.add("merge_phase", !fit_flags.no_merge);
    doc.add("k", result.best.partition.k());
    doc.add("icl_exact", exact);
    doc.add("icl_asymptotic", asymptotic);
    doc.add("best_restart", result.best_restart);
    for (const auto& r : result.restarts) {
      const std::string prefix = "restart." + std::to_string(r.restart) + ".";
      doc.add(prefix + "icl", r.icl);
      doc.add(prefix + "k", r.k);
      doc.add(prefix + "sweeps", r.sweeps);
      doc.add(prefix + "moves", r.moves);
      doc.add(prefix + "merges", r.merges);
    }

    std::ostringstream doc_text;
    doc.write(doc_text, fit_format);
    const std::string result_path =
        fit_output + (fit_format == "json" ? ".result.json" : ".result");
    detail::save_text(result_path, doc_text.str());
    detail::save_text(fit_output + ".partition", write_partition(result.best.partition));

    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << "k = " << result.best.partition.k() << "\n"
              << "icl_exact = " << fmt(exact) << "\n"
              << "wall_time_ms = " << fmt(ms) << "\n"
              << "wrote " << result_path << " and " << fit_output << ".partition\n";
  });

  // ---- generate -------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "sample a benchmark graph from a planted model");
  SettingConfig gen_cfg;
  std::string gen_output = "gicl_graph";
  generate->add_option("--setting", gen_cfg.setting_id, "benchmark setting 1-4")
      ->required()
      ->check(CLI::Range(1, 4));
  generate->add_option("--beta", gen_cfg.beta, "strong connection probability");
  generate->add_option("--epsilon", gen_cfg.epsilon, "background connection probability");
  generate->add_option("--n-nodes", gen_cfg.n_nodes, "override node count");
  generate->add_option("--k", gen_cfg.k, "override planted cluster count");
  generate->add_option("--seed", gen_cfg.seed, "random seed");
  generate->add_option("-o,--output", gen_output, "output prefix (.edges, .planted)");
  generate->callback([&]() {
    const auto [g, planted] = sample_sbm(make_setting(gen_cfg));
    detail::save_text(gen_output + ".edges", write_edge_list(g));
    detail::save_text(gen_output + ".planted", write_partition(planted));
    std::cout << "n_nodes = " << g.n_nodes() << "\n"
              << "n_edges = " << g.n_edges() << "\n"
              << "k = " << planted.k() << "\n"
              << "wrote " << gen_output << ".edges and " << gen_output << ".planted\n";
  });

  // ---- score ----------------------------------------------------------------
  auto* score = app.add_subcommand("score", "normalized mutual information of two partitions");
  std::string score_a, score_b, score_format = "text";
  score->add_option("estimate", score_a, "partition file")->required();
  score->add_option("reference", score_b, "partition file")->required();
  score->add_option("--format", score_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  score->callback([&]() {
    const Partition a = detail::load_partition(score_a);
    const Partition b = detail::load_partition(score_b);
    const auto table = ConfusionTable::from(a, b);
    Document doc;
    doc.add("n_nodes", static_cast<long long>(a.n_nodes()));
    doc.add("k_estimate", a.k());
    doc.add("k_reference", b.k());
    doc.add("entropy_estimate", entropy(a));
    doc.add("entropy_reference", entropy(b));
    doc.add("mutual_information", mutual_information(table));
    doc.add("nmi", nmi(a, b));
    doc.write(std::cout, score_format);
  });

  // ---- icl ------------------------------------------------------------------
  auto* icl_cmd = app.add_subcommand("icl", "exact and asymptotic ICL of a partition");
  std::string icl_graph_path, icl_partition_path, icl_format = "text";
  double icl_n0 = 1.0, icl_eta0 = 1.0, icl_zeta0 = 1.0;
  icl_cmd->add_option("graph", icl_graph_path, "edge-list file")->required();
  icl_cmd->add_option("partition", icl_partition_path, "partition file")->required();
  icl_cmd->add_option("--prior-n0", icl_n0, "Dirichlet hyperparameter");
  icl_cmd->add_option("--prior-eta0", icl_eta0, "Beta edge hyperparameter");
  icl_cmd->add_option("--prior-zeta0", icl_zeta0, "Beta non-edge hyperparameter");
  icl_cmd->add_option("--format", icl_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  icl_cmd->callback([&]() {
    const auto g = detail::load_graph(icl_graph_path).graph;
    const Partition z = detail::load_partition(icl_partition_path);
    const Priors priors{icl_n0, icl_eta0, icl_zeta0};
    Document doc;
    doc.add("n_nodes", static_cast<long long>(g.n_nodes()));
    doc.add("n_edges", g.n_edges());
    doc.add("k", z.k());
    doc.add("icl_exact", icl_exact(compute_stats(g, z), priors));
    doc.add("icl_asymptotic", icl_asymptotic(g, z));
    doc.write(std::cout, icl_format);
  });

  // ---- bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "mean NMI / K over replicated planted graphs");
  SettingConfig bench_cfg;
  std::string bench_betas, bench_format = "table", bench_output;
  int bench_replicates = 20;
  detail::FitFlags bench_flags;
  bench->add_option("--setting", bench_cfg.setting_id, "benchmark setting 1-4")
      ->required()
      ->check(CLI::Range(1, 4));
  bench->add_option("--betas", bench_betas, "comma-separated beta grid (default: full sweep)");
  bench->add_option("--epsilon", bench_cfg.epsilon, "background connection probability");
  bench->add_option("--n-nodes", bench_cfg.n_nodes, "override node count");
  bench->add_option("--k", bench_cfg.k, "override planted cluster count");
  bench->add_option("--replicates", bench_replicates, "graphs per beta")->check(CLI::PositiveNumber);
  bench->add_option("--format", bench_format, "output format")
      ->check(CLI::IsMember({"table", "csv"}));
  bench->add_option("-o,--output", bench_output, "write the report to a file instead of stdout");
  bench_flags.attach(bench);
  bench->callback([&]() {
    std::vector<double> betas;
    if (!bench_betas.empty()) {
      betas = detail::parse_beta_list(bench_betas);
    } else if (bench_cfg.setting_id == 4) {
      betas = {0.45};
    } else {
      betas = beta_grid();
    }
    if (bench_cfg.setting_id == 4 && bench->count("--k-up") == 0) {
      bench_flags.k_up = 100;  // the large-scale protocol default
    }
    std::ostringstream report;
    const bool csv = bench_format == "csv";
    const bool with_std = bench_replicates > 1;
    if (csv) {
      report << "beta,replicates,mean_nmi" << (with_std ? ",std_nmi" : "") << ",mean_k,mean_time_s\n";
    } else {
      report << "beta replicates mean_nmi" << (with_std ? " std_nmi" : "") << " mean_k mean_time_s\n";
    }
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
      SettingConfig cfg = bench_cfg;
      cfg.beta = betas[bi];
      std::vector<double> nmis, ks, times;
      for (int rep = 0; rep < bench_replicates; ++rep) {
        const std::uint64_t run_tag = (static_cast<std::uint64_t>(bi) << 24) | static_cast<std::uint64_t>(rep);
        cfg.seed = mix_seed(bench_flags.seed, run_tag * 2);
        const auto [g, planted] = sample_sbm(make_setting(cfg));
        InitConfig init_cfg = bench_flags.init_config();
        init_cfg.seed = mix_seed(bench_flags.seed, run_tag * 2 + 1);
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = fit_with_restarts(g, bench_flags.priors(), init_cfg, bench_flags.fit_options());
        const auto t1 = std::chrono::steady_clock::now();
        nmis.push_back(nmi(result.best.partition, planted));
        ks.push_back(static_cast<double>(result.best.partition.k()));
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      const auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      };
      const double mean_nmi = mean(nmis);
      double std_nmi = 0.0;
      if (with_std) {
        for (double v : nmis) std_nmi += (v - mean_nmi) * (v - mean_nmi);
        std_nmi = std::sqrt(std_nmi / static_cast<double>(nmis.size() - 1));
      }
      char row[256];
      if (with_std) {
        std::snprintf(row, sizeof row, csv ? "%g,%d,%.4f,%.4f,%.2f,%.3f\n" : "%g %d %.4f %.4f %.2f %.3f\n",
                      betas[bi], bench_replicates, mean_nmi, std_nmi, mean(ks), mean(times));
      } else {
        std::snprintf(row, sizeof row, csv ? "%g,%d,%.4f,%.2f,%.3f\n" : "%g %d %.4f %.2f %.3f\n",
                      betas[bi], bench_replicates, mean_nmi, mean(ks), mean(times));
      }
      report << row;
      std::cerr << "bench: beta " << betas[bi] << " done (mean NMI " << mean_nmi << ")\n";
    }
    if (bench_output.empty()) {
      std::cout << report.str();
    } else {
      detail::save_text(bench_output, report.str());
      std::cout << "wrote " << bench_output << "\n";
    }
  });

  // ---- render -----------------------------------------------------------------
  auto* render = app.add_subcommand("render", "block-sorted adjacency raster (PGM)");
  std::string render_graph_path, render_partition_path, render_output = "adjacency.pgm";
  std::string render_format = "pgm";
  int render_cap = 5000;
  render->add_option("graph", render_graph_path, "edge-list file")->required();
  render->add_option("partition", render_partition_path, "partition file")->required();
  render->add_option("-o,--output", render_output, "image path");
  render->add_option("--cap", render_cap, "largest renderable node count")
      ->check(CLI::PositiveNumber);
  render->add_option("--format", render_format, "pgm (binary P5) or pgm-ascii (P2)")
      ->check(CLI::IsMember({"pgm", "pgm-ascii"}));
  render->callback([&]() {
    const auto g = detail::load_graph(render_graph_path).graph;
    const Partition z = detail::load_partition(render_partition_path);
    std::ofstream out(render_output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + render_output);
    render_block_adjacency(g, z, out, render_format == "pgm-ascii", render_cap);
    std::cout << "wrote " << render_output << "\n";
  });

  // ---- parse & dispatch ---------------------------------------------------------
  std::vector<const char*> argv;
  argv.push_back("gicl");
  for (const auto& a : arguments) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> arguments;
  for (int i = 1; i < argc; ++i) arguments.emplace_back(argv[i]);
  return run(arguments);
}

}  // namespace gicl::cli
