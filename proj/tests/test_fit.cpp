#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "gicl/fit.hpp"
#include "gicl/graph.hpp"
#include "gicl/init.hpp"
#include "gicl/merge.hpp"
#include "gicl/metrics.hpp"
#include "gicl/partition.hpp"
#include "gicl/rng.hpp"
#include "gicl/stats.hpp"
#include "gicl/synth.hpp"
#include "oracle.hpp"

using gicl::DirectedGraph;
using gicl::FitState;
using gicl::Partition;
using gicl::Priors;

namespace {
constexpr double kToyCase2Delta = 2.5130775267546968;  // ln(1296/105)

DirectedGraph toy() { return gicl::parse_edge_list("0 1\n1 2\n").graph; }

bool stats_match(const FitState& state) {
  const auto tracked = state.stats();
  const auto fresh = gicl::compute_stats(state.graph(), state.partition());
  return tracked.k == fresh.k && tracked.sizes == fresh.sizes &&
         tracked.edge_counts == fresh.edge_counts;
}
}  // namespace

TEST_SUITE_BEGIN("fit");

TEST_CASE("case-2 swap delta on the toy graph") {
  const auto g = toy();
  FitState state(g, Partition({0, 0, 1}, 2), Priors::uniform(), 1);
  const auto d = gicl::delta_swap(state, 2, 0);
  CHECK(d.empties_source);
  CHECK(d.delta == doctest::Approx(kToyCase2Delta).epsilon(1e-9));

  gicl::apply_swap(state, 2, 0, d.delta);
  CHECK(state.k() == 1);
  CHECK(state.cluster_size(0) == 3);
  CHECK(state.edge_count(0, 0) == 2);
  CHECK(stats_match(state));
  CHECK(std::abs(state.icl() - state.recompute_icl()) <= 1e-8);
}

TEST_CASE("swap arguments are validated") {
  const auto g = toy();
  FitState state(g, Partition({0, 0, 1}, 2), Priors::uniform(), 1);
  CHECK_THROWS_AS(gicl::delta_swap(state, 2, 1), std::invalid_argument);  // h == g
  CHECK_THROWS_AS(gicl::delta_swap(state, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(gicl::delta_swap(state, 9, 0), std::invalid_argument);
}

TEST_CASE("incremental deltas equal from-scratch recomputation") {
  gicl::Rng rng(42);
  int case1 = 0, case2 = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(25));
    const auto g = oracle::er_graph(n, 0.1 + 0.5 * (trial % 4) / 4.0,
                                    3000 + static_cast<std::uint64_t>(trial));
    const int k = 2 + static_cast<int>(rng.below(5));
    const Partition z = oracle::random_partition(n, std::min(k, n), rng);
    const double prior = std::vector<double>{0.5, 1.0, 2.0}[trial % 3];
    const Priors p{prior, prior, prior};
    FitState state(g, z, p, 10 + static_cast<std::uint64_t>(trial));

    const double before = oracle::icl_exact_direct(g, z, p);
    for (int probe = 0; probe < 4; ++probe) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int gcl = state.label(i);
      if (state.k() < 2) break;
      int h = static_cast<int>(rng.below(static_cast<std::uint64_t>(state.k())));
      if (h == gcl) h = (h + 1) % state.k();

      const auto d = gicl::delta_swap(state, i, h);
      // scratch: move i, compact if the source empties
      std::vector<int> after(state.partition().labels());
      after[static_cast<std::size_t>(i)] = h;
      const Partition za = Partition::from_labels(after);
      const double scratch =
          oracle::icl_exact_direct(g, za, p) - oracle::icl_exact_direct(g, state.partition(), p);
      CHECK(std::abs(d.delta - scratch) <= 1e-8);
      (d.empties_source ? case2 : case1) += 1;
    }
    (void)before;
  }
  CHECK(case1 > 50);
  CHECK(case2 > 5);
}

TEST_CASE("a swap and its inverse restore state") {
  const auto g = oracle::er_graph(12, 0.3, 77);
  gicl::Rng rng(5);
  const Partition z = oracle::random_partition(12, 3, rng);
  FitState state(g, z, Priors::uniform(), 9);
  const auto before_labels = state.partition().labels();
  const double before_icl = state.icl();

  // pick a node whose cluster has >= 2 members so both moves are Case 1
  int node = -1;
  for (int i = 0; i < 12; ++i) {
    if (state.cluster_size(state.label(i)) > 1) {
      node = i;
      break;
    }
  }
  REQUIRE(node >= 0);
  const int from = state.label(node);
  const int to = (from + 1) % state.k();
  const auto d1 = gicl::delta_swap(state, node, to);
  gicl::apply_swap(state, node, to, d1.delta);
  const auto d2 = gicl::delta_swap(state, node, from);
  gicl::apply_swap(state, node, from, d2.delta);

  CHECK(state.partition().labels() == before_labels);
  CHECK(std::abs(state.icl() - before_icl) <= 1e-8);
  CHECK(stats_match(state));
}

TEST_CASE("conservation invariants hold after random accepted moves") {
  const auto g = oracle::er_graph(30, 0.15, 123);
  gicl::Rng rng(55);
  const Partition z = oracle::random_partition(30, 6, rng);
  FitState state(g, z, Priors::jeffreys(), 2024);
  for (int step = 0; step < 200 && state.k() > 1; ++step) {
    const int i = static_cast<int>(rng.below(30));
    int h = static_cast<int>(rng.below(static_cast<std::uint64_t>(state.k())));
    if (h == state.label(i)) continue;
    const auto d = gicl::delta_swap(state, i, h);
    gicl::apply_swap(state, i, h, d.delta);

    long long size_total = 0;
    for (int c = 0; c < state.k(); ++c) size_total += state.cluster_size(c);
    CHECK(size_total == 30);
    long long edge_total = 0, pair_total = 0;
    const auto s = state.stats();
    for (int a = 0; a < s.k; ++a) {
      for (int b = 0; b < s.k; ++b) {
        edge_total += s.e(a, b);
        pair_total += s.pairs(a, b);
      }
    }
    CHECK(edge_total == g.n_edges());
    CHECK(pair_total == 30LL * 29LL);
  }
  CHECK(std::abs(state.icl() - state.recompute_icl()) <= 1e-8);
  CHECK(stats_match(state));
}

TEST_CASE("sweep accepts nothing at a local maximum and when K is 1") {
  // two dense cliques, perfectly separated: the planted split is locally optimal
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) {
        edges.emplace_back(i, j);
        edges.emplace_back(4 + i, 4 + j);
      }
    }
  }
  const auto g = DirectedGraph::from_edges(8, std::move(edges));
  FitState state(g, Partition({0, 0, 0, 0, 1, 1, 1, 1}, 2), Priors::uniform(), 3);
  CHECK(gicl::greedy_sweep(state) == 0);

  FitState single(g, Partition(std::vector<int>(8, 0), 1), Priors::uniform(), 3);
  CHECK(gicl::greedy_sweep(single) == 0);
  CHECK(single.k() == 1);
}

TEST_CASE("icl never decreases across sweeps") {
  const auto g = oracle::er_graph(40, 0.2, 321);
  const Partition z0 = gicl::random_init(40, 8, 7);
  FitState state(g, z0, Priors::uniform(), 7);
  double last = state.icl();
  for (int pass = 0; pass < 10; ++pass) {
    const long long moves = gicl::greedy_sweep(state);
    CHECK(state.icl() >= last - 1e-12);
    last = state.icl();
    if (moves == 0) break;
  }
  CHECK(std::abs(state.icl() - state.recompute_icl()) <= 1e-8);
}

TEST_CASE("greedy_fit on an edgeless graph stays consistent") {
  const auto g = DirectedGraph::from_edges(10, {});
  const auto result = gicl::greedy_fit(g, gicl::random_init(10, 4, 2), Priors::uniform(), 2);
  CHECK(result.trace.back().moves == 0);
  const double fresh =
      gicl::icl_exact(gicl::compute_stats(g, result.partition), Priors::uniform());
  CHECK(std::abs(result.icl - fresh) <= 1e-8);
}

TEST_CASE("greedy_fit is deterministic") {
  const auto g = oracle::er_graph(35, 0.25, 654);
  const Partition z0 = gicl::random_init(35, 10, 31);
  const auto a = gicl::greedy_fit(g, z0, Priors::uniform(), 99);
  const auto b = gicl::greedy_fit(g, z0, Priors::uniform(), 99);
  CHECK(a.partition.labels() == b.partition.labels());
  CHECK(a.icl == b.icl);
  CHECK(a.sweeps == b.sweeps);
}

TEST_CASE("greedy_fit rejects an invalid start") {
  const auto g = toy();
  CHECK_THROWS_AS(gicl::random_init(3, 0, 1), std::invalid_argument);
}

TEST_CASE("moving a correctly-placed node out of its planted community degrades the icl") {
  int instances_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    gicl::SettingConfig cfg;
    cfg.setting_id = 1;
    cfg.beta = 0.45;
    cfg.seed = seed;
    const auto [g, planted] = gicl::sample_sbm(gicl::make_setting(cfg));
    FitState state(g, planted, Priors::uniform(), seed);
    bool all_negative = true;
    gicl::Rng rng(seed);
    for (int probe = 0; probe < 5; ++probe) {
      const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n_nodes())));
      const auto best = state.best_swap(i);
      all_negative = all_negative && best.delta < 0.0;
    }
    instances_ok += all_negative ? 1 : 0;
  }
  CHECK(instances_ok >= 19);
}

TEST_CASE("the first sweep strictly increases the icl from a k-means start") {
  gicl::SettingConfig cfg;
  cfg.setting_id = 1;
  cfg.beta = 0.45;
  cfg.seed = 8;
  const auto [g, planted] = gicl::sample_sbm(gicl::make_setting(cfg));
  const Partition z0 = gicl::kmeans_init(g, 20, 5, 8);
  FitState state(g, z0, Priors::uniform(), 8);
  const double before = state.icl();
  const long long moves = gicl::greedy_sweep(state);
  CHECK(moves > 0);
  CHECK(state.icl() > before);
}

TEST_CASE("a single Setting-1 fit recovers the planted communities") {
  gicl::SettingConfig cfg;
  cfg.setting_id = 1;
  cfg.beta = 0.45;
  cfg.seed = 15;
  const auto [g, planted] = gicl::sample_sbm(gicl::make_setting(cfg));
  gicl::InitConfig init_cfg;
  init_cfg.k_up = 20;
  init_cfg.restarts = 5;
  init_cfg.seed = 16;
  const auto fit = gicl::fit_with_restarts(g, Priors::uniform(), init_cfg);
  CHECK(fit.best.partition.k() == 5);
  CHECK(gicl::nmi(fit.best.partition, planted) >= 0.99);
}

TEST_CASE("greedy_fit never exceeds the enumeration maximum on small graphs") {
  const Priors p = Priors::uniform();
  for (int n : {7, 8}) {
    const auto partitions = oracle::set_partitions(n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = oracle::er_graph(n, 0.3 + 0.05 * static_cast<double>(seed), 600 + seed);
      double best = -1e300;
      for (const auto& labels : partitions) {
        const int k = 1 + *std::max_element(labels.begin(), labels.end());
        best = std::max(best, oracle::icl_exact_direct(g, labels, k, p));
      }
      const auto fit = gicl::greedy_fit(g, gicl::random_init(n, n, seed), p, seed);
      CHECK(fit.icl <= best + 1e-9);
    }
  }
}

TEST_CASE("a 6-node two-clique instance reaches the enumeration optimum") {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) {
        edges.emplace_back(i, j);
        edges.emplace_back(3 + i, 3 + j);
      }
    }
  }
  const auto g = DirectedGraph::from_edges(6, std::move(edges));
  const Priors p = Priors::uniform();
  double best = -1e300;
  for (const auto& labels : oracle::set_partitions(6)) {
    const Partition z = Partition::from_labels(labels);
    best = std::max(best, oracle::icl_exact_direct(g, z, p));
  }
  gicl::InitConfig cfg;
  cfg.k_up = 6;
  cfg.method = gicl::InitConfig::Method::random;
  cfg.restarts = 50;
  cfg.seed = 4;
  const auto result = gicl::fit_with_restarts(g, p, cfg);
  CHECK(result.best.icl <= best + 1e-9);
  CHECK(result.best.icl == doctest::Approx(best).epsilon(1e-9));
  CHECK(result.best.partition.k() == 2);
}

TEST_SUITE_END();
