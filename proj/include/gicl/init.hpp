#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gicl/fit.hpp"
#include "gicl/graph.hpp"
#include "gicl/merge.hpp"
#include "gicl/partition.hpp"
#include "gicl/rng.hpp"

namespace gicl {

struct InitConfig {
  enum class Method { random, kmeans };

  int k_up = 20;
  Method method = Method::kmeans;
  int kmeans_iters = 5;
  int restarts = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (k_up < 1) throw std::invalid_argument("InitConfig: k_up must be >= 1");
    if (restarts < 1) throw std::invalid_argument("InitConfig: restarts must be >= 1");
    if (kmeans_iters < 1) throw std::invalid_argument("InitConfig: kmeans_iters must be >= 1");
  }
};

/// Uniform random labels over k_up clusters; unused labels are compacted.
inline Partition random_init(int n_nodes, int k_up, std::uint64_t seed) {
  if (k_up < 1) throw std::invalid_argument("random_init: k_up must be >= 1");
  if (n_nodes < 1) throw std::invalid_argument("random_init: no nodes");
  Rng rng(mix_seed(seed, 0));
  std::vector<int> labels(static_cast<std::size_t>(n_nodes));
  for (int& c : labels) c = rng.below_int(k_up);
  return Partition::from_labels(labels);
}

// Mini k-means on the concatenated out-row / in-column incidence vectors
// (dimension 2N, handled sparsely). Centers are seeded k-means++ style;
// `iters` counts assignment steps, with a mean update between consecutive
// ones. Meant as a cheap structured starting point, not a full clustering.
inline Partition kmeans_init(const DirectedGraph& g, int k_up, int iters, std::uint64_t seed) {
  if (k_up < 1) throw std::invalid_argument("kmeans_init: k_up must be >= 1");
  if (iters < 1) throw std::invalid_argument("kmeans_init: iters must be >= 1");
  const int n = g.n_nodes();
  if (n < 1) throw std::invalid_argument("kmeans_init: empty graph");
  if (k_up > n) {
    std::cerr << "kmeans_init: k_up " << k_up << " clamped to node count " << n << "\n";
    k_up = n;
  }
  Rng rng(mix_seed(seed, 1));
  const std::size_t dim = 2 * static_cast<std::size_t>(n);

  const auto point_norm2 = [&](int i) { return static_cast<double>(g.degree(i)); };
  const auto point_overlap = [&](int a, int b) {
    long long shared = 0;
    const auto count = [&shared](std::span<const int> x, std::span<const int> y) {
      std::size_t p = 0, q = 0;
      while (p < x.size() && q < y.size()) {
        if (x[p] == y[q]) {
          ++shared;
          ++p;
          ++q;
        } else if (x[p] < y[q]) {
          ++p;
        } else {
          ++q;
        }
      }
    };
    count(g.out_neighbors(a), g.out_neighbors(b));
    count(g.in_neighbors(a), g.in_neighbors(b));
    return static_cast<double>(shared);
  };

  // k-means++ seeding on the nodes themselves
  std::vector<int> seeds;
  seeds.reserve(static_cast<std::size_t>(k_up));
  std::vector<double> best_d2(static_cast<std::size_t>(n), std::numeric_limits<double>::max());
  seeds.push_back(rng.below_int(n));
  while (static_cast<int>(seeds.size()) < k_up) {
    const int last = seeds.back();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d2 = point_norm2(i) + point_norm2(last) - 2.0 * point_overlap(i, last);
      best_d2[static_cast<std::size_t>(i)] = std::min(best_d2[static_cast<std::size_t>(i)], std::max(d2, 0.0));
      total += best_d2[static_cast<std::size_t>(i)];
    }
    int chosen = -1;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += best_d2[static_cast<std::size_t>(i)];
        if (acc > r) {
          chosen = i;
          break;
        }
      }
    }
    if (chosen < 0) chosen = rng.below_int(n);
    seeds.push_back(chosen);
  }

  std::vector<double> centers(static_cast<std::size_t>(k_up) * dim, 0.0);
  std::vector<double> center_norm2(static_cast<std::size_t>(k_up), 0.0);
  const auto set_center_to_point = [&](int c, int i) {
    double* row = centers.data() + static_cast<std::size_t>(c) * dim;
    std::fill(row, row + dim, 0.0);
    for (int j : g.out_neighbors(i)) row[static_cast<std::size_t>(j)] = 1.0;
    for (int j : g.in_neighbors(i)) row[static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = 1.0;
  };
  for (int c = 0; c < k_up; ++c) set_center_to_point(c, seeds[static_cast<std::size_t>(c)]);

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int pass = 0; pass < iters; ++pass) {
    for (int c = 0; c < k_up; ++c) {
      const double* row = centers.data() + static_cast<std::size_t>(c) * dim;
      double norm = 0.0;
      for (std::size_t d = 0; d < dim; ++d) norm += row[d] * row[d];
      center_norm2[static_cast<std::size_t>(c)] = norm;
    }
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int arg = 0;
      for (int c = 0; c < k_up; ++c) {
        const double* row = centers.data() + static_cast<std::size_t>(c) * dim;
        double dot = 0.0;
        for (int j : g.out_neighbors(i)) dot += row[static_cast<std::size_t>(j)];
        for (int j : g.in_neighbors(i)) dot += row[static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        const double d2 = point_norm2(i) - 2.0 * dot + center_norm2[static_cast<std::size_t>(c)];
        if (d2 < best) {
          best = d2;
          arg = c;
        }
      }
      labels[static_cast<std::size_t>(i)] = arg;
    }
    if (pass + 1 == iters) break;
    // mean update; empty clusters keep their previous center
    std::vector<long long> counts(static_cast<std::size_t>(k_up), 0);
    for (int c : labels) ++counts[static_cast<std::size_t>(c)];
    std::vector<double> sums(static_cast<std::size_t>(k_up) * dim, 0.0);
    for (int i = 0; i < n; ++i) {
      double* row = sums.data() + static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]) * dim;
      for (int j : g.out_neighbors(i)) row[static_cast<std::size_t>(j)] += 1.0;
      for (int j : g.in_neighbors(i)) row[static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] += 1.0;
    }
    for (int c = 0; c < k_up; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      double* row = centers.data() + static_cast<std::size_t>(c) * dim;
      const double* src = sums.data() + static_cast<std::size_t>(c) * dim;
      const double inv = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      for (std::size_t d = 0; d < dim; ++d) row[d] = src[d] * inv;
    }
  }
  return Partition::from_labels(labels);
}

struct RestartSummary {
  int restart = 0;
  double icl = 0.0;
  int k = 0;
  int sweeps = 0;
  long long moves = 0;
  int merges = 0;
};

struct RestartsResult {
  FitResult best;
  int best_restart = -1;
  std::vector<RestartSummary> restarts;
};

/// Runs the full pipeline (init, swap phase, merge phase) from `restarts`
/// independent starting points seeded seed, seed+1, ... and keeps the result
/// with maximal ICL; ties favor fewer clusters, then the earlier restart.
inline RestartsResult fit_with_restarts(const DirectedGraph& g, const Priors& priors,
                                        const InitConfig& cfg, const FitOptions& options = {}) {
  cfg.validate();
  priors.validate();
  RestartsResult result;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t restart_seed = cfg.seed + static_cast<std::uint64_t>(r);
    const Partition z0 = cfg.method == InitConfig::Method::random
                             ? random_init(g.n_nodes(), cfg.k_up, restart_seed)
                             : kmeans_init(g, cfg.k_up, cfg.kmeans_iters, restart_seed);
    FitState state(g, z0, priors, mix_seed(restart_seed, 2), options);
    const int merges = optimize(state);
    RestartSummary summary;
    summary.restart = r;
    summary.icl = state.icl();
    summary.k = state.k();
    summary.sweeps = static_cast<int>(state.trace().size());
    for (const auto& rec : state.trace()) summary.moves += rec.moves;
    summary.merges = merges;
    result.restarts.push_back(summary);

    const bool better =
        result.best_restart < 0 || summary.icl > result.best.icl ||
        (summary.icl == result.best.icl && summary.k < result.best.partition.k());
    if (better) {
      result.best_restart = r;
      result.best.partition = state.partition();
      result.best.icl = state.icl();
      result.best.trace = state.trace();
      result.best.sweeps = summary.sweeps;
      result.best.moves = summary.moves;
      result.best.merges = merges;
    }
  }
  return result;
}

}  // namespace gicl
