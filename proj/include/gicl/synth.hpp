#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gicl/graph.hpp"
#include "gicl/partition.hpp"
#include "gicl/rng.hpp"

namespace gicl {

struct SbmParams {
  std::vector<double> alpha;  // cluster proportions, sums to 1
  std::vector<double> pi;     // K x K connection probabilities, row-major
  int k = 0;
  int n_nodes = 0;
  std::uint64_t seed = 0;

  double connect(int a, int b) const { return pi[static_cast<std::size_t>(a) * k + b]; }

  void validate() const {
    if (k < 1 || n_nodes < 1) throw std::invalid_argument("SbmParams: empty model");
    if (static_cast<int>(alpha.size()) != k || static_cast<std::size_t>(k) * k != pi.size()) {
      throw std::invalid_argument("SbmParams: dimension mismatch");
    }
    double total = 0.0;
    for (double a : alpha) {
      if (a < 0.0) throw std::invalid_argument("SbmParams: negative proportion");
      total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("SbmParams: proportions must sum to 1");
    for (double p : pi) {
      if (p < 0.0 || p > 1.0) throw std::invalid_argument("SbmParams: probability out of [0,1]");
    }
  }
};

// The four synthetic benchmark families. beta is the strong-connection
// probability (and the upper bound of the uniform draws in setting 4),
// epsilon the background probability; n_nodes and k default per setting.
struct SettingConfig {
  int setting_id = 1;
  double beta = 0.45;
  double epsilon = 0.01;
  int n_nodes = 0;  // 0 = per-setting default
  int k = 0;        // 0 = per-setting default
  std::uint64_t seed = 0;
};

inline SbmParams make_setting(const SettingConfig& cfg) {
  SbmParams params;
  switch (cfg.setting_id) {
    case 1:
      params.n_nodes = cfg.n_nodes > 0 ? cfg.n_nodes : 100;
      params.k = cfg.k > 0 ? cfg.k : 5;
      break;
    case 2:
      params.n_nodes = cfg.n_nodes > 0 ? cfg.n_nodes : 100;
      params.k = cfg.k > 0 ? cfg.k : 5;
      break;
    case 3:
      params.n_nodes = cfg.n_nodes > 0 ? cfg.n_nodes : 500;
      params.k = cfg.k > 0 ? cfg.k : 10;
      break;
    case 4:
      params.n_nodes = cfg.n_nodes > 0 ? cfg.n_nodes : 10000;
      params.k = cfg.k > 0 ? cfg.k : 50;
      break;
    default:
      throw std::invalid_argument("make_setting: unknown setting id");
  }
  const int k = params.k;
  params.alpha.assign(static_cast<std::size_t>(k), 1.0 / k);
  params.pi.assign(static_cast<std::size_t>(k) * k, cfg.epsilon);
  params.seed = cfg.seed;
  auto pi = [&params, k](int a, int b) -> double& {
    return params.pi[static_cast<std::size_t>(a) * k + b];
  };
  switch (cfg.setting_id) {
    case 1:
    case 3:
      // plain communities: beta on the diagonal
      for (int c = 0; c < k; ++c) pi(c, c) = cfg.beta;
      break;
    case 2:
      // communities plus one hub cluster connecting to everything
      for (int c = 0; c < k; ++c) {
        pi(c, c) = cfg.beta;
        pi(0, c) = cfg.beta;
        pi(c, 0) = cfg.beta;
      }
      break;
    case 4: {
      // random off-diagonal activations: Pi_kl = Z U + (1-Z) eps with
      // Z ~ Bernoulli(0.1), U ~ Uniform(0, beta); Pi_kk = U
      Rng rng(mix_seed(cfg.seed, 3));
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          const double u = rng.uniform01() * cfg.beta;
          if (a == b) {
            pi(a, b) = u;
          } else {
            pi(a, b) = rng.bernoulli(0.1) ? u : cfg.epsilon;
          }
        }
      }
      break;
    }
    default:
      break;
  }
  return params;
}

/// The Figure-1 complexity sweep: beta from 0.45 down to 0.01 in steps of 0.02.
inline std::vector<double> beta_grid() {
  std::vector<double> grid;
  for (int i = 45; i >= 1; i -= 2) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

/// Samples memberships i.i.d. from alpha, then each ordered pair (i, j),
/// i != j, independently with probability Pi[z_i][z_j]. Returns the graph and
/// the planted partition (empty planted clusters compacted). Deterministic
/// given the seed; dense blocks are sampled with geometric skipping so the
/// cost is proportional to nodes plus produced edges.
inline std::pair<DirectedGraph, Partition> sample_sbm(const SbmParams& params) {
  params.validate();
  Rng rng(mix_seed(params.seed, 4));
  const int n = params.n_nodes;
  const int k = params.k;

  std::vector<int> labels(static_cast<std::size_t>(n), k - 1);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int c = 0; c < k; ++c) {
      acc += params.alpha[static_cast<std::size_t>(c)];
      if (u < acc) {
        labels[static_cast<std::size_t>(i)] = c;
        break;
      }
    }
  }
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);

  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const auto& src = members[static_cast<std::size_t>(a)];
      const auto& dst = members[static_cast<std::size_t>(b)];
      if (src.empty() || dst.empty()) continue;
      const double p = params.connect(a, b);
      if (p <= 0.0) continue;
      const auto cells = static_cast<long long>(src.size()) * static_cast<long long>(dst.size());
      if (p >= 1.0) {
        for (int i : src) {
          for (int j : dst) {
            if (i != j) edges.emplace_back(i, j);
          }
        }
        continue;
      }
      const double log_q = std::log1p(-p);
      long long cell = -1;
      while (true) {
        const double u = rng.uniform01();
        const double jump = std::floor(std::log(1.0 - u) / log_q);
        if (jump >= static_cast<double>(cells)) break;
        cell += 1 + static_cast<long long>(jump);
        if (cell >= cells) break;
        const int i = src[static_cast<std::size_t>(cell / static_cast<long long>(dst.size()))];
        const int j = dst[static_cast<std::size_t>(cell % static_cast<long long>(dst.size()))];
        if (i != j) edges.emplace_back(i, j);  // diagonal hits are discarded
      }
    }
  }
  return {DirectedGraph::from_edges(n, std::move(edges)), Partition::from_labels(labels)};
}

}  // namespace gicl
