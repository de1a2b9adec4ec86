#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gicl/graph.hpp"
#include "gicl/math.hpp"
#include "gicl/partition.hpp"

namespace gicl {

// Uniform conjugate hyperparameters: one Dirichlet scalar shared by all
// clusters and one Beta shape pair shared by all blocks. 1 is the uniform
// prior, 0.5 the Jeffreys prior.
struct Priors {
  double n0 = 1.0;
  double eta0 = 1.0;
  double zeta0 = 1.0;

  void validate() const {
    if (!(n0 > 0.0) || !(eta0 > 0.0) || !(zeta0 > 0.0)) {
      throw std::invalid_argument("Priors: hyperparameters must be strictly positive");
    }
  }

  static Priors uniform() { return {1.0, 1.0, 1.0}; }
  static Priors jeffreys() { return {0.5, 0.5, 0.5}; }
};

// Sufficient statistics of a (graph, partition) pair: cluster sizes m_k and
// the K x K block edge-count matrix. Non-edge counts are never stored; they
// are derived from pairs(k,l) - e(k,l), where pairs counts the ordered node
// pairs a block can host.
struct BlockStats {
  int k = 0;
  long long n_nodes = 0;
  std::vector<long long> sizes;        // m_k
  std::vector<long long> edge_counts;  // e_kl, row-major k*K + l

  long long e(int a, int b) const { return edge_counts[static_cast<std::size_t>(a) * k + b]; }

  long long pairs(int a, int b) const {
    return a == b ? sizes[static_cast<std::size_t>(a)] * (sizes[static_cast<std::size_t>(a)] - 1)
                  : sizes[static_cast<std::size_t>(a)] * sizes[static_cast<std::size_t>(b)];
  }

  long long total_edges() const {
    long long t = 0;
    for (long long v : edge_counts) t += v;
    return t;
  }
};

inline BlockStats compute_stats(const DirectedGraph& g, const Partition& z) {
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("compute_stats: partition does not cover the graph");
  }
  BlockStats s;
  s.k = z.k();
  s.n_nodes = g.n_nodes();
  s.sizes = z.cluster_sizes();
  s.edge_counts.assign(static_cast<std::size_t>(s.k) * s.k, 0);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const auto row = static_cast<std::size_t>(z[i]) * s.k;
    for (int j : g.out_neighbors(i)) {
      ++s.edge_counts[row + static_cast<std::size_t>(z[j])];
    }
  }
  return s;
}

// Exact integrated complete-data log likelihood
//   sum_kl log( B(eta_kl, zeta_kl) / B(eta0, zeta0) ) + log( C(n) / C(n0) )
// with eta_kl = eta0 + e_kl, zeta_kl = zeta0 + pairs(k,l) - e_kl and
// n_k = n0 + m_k.
inline double icl_exact(const BlockStats& s, const Priors& p) {
  p.validate();
  if (s.k < 1 || s.n_nodes < 1) {
    throw std::invalid_argument("icl_exact: empty model");
  }
  const double log_b0 = log_beta(p.eta0, p.zeta0);
  double total = 0.0;
  for (int a = 0; a < s.k; ++a) {
    for (int b = 0; b < s.k; ++b) {
      const auto e = static_cast<double>(s.e(a, b));
      const auto holes = static_cast<double>(s.pairs(a, b) - s.e(a, b));
      total += log_beta(p.eta0 + e, p.zeta0 + holes) - log_b0;
    }
  }
  const double n = static_cast<double>(s.n_nodes);
  for (int a = 0; a < s.k; ++a) {
    total += log_gamma(p.n0 + static_cast<double>(s.sizes[static_cast<std::size_t>(a)]));
  }
  total -= log_gamma(s.k * p.n0 + n);
  total += log_gamma(s.k * p.n0) - s.k * log_gamma(p.n0);
  return total;
}

// Asymptotic ICL criterion: plug-in maximized complete-data log likelihood
// penalized by K^2/2 log(N(N-1)) + (K-1)/2 log N. MLEs are
// alpha_k = m_k / N and Pi_kl = e_kl / pairs(k,l), with the conventions
// 0 log 0 = 0 and empty blocks contributing nothing.
inline double icl_asymptotic(const DirectedGraph& g, const Partition& z) {
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("icl_asymptotic: partition does not cover the graph");
  }
  if (g.n_nodes() < 1) throw std::invalid_argument("icl_asymptotic: empty graph");
  const BlockStats s = compute_stats(g, z);
  const double n = static_cast<double>(s.n_nodes);
  double ll = 0.0;
  for (long long m : s.sizes) {
    if (m > 0) ll += static_cast<double>(m) * std::log(static_cast<double>(m) / n);
  }
  for (int a = 0; a < s.k; ++a) {
    for (int b = 0; b < s.k; ++b) {
      const long long pairs = s.pairs(a, b);
      if (pairs == 0) continue;
      const long long e = s.e(a, b);
      const double rate = static_cast<double>(e) / static_cast<double>(pairs);
      if (e > 0) ll += static_cast<double>(e) * std::log(rate);
      if (pairs - e > 0) ll += static_cast<double>(pairs - e) * std::log(1.0 - rate);
    }
  }
  const double k = static_cast<double>(s.k);
  return ll - 0.5 * k * k * std::log(n * (n - 1.0)) - 0.5 * (k - 1.0) * std::log(n);
}

}  // namespace gicl
