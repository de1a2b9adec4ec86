#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gicl/partition.hpp"

namespace gicl {

namespace detail {
/// Sums after sorting, so results do not depend on term order. This makes
/// nmi exactly symmetric and exactly relabel-invariant.
inline double stable_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}
}  // namespace detail

/// Contingency counts of two partitions over the same nodes. Joint counts
/// are kept sparse: one (cluster_a, cluster_b, count) entry per non-empty
/// cell, sorted lexicographically.
struct ConfusionTable {
  long long n_nodes = 0;
  int k_a = 0;
  int k_b = 0;
  std::vector<std::tuple<int, int, long long>> joint;
  std::vector<long long> marginal_a;
  std::vector<long long> marginal_b;

  static ConfusionTable from(const Partition& a, const Partition& b) {
    if (a.n_nodes() != b.n_nodes()) {
      throw std::invalid_argument("ConfusionTable: node counts differ");
    }
    ConfusionTable t;
    t.n_nodes = a.n_nodes();
    t.k_a = a.k();
    t.k_b = b.k();
    t.marginal_a = a.cluster_sizes();
    t.marginal_b = b.cluster_sizes();
    std::vector<std::pair<int, int>> cells(static_cast<std::size_t>(a.n_nodes()));
    for (int i = 0; i < a.n_nodes(); ++i) cells[static_cast<std::size_t>(i)] = {a[i], b[i]};
    std::sort(cells.begin(), cells.end());
    for (std::size_t i = 0; i < cells.size();) {
      std::size_t j = i;
      while (j < cells.size() && cells[j] == cells[i]) ++j;
      t.joint.emplace_back(cells[i].first, cells[i].second, static_cast<long long>(j - i));
      i = j;
    }
    return t;
  }
};

/// Shannon entropy of the cluster-size distribution, in nats (0 log 0 = 0).
inline double entropy(const Partition& z) {
  const auto n = static_cast<double>(z.n_nodes());
  std::vector<double> terms;
  for (long long m : z.cluster_sizes()) {
    if (m > 0) terms.push_back(static_cast<double>(m) / n * std::log(n / static_cast<double>(m)));
  }
  return detail::stable_sum(terms);
}

/// Mutual information between the two partitions of a confusion table, nats.
inline double mutual_information(const ConfusionTable& t) {
  const auto n = static_cast<double>(t.n_nodes);
  std::vector<double> terms;
  terms.reserve(t.joint.size());
  for (const auto& [a, b, c] : t.joint) {
    const double joint = static_cast<double>(c);
    const double prod = static_cast<double>(t.marginal_a[static_cast<std::size_t>(a)]) *
                        static_cast<double>(t.marginal_b[static_cast<std::size_t>(b)]);
    terms.push_back(joint / n * std::log(joint * n / prod));
  }
  return detail::stable_sum(terms);
}

// Normalized mutual information I(a,b) / max(H(a), H(b)), clamped to [0, 1].
// When both partitions are single clusters the ratio is 0/0; that case is
// defined as 0.
inline double nmi(const Partition& a, const Partition& b) {
  const ConfusionTable t = ConfusionTable::from(a, b);
  const double ha = entropy(a);
  const double hb = entropy(b);
  const double h = std::max(ha, hb);
  if (h == 0.0) return 0.0;
  const double value = mutual_information(t) / h;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace gicl
