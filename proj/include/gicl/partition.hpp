#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gicl/graph.hpp"

namespace gicl {

// Hard assignment of every node to exactly one of K clusters. Cluster
// indices are dense: each index in [0, K) has at least one member.
class Partition {
 public:
  Partition() = default;

  Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
    if (k_ < 1) throw std::invalid_argument("Partition: cluster count must be >= 1");
    if (labels_.empty()) throw std::invalid_argument("Partition: no nodes");
    std::vector<char> seen(static_cast<std::size_t>(k_), 0);
    for (int c : labels_) {
      if (c < 0 || c >= k_) throw std::invalid_argument("Partition: label out of range");
      seen[static_cast<std::size_t>(c)] = 1;
    }
    for (char s : seen) {
      if (!s) throw std::invalid_argument("Partition: empty cluster index");
    }
  }

  /// Compacts arbitrary labels to dense indices 0..K-1, preserving label order.
  static Partition from_labels(const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("Partition: no nodes");
    std::vector<int> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() < 0) throw std::invalid_argument("Partition: negative label");
    std::map<int, int> remap;
    for (int c : sorted) remap.emplace(c, static_cast<int>(remap.size()));
    std::vector<int> dense(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) dense[i] = remap.at(labels[i]);
    return Partition(std::move(dense), static_cast<int>(sorted.size()));
  }

  int n_nodes() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  int operator[](int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<long long> cluster_sizes() const {
    std::vector<long long> m(static_cast<std::size_t>(k_), 0);
    for (int c : labels_) ++m[static_cast<std::size_t>(c)];
    return m;
  }

  bool operator==(const Partition& other) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// Allocating overload of node_cluster_edge_counts for a full Partition.
inline std::pair<std::vector<long long>, std::vector<long long>> node_cluster_edge_counts(
    const DirectedGraph& g, const Partition& z, int i) {
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("node_cluster_edge_counts: partition does not cover the graph");
  }
  if (i < 0 || i >= g.n_nodes()) throw std::invalid_argument("node id out of range");
  std::vector<long long> out_counts(static_cast<std::size_t>(z.k()), 0);
  std::vector<long long> in_counts(static_cast<std::size_t>(z.k()), 0);
  node_cluster_edge_counts(g, z.labels(), i, out_counts, in_counts);
  return {std::move(out_counts), std::move(in_counts)};
}

/// Writes one "node cluster" pair per line, nodes ascending.
inline void write_partition(const Partition& z, std::ostream& out) {
  for (int i = 0; i < z.n_nodes(); ++i) out << i << " " << z[i] << "\n";
}

inline std::string write_partition(const Partition& z) {
  std::ostringstream out;
  write_partition(z, out);
  return out.str();
}

/// Reads "node cluster" lines ('#' comments allowed); labels are compacted
/// to dense indices. Every node in 0..max_node must be assigned.
inline Partition read_partition(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<long long> nodes;
  std::vector<int> raw;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    std::istringstream tokens(line);
    long long node = 0, cluster = 0;
    std::string extra;
    if (!(tokens >> node >> cluster) || (tokens >> extra)) {
      throw ParseError(line_no, "expected \"node cluster\", got \"" + line + "\"");
    }
    if (node < 0 || cluster < 0) throw ParseError(line_no, "negative id");
    nodes.push_back(node);
    raw.push_back(static_cast<int>(cluster));
  }
  if (nodes.empty()) throw std::runtime_error("partition file has no assignments");
  const long long n = *std::max_element(nodes.begin(), nodes.end()) + 1;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    labels[static_cast<std::size_t>(nodes[r])] = raw[r];
  }
  for (long long i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)] < 0) {
      throw std::runtime_error("partition file: node " + std::to_string(i) + " unassigned");
    }
  }
  return Partition::from_labels(labels);
}

inline Partition read_partition(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_partition(in);
}

}  // namespace gicl
