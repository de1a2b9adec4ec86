#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gicl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Immutable sparse directed binary graph without self-loops. Both adjacency
// directions are kept in CSR form with sorted neighbor lists, so membership
// tests are logarithmic and iteration order is deterministic.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds a graph from an edge list. Edges are sorted and deduplicated;
  /// self-loops or out-of-range endpoints are rejected.
  static DirectedGraph from_edges(int n_nodes, std::vector<std::pair<int, int>> edges) {
    if (n_nodes < 0) throw std::invalid_argument("from_edges: negative node count");
    for (const auto& [s, t] : edges) {
      if (s < 0 || t < 0 || s >= n_nodes || t >= n_nodes) {
        throw std::invalid_argument("from_edges: endpoint out of range");
      }
      if (s == t) throw std::invalid_argument("from_edges: self-loop");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    DirectedGraph g;
    g.n_ = n_nodes;
    g.out_offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
    g.in_offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
    for (const auto& [s, t] : edges) {
      ++g.out_offsets_[static_cast<std::size_t>(s) + 1];
      ++g.in_offsets_[static_cast<std::size_t>(t) + 1];
    }
    for (int i = 0; i < n_nodes; ++i) {
      g.out_offsets_[static_cast<std::size_t>(i) + 1] += g.out_offsets_[i];
      g.in_offsets_[static_cast<std::size_t>(i) + 1] += g.in_offsets_[i];
    }
    g.out_targets_.resize(edges.size());
    g.in_targets_.resize(edges.size());
    std::vector<std::int64_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    std::int64_t pos = 0;
    for (const auto& [s, t] : edges) {
      g.out_targets_[static_cast<std::size_t>(pos++)] = t;
      g.in_targets_[static_cast<std::size_t>(cursor[t]++)] = s;
    }
    // in-lists are filled in (src, dst) order, hence already sorted per node
    return g;
  }

  int n_nodes() const { return n_; }
  std::int64_t n_edges() const { return static_cast<std::int64_t>(out_targets_.size()); }

  std::span<const int> out_neighbors(int i) const {
    check_node(i);
    return {out_targets_.data() + out_offsets_[i],
            static_cast<std::size_t>(out_offsets_[static_cast<std::size_t>(i) + 1] - out_offsets_[i])};
  }
  std::span<const int> in_neighbors(int i) const {
    check_node(i);
    return {in_targets_.data() + in_offsets_[i],
            static_cast<std::size_t>(in_offsets_[static_cast<std::size_t>(i) + 1] - in_offsets_[i])};
  }

  int out_degree(int i) const { return static_cast<int>(out_neighbors(i).size()); }
  int in_degree(int i) const { return static_cast<int>(in_neighbors(i).size()); }
  int degree(int i) const { return out_degree(i) + in_degree(i); }

  bool has_edge(int i, int j) const {
    const auto nb = out_neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

 private:
  void check_node(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("node id out of range");
  }

  int n_ = 0;
  std::vector<std::int64_t> out_offsets_{0};
  std::vector<std::int64_t> in_offsets_{0};
  std::vector<int> out_targets_;
  std::vector<int> in_targets_;
};

/// Per-cluster successor/predecessor counts of one node: out_counts[l] is the
/// number of successors of i in cluster l, in_counts[k] the number of
/// predecessors in cluster k. These are the building blocks of the swap
/// deltas; cost O(degree(i)) on zeroed buffers of size k.
inline void node_cluster_edge_counts(const DirectedGraph& g, const std::vector<int>& labels,
                                     int i, std::span<long long> out_counts,
                                     std::span<long long> in_counts) {
  for (int j : g.out_neighbors(i)) ++out_counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
  for (int j : g.in_neighbors(i)) ++in_counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
}

struct EdgeListParseResult {
  DirectedGraph graph;
  std::int64_t duplicate_edges = 0;
  std::int64_t self_loops_dropped = 0;
};

// Edge-list dialect: one "src dst" pair per line, whitespace- or
// comma-separated, 0-based ids, '#' starts a comment line. An optional
// "# nodes=N" header fixes the node count when trailing nodes are isolated.
inline EdgeListParseResult parse_edge_list(std::istream& in) {
  EdgeListParseResult result;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t declared_n = -1;
  std::size_t declared_line = 0;
  int max_id = -1;

  while (std::getline(in, line)) {
    ++line_no;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    if (line[begin] == '#') {
      std::size_t p = line.find_first_not_of(" \t", begin + 1);
      if (p != std::string::npos && line.compare(p, 6, "nodes=") == 0) {
        try {
          declared_n = std::stoll(line.substr(p + 6));
        } catch (const std::exception&) {
          throw ParseError(line_no, "malformed nodes= header");
        }
        if (declared_n < 0) throw ParseError(line_no, "negative node count in header");
        declared_line = line_no;
      }
      continue;
    }
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream tokens(line);
    std::string a, b, extra;
    tokens >> a >> b;
    if (b.empty() || (tokens >> extra)) {
      throw ParseError(line_no, "expected exactly two ids, got \"" + line + "\"");
    }
    long long src = 0, dst = 0;
    try {
      std::size_t used = 0;
      src = std::stoll(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      dst = std::stoll(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::exception&) {
      throw ParseError(line_no, "non-integer token in \"" + line + "\"");
    }
    if (src < 0 || dst < 0) throw ParseError(line_no, "negative node id");
    if (src == dst) {
      ++result.self_loops_dropped;
      max_id = std::max(max_id, static_cast<int>(src));
      continue;
    }
    edges.emplace_back(static_cast<int>(src), static_cast<int>(dst));
    max_id = std::max({max_id, static_cast<int>(src), static_cast<int>(dst)});
  }

  if (declared_n >= 0 && max_id >= declared_n) {
    throw ParseError(declared_line, "node id " + std::to_string(max_id) +
                                        " exceeds declared node count " +
                                        std::to_string(declared_n));
  }
  const int n = declared_n >= 0 ? static_cast<int>(declared_n) : max_id + 1;
  const auto total = static_cast<std::int64_t>(edges.size());
  result.graph = DirectedGraph::from_edges(n, std::move(edges));
  result.duplicate_edges = total - result.graph.n_edges();
  return result;
}

inline EdgeListParseResult parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

/// Canonical serialization: edges sorted by (src, dst); a "# nodes=N" header
/// is emitted only when isolated trailing nodes would otherwise shrink N on
/// re-parse. parse_edge_list(write_edge_list(g)) reproduces g exactly.
inline void write_edge_list(const DirectedGraph& g, std::ostream& out) {
  int max_id = -1;
  for (int i = 0; i < g.n_nodes(); ++i) {
    const auto nb = g.out_neighbors(i);
    if (!nb.empty()) max_id = std::max({max_id, i, nb.back()});
    if (!g.in_neighbors(i).empty()) max_id = std::max(max_id, i);
  }
  if (g.n_nodes() > max_id + 1) out << "# nodes=" << g.n_nodes() << "\n";
  for (int i = 0; i < g.n_nodes(); ++i) {
    for (int j : g.out_neighbors(i)) out << i << " " << j << "\n";
  }
}

inline std::string write_edge_list(const DirectedGraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace gicl
