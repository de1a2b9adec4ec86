#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gicl/graph.hpp"
#include "gicl/partition.hpp"

namespace gicl {

// Block-sorted adjacency raster: nodes ordered by (cluster, id), one pixel
// per ordered pair, edges black on a white background, and a one-pixel gray
// separator line between consecutive clusters. Image side is N + K - 1.
inline void render_block_adjacency(const DirectedGraph& g, const Partition& z, std::ostream& out,
                                   bool ascii = false, int max_nodes = 5000) {
  if (z.n_nodes() != g.n_nodes()) {
    throw std::invalid_argument("render: partition does not cover the graph");
  }
  const int n = g.n_nodes();
  if (n < 1) throw std::invalid_argument("render: empty graph");
  if (n > max_nodes) {
    throw std::invalid_argument("render: graph has " + std::to_string(n) +
                                " nodes, above the raster cap of " + std::to_string(max_nodes) +
                                "; downsample the graph or raise the cap");
  }
  const int k = z.k();
  const int side = n + k - 1;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&z](int a, int b) { return z[a] < z[b]; });
  // pixel row of a node = sorted position + number of separators before it
  std::vector<int> pos(static_cast<std::size_t>(n), 0);
  for (int r = 0; r < n; ++r) {
    const int node = order[static_cast<std::size_t>(r)];
    pos[static_cast<std::size_t>(node)] = r + z[node];
  }

  constexpr unsigned char kEdge = 0, kBoundary = 128, kBackground = 255;
  std::vector<unsigned char> pixels(static_cast<std::size_t>(side) * side, kBackground);
  std::vector<long long> sizes = z.cluster_sizes();
  long long offset = 0;
  for (int c = 0; c + 1 < k; ++c) {
    offset += sizes[static_cast<std::size_t>(c)] + 1;
    const auto line = static_cast<std::size_t>(offset - 1);
    for (int t = 0; t < side; ++t) {
      pixels[line * side + static_cast<std::size_t>(t)] = kBoundary;
      pixels[static_cast<std::size_t>(t) * side + line] = kBoundary;
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(pos[static_cast<std::size_t>(i)]);
    for (int j : g.out_neighbors(i)) {
      pixels[row * side + static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])] = kEdge;
    }
  }

  if (ascii) {
    out << "P2\n" << side << " " << side << "\n255\n";
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        out << static_cast<int>(pixels[static_cast<std::size_t>(r) * side + static_cast<std::size_t>(c)]);
        out << (c + 1 == side ? '\n' : ' ');
      }
    }
  } else {
    out << "P5\n" << side << " " << side << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  }
}

}  // namespace gicl
