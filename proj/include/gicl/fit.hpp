#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gicl/graph.hpp"
#include "gicl/math.hpp"
#include "gicl/partition.hpp"
#include "gicl/rng.hpp"
#include "gicl/stats.hpp"

namespace gicl {

/// Candidate label swap of one node and its exact ICL change.
struct SwapDelta {
  int target = -1;
  double delta = -std::numeric_limits<double>::infinity();
  bool empties_source = false;  // the move deletes the source cluster
};

struct SweepRecord {
  int pass = 0;
  long long moves = 0;
  double icl = 0.0;
};

struct FitOptions {
  double eps_accept = 1e-10;  // a move must beat this to be applied
  int max_sweeps = 300;       // safety valve against float-noise cycling
  bool merge_phase = true;
  bool merge_reentry = true;  // alternate swap/merge phases until joint convergence
};

struct FitResult {
  Partition partition;
  double icl = 0.0;
  std::vector<SweepRecord> trace;
  int sweeps = 0;
  long long moves = 0;
  int merges = 0;
};

// Mutable optimization state: partition, sufficient statistics, the tracked
// ICL value, and a per-block cache of log B(eta_kl, zeta_kl). Swap and merge
// deltas are evaluated from block-count reconstructions, so an accepted
// delta equals the from-scratch ICL difference up to rounding. Block
// matrices are allocated once at capacity K_up; removing a cluster renames
// the last index into the vacated slot.
class FitState {
 public:
  FitState(const DirectedGraph& g, const Partition& z, const Priors& priors, std::uint64_t seed,
           const FitOptions& options = {})
      : graph_(&g), priors_(priors), options_(options), rng_(seed) {
    priors_.validate();
    if (z.n_nodes() != g.n_nodes()) {
      throw std::invalid_argument("FitState: partition does not cover the graph");
    }
    n_ = g.n_nodes();
    k_ = z.k();
    k_cap_ = k_;
    labels_ = z.labels();
    sizes_.assign(cap(), 0);
    edges_.assign(cap() * cap(), 0);
    for (int c : labels_) ++sizes_[static_cast<std::size_t>(c)];
    for (int i = 0; i < n_; ++i) {
      for (int j : g.out_neighbors(i)) {
        ++edges_[idx(labels_[static_cast<std::size_t>(i)], labels_[static_cast<std::size_t>(j)])];
      }
    }
    log_b0_ = log_beta(priors_.eta0, priors_.zeta0);
    log_b_.assign(cap() * cap(), 0.0);
    for (int a = 0; a < k_; ++a) {
      for (int b = 0; b < k_; ++b) log_b_[idx(a, b)] = block_log_b(a, b);
    }
    icl_ = icl_exact(stats(), priors_);
    out_cnt_.assign(cap(), 0);
    in_cnt_.assign(cap(), 0);
    row_sum_.assign(cap(), 0.0);
    col_sum_.assign(cap(), 0.0);
    new_row_g_.assign(cap(), 0.0);
    new_col_g_.assign(cap(), 0.0);
  }

  const DirectedGraph& graph() const { return *graph_; }
  const Priors& priors() const { return priors_; }
  const FitOptions& options() const { return options_; }
  int k() const { return k_; }
  int n_nodes() const { return n_; }
  double icl() const { return icl_; }
  int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  long long cluster_size(int c) const { return sizes_[static_cast<std::size_t>(c)]; }
  long long edge_count(int a, int b) const { return edges_[idx(a, b)]; }
  const std::vector<SweepRecord>& trace() const { return trace_; }

  Partition partition() const { return Partition(labels_, k_); }

  BlockStats stats() const {
    BlockStats s;
    s.k = k_;
    s.n_nodes = n_;
    s.sizes.assign(sizes_.begin(), sizes_.begin() + k_);
    s.edge_counts.resize(static_cast<std::size_t>(k_) * k_);
    for (int a = 0; a < k_; ++a) {
      for (int b = 0; b < k_; ++b) s.edge_counts[static_cast<std::size_t>(a) * k_ + b] = edges_[idx(a, b)];
    }
    return s;
  }

  /// Exact ICL change of moving node i to cluster target, evaluated
  /// incrementally from the affected block counters in O(degree(i) + K).
  SwapDelta swap_delta(int i, int target) {
    check_node(i);
    check_cluster(target);
    const int g = label(i);
    if (target == g) throw std::invalid_argument("swap_delta: target equals current cluster");
    prepare_node(i);
    SwapDelta d;
    d.target = target;
    d.empties_source = sizes_[static_cast<std::size_t>(g)] == 1;
    d.delta = eval_candidate(g, target);
    return d;
  }

  /// Best candidate move for node i; ties broken by smallest target index.
  /// Returns target = -1 when K == 1.
  SwapDelta best_swap(int i) {
    check_node(i);
    SwapDelta best;
    if (k_ == 1) return best;
    const int g = label(i);
    best.empties_source = sizes_[static_cast<std::size_t>(g)] == 1;
    prepare_node(i);
    for (int h = 0; h < k_; ++h) {
      if (h == g) continue;
      const double delta = eval_candidate(g, h);
      if (delta > best.delta) {
        best.delta = delta;
        best.target = h;
      }
    }
    return best;
  }

  /// Applies the move and folds `delta` into the tracked ICL. Callers pass
  /// the value obtained from swap_delta/best_swap for the same (i, target).
  void apply_swap(int i, int target, double delta) {
    check_node(i);
    check_cluster(target);
    const int g = label(i);
    if (target == g) throw std::invalid_argument("apply_swap: target equals current cluster");
    labels_[static_cast<std::size_t>(i)] = target;
    --sizes_[static_cast<std::size_t>(g)];
    ++sizes_[static_cast<std::size_t>(target)];
    for (int j : graph_->out_neighbors(i)) {
      const int c = labels_[static_cast<std::size_t>(j)];
      --edges_[idx(g, c)];
      ++edges_[idx(target, c)];
    }
    for (int j : graph_->in_neighbors(i)) {
      const int c = labels_[static_cast<std::size_t>(j)];
      --edges_[idx(c, g)];
      ++edges_[idx(c, target)];
    }
    icl_ += delta;
    if (sizes_[static_cast<std::size_t>(g)] == 0) {
      const int moved_from = k_ - 1;
      remove_cluster(g);
      refresh_row_col(target == moved_from ? g : target);
    } else {
      refresh_row_col(g);
      refresh_row_col(target);
    }
  }

  void apply_swap(int i, int target) { apply_swap(i, target, swap_delta(i, target).delta); }

  /// One full pass over the nodes in a fresh shuffled order, applying the
  /// maximal strictly-positive move per node. Returns accepted moves.
  long long sweep() {
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    rng_.shuffle(order_);
    long long accepted = 0;
    for (int i : order_) {
      if (k_ == 1) break;
      const SwapDelta best = best_swap(i);
      if (best.target >= 0 && best.delta > options_.eps_accept) {
        apply_swap(i, best.target, best.delta);
        ++accepted;
      }
    }
    return accepted;
  }

  /// Sweeps until a pass accepts no move (or max_sweeps). Returns the number
  /// of passes run; per-pass records are appended to the trace.
  int swap_phase() {
    int passes = 0;
    while (passes < options_.max_sweeps) {
      const long long moves = sweep();
      ++passes;
      trace_.push_back({static_cast<int>(trace_.size()) + 1, moves, icl_});
      if (moves == 0) break;
    }
    return passes;
  }

  /// Exact ICL change of fusing cluster g into cluster h, evaluated from the
  /// two clusters' rows and columns in O(K).
  double merge_delta(int g, int h) {
    check_cluster(g);
    check_cluster(h);
    if (g == h) throw std::invalid_argument("merge_delta: clusters must differ");
    if (k_ < 2) throw std::invalid_argument("merge_delta: K < 2");
    const double n0 = priors_.n0;
    const double n = static_cast<double>(n_);
    const double ng = n0 + static_cast<double>(sizes_[static_cast<std::size_t>(g)]);
    const double nh = n0 + static_cast<double>(sizes_[static_cast<std::size_t>(h)]);
    double delta = log_gamma(n0) + log_gamma((k_ - 1) * n0) + log_gamma(k_ * n0 + n) -
                   log_gamma(k_ * n0) - log_gamma((k_ - 1) * n0 + n) + log_gamma(ng + nh - n0) -
                   log_gamma(ng) - log_gamma(nh);
    const long long mg = sizes_[static_cast<std::size_t>(g)];
    const long long mh = sizes_[static_cast<std::size_t>(h)];
    const long long fused = mg + mh;
    for (int l = 0; l < k_; ++l) {
      if (l == g || l == h) continue;
      const long long ml = sizes_[static_cast<std::size_t>(l)];
      delta += new_log_b(edges_[idx(h, l)] + edges_[idx(g, l)], fused * ml) - log_b_[idx(h, l)];
      delta += new_log_b(edges_[idx(l, h)] + edges_[idx(l, g)], ml * fused) - log_b_[idx(l, h)];
    }
    delta += new_log_b(edges_[idx(h, h)] + edges_[idx(g, h)] + edges_[idx(h, g)] + edges_[idx(g, g)],
                       fused * (fused - 1)) -
             log_b_[idx(h, h)];
    for (int c = 0; c < k_; ++c) {
      delta += log_b0_ - log_b_[idx(c, g)];
      if (c != g) delta += log_b0_ - log_b_[idx(g, c)];
    }
    return delta;
  }

  /// Fuses g into h and folds `delta` into the tracked ICL.
  void apply_merge(int g, int h, double delta) {
    check_cluster(g);
    check_cluster(h);
    if (g == h) throw std::invalid_argument("apply_merge: clusters must differ");
    for (int& c : labels_) {
      if (c == g) c = h;
    }
    sizes_[static_cast<std::size_t>(h)] += sizes_[static_cast<std::size_t>(g)];
    sizes_[static_cast<std::size_t>(g)] = 0;
    for (int l = 0; l < k_; ++l) edges_[idx(h, l)] += edges_[idx(g, l)];
    for (int c = 0; c < k_; ++c) edges_[idx(c, h)] += edges_[idx(c, g)];
    icl_ += delta;
    const int moved_from = k_ - 1;
    remove_cluster(g);
    refresh_row_col(h == moved_from ? g : h);
  }

  void apply_merge(int g, int h) { apply_merge(g, h, merge_delta(g, h)); }

  /// Recomputes the tracked ICL from the current statistics (test hook; the
  /// optimizer itself only accumulates deltas).
  double recompute_icl() const { return icl_exact(stats(), priors_); }

  Rng& rng() { return rng_; }

 private:
  std::size_t cap() const { return static_cast<std::size_t>(k_cap_); }
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * cap() + static_cast<std::size_t>(b); }

  void check_node(int i) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("node id out of range");
  }
  void check_cluster(int c) const {
    if (c < 0 || c >= k_) throw std::invalid_argument("cluster index out of range");
  }

  long long pairs_of(long long ma, long long mb, bool same) const {
    return same ? ma * (ma - 1) : ma * mb;
  }

  double new_log_b(long long e, long long pairs) const {
    return log_beta(priors_.eta0 + static_cast<double>(e),
                    priors_.zeta0 + static_cast<double>(pairs - e));
  }

  double block_log_b(int a, int b) const {
    const long long p =
        pairs_of(sizes_[static_cast<std::size_t>(a)], sizes_[static_cast<std::size_t>(b)], a == b);
    return new_log_b(edges_[idx(a, b)], p);
  }

  void refresh_row_col(int c) {
    for (int l = 0; l < k_; ++l) {
      log_b_[idx(c, l)] = block_log_b(c, l);
      log_b_[idx(l, c)] = block_log_b(l, c);
    }
  }

  // Renames cluster K-1 into slot g and shrinks K (swap-remove). Cached
  // log B values move with their blocks, so no refresh is needed here.
  void remove_cluster(int g) {
    const int last = k_ - 1;
    if (g != last) {
      for (int& c : labels_) {
        if (c == last) c = g;
      }
      sizes_[static_cast<std::size_t>(g)] = sizes_[static_cast<std::size_t>(last)];
      const long long corner_e = edges_[idx(last, last)];
      const double corner_b = log_b_[idx(last, last)];
      for (int l = 0; l < k_; ++l) {
        edges_[idx(g, l)] = edges_[idx(last, l)];
        log_b_[idx(g, l)] = log_b_[idx(last, l)];
      }
      for (int c = 0; c < k_; ++c) {
        edges_[idx(c, g)] = edges_[idx(c, last)];
        log_b_[idx(c, g)] = log_b_[idx(c, last)];
      }
      edges_[idx(g, g)] = corner_e;
      log_b_[idx(g, g)] = corner_b;
    }
    sizes_[static_cast<std::size_t>(last)] = 0;
    --k_;
  }

  // Per-node precomputation shared by every candidate target: cluster edge
  // counts of i, row/column sums of the cached log B matrix, and the
  // h-independent "source row/column after removal of i" contributions.
  void prepare_node(int i) {
    const int g = label(i);
    for (int c = 0; c < k_; ++c) {
      out_cnt_[static_cast<std::size_t>(c)] = 0;
      in_cnt_[static_cast<std::size_t>(c)] = 0;
    }
    node_cluster_edge_counts(*graph_, labels_, i, out_cnt_, in_cnt_);
    for (int a = 0; a < k_; ++a) {
      double rs = 0.0;
      for (int b = 0; b < k_; ++b) rs += log_b_[idx(a, b)];
      row_sum_[static_cast<std::size_t>(a)] = rs;
    }
    for (int b = 0; b < k_; ++b) {
      double cs = 0.0;
      for (int a = 0; a < k_; ++a) cs += log_b_[idx(a, b)];
      col_sum_[static_cast<std::size_t>(b)] = cs;
    }
    const long long mg = sizes_[static_cast<std::size_t>(g)];
    if (mg > 1) {
      // Case 1: source cluster survives. Generic (l not in {g,h}) new values
      // for row g and column g, valid for every candidate; the h-dependent
      // blocks are patched in eval_candidate.
      base_row_g_ = 0.0;
      base_col_g_ = 0.0;
      for (int l = 0; l < k_; ++l) {
        if (l == g) continue;
        const long long ml = sizes_[static_cast<std::size_t>(l)];
        new_row_g_[static_cast<std::size_t>(l)] =
            new_log_b(edges_[idx(g, l)] - out_cnt_[static_cast<std::size_t>(l)], (mg - 1) * ml);
        new_col_g_[static_cast<std::size_t>(l)] =
            new_log_b(edges_[idx(l, g)] - in_cnt_[static_cast<std::size_t>(l)], ml * (mg - 1));
        base_row_g_ += new_row_g_[static_cast<std::size_t>(l)];
        base_col_g_ += new_col_g_[static_cast<std::size_t>(l)];
      }
      base_row_g_ += new_log_b(
          edges_[idx(g, g)] - out_cnt_[static_cast<std::size_t>(g)] - in_cnt_[static_cast<std::size_t>(g)],
          (mg - 1) * (mg - 2));
    } else {
      // Case 2: the move empties g and the model loses one dimension.
      const double n0 = priors_.n0;
      const double n = static_cast<double>(n_);
      case2_const_ = log_gamma((k_ - 1) * n0) + log_gamma(k_ * n0 + n) - log_gamma(k_ * n0) -
                     log_gamma((k_ - 1) * n0 + n);
      case2_const_ += static_cast<double>(2 * k_ - 1) * log_b0_ -
                      (row_sum_[static_cast<std::size_t>(g)] + col_sum_[static_cast<std::size_t>(g)] -
                       log_b_[idx(g, g)]);
    }
  }

  // Delta for moving the prepared node from g to h.
  double eval_candidate(int g, int h) {
    const long long mg = sizes_[static_cast<std::size_t>(g)];
    const long long mh = sizes_[static_cast<std::size_t>(h)];
    const double n0 = priors_.n0;
    if (mg > 1) {
      const double current = row_sum_[static_cast<std::size_t>(g)] + row_sum_[static_cast<std::size_t>(h)] +
                             col_sum_[static_cast<std::size_t>(g)] + col_sum_[static_cast<std::size_t>(h)] -
                             log_b_[idx(g, g)] - log_b_[idx(g, h)] - log_b_[idx(h, g)] -
                             log_b_[idx(h, h)];
      double fresh = base_row_g_ - new_row_g_[static_cast<std::size_t>(h)] + base_col_g_ -
                     new_col_g_[static_cast<std::size_t>(h)];
      // h-dependent blocks of the source row/column
      fresh += new_log_b(edges_[idx(g, h)] - out_cnt_[static_cast<std::size_t>(h)] +
                             in_cnt_[static_cast<std::size_t>(g)],
                         (mg - 1) * (mh + 1));
      fresh += new_log_b(edges_[idx(h, g)] + out_cnt_[static_cast<std::size_t>(g)] -
                             in_cnt_[static_cast<std::size_t>(h)],
                         (mh + 1) * (mg - 1));
      // target row/column
      for (int l = 0; l < k_; ++l) {
        if (l == g || l == h) continue;
        const long long ml = sizes_[static_cast<std::size_t>(l)];
        fresh += new_log_b(edges_[idx(h, l)] + out_cnt_[static_cast<std::size_t>(l)], (mh + 1) * ml);
        fresh += new_log_b(edges_[idx(l, h)] + in_cnt_[static_cast<std::size_t>(l)], ml * (mh + 1));
      }
      fresh += new_log_b(edges_[idx(h, h)] + out_cnt_[static_cast<std::size_t>(h)] +
                             in_cnt_[static_cast<std::size_t>(h)],
                         (mh + 1) * mh);
      return std::log((n0 + static_cast<double>(mh)) / (n0 + static_cast<double>(mg) - 1.0)) +
             fresh - current;
    }
    // Case 2
    const double current = row_sum_[static_cast<std::size_t>(h)] + col_sum_[static_cast<std::size_t>(h)] -
                           log_b_[idx(h, g)] - log_b_[idx(g, h)] - log_b_[idx(h, h)];
    double fresh = 0.0;
    for (int l = 0; l < k_; ++l) {
      if (l == g || l == h) continue;
      const long long ml = sizes_[static_cast<std::size_t>(l)];
      fresh += new_log_b(edges_[idx(h, l)] + out_cnt_[static_cast<std::size_t>(l)], (mh + 1) * ml);
      fresh += new_log_b(edges_[idx(l, h)] + in_cnt_[static_cast<std::size_t>(l)], ml * (mh + 1));
    }
    fresh += new_log_b(edges_[idx(h, h)] + out_cnt_[static_cast<std::size_t>(h)] +
                           in_cnt_[static_cast<std::size_t>(h)],
                       (mh + 1) * mh);
    return std::log((n0 + static_cast<double>(mh)) / n0) + case2_const_ + fresh - current;
  }

  const DirectedGraph* graph_;
  Priors priors_;
  FitOptions options_;
  Rng rng_;
  int n_ = 0;
  int k_ = 0;
  int k_cap_ = 0;
  std::vector<int> labels_;
  std::vector<long long> sizes_;
  std::vector<long long> edges_;
  std::vector<double> log_b_;
  double log_b0_ = 0.0;
  double icl_ = 0.0;
  std::vector<SweepRecord> trace_;
  // per-node scratch
  std::vector<long long> out_cnt_, in_cnt_;
  std::vector<double> row_sum_, col_sum_, new_row_g_, new_col_g_;
  std::vector<int> order_;
  double base_row_g_ = 0.0, base_col_g_ = 0.0, case2_const_ = 0.0;
};

/// Spec-level wrappers over the FitState members.
inline SwapDelta delta_swap(FitState& state, int node, int target) {
  return state.swap_delta(node, target);
}
inline void apply_swap(FitState& state, int node, int target, double delta) {
  state.apply_swap(node, target, delta);
}
inline long long greedy_sweep(FitState& state) { return state.sweep(); }

/// Algorithm: randomized node sweeps with exact incremental deltas until a
/// full pass accepts no move. Deterministic given (graph, init, priors, seed).
inline FitResult greedy_fit(const DirectedGraph& g, const Partition& z0, const Priors& priors,
                            std::uint64_t seed, const FitOptions& options = {}) {
  FitState state(g, z0, priors, seed, options);
  const int sweeps = state.swap_phase();
  FitResult result;
  result.partition = state.partition();
  result.icl = state.icl();
  result.trace = state.trace();
  result.sweeps = sweeps;
  for (const auto& rec : state.trace()) result.moves += rec.moves;
  return result;
}

}  // namespace gicl
