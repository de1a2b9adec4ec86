#pragma once

#include <limits>
#include <stdexcept>

#include "gicl/fit.hpp"

namespace gicl {

struct MergeDelta {
  int source = -1;  // cluster that disappears
  int target = -1;  // cluster that absorbs it
  double delta = -std::numeric_limits<double>::infinity();
};

inline double delta_merge(FitState& state, int source, int target) {
  return state.merge_delta(source, target);
}

inline void apply_merge(FitState& state, int source, int target, double delta) {
  state.apply_merge(source, target, delta);
}

/// Best merge over all unordered pairs, scanned in lexicographic order so
/// equal deltas resolve to the smallest pair. The higher index is fused into
/// the lower one. Returns target = -1 when K == 1.
inline MergeDelta best_merge(FitState& state) {
  MergeDelta best;
  for (int a = 0; a + 1 < state.k(); ++a) {
    for (int b = a + 1; b < state.k(); ++b) {
      const double delta = state.merge_delta(b, a);
      if (delta > best.delta) {
        best = {b, a, delta};
      }
    }
  }
  return best;
}

/// Greedy hierarchical pass: repeatedly applies the maximal strictly-positive
/// merge until none remains. Returns the number of merges applied.
inline int merge_pass(FitState& state) {
  int accepted = 0;
  while (state.k() > 1) {
    const MergeDelta best = best_merge(state);
    if (best.target < 0 || !(best.delta > state.options().eps_accept)) break;
    state.apply_merge(best.source, best.target, best.delta);
    ++accepted;
  }
  return accepted;
}

/// Swap phase, then merge phase, optionally alternating until neither move
/// type improves the criterion.
inline int optimize(FitState& state) {
  int merges = 0;
  state.swap_phase();
  if (!state.options().merge_phase) return merges;
  while (true) {
    const int accepted = merge_pass(state);
    merges += accepted;
    if (accepted == 0 || !state.options().merge_reentry) break;
    long long moves = 0;
    const int passes = state.swap_phase();
    const auto& trace = state.trace();
    for (std::size_t t = trace.size() - static_cast<std::size_t>(passes); t < trace.size(); ++t) {
      moves += trace[t].moves;
    }
    if (moves == 0) break;
  }
  return merges;
}

}  // namespace gicl
