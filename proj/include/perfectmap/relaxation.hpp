#pragma once

#include <optional>
#include <span>
#include <vector>

#include "perfectmap/graph.hpp"
#include "perfectmap/nmrf.hpp"
#include "perfectmap/pruning.hpp"

namespace perfectmap {

inline constexpr int kDefaultCliqueGuard = 64;

// All inclusion-maximal cliques, each sorted ascending, the list sorted
// lexicographically. Isolated vertices appear as singletons. Deterministic.
std::vector<std::vector<int>> maximal_cliques(const UndirectedGraph& g,
                                              int max_vertices = kDefaultCliqueGuard);

// Set-packing LP data: maximize weights^T x subject to x >= 0 and, for
// every constraint row (a maximal clique of the graph), sum of x over the
// row <= 1.
struct PackingLp {
  std::vector<double> weights;
  std::vector<std::vector<int>> rows;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  bool integral = false;  // every coordinate within tolerance of {0, 1}
};

PackingLp build_lp(const UndirectedGraph& g, std::span<const double> weights);

struct LpOptions {
  double integrality_tol = 1e-6;
  double feasibility_tol = 1e-9;
  long max_pivots = 0;  // 0: scaled with problem size
};

// Dense tableau simplex with Bland's rule (lowest-index entering column,
// lowest-index basic variable on ratio ties), so runs are reproducible and
// cycling is impossible. The initial slack basis is feasible because every
// right-hand side is 1.
LpSolution solve_lp(const PackingLp& lp, const LpOptions& opts = {});

struct NmrfLpResult {
  LpSolution lp;
  // Rounded bits on the original instance when the LP is integral (merge
  // expansion and per-clique post-processing already applied for pruned
  // inputs); nullopt when fractional.
  std::optional<NmrfAssignment> bits;
};

NmrfLpResult solve_nmrf_lp(const Nmrf& nmrf, const LpOptions& opts = {});
NmrfLpResult solve_nmrf_lp(const PrunedNmrf& pruned, const LpOptions& opts = {});

}  // namespace perfectmap
