#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "perfectmap/graph.hpp"

namespace perfectmap {

// ---------------------------------------------------------------------------
// Pairwise surface: the edge-decomposed potentials and their message update.
//
// theta for edge (i, j), i < j:
//   theta[0][0] = 0            theta[0][1] = f_j / deg(j)
//   theta[1][0] = f_i / deg(i) theta[1][1] = neg_large
// Summed over edges this reproduces the weighted stable-set objective on
// feasible selections. Fixed points of the lambda update below attain the
// optimum of the EDGE-constrained relaxation (rows x_i + x_j <= 1), which
// coincides with the maximal-clique packing LP exactly when the graph is
// triangle free. On graphs with larger cliques the edge relaxation is
// strictly weaker, which is why mp_solve defaults to the clique engine.
// ---------------------------------------------------------------------------

struct PairwisePotentials {
  std::vector<std::pair<int, int>> edges;  // (i, j) with i < j, sorted
  std::vector<std::array<std::array<double, 2>, 2>> theta;
  double neg_large = 0.0;
};

PairwisePotentials build_potentials(const UndirectedGraph& g, std::span<const double> weights,
                                    double neg_large);

// How a sweep consumes earlier updates. Fixed points are identical either
// way (tested); trajectories are not. edge_sequential is the working
// schedule; snapshot recomputes every edge from the pre-sweep messages and
// diverges on most looped instances, so it exists for the fixed-point
// equivalence tests only.
enum class MpSchedule { edge_sequential, snapshot };

// Messages lambda[j -> i](x_i), stored per directed edge and binary state.
struct MpState {
  // 4 entries per undirected edge e = (u, v):
  //   [4e + 0], [4e + 1]: lambda[v -> u](x_u = 0), (x_u = 1)
  //   [4e + 2], [4e + 3]: lambda[u -> v](x_v = 0), (x_v = 1)
  std::vector<double> lambda;
  long iteration = 0;
  double residual = 0.0;
};

MpState init_mp(const PairwisePotentials& pot);

// One sweep of
//   lambda[j->i](x_i) <- -1/2 sum_{k in Ne(i)\j} lambda[k->i](x_i)
//                        + 1/2 max_{x_j} [sum_{k in Ne(j)\i} lambda[k->j](x_j)
//                                         + theta_ij(x_i, x_j)]
// over edges in sorted order, both directions of an edge together.
void mp_iterate(MpState& state, const UndirectedGraph& g, const PairwisePotentials& pot,
                MpSchedule schedule = MpSchedule::edge_sequential);

// b(x_i) = sum of incoming messages; isolated vertices get (0, f_i).
std::vector<std::array<double, 2>> mp_beliefs(const MpState& state, const UndirectedGraph& g,
                                              const PairwisePotentials& pot,
                                              std::span<const double> weights);

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

// clique_annealed treats every maximal clique as one nand factor and runs
// the same convergent block updates on an entropy-smoothed dual, annealing
// the temperature to zero before a hard polish; infeasible decodes are
// repaired by conditioning on the strongest assertion and re-solving
// (decimation). Its fixed points attain the maximal-clique packing LP
// bound, so on perfect graphs the decode recovers the exact optimum.
// pairwise_edge runs the plain edge sweeps above.
enum class MpEngine { clique_annealed, pairwise_edge };

struct MpOptions {
  double tol = 1e-8;
  long max_iters = 0;      // total sweep budget; 0 = scaled with the instance
  double neg_large = 0.0;  // pairwise engine; 0 = -(1e6 * (1 + max weight))
  MpSchedule schedule = MpSchedule::edge_sequential;  // pairwise engine
  MpEngine engine = MpEngine::clique_annealed;
};

struct MpResult {
  std::vector<std::uint8_t> bits;   // belief argmax, ties to 0
  std::optional<double> objective;  // stable-set objective; nullopt if infeasible
  long iterations = 0;              // sweeps performed (all phases)
  bool converged = false;
  std::vector<std::array<double, 2>> beliefs;  // decode margins, (b(0), b(1)) per vertex
};

// Zero-initialize, sweep to convergence or budget, decode beliefs.
MpResult mp_solve(const UndirectedGraph& g, std::span<const double> weights,
                  const MpOptions& opts = {});

}  // namespace perfectmap
