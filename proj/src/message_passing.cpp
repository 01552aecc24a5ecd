#include "perfectmap/message_passing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "perfectmap/errors.hpp"
#include "perfectmap/relaxation.hpp"

namespace perfectmap {

PairwisePotentials build_potentials(const UndirectedGraph& g, std::span<const double> weights,
                                    double neg_large) {
  if (static_cast<int>(weights.size()) != g.vertex_count())
    throw std::invalid_argument("weight count must equal vertex count");
  if (!(neg_large < 0.0)) throw std::invalid_argument("neg_large must be negative");
  PairwisePotentials pot;
  pot.neg_large = neg_large;
  pot.edges = g.edges();
  pot.theta.resize(pot.edges.size());
  for (std::size_t e = 0; e < pot.edges.size(); ++e) {
    auto [i, j] = pot.edges[e];
    const double fi = weights[i] / g.degree(i);
    const double fj = weights[j] / g.degree(j);
    pot.theta[e] = {{{0.0, fj}, {fi, neg_large}}};
  }
  return pot;
}

MpState init_mp(const PairwisePotentials& pot) {
  MpState s;
  s.lambda.assign(pot.edges.size() * 4, 0.0);
  return s;
}

namespace {

// incoming message totals per vertex and state
std::vector<std::array<double, 2>> message_totals(const MpState& state, int n,
                                                  const PairwisePotentials& pot) {
  std::vector<std::array<double, 2>> s(n, {0.0, 0.0});
  for (std::size_t e = 0; e < pot.edges.size(); ++e) {
    auto [u, v] = pot.edges[e];
    s[u][0] += state.lambda[4 * e + 0];
    s[u][1] += state.lambda[4 * e + 1];
    s[v][0] += state.lambda[4 * e + 2];
    s[v][1] += state.lambda[4 * e + 3];
  }
  return s;
}

}  // namespace

void mp_iterate(MpState& state, const UndirectedGraph& g, const PairwisePotentials& pot,
                MpSchedule schedule) {
  const int n = g.vertex_count();
  if (state.lambda.size() != pot.edges.size() * 4)
    throw std::invalid_argument("message state does not match the potential table");

  auto totals = message_totals(state, n, pot);
  const bool in_place = schedule == MpSchedule::edge_sequential;
  std::vector<double> next = in_place ? std::vector<double>() : state.lambda;

  double residual = 0.0;
  for (std::size_t e = 0; e < pot.edges.size(); ++e) {
    auto [u, v] = pot.edges[e];
    const auto& th = pot.theta[e];
    double* lam = state.lambda.data() + 4 * e;

    // neighbor sums excluding the opposite direction of this edge
    const double au0 = totals[u][0] - lam[0];
    const double au1 = totals[u][1] - lam[1];
    const double av0 = totals[v][0] - lam[2];
    const double av1 = totals[v][1] - lam[3];

    const double nvu0 = -0.5 * au0 + 0.5 * std::max(av0 + th[0][0], av1 + th[0][1]);
    const double nvu1 = -0.5 * au1 + 0.5 * std::max(av0 + th[1][0], av1 + th[1][1]);
    const double nuv0 = -0.5 * av0 + 0.5 * std::max(au0 + th[0][0], au1 + th[1][0]);
    const double nuv1 = -0.5 * av1 + 0.5 * std::max(au0 + th[0][1], au1 + th[1][1]);

    residual = std::max({residual, std::abs(nvu0 - lam[0]), std::abs(nvu1 - lam[1]),
                         std::abs(nuv0 - lam[2]), std::abs(nuv1 - lam[3])});
    if (!std::isfinite(nvu0) || !std::isfinite(nvu1) || !std::isfinite(nuv0) || !std::isfinite(nuv1))
      throw SolverError("message passing produced a non-finite message");

    if (in_place) {
      totals[u][0] += nvu0 - lam[0];
      totals[u][1] += nvu1 - lam[1];
      totals[v][0] += nuv0 - lam[2];
      totals[v][1] += nuv1 - lam[3];
      lam[0] = nvu0;
      lam[1] = nvu1;
      lam[2] = nuv0;
      lam[3] = nuv1;
    } else {
      double* out = next.data() + 4 * e;
      out[0] = nvu0;
      out[1] = nvu1;
      out[2] = nuv0;
      out[3] = nuv1;
    }
  }
  if (!in_place) state.lambda = std::move(next);
  state.residual = residual;
  ++state.iteration;
}

std::vector<std::array<double, 2>> mp_beliefs(const MpState& state, const UndirectedGraph& g,
                                              const PairwisePotentials& pot,
                                              std::span<const double> weights) {
  auto b = message_totals(state, g.vertex_count(), pot);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 0) b[v] = {0.0, weights[v]};
  return b;
}

namespace {

// ---------------------------------------------------------------------------
// Clique engine: block coordinate descent on the dual of the maximal-clique
// packing LP,
//   g(lambda) = sum_i max_xi b_i(xi)
//             + sum_C max_{x_C feasible} [ -sum_{i in C} lambda[C->i](x_i) ],
//   b_i(xi) = f_i*xi + sum_{C owning i} lambda[C->i](xi),
// where "feasible" means at most one member of C asserted. The block update
// for one clique equalizes its max-marginals:
//   beta_i = b_i - lambda[C->i],  D_i = beta_i(1) - beta_i(0),
//   gamma_i(1) = S0 + D_i,  gamma_i(0) = S0 + max(0, max_{j != i} D_j),
//   lambda[C->i](xi) <- -beta_i(xi) + gamma_i(xi) / (|C| + 1).
// At temperature T > 0 the hard maxima in gamma are replaced by
// T*log-sum-exp, which removes the corners that stall hard coordinate
// descent; annealing T to zero then lands at the LP dual optimum in
// practice, where the margins b_i(1) - b_i(0) decode the assignment.
// ---------------------------------------------------------------------------

constexpr double kAnnealDecay = 0.75;
constexpr double kAnnealFloorFraction = 1e-5;
constexpr int kAnnealStageSweeps = 400;

class CliqueEngine {
 public:
  CliqueEngine(const UndirectedGraph& g, std::span<const double> weights)
      : n_(g.vertex_count()),
        f_(weights.begin(), weights.end()),
        cliques_(maximal_cliques(g)) {
    lambda_.resize(cliques_.size());
    for (std::size_t c = 0; c < cliques_.size(); ++c)
      lambda_[c].assign(cliques_[c].size() * 2, 0.0);
    totals_.assign(n_, {0.0, 0.0});
  }

  double sweep(double temperature) {
    double residual = 0.0;
    for (std::size_t c = 0; c < cliques_.size(); ++c)
      residual = std::max(residual, update_clique(c, temperature));
    return residual;
  }

  std::array<double, 2> belief(int v) const { return {totals_[v][0], f_[v] + totals_[v][1]}; }

 private:
  // stable running log-sum-exp
  struct Lse {
    double peak = -1e300, sum = 0.0;
    void add(double x) {
      if (x <= peak) {
        sum += std::exp(x - peak);
      } else {
        sum = sum * std::exp(peak - x) + 1.0;
        peak = x;
      }
    }
    static Lse merged(Lse a, const Lse& b) {
      if (b.peak <= a.peak) {
        a.sum += b.sum * std::exp(b.peak - a.peak);
        return a;
      }
      Lse out = b;
      out.sum += a.sum * std::exp(a.peak - b.peak);
      return out;
    }
    double value() const { return peak + std::log(sum); }
  };

  double update_clique(std::size_t c, double temperature) {
    const auto& members = cliques_[c];
    const int k = static_cast<int>(members.size());
    auto& lam = lambda_[c];

    double s0 = 0.0;
    scratch_b0_.resize(k);
    scratch_b1_.resize(k);
    scratch_d_.resize(k);
    for (int t = 0; t < k; ++t) {
      int i = members[t];
      scratch_b0_[t] = totals_[i][0] - lam[2 * t];
      scratch_b1_[t] = f_[i] + totals_[i][1] - lam[2 * t + 1];
      scratch_d_[t] = scratch_b1_[t] - scratch_b0_[t];
      s0 += scratch_b0_[t];
    }

    // gamma_i(0): best over "all zero" and "one other member asserted"
    scratch_g0_.resize(k);
    if (k == 1) {
      scratch_g0_[0] = s0;
    } else if (temperature <= 0.0) {
      scratch_pre_.assign(k + 1, -1e300);
      scratch_suf_.assign(k + 1, -1e300);
      for (int t = 0; t < k; ++t) scratch_pre_[t + 1] = std::max(scratch_pre_[t], scratch_d_[t]);
      for (int t = k - 1; t >= 0; --t) scratch_suf_[t] = std::max(scratch_suf_[t + 1], scratch_d_[t]);
      for (int t = 0; t < k; ++t)
        scratch_g0_[t] = s0 + std::max(0.0, std::max(scratch_pre_[t], scratch_suf_[t + 1]));
    } else {
      std::vector<Lse> pre(k + 1), suf(k + 1);
      for (int t = 0; t < k; ++t) {
        pre[t + 1] = pre[t];
        pre[t + 1].add(scratch_d_[t] / temperature);
      }
      for (int t = k - 1; t >= 0; --t) {
        suf[t] = suf[t + 1];
        suf[t].add(scratch_d_[t] / temperature);
      }
      for (int t = 0; t < k; ++t) {
        Lse excl = Lse::merged(pre[t], suf[t + 1]);
        excl.add(0.0);
        scratch_g0_[t] = s0 + temperature * excl.value();
      }
    }

    double residual = 0.0;
    for (int t = 0; t < k; ++t) {
      int i = members[t];
      const double g1 = s0 + scratch_d_[t];
      const double n0 = -scratch_b0_[t] + scratch_g0_[t] / (k + 1);
      const double n1 = -scratch_b1_[t] + g1 / (k + 1);
      residual = std::max({residual, std::abs(n0 - lam[2 * t]), std::abs(n1 - lam[2 * t + 1])});
      totals_[i][0] += n0 - lam[2 * t];
      totals_[i][1] += n1 - lam[2 * t + 1];
      lam[2 * t] = n0;
      lam[2 * t + 1] = n1;
    }
    return residual;
  }

  int n_;
  std::vector<double> f_;
  std::vector<std::vector<int>> cliques_;
  std::vector<std::vector<double>> lambda_;
  std::vector<std::array<double, 2>> totals_;
  std::vector<double> scratch_b0_, scratch_b1_, scratch_d_, scratch_g0_, scratch_pre_, scratch_suf_;
};

struct AnnealedRun {
  bool converged = false;
  long iterations = 0;
  std::vector<std::uint8_t> bits;
  std::vector<double> margins;
  std::vector<std::array<double, 2>> beliefs;
};

AnnealedRun run_annealed(const UndirectedGraph& g, std::span<const double> weights, double tol,
                         long budget) {
  CliqueEngine engine(g, weights);
  AnnealedRun run;
  double fmax = 1e-9;
  for (double w : weights) fmax = std::max(fmax, w);
  for (double t = fmax; t > kAnnealFloorFraction * fmax && run.iterations < budget; t *= kAnnealDecay) {
    for (int it = 0; it < kAnnealStageSweeps && run.iterations < budget; ++it) {
      ++run.iterations;
      if (engine.sweep(t) < std::max(tol, 1e-4 * t)) break;
    }
  }
  while (run.iterations < budget) {
    ++run.iterations;
    if (engine.sweep(0.0) < tol) {
      run.converged = true;
      break;
    }
  }

  const int n = g.vertex_count();
  run.bits.assign(n, 0);
  run.margins.assign(n, 0.0);
  run.beliefs.resize(n);
  for (int v = 0; v < n; ++v) {
    run.beliefs[v] = engine.belief(v);
    run.margins[v] = run.beliefs[v][1] - run.beliefs[v][0];
    run.bits[v] = run.margins[v] > 0.0 ? 1 : 0;
  }
  return run;
}

MpResult solve_clique_annealed(const UndirectedGraph& g, std::span<const double> weights,
                               const MpOptions& opts) {
  const int n = g.vertex_count();
  const long anneal_budget =
      kAnnealStageSweeps *
      (1 + static_cast<long>(std::log(kAnnealFloorFraction) / std::log(kAnnealDecay)));
  long budget = opts.max_iters > 0
                    ? opts.max_iters
                    : anneal_budget + std::max<long>(1000, 10L * n * std::max(1, g.edge_count()));

  MpResult res;
  std::vector<std::uint8_t> bits(n, 0);
  std::vector<std::uint8_t> alive(n, 1);
  bool all_converged = true;
  long used = 0;
  bool first_stage = true;

  // Decode by margins; if the decode violates an edge (degenerate dual
  // corner), commit the strongest assertion, drop it and its neighbors, and
  // re-solve the remainder.
  while (used < budget) {
    std::vector<int> live;
    for (int v = 0; v < n; ++v)
      if (alive[v]) live.push_back(v);
    if (live.empty()) break;

    UndirectedGraph sub(static_cast<int>(live.size()));
    std::vector<double> sub_w(live.size());
    std::vector<int> back(n, -1);
    for (std::size_t t = 0; t < live.size(); ++t) {
      back[live[t]] = static_cast<int>(t);
      sub_w[t] = weights[live[t]];
    }
    for (std::size_t t = 0; t < live.size(); ++t)
      for (int u : g.neighbors(live[t]))
        if (back[u] > static_cast<int>(t)) sub.add_edge(static_cast<int>(t), back[u]);

    AnnealedRun run = run_annealed(sub, sub_w, opts.tol, budget - used);
    used += run.iterations;
    all_converged = all_converged && run.converged;
    if (first_stage) {
      // full-instance beliefs are the reported ones
      res.beliefs = run.beliefs;
      first_stage = false;
    }

    if (stable_set_objective(sub, sub_w, run.bits)) {
      for (std::size_t t = 0; t < live.size(); ++t) bits[live[t]] = run.bits[t];
      break;
    }
    int best = -1;
    for (int t = 0; t < sub.vertex_count(); ++t)
      if (run.bits[t] && (best < 0 || run.margins[t] > run.margins[best])) best = t;
    if (best < 0) break;
    int orig = live[best];
    bits[orig] = 1;
    alive[orig] = 0;
    for (int u : g.neighbors(orig)) alive[u] = 0;
  }

  res.bits = std::move(bits);
  res.iterations = used;
  res.converged = all_converged;
  res.objective = stable_set_objective(g, weights, res.bits);
  return res;
}

MpResult solve_pairwise(const UndirectedGraph& g, std::span<const double> weights,
                        const MpOptions& opts) {
  const int n = g.vertex_count();
  double neg_large = opts.neg_large;
  if (neg_large == 0.0) {
    double fmax = 0.0;
    for (double w : weights) fmax = std::max(fmax, w);
    neg_large = -(1e6 * (1.0 + fmax));
  }

  PairwisePotentials pot = build_potentials(g, weights, neg_large);
  MpState state = init_mp(pot);

  long budget = opts.max_iters > 0
                    ? opts.max_iters
                    : std::max<long>(1, 10L * n * static_cast<long>(pot.edges.size()));
  MpResult res;
  for (long it = 0; it < budget; ++it) {
    mp_iterate(state, g, pot, opts.schedule);
    if (state.residual < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = state.iteration;
  res.beliefs = mp_beliefs(state, g, pot, weights);
  res.bits.assign(n, 0);
  for (int v = 0; v < n; ++v) res.bits[v] = res.beliefs[v][1] > res.beliefs[v][0] ? 1 : 0;
  res.objective = stable_set_objective(g, weights, res.bits);
  return res;
}

}  // namespace

MpResult mp_solve(const UndirectedGraph& g, std::span<const double> weights, const MpOptions& opts) {
  if (static_cast<int>(weights.size()) != g.vertex_count())
    throw std::invalid_argument("weight count must equal vertex count");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("weights must be > 0");
  if (g.vertex_count() == 0) {
    MpResult res;
    res.converged = true;
    res.objective = 0.0;
    return res;
  }
  return opts.engine == MpEngine::clique_annealed ? solve_clique_annealed(g, weights, opts)
                                                  : solve_pairwise(g, weights, opts);
}

}  // namespace perfectmap
