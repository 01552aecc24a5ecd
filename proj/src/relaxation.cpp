#include "perfectmap/relaxation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "perfectmap/errors.hpp"

namespace perfectmap {

namespace {

// Bron-Kerbosch with pivoting on bitmasks. Pivot: vertex of P | X with the
// most neighbors in P, lowest index on ties.
class CliqueEnumerator {
 public:
  explicit CliqueEnumerator(const UndirectedGraph& g) : n_(g.vertex_count()) {
    rows_.assign(n_, 0);
    for (int u = 0; u < n_; ++u)
      for (int v : g.neighbors(u)) rows_[u] |= 1ULL << v;
  }

  std::vector<std::vector<int>> run() {
    std::uint64_t all = (n_ == 64) ? ~0ULL : ((1ULL << n_) - 1);
    expand(0, all, 0);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void expand(std::uint64_t r, std::uint64_t p, std::uint64_t x) {
    if (p == 0 && x == 0) {
      std::vector<int> clique;
      for (std::uint64_t m = r; m; m &= m - 1) clique.push_back(std::countr_zero(m));
      out_.push_back(std::move(clique));
      return;
    }
    int pivot = -1, best = -1;
    for (std::uint64_t m = p | x; m; m &= m - 1) {
      int u = std::countr_zero(m);
      int cnt = std::popcount(p & rows_[u]);
      if (cnt > best) {
        best = cnt;
        pivot = u;
      }
    }
    std::uint64_t ext = p & ~rows_[pivot];
    for (std::uint64_t m = ext; m; m &= m - 1) {
      int v = std::countr_zero(m);
      std::uint64_t bit = 1ULL << v;
      expand(r | bit, p & rows_[v], x & rows_[v]);
      p &= ~bit;
      x |= bit;
    }
  }

  int n_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::vector<int>> out_;
};

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const UndirectedGraph& g, int max_vertices) {
  const int n = g.vertex_count();
  if (n > max_vertices || n > kDefaultCliqueGuard)
    throw GuardError("maximal-clique enumeration guard exceeded: " + std::to_string(n) +
                     " vertices (limit " + std::to_string(std::min(max_vertices, kDefaultCliqueGuard)) + ")");
  if (n == 0) return {};
  return CliqueEnumerator(g).run();
}

PackingLp build_lp(const UndirectedGraph& g, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != g.vertex_count())
    throw std::invalid_argument("weight count must equal vertex count");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("weights must be > 0");
  PackingLp lp;
  lp.weights.assign(weights.begin(), weights.end());
  lp.rows = maximal_cliques(g);
  return lp;
}

LpSolution solve_lp(const PackingLp& lp, const LpOptions& opts) {
  const int n = static_cast<int>(lp.weights.size());
  const int m = static_cast<int>(lp.rows.size());
  const double ftol = opts.feasibility_tol;

  LpSolution sol;
  sol.x.assign(n, 0.0);
  if (n == 0) {
    sol.integral = true;
    return sol;
  }

  // tableau rows 1..m, objective in row 0; columns: n structural, m slack,
  // rhs last. Slack basis is feasible (rhs = 1).
  const int cols = n + m + 1;
  std::vector<double> t(static_cast<std::size_t>(m + 1) * cols, 0.0);
  auto at = [&](int r, int c) -> double& { return t[static_cast<std::size_t>(r) * cols + c]; };
  for (int j = 0; j < n; ++j) at(0, j) = -lp.weights[j];
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j : lp.rows[i]) at(i + 1, j) = 1.0;
    at(i + 1, n + i) = 1.0;
    at(i + 1, n + m) = 1.0;
    basis[i] = n + i;
  }

  long max_pivots = opts.max_pivots > 0 ? opts.max_pivots : 200L + 50L * (n + m);
  for (long pivots = 0;; ++pivots) {
    if (pivots > max_pivots)
      throw SolverError("simplex exceeded " + std::to_string(max_pivots) + " pivots");

    // Bland: entering column = lowest index with positive reduced cost
    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (at(0, j) < -ftol) {
        enter = j;
        break;
      }
    if (enter < 0) break;  // optimal

    // ratio test; ties resolved by smallest basic variable index (Bland)
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 1; i <= m; ++i) {
      double a = at(i, enter);
      if (a <= ftol) continue;
      double ratio = at(i, n + m) / a;
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[i - 1] < basis[leave - 1])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw SolverError("packing LP reported unbounded; inputs are inconsistent");

    // pivot on (leave, enter)
    double inv = 1.0 / at(leave, enter);
    for (int c = 0; c < cols; ++c) at(leave, c) *= inv;
    at(leave, enter) = 1.0;
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (int c = 0; c < cols; ++c) at(r, c) -= factor * at(leave, c);
      at(r, enter) = 0.0;
    }
    basis[leave - 1] = enter;
  }

  for (int i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = at(i + 1, n + m);

  // verify feasibility of the reported point
  for (int j = 0; j < n; ++j) {
    if (sol.x[j] < -ftol) throw SolverError("simplex returned x < 0");
    sol.x[j] = std::max(sol.x[j], 0.0);
  }
  for (const auto& row : lp.rows) {
    double s = 0.0;
    for (int j : row) s += sol.x[j];
    if (s > 1.0 + 1e4 * ftol) throw SolverError("simplex returned an infeasible row sum");
  }

  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += lp.weights[j] * sol.x[j];
  sol.integral = true;
  for (double v : sol.x)
    if (std::min(std::abs(v), std::abs(v - 1.0)) > opts.integrality_tol) {
      sol.integral = false;
      break;
    }
  return sol;
}

namespace {

NmrfLpResult solve_on(const UndirectedGraph& g, std::span<const double> weights,
                      const LpOptions& opts) {
  NmrfLpResult out;
  out.lp = solve_lp(build_lp(g, weights), opts);
  if (out.lp.integral) {
    NmrfAssignment bits;
    bits.bits.resize(out.lp.x.size());
    for (std::size_t i = 0; i < out.lp.x.size(); ++i) bits.bits[i] = out.lp.x[i] > 0.5 ? 1 : 0;
    out.bits = std::move(bits);
  }
  return out;
}

}  // namespace

NmrfLpResult solve_nmrf_lp(const Nmrf& nmrf, const LpOptions& opts) {
  std::vector<double> w = nmrf.weights();
  return solve_on(nmrf.graph(), w, opts);
}

NmrfLpResult solve_nmrf_lp(const PrunedNmrf& pruned, const LpOptions& opts) {
  NmrfLpResult out = solve_on(pruned.graph, pruned.weights, opts);
  if (out.bits) out.bits = postprocess_assignment(pruned, out.bits->bits);
  return out;
}

}  // namespace perfectmap
