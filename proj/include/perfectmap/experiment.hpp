#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perfectmap/perfection.hpp"

namespace perfectmap {

struct ExperimentConfig {
  Family family = Family::random;
  std::vector<int> sizes;  // requested vertex counts, see params_for_size
  int instances = 50;      // per size
  std::uint64_t seed = 1;
  double p = 0.5;
  double epsilon = 1e-6;  // weight shift keeping weights strictly positive
  double tol = 1e-8;      // message passing residual threshold
  long max_iters = 0;     // 0: solver default
  bool prune = false;
  int berge_guard = kDefaultBergeGuard;
};

struct ExperimentRow {
  std::string family;
  std::uint64_t seed = 0;  // this row's graph seed
  int n_nodes = 0;
  int n_edges = 0;
  bool berge = false;
  double exact = 0.0;
  double lp = 0.0;
  bool lp_integral = false;
  std::optional<double> mp;  // nullopt: decoded bits infeasible (minus infinity)
  bool mp_converged = false;
  long mp_iters = 0;
  std::string status;  // "ok" or the per-row failure
};

// One row per (size, instance): seeded graph, uniform(0,1)+epsilon vertex
// weights, then Berge test, exhaustive stable set, packing LP, and message
// passing. Row r uses graph seed cfg.seed + r. Guard or solver failures
// are recorded in the row's status and the run continues. Throws
// SolverError if any row violates exact <= lp + 1e-6 or is Berge with a
// fractional LP.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

// CSV with '#' header comments echoing the config; 12 significant digits.
// Byte-identical for identical configs.
void write_csv(std::ostream& out, const ExperimentConfig& cfg,
               const std::vector<ExperimentRow>& rows);

}  // namespace perfectmap
