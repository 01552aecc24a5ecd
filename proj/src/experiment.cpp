#include "perfectmap/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "perfectmap/errors.hpp"
#include "perfectmap/message_passing.hpp"
#include "perfectmap/oracle.hpp"
#include "perfectmap/pruning.hpp"
#include "perfectmap/relaxation.hpp"

namespace perfectmap {

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.instances < 1) throw std::invalid_argument("instances must be >= 1");
  if (cfg.sizes.empty()) throw std::invalid_argument("at least one size is required");
  for (int s : cfg.sizes)
    if (s < 1) throw std::invalid_argument("sizes must be >= 1");

  std::vector<ExperimentRow> rows;
  std::uint64_t row_index = 0;
  for (int size : cfg.sizes) {
    FamilyParams params = params_for_size(cfg.family, size, cfg.p);
    for (int inst = 0; inst < cfg.instances; ++inst, ++row_index) {
      ExperimentRow row;
      row.family = std::string(family_name(cfg.family));
      row.seed = cfg.seed + row_index;
      row.status = "ok";

      SplitMix64 rng(row.seed);
      UndirectedGraph g = gen_family(cfg.family, params, rng);
      row.n_nodes = g.vertex_count();
      row.n_edges = g.edge_count();

      // weights continue the instance stream after the edge coins
      std::vector<double> weights(g.vertex_count());
      for (double& w : weights) w = rng.next_unit() + cfg.epsilon;

      try {
        row.berge = is_berge(g, cfg.berge_guard).berge;

        PrunedNmrf pruned;
        const UndirectedGraph* sg = &g;
        const std::vector<double>* sw = &weights;
        if (cfg.prune) {
          pruned = merge(wrap_instance(g, weights));
          sg = &pruned.graph;
          sw = &pruned.weights;
        }

        row.exact = exhaustive_mwss(*sg, *sw).value;

        LpSolution lp = solve_lp(build_lp(*sg, *sw));
        row.lp = lp.objective;
        row.lp_integral = lp.integral;

        MpOptions mp_opts;
        mp_opts.tol = cfg.tol;
        mp_opts.max_iters = cfg.max_iters;
        MpResult mp = mp_solve(*sg, *sw, mp_opts);
        row.mp = mp.objective;
        row.mp_converged = mp.converged;
        row.mp_iters = mp.iterations;

        if (row.exact > row.lp + 1e-6)
          throw SolverError("relaxation bound violated: exact " + fmt12(row.exact) + " > lp " +
                            fmt12(row.lp));
        if (row.berge && !row.lp_integral)
          throw SolverError("Berge instance with fractional LP at seed " +
                            std::to_string(row.seed));
      } catch (const GuardError& e) {
        row.status = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg,
               const std::vector<ExperimentRow>& rows) {
  out << "# perfectmap experiment\n";
  out << "# family=" << family_name(cfg.family) << " sizes=";
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) out << (i ? "," : "") << cfg.sizes[i];
  out << " instances=" << cfg.instances << " seed=" << cfg.seed << " p=" << fmt12(cfg.p)
      << " epsilon=" << fmt12(cfg.epsilon) << " tol=" << fmt12(cfg.tol)
      << " max_iters=" << cfg.max_iters << " prune=" << (cfg.prune ? 1 : 0) << "\n";
  out << "# vertex weights are uniform(0,1) + epsilon; row r uses graph seed = seed + r\n";
  out << "family,seed,n_nodes,n_edges,berge,exact,lp,lp_integral,mp,mp_converged,mp_iters,status\n";
  for (const auto& row : rows) {
    out << row.family << ',' << row.seed << ',' << row.n_nodes << ',' << row.n_edges << ',';
    if (row.status == "ok") {
      out << (row.berge ? 1 : 0) << ',' << fmt12(row.exact) << ',' << fmt12(row.lp) << ','
          << (row.lp_integral ? 1 : 0) << ',' << (row.mp ? fmt12(*row.mp) : "-inf") << ','
          << (row.mp_converged ? 1 : 0) << ',' << row.mp_iters << ',';
    } else {
      out << ",,,,,,,";
    }
    std::string status = row.status;
    for (char& c : status)
      if (c == ',') c = ';';
    out << status << "\n";
  }
}

}  // namespace perfectmap
