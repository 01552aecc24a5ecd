// perfectmap: MAP inference on discrete graphical models through nand-MRF
// conversion, Berge certification, set-packing LP relaxation, convergent
// message passing, and exhaustive reference solvers.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perfectmap/errors.hpp"
#include "perfectmap/experiment.hpp"
#include "perfectmap/message_passing.hpp"
#include "perfectmap/model.hpp"
#include "perfectmap/nmrf.hpp"
#include "perfectmap/oracle.hpp"
#include "perfectmap/perfection.hpp"
#include "perfectmap/pruning.hpp"
#include "perfectmap/relaxation.hpp"

namespace pm = perfectmap;

namespace {

bool guard_override() {
  const char* v = std::getenv("PERFECTMAP_GUARD_OVERRIDE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

int effective_berge_guard() {
  return guard_override() ? pm::kHoleSearchCapacity : pm::kDefaultBergeGuard;
}

int effective_mwss_guard() { return guard_override() ? 64 : pm::kDefaultMwssGuard; }

unsigned long long effective_map_guard() {
  return guard_override() ? (1ULL << 40) : pm::kDefaultMapStateGuard;
}

enum class InputKind { gm, ug };

// Files are sniffed by their magic token, not by extension.
InputKind sniff_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 2, "GM") == 0) return InputKind::gm;
    if (line.compare(first, 2, "UG") == 0) return InputKind::ug;
    break;
  }
  throw std::runtime_error(path + ": expected a GM or UG header");
}

pm::GraphicalModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return pm::parse_model(in);
}

pm::UgFile load_ug(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return pm::read_ug(in);
}

// A solvable vertex-weighted stable-set instance, from either input kind.
struct Instance {
  pm::UndirectedGraph graph;
  std::vector<double> weights;
  std::optional<pm::GraphicalModel> model;  // set for GM inputs
  std::optional<pm::Nmrf> nmrf;
};

Instance load_instance(const std::string& path, double epsilon) {
  Instance inst;
  if (sniff_kind(path) == InputKind::gm) {
    inst.model = pm::rescale_potentials(load_model(path), epsilon);
    inst.nmrf = pm::build_nmrf(*inst.model);
    inst.graph = inst.nmrf->graph();
    inst.weights = inst.nmrf->weights();
  } else {
    pm::UgFile ug = load_ug(path);
    if (!ug.weights) throw std::runtime_error(path + ": UG instance needs a weights line");
    inst.graph = std::move(ug.graph);
    inst.weights = std::move(*ug.weights);
    for (double w : inst.weights)
      if (!(w > 0.0)) throw std::runtime_error(path + ": weights must be > 0");
  }
  return inst;
}

pm::PrunedNmrf prune_instance(const Instance& inst, double epsilon) {
  if (inst.nmrf) return pm::merge(pm::disconnect(*inst.nmrf, epsilon));
  return pm::merge(pm::wrap_instance(inst.graph, inst.weights));
}

void print_bits(const std::vector<std::uint8_t>& bits) {
  std::cout << "bits";
  for (auto b : bits) std::cout << ' ' << int(b);
  std::cout << "\n";
}

void print_assignment_if_model(const Instance& inst, const std::vector<std::uint8_t>& bits) {
  if (!inst.model) return;
  pm::NmrfAssignment na{bits};
  try {
    pm::Assignment a = pm::decode_assignment(*inst.nmrf, *inst.model, na);
    std::cout << "assignment";
    for (int v : a.values) std::cout << ' ' << v;
    std::cout << "\n";
  } catch (const std::runtime_error& e) {
    std::cout << "assignment none (" << e.what() << ")\n";
  }
}

int cmd_convert(const std::string& input, const std::string& output, double epsilon) {
  pm::GraphicalModel m = pm::rescale_potentials(load_model(input), epsilon);
  pm::Nmrf nmrf = pm::build_nmrf(m);
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  pm::write_nmrf_ug(out, nmrf);
  std::cout << "nodes " << nmrf.node_count() << " edges " << nmrf.graph().edge_count() << "\n";
  return 0;
}

int cmd_check_perfect(const std::string& input, double epsilon) {
  pm::UndirectedGraph g;
  if (sniff_kind(input) == InputKind::gm) {
    g = pm::build_nmrf(pm::rescale_potentials(load_model(input), epsilon)).graph();
  } else {
    g = load_ug(input).graph;
  }
  pm::BergeResult res = pm::is_berge(g, effective_berge_guard());
  if (res.berge) {
    std::cout << "berge\n";
  } else {
    std::cout << "not-berge "
              << (res.side == pm::WitnessSide::graph ? "graph" : "complement");
    for (int v : res.witness->cycle) std::cout << ' ' << v;
    std::cout << "\n";
  }
  return 0;
}

int cmd_solve_lp(const std::string& input, bool prune, double epsilon, double int_tol,
                 double feas_tol) {
  Instance inst = load_instance(input, epsilon);
  pm::LpOptions opts;
  opts.integrality_tol = int_tol;
  opts.feasibility_tol = feas_tol;

  pm::NmrfLpResult res;
  if (prune) {
    res = solve_nmrf_lp(prune_instance(inst, epsilon), opts);
  } else if (inst.nmrf) {
    res = solve_nmrf_lp(*inst.nmrf, opts);
  } else {
    res.lp = pm::solve_lp(pm::build_lp(inst.graph, inst.weights), opts);
    if (res.lp.integral) {
      pm::NmrfAssignment bits;
      bits.bits.resize(res.lp.x.size());
      for (std::size_t i = 0; i < res.lp.x.size(); ++i) bits.bits[i] = res.lp.x[i] > 0.5;
      res.bits = std::move(bits);
    }
  }

  std::cout.precision(12);
  std::cout << "objective " << res.lp.objective << "\n";
  std::cout << "integral " << (res.lp.integral ? 1 : 0) << "\n";
  std::cout << "x";
  for (double v : res.lp.x) std::cout << ' ' << v;
  std::cout << "\n";
  if (res.bits) {
    print_bits(res.bits->bits);
    print_assignment_if_model(inst, res.bits->bits);
  }
  return 0;
}

int cmd_solve_mp(const std::string& input, bool prune, double epsilon, double tol, long max_iters,
                 double neg_large, const std::string& engine) {
  Instance inst = load_instance(input, epsilon);
  pm::MpOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  opts.neg_large = neg_large;
  if (engine == "pairwise")
    opts.engine = pm::MpEngine::pairwise_edge;
  else if (engine != "clique")
    throw std::runtime_error("unknown engine '" + engine + "' (use clique or pairwise)");

  std::optional<pm::PrunedNmrf> pruned;
  const pm::UndirectedGraph* g = &inst.graph;
  const std::vector<double>* w = &inst.weights;
  if (prune) {
    pruned = prune_instance(inst, epsilon);
    g = &pruned->graph;
    w = &pruned->weights;
  }
  pm::MpResult res = pm::mp_solve(*g, *w, opts);

  std::cout.precision(12);
  std::cout << "objective ";
  if (res.objective)
    std::cout << *res.objective << "\n";
  else
    std::cout << "-inf\n";
  std::cout << "converged " << (res.converged ? 1 : 0) << "\n";
  std::cout << "iterations " << res.iterations << "\n";
  std::vector<std::uint8_t> bits = res.bits;
  if (prune && res.objective) bits = pm::postprocess_assignment(*pruned, bits).bits;
  print_bits(bits);
  if (res.objective) print_assignment_if_model(inst, bits);
  return 0;
}

int cmd_solve_exact(const std::string& input, double epsilon) {
  std::cout.precision(12);
  if (sniff_kind(input) == InputKind::gm) {
    pm::GraphicalModel m = pm::rescale_potentials(load_model(input), epsilon);
    pm::MapResult res = pm::exhaustive_map(m, effective_map_guard());
    std::cout << "value " << res.value << "\n";
    std::cout << "assignment";
    for (int v : res.argmax.values) std::cout << ' ' << v;
    std::cout << "\n";
  } else {
    pm::UgFile ug = load_ug(input);
    if (!ug.weights) throw std::runtime_error(input + ": UG instance needs a weights line");
    pm::MwssResult res = pm::exhaustive_mwss(ug.graph, *ug.weights, effective_mwss_guard());
    std::cout << "value " << res.value << "\n";
    print_bits(res.bits);
  }
  return 0;
}

int cmd_gen_graph(const std::string& family_name, int size, double p, std::uint64_t seed,
                  const std::string& output) {
  auto fam = pm::family_from_name(family_name);
  if (!fam) throw CLI::ValidationError("--family", "unknown family '" + family_name + "'");
  // same stream layout as the experiment harness: edge coins, then weights
  pm::SplitMix64 rng(seed);
  pm::UndirectedGraph g = pm::gen_family(*fam, pm::params_for_size(*fam, size, p), rng);
  std::vector<double> weights(g.vertex_count());
  for (double& w : weights) w = rng.next_unit() + 1e-6;

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw std::runtime_error("cannot write " + output);
    out = &file;
  }
  pm::write_ug(*out, g, &weights);
  return 0;
}

int cmd_experiment(const pm::ExperimentConfig& cfg, const std::string& output) {
  std::vector<pm::ExperimentRow> rows = pm::run_experiment(cfg);
  std::ostringstream csv;
  pm::write_csv(csv, cfg, rows);
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(output);
    if (!file) throw std::runtime_error("cannot write " + output);
    file << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP inference via nand Markov random fields, perfect-graph "
               "certification, LP relaxation and message passing"};
  app.require_subcommand(1);

  double epsilon = 1e-6;
  app.add_option("--epsilon", epsilon, "potential rescaling shift (tables become psi/min + epsilon)")
      ->capture_default_str();

  std::string input, output;
  bool prune = false;

  auto* convert = app.add_subcommand("convert", "rescale a GM file and dump its nand MRF as UG");
  convert->add_option("input", input, "GM file")->required();
  convert->add_option("--out", output, "output UG path")->required();

  auto* check = app.add_subcommand("check-perfect", "Berge test via exhaustive odd-hole search");
  check->add_option("input", input, "UG or GM file")->required();

  double int_tol = 1e-6, feas_tol = 1e-9;
  auto* lp = app.add_subcommand("solve-lp", "set-packing LP relaxation over maximal cliques");
  lp->add_option("input", input, "GM or weighted UG file")->required();
  lp->add_flag("--prune", prune, "apply DISCONNECT and MERGE first");
  lp->add_option("--tol", int_tol, "integrality tolerance")->capture_default_str();
  lp->add_option("--feas-tol", feas_tol, "feasibility tolerance")->capture_default_str();

  double mp_tol = 1e-8, neg_large = 0.0;
  long max_iters = 0;
  std::string engine = "clique";
  auto* mp = app.add_subcommand("solve-mp", "convergent message passing");
  mp->add_option("input", input, "GM or weighted UG file")->required();
  mp->add_flag("--prune", prune, "apply DISCONNECT and MERGE first");
  mp->add_option("--tol", mp_tol, "residual convergence threshold")->capture_default_str();
  mp->add_option("--max-iters", max_iters, "total sweep budget (0 = auto)")->capture_default_str();
  mp->add_option("--neg-large", neg_large,
                 "finite stand-in for -infinity in the pairwise engine (0 = auto)")
      ->capture_default_str();
  mp->add_option("--engine", engine, "clique (annealed, default) or pairwise")
      ->capture_default_str();

  auto* exact = app.add_subcommand("solve-exact", "exhaustive MAP / maximum-weight stable set");
  exact->add_option("input", input, "GM or weighted UG file")->required();

  std::string family = "random";
  int size = 10;
  double p = 0.5;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen-graph", "generate a seeded family instance as UG");
  gen->add_option("--family", family,
                  "bipartite | complement-bipartite | line-of-bipartite | "
                  "complement-line-of-bipartite | random")
      ->capture_default_str();
  gen->add_option("--size", size, "vertex count (bipartite bases split it into halves)")
      ->capture_default_str();
  gen->add_option("--p", p, "edge probability")->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", output, "output path (default stdout)");

  std::vector<int> sizes;
  int instances = 50;
  auto* exp = app.add_subcommand("experiment", "per-instance berge/exact/lp/mp comparison as CSV");
  exp->add_option("--family", family, "graph family")->capture_default_str();
  exp->add_option("--size", sizes, "sizes, repeatable or comma separated")
      ->delimiter(',')
      ->required();
  exp->add_option("--instances", instances, "instances per size")->capture_default_str();
  exp->add_option("--seed", seed, "master seed; row r uses seed + r")->capture_default_str();
  exp->add_option("--p", p, "edge probability")->capture_default_str();
  exp->add_option("--tol", mp_tol, "message passing tolerance")->capture_default_str();
  exp->add_option("--max-iters", max_iters, "message passing sweep budget")->capture_default_str();
  exp->add_flag("--prune", prune, "run solvers on the MERGE-simplified instance");
  exp->add_option("--out", output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (convert->parsed()) return cmd_convert(input, output, epsilon);
    if (check->parsed()) return cmd_check_perfect(input, epsilon);
    if (lp->parsed()) return cmd_solve_lp(input, prune, epsilon, int_tol, feas_tol);
    if (mp->parsed()) return cmd_solve_mp(input, prune, epsilon, mp_tol, max_iters, neg_large, engine);
    if (exact->parsed()) return cmd_solve_exact(input, epsilon);
    if (gen->parsed()) return cmd_gen_graph(family, size, p, seed, output);
    if (exp->parsed()) {
      auto fam = pm::family_from_name(family);
      if (!fam) throw std::runtime_error("unknown family '" + family + "'");
      pm::ExperimentConfig cfg;
      cfg.family = *fam;
      cfg.sizes = sizes;
      cfg.instances = instances;
      cfg.seed = seed;
      cfg.p = p;
      cfg.epsilon = epsilon;
      cfg.tol = mp_tol;
      cfg.max_iters = max_iters;
      cfg.prune = prune;
      cfg.berge_guard = effective_berge_guard();
      return cmd_experiment(cfg, output);
    }
  } catch (const pm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pm::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pm::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
