#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "perfectmap/graph.hpp"
#include "perfectmap/model.hpp"

namespace perfectmap {

// One binary variable of the nand MRF: clique c in its k-th configuration,
// with weight log(psi_c at that configuration).
struct NmrfNode {
  int clique;
  int config;  // 1-based configuration index k
  double weight;
};

struct NmrfAssignment {
  std::vector<std::uint8_t> bits;

  bool operator==(const NmrfAssignment&) const = default;
};

// The nand Markov random field of a rescaled model: one node per
// (clique, configuration) pair, an edge wherever two nodes cannot both be
// asserted (same clique, or conflicting settings of a shared variable).
// Immutable after build_nmrf.
class Nmrf {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NmrfNode>& nodes() const { return nodes_; }
  const UndirectedGraph& graph() const { return graph_; }

  int clique_count() const { return static_cast<int>(clique_offsets_.size()) - 1; }
  // Node index range [begin, end) for clique c; configurations appear in
  // k order, so node_index(c, k) = clique_begin(c) + k - 1.
  int clique_begin(int c) const { return clique_offsets_[c]; }
  int clique_end(int c) const { return clique_offsets_[c + 1]; }
  int node_index(int clique, int k) const { return clique_offsets_[clique] + k - 1; }

  std::vector<double> weights() const;

  friend Nmrf build_nmrf(const GraphicalModel& m);

 private:
  std::vector<NmrfNode> nodes_;
  UndirectedGraph graph_;
  std::vector<int> clique_offsets_;  // size clique_count + 1
};

// Mixed-radix configuration index: k = 1 + sum_t values[t] * prod_{s<t}
// cards[s], the lowest-index scope variable varying fastest. scope, cards
// and values run over the clique's variables in scope order.
int config_index(std::span<const int> scope, std::span<const int> cards, std::span<const int> values);

// Inverse of config_index; returns the per-scope-variable settings.
std::vector<int> decode_config(std::span<const int> scope, std::span<const int> cards, int k);

// 1 when configurations k of scope_c and l of scope_d assign different
// values to some shared variable, else 0 (disjoint scopes never disagree).
// cards holds the cardinality of every model variable.
int disagreement(std::span<const int> scope_c, int k, std::span<const int> scope_d, int l,
                 std::span<const int> cards);

// Build the nand MRF of a rescaled model (every table entry > 1, so all
// node weights are strictly positive).
Nmrf build_nmrf(const GraphicalModel& m);

// Assignment -> bits: exactly one bit per clique, at that clique's
// configuration index.
NmrfAssignment encode_assignment(const Nmrf& nmrf, const GraphicalModel& m, const Assignment& a);

// Bits -> assignment. Requires exactly one bit per clique and agreeing
// shared variables; throws std::runtime_error otherwise.
Assignment decode_assignment(const Nmrf& nmrf, const GraphicalModel& m, const NmrfAssignment& b);

// Sum of set-bit weights when no nand edge is violated, else nullopt
// (the "minus infinity" case).
std::optional<double> nmrf_objective(const Nmrf& nmrf, const NmrfAssignment& b);

// UG dump with one comment line per node recording its (clique, k) origin.
void write_nmrf_ug(std::ostream& out, const Nmrf& nmrf);

}  // namespace perfectmap
