#include "perfectmap/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace perfectmap {

namespace {

constexpr double kMinimalTol = 1e-12;

PrunedNmrf wrap(UndirectedGraph base_graph, std::vector<double> base_weights,
                std::vector<std::pair<int, int>> clique_ranges) {
  PrunedNmrf out;
  const int n = base_graph.vertex_count();
  out.graph = base_graph;
  out.weights = base_weights;
  out.base_graph = std::move(base_graph);
  out.base_weights = std::move(base_weights);
  out.clique_ranges = std::move(clique_ranges);
  out.minimal_flags.assign(n, 0);
  out.orig_of.resize(n);
  out.merge_map.resize(n);
  for (int i = 0; i < n; ++i) {
    out.orig_of[i] = i;
    out.merge_map[i] = i;
  }
  return out;
}

}  // namespace

PrunedNmrf wrap_instance(const UndirectedGraph& g, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != g.vertex_count())
    throw std::invalid_argument("weight count must equal vertex count");
  return wrap(g, std::vector<double>(weights.begin(), weights.end()), {});
}

PrunedNmrf disconnect(const Nmrf& nmrf, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  std::vector<std::pair<int, int>> ranges;
  ranges.reserve(nmrf.clique_count());
  for (int c = 0; c < nmrf.clique_count(); ++c)
    ranges.emplace_back(nmrf.clique_begin(c), nmrf.clique_end(c));

  PrunedNmrf out = wrap(nmrf.graph(), nmrf.weights(), std::move(ranges));

  const double minimal_weight = std::log(1.0 + epsilon);
  for (int i = 0; i < nmrf.node_count(); ++i)
    out.minimal_flags[i] = std::abs(out.base_weights[i] - minimal_weight) <= kMinimalTol ? 1 : 0;

  for (auto [begin, end] : out.clique_ranges) {
    for (int i = begin; i < end; ++i) {
      if (!out.minimal_flags[i]) continue;
      for (int j = begin; j < end; ++j)
        if (j != i) out.graph.remove_edge(i, j);
    }
  }
  return out;
}

PrunedNmrf merge(PrunedNmrf pruned) {
  const int base_n = pruned.base_graph.vertex_count();

  // work on the current pruned graph; alive() tracks surviving vertices
  UndirectedGraph g = pruned.graph;
  std::vector<double> w = pruned.weights;
  std::vector<int> orig = pruned.orig_of;
  std::vector<std::uint8_t> alive(g.vertex_count(), 1);
  std::vector<int> rep_of(base_n);
  for (int i = 0; i < base_n; ++i) rep_of[i] = pruned.merge_map[i];

  bool changed = true;
  while (changed) {
    changed = false;
    const int n = g.vertex_count();
    for (int i = 0; i < n && !changed; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < n && !changed; ++j) {
        if (!alive[j] || g.adjacent(i, j)) continue;
        if (g.neighbors(i) != g.neighbors(j)) continue;
        // fuse j into i
        w[i] += w[j];
        for (int nb : std::vector<int>(g.neighbors(j))) g.remove_edge(j, nb);
        alive[j] = 0;
        for (int b = 0; b < base_n; ++b)
          if (rep_of[b] == orig[j]) rep_of[b] = orig[i];
        changed = true;
      }
    }
  }

  // compact surviving vertices, preserving index order
  std::vector<int> compact(g.vertex_count(), -1);
  int m = 0;
  for (int i = 0; i < g.vertex_count(); ++i)
    if (alive[i]) compact[i] = m++;

  PrunedNmrf out;
  out.base_graph = std::move(pruned.base_graph);
  out.base_weights = std::move(pruned.base_weights);
  out.clique_ranges = std::move(pruned.clique_ranges);
  out.minimal_flags = std::move(pruned.minimal_flags);
  out.graph = UndirectedGraph(m);
  out.weights.resize(m);
  out.orig_of.resize(m);
  for (int i = 0; i < g.vertex_count(); ++i) {
    if (!alive[i]) continue;
    out.weights[compact[i]] = w[i];
    out.orig_of[compact[i]] = orig[i];
    for (int nb : g.neighbors(i))
      if (nb > i) out.graph.add_edge(compact[i], compact[nb]);
  }
  out.merge_map = std::move(rep_of);
  return out;
}

NmrfAssignment postprocess_assignment(const PrunedNmrf& pruned,
                                      std::span<const std::uint8_t> pruned_bits) {
  const int n = pruned.graph.vertex_count();
  if (static_cast<int>(pruned_bits.size()) != n)
    throw std::invalid_argument("bit vector length must match the pruned graph");

  // pruned-vertex bit per base node (merged members copy their representative)
  const int base_n = pruned.base_graph.vertex_count();
  std::vector<int> pruned_index(base_n, -1);
  for (int i = 0; i < n; ++i) pruned_index[pruned.orig_of[i]] = i;

  NmrfAssignment out;
  out.bits.assign(base_n, 0);
  for (int b = 0; b < base_n; ++b) {
    int rep = pruned.merge_map[b];
    int pi = pruned_index[rep];
    if (pi < 0) throw std::runtime_error("merge_map points at a removed node");
    out.bits[b] = pruned_bits[pi];
  }

  // keep only the maximal assertion within each clique
  for (auto [begin, end] : pruned.clique_ranges) {
    int best = -1;
    for (int i = begin; i < end; ++i) {
      if (!out.bits[i]) continue;
      if (best < 0 || pruned.base_weights[i] > pruned.base_weights[best]) best = i;
    }
    if (best < 0) continue;
    for (int i = begin; i < end; ++i)
      if (out.bits[i] && i != best) {
        if (!pruned.minimal_flags[i])
          throw std::runtime_error("post-processing dropped a non-minimal assertion");
        out.bits[i] = 0;
      }
  }

  if (!stable_set_objective(pruned.base_graph, pruned.base_weights, out.bits))
    throw std::runtime_error("post-processed bits are infeasible on the base graph");
  return out;
}

}  // namespace perfectmap
