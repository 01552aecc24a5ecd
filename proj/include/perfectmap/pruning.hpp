#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "perfectmap/graph.hpp"
#include "perfectmap/nmrf.hpp"

namespace perfectmap {

// An NMRF (or bare vertex-weighted graph) after DISCONNECT and/or MERGE.
// The pruned instance lives on a compacted vertex set; bookkeeping maps it
// back to the base instance for post-processing.
struct PrunedNmrf {
  // base instance
  UndirectedGraph base_graph;
  std::vector<double> base_weights;
  std::vector<std::pair<int, int>> clique_ranges;  // [begin, end) per clique; empty for bare graphs
  std::vector<std::uint8_t> minimal_flags;         // per base node: weight == log(1 + epsilon)

  // pruned instance
  UndirectedGraph graph;
  std::vector<double> weights;  // accumulated representative weights
  std::vector<int> orig_of;     // pruned vertex -> base node
  std::vector<int> merge_map;   // base node -> representative base node (idempotent)
};

// Strip the intra-clique edges of every minimal configuration (a node
// whose weight equals log(1 + epsilon) within 1e-12). Inter-clique edges
// are untouched.
PrunedNmrf disconnect(const Nmrf& nmrf, double epsilon);

// Wrap a bare vertex-weighted graph unchanged (no clique structure, so
// DISCONNECT does not apply; MERGE still does).
PrunedNmrf wrap_instance(const UndirectedGraph& g, std::span<const double> weights);

// Repeatedly fuse any two non-adjacent nodes with identical neighbor
// sets: the lower-index node stays, weights are summed. Pairs are scanned
// in ascending index order and the scan restarts after every merge, so
// the fixpoint is deterministic.
PrunedNmrf merge(PrunedNmrf pruned);

// Map a feasible selection on the pruned instance back to the base
// instance: merged nodes copy their representative's bit, then within each
// clique only the largest-weight assertion survives (redundantly asserted
// minimal configurations are cleared). Throws if the result violates a
// base edge, which would indicate a pruning bug.
NmrfAssignment postprocess_assignment(const PrunedNmrf& pruned,
                                      std::span<const std::uint8_t> pruned_bits);

}  // namespace perfectmap
