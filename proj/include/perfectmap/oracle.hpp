#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "perfectmap/graph.hpp"
#include "perfectmap/model.hpp"

namespace perfectmap {

inline constexpr unsigned long long kDefaultMapStateGuard = 1ULL << 24;
inline constexpr int kDefaultMwssGuard = 30;
inline constexpr int kDefaultMatchingGuard = 30;

// Exact MAP by full enumeration of the joint state space. Ties go to the
// first assignment in enumeration order (variable 0 fastest).
struct MapResult {
  Assignment argmax;
  double value = 0.0;
  long long explored = 0;
};
MapResult exhaustive_map(const GraphicalModel& m,
                         unsigned long long state_guard = kDefaultMapStateGuard);

// Exact maximum-weight stable set by branch and bound: vertices branched
// in descending weight order, pruned by the remaining weight sum. Ties go
// to the lexicographically smallest selected-index set.
struct MwssResult {
  std::vector<std::uint8_t> bits;
  double value = 0.0;
  long long explored = 0;  // branch nodes visited
};
MwssResult exhaustive_mwss(const UndirectedGraph& g, std::span<const double> weights,
                           int max_vertices = kDefaultMwssGuard);

// Exact maximum-weight matching, solved as maximum-weight stable set on
// the line graph. edge_weights align with UndirectedGraph::edges().
struct MatchingResult {
  std::vector<int> edge_ids;                  // indices into edges(), ascending
  std::vector<std::pair<int, int>> edges;     // the matched endpoints
  double value = 0.0;
  long long explored = 0;
};
MatchingResult exhaustive_matching(const UndirectedGraph& g, std::span<const double> edge_weights,
                                   int max_edges = kDefaultMatchingGuard);

}  // namespace perfectmap
