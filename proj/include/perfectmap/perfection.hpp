#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perfectmap/graph.hpp"
#include "perfectmap/rng.hpp"

namespace perfectmap {

// Chordless cycle of odd length >= 5, listed in cyclic order.
struct HoleWitness {
  std::vector<int> cycle;
};

// True iff the witness satisfies its own definition on g: >= 5 distinct
// vertices, consecutive pairs adjacent, all other pairs non-adjacent.
bool validate_hole(const UndirectedGraph& g, const HoleWitness& w);

inline constexpr int kDefaultBergeGuard = 25;
// Hard ceiling of the bitmask search, independent of the soft guard.
inline constexpr int kHoleSearchCapacity = 64;

// Exhaustive search for an odd hole. Enumerates chordless paths by
// depth-first extension, anchored at each cycle's minimum vertex; a
// nullopt result is therefore a certificate of absence. Throws GuardError
// beyond max_vertices.
std::optional<HoleWitness> find_odd_hole(const UndirectedGraph& g,
                                         int max_vertices = kDefaultBergeGuard);

enum class WitnessSide { graph, complement };

struct BergeResult {
  bool berge;
  WitnessSide side = WitnessSide::graph;  // meaningful when !berge
  std::optional<HoleWitness> witness;     // on g or on complement(g) per side
};

// Berge test: no odd hole in g and none in its complement.
BergeResult is_berge(const UndirectedGraph& g, int max_vertices = kDefaultBergeGuard);

// Add a vertex adjacent to v and to all of v's neighbors (replication).
UndirectedGraph replicate_vertex(const UndirectedGraph& g, int v);

enum class Family {
  bipartite,
  complement_bipartite,
  line_of_bipartite,
  complement_line_of_bipartite,
  random,
};

std::optional<Family> family_from_name(std::string_view name);
std::string_view family_name(Family f);

struct FamilyParams {
  int part_a = 0;  // bipartite part sizes (the four Berge families)
  int part_b = 0;
  int n = 0;       // vertex count (random family)
  double p = 0.5;  // independent edge probability
};

// Seeded random instance of a family. Bipartite bases flip one coin per
// (left, right) pair, left index outer; the random family flips one coin
// per unordered pair in lexicographic order. Deterministic given the rng
// state.
UndirectedGraph gen_family(Family f, const FamilyParams& params, SplitMix64& rng);
UndirectedGraph gen_family(Family f, const FamilyParams& params, std::uint64_t seed);

// Split a single requested vertex count into bipartite part sizes,
// (ceil(n/2), floor(n/2)); used by the CLI and experiment harness.
FamilyParams params_for_size(Family f, int size, double p);

}  // namespace perfectmap
