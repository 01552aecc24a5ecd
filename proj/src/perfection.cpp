#include "perfectmap/perfection.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "perfectmap/errors.hpp"

namespace perfectmap {

bool validate_hole(const UndirectedGraph& g, const HoleWitness& w) {
  const auto& c = w.cycle;
  const int len = static_cast<int>(c.size());
  if (len < 5) return false;
  std::vector<int> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (int v : c)
    if (v < 0 || v >= g.vertex_count()) return false;
  for (int i = 0; i < len; ++i) {
    for (int j = i + 1; j < len; ++j) {
      bool consecutive = (j == i + 1) || (i == 0 && j == len - 1);
      if (g.adjacent(c[i], c[j]) != consecutive) return false;
    }
  }
  return true;
}

namespace {

// Depth-first enumeration of chordless paths anchored at their minimum
// vertex s. A path v0..vt is extended only by vertices non-adjacent to
// its interior v1..v(t-1); a candidate adjacent to v0 closes a chordless
// cycle and is never extended. Returns the first odd closure of length
// >= 5 in DFS order.
class OddHoleSearch {
 public:
  explicit OddHoleSearch(const UndirectedGraph& g) : g_(g), n_(g.vertex_count()) {
    rows_.assign(n_, 0);
    for (int u = 0; u < n_; ++u)
      for (int v : g.neighbors(u)) rows_[u] |= 1ULL << v;
  }

  std::optional<HoleWitness> run() {
    for (int s = 0; s < n_; ++s) {
      path_.clear();
      path_.push_back(s);
      std::uint64_t above = (s + 1 < 64) ? ~((2ULL << s) - 1) : 0ULL;
      if (n_ < 64) above &= (1ULL << n_) - 1;
      if (dfs(above)) return witness_;
    }
    return std::nullopt;
  }

 private:
  bool dfs(std::uint64_t allowed) {
    const int s = path_.front();
    const int last = path_.back();
    std::uint64_t cands = allowed & rows_[last];
    while (cands) {
      const int w = std::countr_zero(cands);
      cands &= cands - 1;
      const bool closes = (rows_[w] >> s) & 1ULL;
      if (path_.size() >= 2 && closes) {
        const int len = static_cast<int>(path_.size()) + 1;
        if (len >= 5 && (len & 1) && path_[1] < w) {
          path_.push_back(w);
          witness_.cycle = path_;
          path_.pop_back();
          return true;
        }
        continue;  // even or too-short closure; a chord to s forbids extension
      }
      // extend: last joins the interior (never for the anchor itself)
      std::uint64_t next = allowed & ~(1ULL << w);
      if (path_.size() >= 2) next &= ~rows_[last];
      path_.push_back(w);
      const bool hit = dfs(next);
      path_.pop_back();
      if (hit) return true;
    }
    return false;
  }

  const UndirectedGraph& g_;
  int n_;
  std::vector<std::uint64_t> rows_;
  std::vector<int> path_;
  HoleWitness witness_;
};

}  // namespace

std::optional<HoleWitness> find_odd_hole(const UndirectedGraph& g, int max_vertices) {
  const int n = g.vertex_count();
  if (n > max_vertices)
    throw GuardError("odd-hole search guard exceeded: " + std::to_string(n) + " > " +
                     std::to_string(max_vertices) + " vertices");
  if (n > kHoleSearchCapacity)
    throw GuardError("odd-hole search supports at most " + std::to_string(kHoleSearchCapacity) +
                     " vertices");
  if (n < 5) return std::nullopt;
  OddHoleSearch search(g);
  auto w = search.run();
  if (w && !validate_hole(g, *w)) throw SolverError("odd-hole search produced an invalid witness");
  return w;
}

BergeResult is_berge(const UndirectedGraph& g, int max_vertices) {
  if (auto w = find_odd_hole(g, max_vertices))
    return BergeResult{false, WitnessSide::graph, std::move(w)};
  if (auto w = find_odd_hole(complement(g), max_vertices))
    return BergeResult{false, WitnessSide::complement, std::move(w)};
  return BergeResult{true, WitnessSide::graph, std::nullopt};
}

UndirectedGraph replicate_vertex(const UndirectedGraph& g, int v) {
  const int n = g.vertex_count();
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range: " + std::to_string(v));
  UndirectedGraph out(n + 1);
  for (auto [a, b] : g.edges()) out.add_edge(a, b);
  out.add_edge(v, n);
  for (int u : g.neighbors(v)) out.add_edge(u, n);
  return out;
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "bipartite") return Family::bipartite;
  if (name == "complement-bipartite" || name == "complement_bipartite")
    return Family::complement_bipartite;
  if (name == "line-of-bipartite" || name == "line_of_bipartite") return Family::line_of_bipartite;
  if (name == "complement-line-of-bipartite" || name == "complement_line_of_bipartite")
    return Family::complement_line_of_bipartite;
  if (name == "random") return Family::random;
  return std::nullopt;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::bipartite: return "bipartite";
    case Family::complement_bipartite: return "complement-bipartite";
    case Family::line_of_bipartite: return "line-of-bipartite";
    case Family::complement_line_of_bipartite: return "complement-line-of-bipartite";
    case Family::random: return "random";
  }
  return "?";
}

namespace {

UndirectedGraph gen_bipartite(int a, int b, double p, SplitMix64& rng) {
  if (a < 1 || b < 1) throw std::invalid_argument("bipartite part sizes must be >= 1");
  UndirectedGraph g(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      if (rng.next_coin(p)) g.add_edge(i, a + j);
  return g;
}

UndirectedGraph gen_random(int n, double p, SplitMix64& rng) {
  if (n < 0) throw std::invalid_argument("vertex count must be >= 0");
  UndirectedGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_coin(p)) g.add_edge(u, v);
  return g;
}

}  // namespace

UndirectedGraph gen_family(Family f, const FamilyParams& params, SplitMix64& rng) {
  if (params.p < 0.0 || params.p > 1.0) throw std::invalid_argument("edge probability must be in [0,1]");
  switch (f) {
    case Family::bipartite:
      return gen_bipartite(params.part_a, params.part_b, params.p, rng);
    case Family::complement_bipartite:
      return complement(gen_bipartite(params.part_a, params.part_b, params.p, rng));
    case Family::line_of_bipartite:
      return line_graph(gen_bipartite(params.part_a, params.part_b, params.p, rng)).graph;
    case Family::complement_line_of_bipartite:
      return complement(line_graph(gen_bipartite(params.part_a, params.part_b, params.p, rng)).graph);
    case Family::random:
      return gen_random(params.n, params.p, rng);
  }
  throw std::invalid_argument("unknown family");
}

UndirectedGraph gen_family(Family f, const FamilyParams& params, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return gen_family(f, params, rng);
}

FamilyParams params_for_size(Family f, int size, double p) {
  FamilyParams params;
  params.p = p;
  if (f == Family::random) {
    params.n = size;
  } else {
    params.part_a = (size + 1) / 2;
    params.part_b = size / 2;
  }
  return params;
}

}  // namespace perfectmap
