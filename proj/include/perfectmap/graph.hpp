#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace perfectmap {

// Simple undirected graph on vertices 0..n-1, no self loops. Adjacency is
// kept both as a dense symmetric matrix (cheap complement / chord tests)
// and as sorted per-vertex neighbor lists. Instances here are desk scale,
// so the dense matrix costs nothing.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int n);

  int vertex_count() const { return n_; }
  int edge_count() const { return edge_count_; }

  bool adjacent(int u, int v) const {
    return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }
  void add_edge(int u, int v);     // no-op if already present
  void remove_edge(int u, int v);  // no-op if absent

  int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }
  const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }

  // All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const UndirectedGraph& other) const {
    return n_ == other.n_ && adj_ == other.adj_;
  }

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  int edge_count_ = 0;
  std::vector<std::uint8_t> adj_;       // n*n, symmetric, zero diagonal
  std::vector<std::vector<int>> nbrs_;  // sorted
};

UndirectedGraph complement(const UndirectedGraph& g);

// Line graph: one vertex per base edge, adjacency iff the base edges share
// an endpoint. base_edges[i] gives the endpoints of the edge vertex i
// stands for, in the same order as UndirectedGraph::edges().
struct LineGraph {
  UndirectedGraph graph;
  std::vector<std::pair<int, int>> base_edges;
};
LineGraph line_graph(const UndirectedGraph& g);

// Objective of a 0/1 vertex selection under nand edge semantics: sum of
// selected weights when no edge has both endpoints selected, otherwise
// "minus infinity" reported as nullopt.
std::optional<double> stable_set_objective(const UndirectedGraph& g,
                                           std::span<const double> weights,
                                           std::span<const std::uint8_t> bits);

// UG text format.
//   UG 1
//   nodes <n>
//   weights <w_1> ... <w_n>     (optional)
//   edges <m>
//   <u> <v>                     (m pairs, 0 <= u < v < n)
// '#' starts a comment line; tokens may wrap across lines.
struct UgFile {
  UndirectedGraph graph;
  std::optional<std::vector<double>> weights;
};

UgFile read_ug(std::istream& in);
UgFile read_ug_string(const std::string& text);
void write_ug(std::ostream& out, const UndirectedGraph& g,
              const std::vector<double>* weights = nullptr,
              const std::vector<std::string>* comments = nullptr);

}  // namespace perfectmap
