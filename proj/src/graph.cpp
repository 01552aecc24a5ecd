#include "perfectmap/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "perfectmap/errors.hpp"
#include "format_util.hpp"
#include "token_reader.hpp"

namespace perfectmap {

UndirectedGraph::UndirectedGraph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("vertex count must be >= 0");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  nbrs_.assign(n, {});
}

void UndirectedGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex out of range: " + std::to_string(v));
}

void UndirectedGraph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self loop rejected: " + std::to_string(u));
  if (adjacent(u, v)) return;
  adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
  adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
  nbrs_[u].insert(std::lower_bound(nbrs_[u].begin(), nbrs_[u].end(), v), v);
  nbrs_[v].insert(std::lower_bound(nbrs_[v].begin(), nbrs_[v].end(), u), u);
  ++edge_count_;
}

void UndirectedGraph::remove_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v || !adjacent(u, v)) return;
  adj_[static_cast<std::size_t>(u) * n_ + v] = 0;
  adj_[static_cast<std::size_t>(v) * n_ + u] = 0;
  nbrs_[u].erase(std::lower_bound(nbrs_[u].begin(), nbrs_[u].end(), v));
  nbrs_[v].erase(std::lower_bound(nbrs_[v].begin(), nbrs_[v].end(), u));
  --edge_count_;
}

std::vector<std::pair<int, int>> UndirectedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int u = 0; u < n_; ++u)
    for (int v : nbrs_[u])
      if (v > u) out.emplace_back(u, v);
  return out;
}

UndirectedGraph complement(const UndirectedGraph& g) {
  const int n = g.vertex_count();
  UndirectedGraph out(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!g.adjacent(u, v)) out.add_edge(u, v);
  return out;
}

LineGraph line_graph(const UndirectedGraph& g) {
  LineGraph out;
  out.base_edges = g.edges();
  const int m = static_cast<int>(out.base_edges.size());
  out.graph = UndirectedGraph(m);
  for (int i = 0; i < m; ++i) {
    auto [a, b] = out.base_edges[i];
    for (int j = i + 1; j < m; ++j) {
      auto [c, d] = out.base_edges[j];
      if (a == c || a == d || b == c || b == d) out.graph.add_edge(i, j);
    }
  }
  return out;
}

std::optional<double> stable_set_objective(const UndirectedGraph& g,
                                           std::span<const double> weights,
                                           std::span<const std::uint8_t> bits) {
  const int n = g.vertex_count();
  if (static_cast<int>(weights.size()) != n || static_cast<int>(bits.size()) != n)
    throw std::invalid_argument("weights/bits length must equal vertex count");
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    if (!bits[v]) continue;
    for (int u : g.neighbors(v))
      if (u > v && bits[u]) return std::nullopt;
    total += weights[v];
  }
  return total;
}

UgFile read_ug(std::istream& in) {
  detail::TokenReader tok(in);
  std::string word = tok.require("UG header");
  if (word != "UG") throw ParseError(tok.line(), "malformed header: expected 'UG', got '" + word + "'");
  long long version = tok.require_int("format version");
  if (version != 1) throw ParseError(tok.line(), "unsupported UG version " + std::to_string(version));
  tok.expect_keyword("nodes");
  long long n = tok.require_int("node count");
  if (n < 0 || n > 100000) throw ParseError(tok.line(), "node count out of range");

  UgFile out;
  out.graph = UndirectedGraph(static_cast<int>(n));

  word = tok.require("'weights' or 'edges'");
  if (word == "weights") {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) w[i] = tok.require_double("weight");
    out.weights = std::move(w);
    word = tok.require("'edges'");
  }
  if (word != "edges") throw ParseError(tok.line(), "expected 'edges', got '" + word + "'");
  long long m = tok.require_int("edge count");
  if (m < 0) throw ParseError(tok.line(), "edge count out of range");
  for (long long i = 0; i < m; ++i) {
    long long u = tok.require_int("edge endpoint");
    long long v = tok.require_int("edge endpoint");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(tok.line(), "edge endpoint out of range");
    if (u >= v) throw ParseError(tok.line(), "edges must satisfy u < v");
    if (out.graph.adjacent(static_cast<int>(u), static_cast<int>(v)))
      throw ParseError(tok.line(), "duplicate edge");
    out.graph.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  return out;
}

UgFile read_ug_string(const std::string& text) {
  std::istringstream in(text);
  return read_ug(in);
}

void write_ug(std::ostream& out, const UndirectedGraph& g, const std::vector<double>* weights,
              const std::vector<std::string>* comments) {
  out << "UG 1\n";
  if (comments)
    for (const auto& c : *comments) out << "# " << c << "\n";
  out << "nodes " << g.vertex_count() << "\n";
  if (weights) {
    if (static_cast<int>(weights->size()) != g.vertex_count())
      throw std::invalid_argument("weight count must equal vertex count");
    out << "weights";
    for (double w : *weights) out << ' ' << detail::format_double(w);
    out << "\n";
  }
  auto es = g.edges();
  out << "edges " << es.size() << "\n";
  for (auto [u, v] : es) out << u << ' ' << v << "\n";
}

}  // namespace perfectmap
