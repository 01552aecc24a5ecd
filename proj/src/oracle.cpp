#include "perfectmap/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "perfectmap/errors.hpp"

namespace perfectmap {

MapResult exhaustive_map(const GraphicalModel& m, unsigned long long state_guard) {
  unsigned long long total = m.state_space_size(state_guard);
  if (total > state_guard)
    throw GuardError("state space exceeds the exhaustive-MAP guard of " +
                     std::to_string(state_guard));

  MapResult res;
  Assignment a;
  a.values.assign(m.var_count(), 0);
  bool first = true;
  for (;;) {
    double score = model_log_score(m, a);
    ++res.explored;
    if (first || score > res.value) {
      res.value = score;
      res.argmax = a;
      first = false;
    }
    // mixed-radix increment, variable 0 fastest
    int i = 0;
    for (; i < m.var_count(); ++i) {
      if (++a.values[i] < m.cardinalities()[i]) break;
      a.values[i] = 0;
    }
    if (i == m.var_count()) break;
  }
  return res;
}

namespace {

class MwssSearch {
 public:
  MwssSearch(const UndirectedGraph& g, std::span<const double> weights)
      : n_(g.vertex_count()), weights_(weights.begin(), weights.end()) {
    rows_.assign(n_, 0);
    for (int u = 0; u < n_; ++u)
      for (int v : g.neighbors(u)) rows_[u] |= 1ULL << v;
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return weights_[a] > weights_[b]; });
    suffix_weight_.assign(n_ + 1, 0.0);
    for (int i = n_ - 1; i >= 0; --i)
      suffix_weight_[i] = suffix_weight_[i + 1] + weights_[order_[i]];
  }

  MwssResult run() {
    best_value_ = 0.0;
    best_.clear();  // empty set is always feasible with value 0
    current_.clear();
    branch(0, 0ULL, 0.0);
    MwssResult res;
    res.bits.assign(n_, 0);
    for (int v : best_) res.bits[v] = 1;
    res.value = best_value_;
    res.explored = explored_;
    return res;
  }

 private:
  // Lexicographic comparison of selected-index sets.
  static bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

  void consider_current(double value) {
    if (value > best_value_) {
      best_value_ = value;
      best_ = current_;
      std::sort(best_.begin(), best_.end());
    } else if (value == best_value_) {
      std::vector<int> sorted = current_;
      std::sort(sorted.begin(), sorted.end());
      if (lex_less(sorted, best_)) best_ = std::move(sorted);
    }
  }

  void branch(int pos, std::uint64_t blocked, double value) {
    ++explored_;
    if (pos == n_) {
      consider_current(value);
      return;
    }
    // bound: even taking every remaining vertex cannot beat best
    if (value + suffix_weight_[pos] < best_value_) return;

    int v = order_[pos];
    if (!((blocked >> v) & 1ULL)) {
      current_.push_back(v);
      branch(pos + 1, blocked | rows_[v], value + weights_[v]);
      current_.pop_back();
    }
    branch(pos + 1, blocked, value);
  }

  int n_;
  std::vector<double> weights_;
  std::vector<std::uint64_t> rows_;
  std::vector<int> order_;
  std::vector<double> suffix_weight_;
  std::vector<int> best_, current_;
  double best_value_ = 0.0;
  long long explored_ = 0;
};

}  // namespace

MwssResult exhaustive_mwss(const UndirectedGraph& g, std::span<const double> weights,
                           int max_vertices) {
  const int n = g.vertex_count();
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("weight count must equal vertex count");
  if (n > max_vertices || n > 64)
    throw GuardError("stable-set oracle guard exceeded: " + std::to_string(n) + " > " +
                     std::to_string(std::min(max_vertices, 64)) + " vertices");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("weights must be > 0");
  return MwssSearch(g, weights).run();
}

MatchingResult exhaustive_matching(const UndirectedGraph& g, std::span<const double> edge_weights,
                                   int max_edges) {
  if (static_cast<int>(edge_weights.size()) != g.edge_count())
    throw std::invalid_argument("edge weight count must equal edge count");
  if (g.edge_count() > max_edges)
    throw GuardError("matching oracle guard exceeded: " + std::to_string(g.edge_count()) +
                     " > " + std::to_string(max_edges) + " edges");

  LineGraph lg = line_graph(g);
  MwssResult stable = exhaustive_mwss(lg.graph, edge_weights, max_edges);

  MatchingResult res;
  res.value = stable.value;
  res.explored = stable.explored;
  for (int e = 0; e < static_cast<int>(stable.bits.size()); ++e) {
    if (!stable.bits[e]) continue;
    res.edge_ids.push_back(e);
    res.edges.push_back(lg.base_edges[e]);
  }
  return res;
}

}  // namespace perfectmap
