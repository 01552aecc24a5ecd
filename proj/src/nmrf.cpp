#include "perfectmap/nmrf.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace perfectmap {

int config_index(std::span<const int> scope, std::span<const int> cards, std::span<const int> values) {
  if (scope.size() != cards.size() || scope.size() != values.size())
    throw std::invalid_argument("scope/cards/values must have equal length");
  long long k = 1;
  long long stride = 1;
  for (std::size_t t = 0; t < scope.size(); ++t) {
    if (t > 0 && scope[t] <= scope[t - 1]) throw std::invalid_argument("scope must be strictly increasing");
    if (values[t] < 0 || values[t] >= cards[t])
      throw std::invalid_argument("setting out of range for scope variable " + std::to_string(scope[t]));
    k += values[t] * stride;
    stride *= cards[t];
  }
  return static_cast<int>(k);
}

std::vector<int> decode_config(std::span<const int> scope, std::span<const int> cards, int k) {
  long long total = 1;
  for (std::size_t t = 0; t < cards.size(); ++t) {
    if (t > 0 && scope[t] <= scope[t - 1]) throw std::invalid_argument("scope must be strictly increasing");
    total *= cards[t];
  }
  if (k < 1 || k > total) throw std::invalid_argument("configuration index out of range: " + std::to_string(k));
  std::vector<int> values(scope.size());
  long long rem = k - 1;
  for (std::size_t t = 0; t < scope.size(); ++t) {
    values[t] = static_cast<int>(rem % cards[t]);
    rem /= cards[t];
  }
  return values;
}

int disagreement(std::span<const int> scope_c, int k, std::span<const int> scope_d, int l,
                 std::span<const int> cards) {
  std::vector<int> cards_c(scope_c.size()), cards_d(scope_d.size());
  for (std::size_t t = 0; t < scope_c.size(); ++t) cards_c[t] = cards[scope_c[t]];
  for (std::size_t t = 0; t < scope_d.size(); ++t) cards_d[t] = cards[scope_d[t]];
  std::vector<int> vals_c = decode_config(scope_c, cards_c, k);
  std::vector<int> vals_d = decode_config(scope_d, cards_d, l);

  // walk the sorted scopes in step, comparing shared variables
  std::size_t i = 0, j = 0;
  while (i < scope_c.size() && j < scope_d.size()) {
    if (scope_c[i] < scope_d[j]) {
      ++i;
    } else if (scope_c[i] > scope_d[j]) {
      ++j;
    } else {
      if (vals_c[i] != vals_d[j]) return 1;
      ++i;
      ++j;
    }
  }
  return 0;
}

Nmrf build_nmrf(const GraphicalModel& m) {
  Nmrf out;
  out.clique_offsets_.push_back(0);
  for (int c = 0; c < m.factor_count(); ++c) {
    const auto& f = m.factors()[c];
    int kmax = static_cast<int>(f.table.size());
    for (int k = 1; k <= kmax; ++k) {
      double w = std::log(f.table[k - 1]);
      if (!(w > 0.0))
        throw std::invalid_argument("model not rescaled: log weight <= 0 at clique " +
                                    std::to_string(c) + ", k=" + std::to_string(k));
      out.nodes_.push_back(NmrfNode{c, k, w});
    }
    out.clique_offsets_.push_back(static_cast<int>(out.nodes_.size()));
  }

  const int n = out.node_count();
  out.graph_ = UndirectedGraph(n);
  const auto& cards = m.cardinalities();
  for (int a = 0; a < n; ++a) {
    const auto& na = out.nodes_[a];
    const auto& scope_a = m.factors()[na.clique].scope;
    for (int b = a + 1; b < n; ++b) {
      const auto& nb = out.nodes_[b];
      const auto& scope_b = m.factors()[nb.clique].scope;
      if (disagreement(scope_a, na.config, scope_b, nb.config, cards) == 1) out.graph_.add_edge(a, b);
    }
  }
  return out;
}

std::vector<double> Nmrf::weights() const {
  std::vector<double> w(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) w[i] = nodes_[i].weight;
  return w;
}

NmrfAssignment encode_assignment(const Nmrf& nmrf, const GraphicalModel& m, const Assignment& a) {
  if (!m.valid_assignment(a)) throw std::invalid_argument("assignment invalid for model");
  NmrfAssignment out;
  out.bits.assign(nmrf.node_count(), 0);
  for (int c = 0; c < nmrf.clique_count(); ++c) {
    const auto& scope = m.factors()[c].scope;
    std::vector<int> cards(scope.size()), values(scope.size());
    for (std::size_t t = 0; t < scope.size(); ++t) {
      cards[t] = m.cardinalities()[scope[t]];
      values[t] = a.values[scope[t]];
    }
    out.bits[nmrf.node_index(c, config_index(scope, cards, values))] = 1;
  }
  return out;
}

Assignment decode_assignment(const Nmrf& nmrf, const GraphicalModel& m, const NmrfAssignment& b) {
  if (static_cast<int>(b.bits.size()) != nmrf.node_count())
    throw std::invalid_argument("bit vector length mismatch");
  Assignment out;
  out.values.assign(m.var_count(), -1);
  for (int c = 0; c < nmrf.clique_count(); ++c) {
    int chosen = -1;
    for (int i = nmrf.clique_begin(c); i < nmrf.clique_end(c); ++i) {
      if (!b.bits[i]) continue;
      if (chosen >= 0)
        throw std::runtime_error("clique " + std::to_string(c) + " has multiple bits set");
      chosen = i;
    }
    if (chosen < 0) throw std::runtime_error("clique " + std::to_string(c) + " has zero bits set");

    const auto& scope = m.factors()[c].scope;
    std::vector<int> cards(scope.size());
    for (std::size_t t = 0; t < scope.size(); ++t) cards[t] = m.cardinalities()[scope[t]];
    std::vector<int> values = decode_config(scope, cards, nmrf.nodes()[chosen].config);
    for (std::size_t t = 0; t < scope.size(); ++t) {
      int v = scope[t];
      if (out.values[v] >= 0 && out.values[v] != values[t])
        throw std::runtime_error("conflicting shared variable " + std::to_string(v) +
                                 " between cliques");
      out.values[v] = values[t];
    }
  }
  for (int v = 0; v < m.var_count(); ++v)
    if (out.values[v] < 0) out.values[v] = 0;  // variable in no clique: any value scores the same
  return out;
}

std::optional<double> nmrf_objective(const Nmrf& nmrf, const NmrfAssignment& b) {
  if (static_cast<int>(b.bits.size()) != nmrf.node_count())
    throw std::invalid_argument("bit vector length mismatch");
  std::vector<double> w = nmrf.weights();
  return stable_set_objective(nmrf.graph(), w, b.bits);
}

void write_nmrf_ug(std::ostream& out, const Nmrf& nmrf) {
  std::vector<std::string> comments;
  comments.reserve(nmrf.node_count());
  for (int i = 0; i < nmrf.node_count(); ++i) {
    const auto& nd = nmrf.nodes()[i];
    comments.push_back("node " + std::to_string(i) + " clique " + std::to_string(nd.clique) +
                       " k " + std::to_string(nd.config));
  }
  std::vector<double> w = nmrf.weights();
  write_ug(out, nmrf.graph(), &w, &comments);
}

}  // namespace perfectmap
