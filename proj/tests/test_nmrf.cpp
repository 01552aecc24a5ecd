#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "perfectmap/model.hpp"
#include "perfectmap/nmrf.hpp"
#include "perfectmap/rng.hpp"
#include "test_support.hpp"

using namespace perfectmap;

namespace {

GraphicalModel fig1_model() {
  return parse_model_string(
      "GM 1\nvars 3\ncards 2 2 2\nfactors 2\n"
      "factor 2 0 1\nvalues 1.5 2.0 3.0 4.5\n"
      "factor 2 1 2\nvalues 2.5 1.25 1.75 5.0\n");
}

}  // namespace

TEST_CASE("configuration index follows the mixed-radix order") {
  std::vector<int> scope{0, 1}, cards{2, 2};
  CHECK(config_index(scope, cards, std::vector<int>{0, 0}) == 1);
  CHECK(config_index(scope, cards, std::vector<int>{1, 0}) == 2);
  CHECK(config_index(scope, cards, std::vector<int>{0, 1}) == 3);
  CHECK(config_index(scope, cards, std::vector<int>{1, 1}) == 4);

  // mixed cardinalities: scope {1,3}, |x1|=3, |x3|=2, (x1=2, x3=1) -> 6
  std::vector<int> scope2{1, 3}, cards2{3, 2};
  CHECK(config_index(scope2, cards2, std::vector<int>{2, 1}) == 6);

  CHECK_THROWS_AS(config_index(scope, cards, std::vector<int>{2, 0}), std::invalid_argument);
}

TEST_CASE("decode inverts the configuration index") {
  std::vector<int> scope{0, 1}, cards{2, 2};
  CHECK(decode_config(scope, cards, 3) == std::vector<int>{0, 1});
  std::vector<int> scope2{1, 3}, cards2{3, 2};
  CHECK(decode_config(scope2, cards2, 6) == std::vector<int>{2, 1});
  CHECK_THROWS_AS(decode_config(scope, cards, 0), std::invalid_argument);
  CHECK_THROWS_AS(decode_config(scope, cards, 5), std::invalid_argument);

  SUBCASE("round trip over random scopes") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      int len = 1 + rng.next_below(3);
      std::vector<int> scope3, cards3;
      int v = rng.next_below(3);
      int total = 1;
      for (int i = 0; i < len; ++i) {
        scope3.push_back(v);
        v += 1 + rng.next_below(3);
        cards3.push_back(2 + rng.next_below(3));
        total *= cards3.back();
      }
      if (total > 64) continue;
      for (int k = 1; k <= total; ++k)
        CHECK(config_index(scope3, cards3, decode_config(scope3, cards3, k)) == k);
    }
  }
}

TEST_CASE("disagreement compares shared variables only") {
  std::vector<int> cards{2, 2, 2};
  std::vector<int> c{0, 1}, d{1, 2};
  CHECK(disagreement(c, 1, d, 1, cards) == 0);  // x1 = 0 on both sides
  CHECK(disagreement(c, 3, d, 1, cards) == 1);  // x1 = 1 vs 0
  std::vector<int> e{0}, f{1};
  CHECK(disagreement(e, 1, f, 2, cards) == 0);  // disjoint scopes
  CHECK(disagreement(e, 2, f, 1, cards) == 0);
}

TEST_CASE("disagreement matches the verbatim mod-floor formula") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + rng.next_below(4);
    std::vector<int> cards(n);
    for (int& x : cards) x = 2 + rng.next_below(2);
    auto random_scope = [&]() {
      std::vector<int> s;
      for (int i = 0; i < n; ++i)
        if (rng.next_coin(0.5)) s.push_back(i);
      if (s.empty()) s.push_back(rng.next_below(n));
      return s;
    };
    std::vector<int> sc = random_scope(), sd = random_scope();
    int kc = 1, kd = 1;
    for (int v : sc) kc *= cards[v];
    for (int v : sd) kd *= cards[v];
    int k = 1 + rng.next_below(kc);
    int l = 1 + rng.next_below(kd);
    CHECK(disagreement(sc, k, sd, l, cards) == pmtest::verbatim_disagreement(sc, k, sd, l, cards));
  }
}

TEST_CASE("nand MRF of the two-clique chain model") {
  GraphicalModel m = rescale_potentials(fig1_model(), 1e-6);
  Nmrf nmrf = build_nmrf(m);

  CHECK(nmrf.node_count() == 8);
  // two complete 4-node blocks (12 edges) plus the 8 pairs disagreeing on
  // the shared middle variable, out of the 28 node pairs
  CHECK(nmrf.graph().edge_count() == 20);
  int intra = 0, inter = 0;
  for (auto [a, b] : nmrf.graph().edges())
    (nmrf.nodes()[a].clique == nmrf.nodes()[b].clique ? intra : inter) += 1;
  CHECK(intra == 12);
  CHECK(inter == 8);

  SUBCASE("weights are the table logs") {
    for (const auto& node : nmrf.nodes()) {
      double expect = std::log(m.factors()[node.clique].table[node.config - 1]);
      CHECK(node.weight == expect);
      CHECK(node.weight > 0.0);
    }
  }
}

TEST_CASE("single clique of cardinality 3 becomes a triangle") {
  GraphicalModel m = rescale_potentials(
      parse_model_string("GM 1\nvars 1\ncards 3\nfactors 1\nfactor 1 0\nvalues 1 2 3\n"), 1e-6);
  Nmrf nmrf = build_nmrf(m);
  CHECK(nmrf.node_count() == 3);
  CHECK(nmrf.graph().edge_count() == 3);
}

TEST_CASE("build rejects unrescaled models") {
  CHECK_THROWS_WITH_AS(build_nmrf(fig1_model()), doctest::Contains("not rescaled"),
                       std::invalid_argument);
}

TEST_CASE("node count obeys the sum-of-products rule on random models") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    GraphicalModel m = rescale_potentials(pmtest::random_model(rng, 2, 5, 3), 1e-6);
    Nmrf nmrf = build_nmrf(m);
    long long expect = 0;
    for (const auto& f : m.factors()) expect += static_cast<long long>(f.table.size());
    CHECK(nmrf.node_count() == expect);
  }
}

TEST_CASE("intra-clique blocks are complete and the relation is symmetric") {
  SplitMix64 rng(31);
  GraphicalModel m = rescale_potentials(pmtest::random_model(rng, 3, 4, 3), 1e-6);
  Nmrf nmrf = build_nmrf(m);
  const auto& cards = m.cardinalities();
  for (int a = 0; a < nmrf.node_count(); ++a) {
    for (int b = a + 1; b < nmrf.node_count(); ++b) {
      const auto& na = nmrf.nodes()[a];
      const auto& nb = nmrf.nodes()[b];
      const auto& sa = m.factors()[na.clique].scope;
      const auto& sb = m.factors()[nb.clique].scope;
      int zab = disagreement(sa, na.config, sb, nb.config, cards);
      int zba = disagreement(sb, nb.config, sa, na.config, cards);
      CHECK(zab == zba);
      if (na.clique == nb.clique) CHECK(zab == 1);  // distinct configs always clash
      CHECK(nmrf.graph().adjacent(a, b) == (zab == 1));
    }
  }
}

TEST_CASE("encode sets one bit per clique at the configuration index") {
  GraphicalModel m = rescale_potentials(fig1_model(), 1e-6);
  Nmrf nmrf = build_nmrf(m);

  NmrfAssignment all_zero = encode_assignment(nmrf, m, Assignment{{0, 0, 0}});
  CHECK(all_zero.bits[nmrf.node_index(0, 1)] == 1);
  CHECK(all_zero.bits[nmrf.node_index(1, 1)] == 1);
  int set = 0;
  for (auto b : all_zero.bits) set += b;
  CHECK(set == 2);

  NmrfAssignment mixed = encode_assignment(nmrf, m, Assignment{{1, 0, 1}});
  CHECK(mixed.bits[nmrf.node_index(0, 2)] == 1);
  CHECK(mixed.bits[nmrf.node_index(1, 3)] == 1);
}

TEST_CASE("encode never sets two adjacent bits and decode inverts it") {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    GraphicalModel m = rescale_potentials(pmtest::random_model(rng, 2, 5, 3), 1e-6);
    Nmrf nmrf = build_nmrf(m);
    Assignment a;
    for (int v = 0; v < m.var_count(); ++v)
      a.values.push_back(rng.next_below(m.cardinalities()[v]));
    NmrfAssignment bits = encode_assignment(nmrf, m, a);
    for (auto [u, v] : nmrf.graph().edges()) CHECK(!(bits.bits[u] && bits.bits[v]));
    CHECK(decode_assignment(nmrf, m, bits) == a);
  }
}

TEST_CASE("decode rejects malformed bit vectors") {
  GraphicalModel m = rescale_potentials(fig1_model(), 1e-6);
  Nmrf nmrf = build_nmrf(m);

  SUBCASE("zero bits set") {
    NmrfAssignment b;
    b.bits.assign(nmrf.node_count(), 0);
    CHECK_THROWS_WITH_AS(decode_assignment(nmrf, m, b), doctest::Contains("zero bits"),
                         std::runtime_error);
  }
  SUBCASE("multiple bits in one clique") {
    NmrfAssignment b;
    b.bits.assign(nmrf.node_count(), 0);
    b.bits[nmrf.node_index(0, 1)] = 1;
    b.bits[nmrf.node_index(0, 2)] = 1;
    b.bits[nmrf.node_index(1, 1)] = 1;
    CHECK_THROWS_WITH_AS(decode_assignment(nmrf, m, b), doctest::Contains("multiple bits"),
                         std::runtime_error);
  }
  SUBCASE("conflicting shared variable") {
    // clique 0 at k=2 (A=1, B=0), clique 1 at k=2 (B=1, C=0)
    NmrfAssignment b;
    b.bits.assign(nmrf.node_count(), 0);
    b.bits[nmrf.node_index(0, 2)] = 1;
    b.bits[nmrf.node_index(1, 2)] = 1;
    CHECK_THROWS_WITH_AS(decode_assignment(nmrf, m, b), doctest::Contains("conflicting shared"),
                         std::runtime_error);
  }
}

TEST_CASE("objective is the weight sum on feasible bits, absent on violations") {
  GraphicalModel m = rescale_potentials(fig1_model(), 1e-6);
  Nmrf nmrf = build_nmrf(m);

  NmrfAssignment zero;
  zero.bits.assign(nmrf.node_count(), 0);
  CHECK(nmrf_objective(nmrf, zero) == 0.0);

  NmrfAssignment clash;
  clash.bits.assign(nmrf.node_count(), 0);
  clash.bits[nmrf.node_index(0, 1)] = 1;
  clash.bits[nmrf.node_index(0, 2)] = 1;
  CHECK(!nmrf_objective(nmrf, clash).has_value());
}

TEST_CASE("encoded score equals the model log score on every assignment") {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    GraphicalModel m = rescale_potentials(pmtest::random_model(rng, 2, 4, 3), 1e-6);
    Nmrf nmrf = build_nmrf(m);
    Assignment a;
    a.values.assign(m.var_count(), 0);
    for (;;) {
      auto obj = nmrf_objective(nmrf, encode_assignment(nmrf, m, a));
      REQUIRE(obj.has_value());
      CHECK(*obj == doctest::Approx(model_log_score(m, a)).epsilon(1e-9));
      int i = 0;
      for (; i < m.var_count(); ++i) {
        if (++a.values[i] < m.cardinalities()[i]) break;
        a.values[i] = 0;
      }
      if (i == m.var_count()) break;
    }
  }
}

TEST_CASE("the exhaustive bit maximizer asserts exactly one node per clique") {
  SplitMix64 rng(43);
  int checked = 0;
  for (int trial = 0; trial < 20 && checked < 8; ++trial) {
    GraphicalModel m = rescale_potentials(pmtest::random_model(rng, 2, 4, 2, 18), 1e-6);
    Nmrf nmrf = build_nmrf(m);
    const int n = nmrf.node_count();
    if (n > 20) continue;
    ++checked;
    double best = -1.0;
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      NmrfAssignment b;
      b.bits.resize(n);
      for (int i = 0; i < n; ++i) b.bits[i] = (mask >> i) & 1;
      auto obj = nmrf_objective(nmrf, b);
      if (obj && *obj > best) {
        best = *obj;
        best_mask = mask;
      }
    }
    for (int c = 0; c < nmrf.clique_count(); ++c) {
      int count = 0;
      for (int i = nmrf.clique_begin(c); i < nmrf.clique_end(c); ++i) count += (best_mask >> i) & 1;
      CHECK(count == 1);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("UG dump round-trips through the reader") {
  GraphicalModel m = rescale_potentials(fig1_model(), 1e-6);
  Nmrf nmrf = build_nmrf(m);
  std::ostringstream out;
  write_nmrf_ug(out, nmrf);
  UgFile back = read_ug_string(out.str());
  CHECK(back.graph == nmrf.graph());
  REQUIRE(back.weights.has_value());
  CHECK(*back.weights == nmrf.weights());
}
