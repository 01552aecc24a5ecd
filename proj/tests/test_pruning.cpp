#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perfectmap/model.hpp"
#include "perfectmap/nmrf.hpp"
#include "perfectmap/oracle.hpp"
#include "perfectmap/pruning.hpp"
#include "perfectmap/rng.hpp"
#include "test_support.hpp"

using namespace perfectmap;

namespace {

constexpr double kEps = 1e-6;

GraphicalModel two_entry_model(double hi) {
  std::vector<Factor> fs{{{0}, {1.0, hi}}};
  return rescale_potentials(GraphicalModel({2}, fs), kEps);
}

// model with some deliberately tied-at-minimum table entries
GraphicalModel random_tied_model(SplitMix64& rng) {
  GraphicalModel base = pmtest::random_model(rng, 2, 4, 2, 16);
  std::vector<Factor> fs = base.factors();
  for (auto& f : fs) {
    double lo = *std::min_element(f.table.begin(), f.table.end());
    for (double& t : f.table)
      if (rng.next_coin(0.35)) t = lo;
  }
  return GraphicalModel(base.cardinalities(), fs);
}

}  // namespace

TEST_CASE("disconnect strips the intra-clique edges of minimal configurations") {
  SUBCASE("one minimal configuration loses its single block edge") {
    Nmrf nmrf = build_nmrf(two_entry_model(2.0));
    CHECK(nmrf.graph().edge_count() == 1);
    PrunedNmrf pruned = disconnect(nmrf, kEps);
    CHECK(pruned.graph.edge_count() == 0);
    CHECK(pruned.minimal_flags == std::vector<std::uint8_t>{1, 0});
  }
  SUBCASE("constant table leaves the block edgeless") {
    std::vector<Factor> fs{{{0}, {3.0, 3.0, 3.0}}};
    Nmrf nmrf = build_nmrf(rescale_potentials(GraphicalModel({3}, fs), kEps));
    CHECK(nmrf.graph().edge_count() == 3);
    PrunedNmrf pruned = disconnect(nmrf, kEps);
    CHECK(pruned.graph.edge_count() == 0);
    CHECK(pruned.minimal_flags == std::vector<std::uint8_t>{1, 1, 1});
  }
  SUBCASE("two-clique chain with unique minima drops three edges per clique") {
    GraphicalModel m = rescale_potentials(
        parse_model_string("GM 1\nvars 3\ncards 2 2 2\nfactors 2\n"
                           "factor 2 0 1\nvalues 1 2 3 4\n"
                           "factor 2 1 2\nvalues 1 5 6 7\n"),
        kEps);
    Nmrf nmrf = build_nmrf(m);
    int before = nmrf.graph().edge_count();
    PrunedNmrf pruned = disconnect(nmrf, kEps);
    CHECK(before - pruned.graph.edge_count() == 6);
    // inter-clique disagreement edges stay
    for (auto [a, b] : nmrf.graph().edges())
      if (nmrf.nodes()[a].clique != nmrf.nodes()[b].clique)
        CHECK(pruned.graph.adjacent(a, b));
  }
}

TEST_CASE("merge fuses non-adjacent nodes with identical neighborhoods") {
  SUBCASE("two isolated nodes") {
    UndirectedGraph g(2);
    std::vector<double> w{0.3, 0.5};
    PrunedNmrf merged = merge(wrap_instance(g, w));
    CHECK(merged.graph.vertex_count() == 1);
    CHECK(merged.weights == std::vector<double>{0.8});
    CHECK(merged.merge_map == std::vector<int>{0, 0});
  }
  SUBCASE("twin leaves of a path collapse into one") {
    UndirectedGraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    std::vector<double> w{0.25, 1.0, 0.75};
    PrunedNmrf merged = merge(wrap_instance(g, w));
    CHECK(merged.graph.vertex_count() == 2);
    CHECK(merged.graph.edge_count() == 1);
    CHECK(merged.weights == std::vector<double>{1.0, 1.0});  // 0.25 + 0.75 at node 0
    CHECK(merged.merge_map == std::vector<int>{0, 1, 0});
  }
  SUBCASE("merge map stays idempotent through chained merges") {
    UndirectedGraph g(4);  // four isolated nodes collapse into one
    std::vector<double> w{1, 2, 3, 4};
    PrunedNmrf merged = merge(wrap_instance(g, w));
    CHECK(merged.graph.vertex_count() == 1);
    CHECK(merged.weights == std::vector<double>{10.0});
    for (int i = 0; i < 4; ++i) {
      int rep = merged.merge_map[i];
      CHECK(merged.merge_map[rep] == rep);
    }
  }
}

TEST_CASE("merged instances keep the exhaustive stable-set value") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    UndirectedGraph g = gen_family(Family::random, FamilyParams{0, 0, 10, 0.35}, rng);
    std::vector<double> w(g.vertex_count());
    for (double& x : w) x = rng.next_unit() + 1e-6;
    // force identical-neighborhood twins to exist now and then
    PrunedNmrf merged = merge(wrap_instance(g, w));
    CHECK(merged.graph.vertex_count() <= g.vertex_count());
    CHECK(exhaustive_mwss(merged.graph, merged.weights).value ==
          doctest::Approx(exhaustive_mwss(g, w).value).epsilon(1e-9));
  }
}

TEST_CASE("post-processing keeps only the maximal assertion per clique") {
  // clique with a minimal configuration disconnected from its block: a
  // solver may assert both; the heavier one must survive
  GraphicalModel m = rescale_potentials(
      parse_model_string("GM 1\nvars 1\ncards 2\nfactors 1\nfactor 1 0\nvalues 1 4\n"), kEps);
  Nmrf nmrf = build_nmrf(m);
  PrunedNmrf pruned = disconnect(nmrf, kEps);
  std::vector<std::uint8_t> both{1, 1};  // feasible on the pruned graph
  NmrfAssignment fixed = postprocess_assignment(pruned, both);
  CHECK(fixed.bits == std::vector<std::uint8_t>{0, 1});
  CHECK(nmrf_objective(nmrf, fixed).has_value());
}

TEST_CASE("post-processing is the identity without merges or multi-assertions") {
  GraphicalModel m = rescale_potentials(
      parse_model_string("GM 1\nvars 2\ncards 2 2\nfactors 1\nfactor 2 0 1\nvalues 1 2 3 4\n"),
      kEps);
  Nmrf nmrf = build_nmrf(m);
  PrunedNmrf pruned = disconnect(nmrf, kEps);
  std::vector<std::uint8_t> one{0, 0, 0, 1};
  CHECK(postprocess_assignment(pruned, one).bits == std::vector<std::uint8_t>{0, 0, 0, 1});
}

TEST_CASE("pruning preserves the optimum within the minimal-weight slack") {
  SplitMix64 rng(29);
  const double per_clique_slack = 2.0 * std::log(1.0 + kEps);
  for (int trial = 0; trial < 60; ++trial) {
    GraphicalModel m = rescale_potentials(random_tied_model(rng), kEps);
    Nmrf nmrf = build_nmrf(m);
    if (nmrf.node_count() > 24) continue;

    MwssResult original = exhaustive_mwss(nmrf.graph(), nmrf.weights());
    PrunedNmrf pruned = merge(disconnect(nmrf, kEps));
    MwssResult reduced = exhaustive_mwss(pruned.graph, pruned.weights);
    NmrfAssignment fixed = postprocess_assignment(pruned, reduced.bits);
    auto value = nmrf_objective(nmrf, fixed);
    REQUIRE(value.has_value());
    double slack = per_clique_slack * m.factor_count();
    CHECK(*value >= original.value - slack);
    CHECK(*value <= original.value + 1e-9);

    // monotone: never grows
    CHECK(pruned.graph.vertex_count() <= nmrf.node_count());
    CHECK(pruned.graph.edge_count() <= nmrf.graph().edge_count());
  }
}

TEST_CASE("pruning is deterministic") {
  SplitMix64 rng(31);
  GraphicalModel m = rescale_potentials(random_tied_model(rng), kEps);
  Nmrf nmrf = build_nmrf(m);
  PrunedNmrf a = merge(disconnect(nmrf, kEps));
  PrunedNmrf b = merge(disconnect(nmrf, kEps));
  CHECK(a.graph == b.graph);
  CHECK(a.weights == b.weights);
  CHECK(a.merge_map == b.merge_map);
}
