#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perfectmap/errors.hpp"
#include "perfectmap/model.hpp"
#include "perfectmap/nmrf.hpp"
#include "perfectmap/oracle.hpp"
#include "perfectmap/perfection.hpp"
#include "perfectmap/relaxation.hpp"
#include "perfectmap/rng.hpp"
#include "test_support.hpp"

using namespace perfectmap;
using pmtest::complete_graph;
using pmtest::cycle_graph;
using pmtest::path_graph;

TEST_CASE("maximal cliques of canonical graphs") {
  CHECK(maximal_cliques(complete_graph(3)) ==
        std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK(maximal_cliques(path_graph(3)) == std::vector<std::vector<int>>{{0, 1}, {1, 2}});

  // C5: by brute force every maximal clique is one of the five edges
  auto c5 = maximal_cliques(cycle_graph(5));
  std::vector<std::vector<int>> expect{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
  CHECK(c5 == expect);

  UndirectedGraph lonely(3);
  lonely.add_edge(0, 1);
  CHECK(maximal_cliques(lonely) == std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("maximal cliques match subset enumeration on random graphs") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    UndirectedGraph g = gen_family(Family::random, FamilyParams{0, 0, 9, 0.45}, rng);
    auto fast = maximal_cliques(g);
    // brute force: a subset is a maximal clique iff pairwise adjacent and
    // no vertex outside is adjacent to all of it
    std::vector<std::vector<int>> slow;
    const int n = g.vertex_count();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> sub;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) sub.push_back(v);
      bool clique = true;
      for (std::size_t i = 0; i < sub.size() && clique; ++i)
        for (std::size_t j = i + 1; j < sub.size() && clique; ++j)
          clique = g.adjacent(sub[i], sub[j]);
      if (!clique) continue;
      bool maximal = true;
      for (int v = 0; v < n && maximal; ++v) {
        if (mask & (1u << v)) continue;
        bool all = true;
        for (int u : sub) all = all && g.adjacent(u, v);
        maximal = !all;
      }
      if (maximal) slow.push_back(sub);
    }
    std::sort(slow.begin(), slow.end());
    CHECK(fast == slow);
  }
}

TEST_CASE("build_lp validates and assembles rows") {
  std::vector<double> w{1.0, 1.0, 1.0};
  PackingLp lp = build_lp(complete_graph(3), w);
  CHECK(lp.rows.size() == 1);
  CHECK(lp.weights.size() == 3);
  CHECK_THROWS_AS(build_lp(complete_graph(3), std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_lp(complete_graph(3), std::vector<double>{1, 1, -1}),
                  std::invalid_argument);
}

TEST_CASE("LP on a single vertex") {
  std::vector<double> w{1.0};
  LpSolution s = solve_lp(build_lp(UndirectedGraph(1), w));
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.integral);
  CHECK(s.x[0] == doctest::Approx(1.0));
}

TEST_CASE("LP on K3 picks one vertex") {
  std::vector<double> w{1.0, 1.0, 1.0};
  LpSolution s = solve_lp(build_lp(complete_graph(3), w));
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.integral);
  CHECK(s.x == std::vector<double>{1.0, 0.0, 0.0});  // Bland enters column 0 first
}

TEST_CASE("LP on C5 is half-integral") {
  std::vector<double> w(5, 1.0);
  LpSolution s = solve_lp(build_lp(cycle_graph(5), w));
  CHECK(s.objective == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(!s.integral);
  for (double x : s.x) CHECK(x == doctest::Approx(0.5).epsilon(1e-9));

  // certify against independent polytope vertex enumeration
  PackingLp lp = build_lp(cycle_graph(5), w);
  double vertex_opt = pmtest::lp_vertex_enumeration_optimum(lp.rows, 5, w);
  CHECK(s.objective == doctest::Approx(vertex_opt).epsilon(1e-9));
}

TEST_CASE("simplex agrees with polytope vertex enumeration on random graphs") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    UndirectedGraph g = gen_family(Family::random, FamilyParams{0, 0, 6, 0.5}, rng);
    std::vector<double> w(g.vertex_count());
    for (double& x : w) x = rng.next_unit() + 1e-6;
    PackingLp lp = build_lp(g, w);
    LpSolution s = solve_lp(lp);
    double vertex_opt = pmtest::lp_vertex_enumeration_optimum(lp.rows, g.vertex_count(), w);
    CHECK(s.objective == doctest::Approx(vertex_opt).epsilon(1e-8));
  }
}

TEST_CASE("LP upper-bounds the exhaustive stable set, with equality on Berge graphs") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    UndirectedGraph g = gen_family(Family::random, FamilyParams{0, 0, 10, 0.5}, rng);
    std::vector<double> w(g.vertex_count());
    for (double& x : w) x = rng.next_unit() + 1e-6;
    LpSolution s = solve_lp(build_lp(g, w));
    MwssResult exact = exhaustive_mwss(g, w);
    CHECK(exact.value <= s.objective + 1e-6);
    if (is_berge(g).berge) {
      CHECK(s.integral);
      CHECK(s.objective == doctest::Approx(exact.value).epsilon(1e-6));
    }
  }
}

TEST_CASE("integral solutions satisfy every row exactly") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    UndirectedGraph g = gen_family(Family::bipartite, FamilyParams{5, 5, 0, 0.5}, rng);
    std::vector<double> w(g.vertex_count());
    for (double& x : w) x = rng.next_unit() + 1e-6;
    PackingLp lp = build_lp(g, w);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.integral);
    for (const auto& row : lp.rows) {
      int sum = 0;
      for (int j : row) sum += s.x[j] > 0.5 ? 1 : 0;
      CHECK(sum <= 1);
    }
    // rounded bits form a stable set
    for (auto [u, v] : g.edges()) CHECK(!(s.x[u] > 0.5 && s.x[v] > 0.5));
  }
}

TEST_CASE("identical inputs produce identical solutions") {
  SplitMix64 rng(17);
  UndirectedGraph g = gen_family(Family::random, FamilyParams{0, 0, 10, 0.5}, rng);
  std::vector<double> w(g.vertex_count());
  for (double& x : w) x = rng.next_unit() + 1e-6;
  LpSolution a = solve_lp(build_lp(g, w));
  LpSolution b = solve_lp(build_lp(g, w));
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}

TEST_CASE("solving the nand MRF LP decodes tree models to the exact MAP") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    GraphicalModel m = rescale_potentials(pmtest::random_tree_model(rng, 2, 4, 2), 1e-6);
    Nmrf nmrf = build_nmrf(m);
    NmrfLpResult res = solve_nmrf_lp(nmrf);
    CHECK(res.lp.integral);
    REQUIRE(res.bits.has_value());
    auto obj = nmrf_objective(nmrf, *res.bits);
    REQUIRE(obj.has_value());
    MapResult exact = exhaustive_map(m);
    CHECK(*obj == doctest::Approx(exact.value).epsilon(1e-9));
    CHECK(res.lp.objective == doctest::Approx(exact.value).epsilon(1e-6));
    Assignment decoded = decode_assignment(nmrf, m, *res.bits);
    CHECK(model_log_score(m, decoded) == doctest::Approx(res.lp.objective).epsilon(1e-6));
  }
}

TEST_CASE("single-clique model LP selects the argmax table entry") {
  GraphicalModel m = rescale_potentials(
      parse_model_string("GM 1\nvars 1\ncards 4\nfactors 1\nfactor 1 0\nvalues 1 9 2 3\n"), 1e-6);
  Nmrf nmrf = build_nmrf(m);
  NmrfLpResult res = solve_nmrf_lp(nmrf);
  CHECK(res.lp.integral);
  REQUIRE(res.bits.has_value());
  CHECK(res.bits->bits[1] == 1);  // k = 2 holds the maximum
  CHECK(res.lp.objective == doctest::Approx(std::log(9.0 / 1.0 + 1e-6)).epsilon(1e-9));
}

TEST_CASE("fractional instances are reported, not rounded") {
  std::vector<double> w(5, 1.0);
  UgFile ug;  // use C5 as a bare weighted instance
  NmrfLpResult res;
  res.lp = solve_lp(build_lp(cycle_graph(5), w));
  CHECK(!res.lp.integral);
}

TEST_CASE("clique guard rejects oversized graphs") {
  CHECK_THROWS_AS(maximal_cliques(UndirectedGraph(70)), GuardError);
}
