#include <doctest.h>

#include <random>

#include "blockstab/builders.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/oracle.hpp"
#include "support.hpp"

using namespace blockstab;

TEST_CASE("triangle LP value is 1.5 + 1.5 epsilon") {
  for (double eps : {0.1, 0.2, 0.3}) {
    const auto tri = counterexample_triangle(eps);
    const LpResult lp = solve_lp(tri.instance);
    CHECK(lp.primal.objective == doctest::Approx(1.5 + 1.5 * eps).epsilon(1e-9));
    const PersistencyMask mask = persistency_mask(lp.primal, tri.optimum);
    CHECK(mask.fraction == 0.0);
    CHECK(mask.count(Persistency::kFractional) == 3);
    // Each node splits evenly over its two finite labels.
    for (NodeId u = 0; u < 3; ++u)
      for (Label i = 0; i < 3; ++i)
        if (!is_forbidden(tri.instance.cost(u, i))) CHECK(lp.primal.x(u, i) == doctest::Approx(0.5));
  }
}

TEST_CASE("triangle LP in exact mode") {
  const auto tri = counterexample_triangle(0.1);
  LpOptions opts;
  opts.arithmetic = Arithmetic::kExact;
  const LpResult lp = solve_lp(tri.instance, opts);
  REQUIRE(lp.exact_objective.has_value());
  // 1.5 + 1.5 * double(0.1), exactly.
  CHECK(*lp.exact_objective == Rational(3, 2) + Rational(3, 2) * to_rational(0.1));
}

TEST_CASE("single node and edgeless instances") {
  const PottsInstance one(1, 3, {4.0, 1.5, 2.0}, {});
  const LpResult lp = solve_lp(one);
  CHECK(lp.primal.objective == doctest::Approx(1.5));
  CHECK(lp.primal.x(0, 1) == doctest::Approx(1.0));

  const PottsInstance two(2, 2, {1.0, 0.0, 0.0, 3.0}, {});
  CHECK(solve_lp(two).primal.objective == doctest::Approx(0.0));
}

TEST_CASE("LP on small grids: feasibility, bounds and strong duality") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const PottsInstance grid = random_grid(3, 3, ref::grid_spec(seed));
    const LpResult lp = solve_lp(grid);
    const auto [g, q] = ref::brute_map(grid);

    CHECK(ref::polytope_residual(grid, lp.primal) <= 1e-9);
    CHECK(ref::primal_value(grid, lp.primal) == doctest::Approx(lp.primal.objective).epsilon(1e-9));
    CHECK(lp.primal.objective <= q + 1e-9);
    CHECK(ref::dual_value(grid, lp.dual) == doctest::Approx(lp.primal.objective).epsilon(1e-9));

    // An integral LP optimum is a MAP labeling.
    bool integral = true;
    Labeling f(9, 0);
    for (NodeId u = 0; u < 9; ++u) {
      bool found = false;
      for (Label i = 0; i < 3; ++i)
        if (lp.primal.x(u, i) >= 1 - 1e-9) {
          f[u] = i;
          found = true;
        }
      integral = integral && found;
    }
    if (integral) CHECK(ref::energy(grid, f) == doctest::Approx(q));

    const auto report = oracle::verify_lp_certificate(grid, lp.primal, lp.dual);
    CHECK(report.ok());
  }
}

TEST_CASE("strong duality with real-valued costs and more labels") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    RandomSpec spec;
    spec.num_labels = 4;
    spec.seed = seed;
    const PottsInstance grid = random_grid(4, 5, spec);
    const LpResult lp = solve_lp(grid);
    CHECK(ref::polytope_residual(grid, lp.primal) <= 1e-8);
    CHECK(ref::dual_value(grid, lp.dual) == doctest::Approx(lp.primal.objective).epsilon(1e-8));
  }
}

TEST_CASE("LP is tight on trees") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    RandomSpec spec;
    spec.seed = seed;
    const PottsInstance tree = random_tree(10, spec);
    const auto [g, q] = ref::brute_map(tree);
    CHECK(solve_lp(tree).primal.objective == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("LP value is invariant under node relabeling") {
  std::mt19937 rng(9);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PottsInstance grid = random_grid(3, 4, ref::grid_spec(seed));
    std::vector<NodeId> perm(12);
    for (NodeId u = 0; u < 12; ++u) perm[u] = u;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> costs(12 * 3);
    for (NodeId u = 0; u < 12; ++u)
      for (Label i = 0; i < 3; ++i) costs[perm[u] * 3 + i] = grid.cost(u, i);
    std::vector<Edge> edges;
    for (const Edge& e : grid.edges()) edges.push_back({perm[e.u], perm[e.v], e.weight});
    std::reverse(edges.begin(), edges.end());
    const PottsInstance shuffled(12, 3, costs, edges);
    CHECK(solve_lp(shuffled).primal.objective == doctest::Approx(solve_lp(grid).primal.objective).epsilon(1e-9));
  }
}

TEST_CASE("exact and float LP agree") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PottsInstance grid = random_grid(3, 3, ref::grid_spec(seed));
    LpOptions opts;
    opts.arithmetic = Arithmetic::kExact;
    const LpResult exact = solve_lp(grid, opts);
    REQUIRE(exact.exact_objective.has_value());
    CHECK(exact.exact_objective->get_d() == doctest::Approx(solve_lp(grid).primal.objective).epsilon(1e-12));
  }
}

TEST_CASE("persistency mask") {
  PrimalSolution x;
  x.num_nodes = 3;
  x.num_labels = 2;
  x.node_marginals = {1, 0, 0.5, 0.5, 0, 1};
  const PersistencyMask mask = persistency_mask(x, ref::lab({0, 0, 0}));
  CHECK(mask.flags[0] == Persistency::kIntegralMatch);
  CHECK(mask.flags[1] == Persistency::kFractional);
  CHECK(mask.flags[2] == Persistency::kIntegralMismatch);
  CHECK(mask.fraction == doctest::Approx(1.0 / 3.0));
  PrimalSolution empty;
  CHECK(persistency_mask(empty, Labeling()).fraction == 1.0);
}

TEST_CASE("exact MAP matches enumeration") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    const PottsInstance grid = random_grid(3, 3, ref::grid_spec(seed));
    const auto [g, q] = ref::brute_map(grid);
    const MapResult exhaustive = solve_map(grid);
    CHECK(exhaustive.labeling == g);
    MapOptions bb;
    bb.exhaustive_limit = 0;
    const MapResult searched = solve_map(grid, bb);
    CHECK(searched.proven_optimal);
    CHECK(searched.value == doctest::Approx(q));
    CHECK(ref::energy(grid, searched.labeling) == doctest::Approx(q));
  }
}

TEST_CASE("MAP of the golden instances") {
  const auto tri = counterexample_triangle(0.1);
  MapOptions opts;
  opts.arithmetic = Arithmetic::kExact;
  const MapResult m = solve_map(tri.instance, opts);
  CHECK(m.labeling == tri.optimum);
  CHECK(m.value == doctest::Approx(2.0));
  opts.exhaustive_limit = 0;
  CHECK(solve_map(tri.instance, opts).labeling == tri.optimum);

  const auto ce = combined_example(0.01, 0.1);
  CHECK(solve_map(ce.instance).labeling == ce.optimum);
}
