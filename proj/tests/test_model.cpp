#include <doctest.h>

#include <random>
#include <sstream>

#include "blockstab/builders.hpp"
#include "blockstab/dual_decomp.hpp"
#include "blockstab/io.hpp"
#include "blockstab/model.hpp"
#include "support.hpp"

using namespace blockstab;

TEST_CASE("objective of the golden instances") {
  const auto tri = counterexample_triangle(0.1);
  CHECK(objective(tri.instance, ref::lab({1, 0, 1})) == doctest::Approx(2.0));

  const PottsInstance single(1, 3, {4.0, 1.5, 2.0}, {});
  for (Label i = 0; i < 3; ++i) CHECK(objective(single, ref::lab({i})) == single.cost(0, i));

  const auto ce = combined_example(0.01, 0.1);
  CHECK(objective(ce.instance, ce.optimum) == doctest::Approx(1.02).epsilon(1e-12));
}

TEST_CASE("objective is forbidden when a forbidden label is used") {
  const auto tri = counterexample_triangle(0.1);
  CHECK(is_forbidden(objective(tri.instance, ref::lab({0, 0, 0}))));
  CHECK_THROWS_AS(objective(tri.instance, ref::lab({0, 0})), ModelError);
  CHECK_THROWS_AS(objective(tri.instance, ref::lab({0, 3, 0})), ModelError);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(PottsInstance(2, 2, {0, 0, 0, 0}, {{0, 1, -1.0}}), ModelError);
  CHECK_THROWS_AS(PottsInstance(2, 2, {0, 0, 0, 0}, {{0, 0, 1.0}}), ModelError);
  CHECK_THROWS_AS(PottsInstance(2, 2, {0, 0, 0, 0}, {{0, 1, 1.0}, {1, 0, 2.0}}), ModelError);
  CHECK_THROWS_AS(PottsInstance(2, 2, {0, 0, 0, 0}, {{0, 2, 1.0}}), ModelError);
  CHECK_THROWS_AS(PottsInstance(1, 2, {kForbidden, kForbidden}, {}), ModelError);
  const PottsInstance flipped(2, 2, {0, 0, 0, 0}, {{1, 0, 1.5}});
  CHECK(flipped.edge(0).u == 0);
  CHECK(flipped.edge(0).v == 1);
}

TEST_CASE("adding a cut edge raises the objective by its weight") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PottsInstance base = random_grid(3, 3, ref::grid_spec(seed));
    std::mt19937 rng(static_cast<unsigned>(seed));
    Labeling f(9, 0);
    for (std::size_t u = 0; u < 9; ++u) f[u] = static_cast<Label>(rng() % 3);
    f[0] = 0;
    f[8] = 1;
    std::vector<Edge> edges = base.edges();
    edges.push_back({0, 8, 2.25});
    const PottsInstance more(9, 3, std::vector<double>(base.all_costs().begin(), base.all_costs().end()), edges);
    CHECK(objective(more, f) == doctest::Approx(objective(base, f) + 2.25));
  }
}

TEST_CASE("weight perturbations") {
  const PottsInstance grid = random_grid(3, 3, ref::grid_spec(3));
  const std::size_t m = grid.num_edges();

  SUBCASE("identity") {
    const PottsInstance same = apply_weight_perturbation(grid, {1.0, 1.0, std::vector<double>(m, 1.0)});
    CHECK(same.weights() == grid.weights());
  }
  SUBCASE("uniform halving") {
    const PottsInstance half = apply_weight_perturbation(grid, {2.0, 1.0, std::vector<double>(m, 0.5)});
    for (std::size_t e = 0; e < m; ++e) CHECK(half.edge(e).weight == grid.edge(e).weight / 2);
  }
  SUBCASE("out of range factors are rejected") {
    CHECK_THROWS_AS(apply_weight_perturbation(grid, {2.0, 1.0, std::vector<double>(m, 0.4)}), ModelError);
    CHECK_THROWS_AS(apply_weight_perturbation(grid, {2.0, 1.0, std::vector<double>(m, 1.1)}), ModelError);
    CHECK_THROWS_AS(apply_weight_perturbation(grid, {0.5, 1.0, std::vector<double>(m, 1.0)}), ModelError);
  }
  SUBCASE("random factors change the objective only through cut edges") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> factor(0.5, 1.0);
    WeightPerturbation p{2.0, 1.0, {}};
    for (std::size_t e = 0; e < m; ++e) p.factors.push_back(factor(rng));
    const PottsInstance pert = apply_weight_perturbation(grid, p);
    for (int trial = 0; trial < 30; ++trial) {
      Labeling f(9, 0);
      for (std::size_t u = 0; u < 9; ++u) f[u] = static_cast<Label>(rng() % 3);
      double expected = 0.0;
      for (NodeId u = 0; u < 9; ++u) expected += grid.cost(u, f[u]);
      for (std::size_t e = 0; e < m; ++e)
        if (f[grid.edge(e).u] != f[grid.edge(e).v]) expected += p.factors[e] * grid.edge(e).weight;
      CHECK(objective(pert, f) == doctest::Approx(expected));
    }
  }
  SUBCASE("composition multiplies factors and bounds") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> a(1 / 2.0, 1.5), b(1 / 3.0, 2.0);
    WeightPerturbation p1{2.0, 1.5, {}}, p2{3.0, 2.0, {}};
    for (std::size_t e = 0; e < m; ++e) {
      p1.factors.push_back(a(rng));
      p2.factors.push_back(b(rng));
    }
    const WeightPerturbation c = compose(p1, p2);
    CHECK(c.beta == doctest::Approx(6.0));
    CHECK(c.gamma == doctest::Approx(3.0));
    CHECK_NOTHROW(validate(c, m));
    const PottsInstance twice = apply_weight_perturbation(apply_weight_perturbation(grid, p1), p2);
    const PottsInstance once = apply_weight_perturbation(grid, c);
    for (std::size_t e = 0; e < m; ++e) CHECK(twice.edge(e).weight == doctest::Approx(once.edge(e).weight));
  }
}

TEST_CASE("boundary of a block") {
  const auto ce = combined_example(0.01, 0.1);
  const Boundary s = boundary(ce.instance, NodeSet({0, 1, 2}));
  CHECK(s.nodes == NodeSet({0, 2}));
  REQUIRE(s.edges.size() == 2);
  CHECK(ce.instance.edge(s.edges[0]).u == 0);
  CHECK(ce.instance.edge(s.edges[0]).v == 3);
  CHECK(ce.instance.edge(s.edges[1]).u == 2);
  CHECK(ce.instance.edge(s.edges[1]).v == 4);

  const Boundary all = boundary(ce.instance, NodeSet::range(6));
  CHECK(all.nodes.empty());
  CHECK(all.edges.empty());

  const PottsInstance grid = random_grid(3, 3, ref::grid_spec(0));
  const Boundary top = boundary(grid, NodeSet({0, 1, 2}));
  CHECK(top.nodes == NodeSet({0, 1, 2}));
  REQUIRE(top.edges.size() == 3);
  for (std::size_t e : top.edges) CHECK(grid.edge(e).v == grid.edge(e).u + 3);
}

TEST_CASE("boundary edges agree for a block and its complement") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const PottsInstance grid = random_grid(4, 4, ref::grid_spec(static_cast<std::uint64_t>(trial)));
    std::vector<NodeId> in, out;
    for (NodeId u = 0; u < 16; ++u) (rng() % 2 ? in : out).push_back(u);
    const NodeSet s(in), t(out);
    const Boundary bs = boundary(grid, s), bt = boundary(grid, t);
    CHECK(bs.edges == bt.edges);
    for (std::size_t e : bs.edges) {
      const Edge& edge = grid.edge(e);
      const bool u_in = s.contains(edge.u);
      CHECK(u_in != s.contains(edge.v));
      CHECK((bs.nodes.contains(edge.u) || bt.nodes.contains(edge.u)));
      CHECK((bs.nodes.contains(edge.v) || bt.nodes.contains(edge.v)));
    }
  }
}

TEST_CASE("cost perturbations") {
  const auto ce = combined_example(0.01, 0.1);
  const NodeSet s({0, 1, 2});

  SUBCASE("zero psi leaves the instance unchanged") {
    CostPerturbation cp{s, {{0, {1, 1, 1}}}, {{0, {0, 0, 0}}}};
    const PottsInstance same = apply_cost_perturbation(ce.instance, cp);
    CHECK(std::equal(same.all_costs().begin(), same.all_costs().end(), ce.instance.all_costs().begin()));
  }
  SUBCASE("block without boundary") {
    CostPerturbation cp{NodeSet::range(6), {}, {}};
    const PottsInstance same = apply_cost_perturbation(ce.instance, cp);
    CHECK(std::equal(same.all_costs().begin(), same.all_costs().end(), ce.instance.all_costs().begin()));
  }
  SUBCASE("bounds and support are enforced") {
    CostPerturbation over{s, {{0, {0.1, 0, 0}}}, {{0, {0.2, 0, 0}}}};
    CHECK_THROWS_AS(apply_cost_perturbation(ce.instance, over), ModelError);
    CostPerturbation interior{s, {{1, {1, 1, 1}}}, {{1, {0.5, 0, 0}}}};
    CHECK_THROWS_AS(apply_cost_perturbation(ce.instance, interior), ModelError);
  }
  SUBCASE("the block dual of the combined example as a boundary perturbation") {
    const double eps = 0.01;
    const NodeLabelTable star = epsilon_star(ce.instance, ce.delta, s);
    CostPerturbation cp{s, star, star};
    const PottsInstance p = apply_cost_perturbation(ce.instance, cp);
    // Updated node costs of u and w on labels 1 and 2 (0-indexed 0, 1).
    for (NodeId u : {0, 2}) {
      CHECK(p.cost(u, 0) == doctest::Approx(eps));
      CHECK(p.cost(u, 1) == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("restricted instances") {
  const auto ce = combined_example(0.01, 0.1);
  const double eps = 0.01;

  SUBCASE("zero delta on V is the original instance") {
    const RestrictedInstance r = restricted_instance(ce.instance, NodeSet::range(6), BlockDualSolution(3, {}));
    CHECK(std::equal(r.instance.all_costs().begin(), r.instance.all_costs().end(), ce.instance.all_costs().begin()));
    CHECK(r.instance.num_edges() == ce.instance.num_edges());
  }
  SUBCASE("updated node costs of both blocks") {
    const RestrictedInstance s = restricted_instance(ce.instance, ce.blocks.blocks[0], ce.delta);
    CHECK(s.instance.num_nodes() == 3);
    CHECK(s.instance.num_edges() == 3);
    const double expected_s[3][2] = {{eps, 0}, {0, kForbidden}, {eps, 0}};
    for (NodeId u = 0; u < 3; ++u)
      for (Label i = 0; i < 2; ++i) {
        if (is_forbidden(expected_s[u][i]))
          CHECK(is_forbidden(s.instance.cost(u, i)));
        else
          CHECK(s.instance.cost(u, i) == doctest::Approx(expected_s[u][i]));
      }

    const RestrictedInstance t = restricted_instance(ce.instance, ce.blocks.blocks[1], ce.delta);
    CHECK(t.instance.num_edges() == 2);
    const double expected_t[3][3] = {{2 - eps, 0, 2}, {2 - eps, 0, 2}, {0, 1, 1}};
    for (NodeId u = 0; u < 3; ++u)
      for (Label i = 0; i < 3; ++i) CHECK(t.instance.cost(u, i) == doctest::Approx(expected_t[u][i]));
  }
  SUBCASE("interior costs are untouched exactly") {
    const PottsInstance grid = random_grid(4, 4, ref::grid_spec(8));
    const NodeSet block({0, 1, 2, 4, 5, 6, 8, 9, 10});
    BlockDecomposition d;
    d.blocks = {block};
    d.boundary_block = set_difference(NodeSet::range(16), block);
    d.validate(16);
    BlockDualSolution delta(3, boundary_edges(grid, d));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (std::size_t e : delta.edges())
      for (Side side : {Side::kFromU, Side::kFromV})
        for (double& x : delta.message(e, side)) x = val(rng);
    const RestrictedInstance r = restricted_instance(grid, block, delta);
    const Boundary bd = boundary(grid, block);
    for (std::size_t l = 0; l < block.size(); ++l) {
      if (bd.nodes.contains(block[l])) continue;
      for (Label i = 0; i < 3; ++i) CHECK(r.instance.cost(static_cast<NodeId>(l), i) == grid.cost(block[l], i));
    }
    // Objective on the restriction recomputed from its definition.
    for (int trial = 0; trial < 20; ++trial) {
      Labeling f(block.size(), 0);
      for (std::size_t l = 0; l < block.size(); ++l) f[l] = static_cast<Label>(rng() % 3);
      double q = 0.0;
      for (std::size_t l = 0; l < block.size(); ++l) {
        const NodeId u = block[l];
        q += grid.cost(u, f[l]);
        for (const Incidence& inc : grid.incident(u)) {
          if (block.contains(inc.neighbor)) continue;
          q += delta.message(inc.edge, side_of(grid.edge(inc.edge), u))[f[l]];
        }
      }
      for (std::size_t e : internal_edges(grid, block)) {
        const Edge& edge = grid.edge(e);
        if (f[*block.index_of(edge.u)] != f[*block.index_of(edge.v)]) q += edge.weight;
      }
      CHECK(objective(r.instance, f) == doctest::Approx(q));
    }
  }
  SUBCASE("delta keyed off the boundary is rejected") {
    BlockDualSolution bad(3, {0});  // u-v lies inside S
    CHECK_THROWS_AS(restricted_instance(ce.instance, ce.blocks.blocks[0], bad), ModelError);
    BlockDualSolution missing(3, {3});
    CHECK_THROWS_AS(restricted_instance(ce.instance, ce.blocks.blocks[0], missing), ModelError);
  }
}

TEST_CASE("restriction with zero delta matches brute force on small instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PottsInstance grid = random_grid(3, 3, ref::grid_spec(seed));
    const NodeSet block({1, 2, 4, 5});
    const RestrictedInstance r = restricted_instance(grid, block);
    ref::for_each_labeling(4, 3, [&](const std::vector<Label>& f) {
      double q = 0.0;
      for (std::size_t l = 0; l < 4; ++l) q += grid.cost(block[l], f[l]);
      for (std::size_t e : internal_edges(grid, block)) {
        const Edge& edge = grid.edge(e);
        if (f[*block.index_of(edge.u)] != f[*block.index_of(edge.v)]) q += edge.weight;
      }
      CHECK(objective(r.instance, Labeling(f)) == doctest::Approx(q));
    });
  }
}

TEST_CASE("text format round trip") {
  const auto tri = counterexample_triangle(0.1);
  const auto ce = combined_example(0.01, 0.1);
  for (const PottsInstance* inst : {&tri.instance, &ce.instance}) {
    std::stringstream s;
    io::write_instance(s, *inst);
    const PottsInstance back = io::read_instance(s);
    CHECK(back.num_nodes() == inst->num_nodes());
    CHECK(std::equal(back.all_costs().begin(), back.all_costs().end(), inst->all_costs().begin()));
    CHECK(back.weights() == inst->weights());
  }
  std::stringstream bad("POTTS 2 2 1\n0 0\n0 0\n0 1\n");
  CHECK_THROWS(io::read_instance(bad));
}

TEST_CASE("seeded grids serialize identically") {
  auto text = [](std::uint64_t seed) {
    std::stringstream s;
    RandomSpec spec;
    spec.seed = seed;
    io::write_instance(s, random_grid(3, 3, spec));
    return s.str();
  };
  CHECK(text(42) == text(42));
  CHECK(text(42) != text(43));
  const PottsInstance one = random_grid(1, 1, {});
  CHECK(one.num_nodes() == 1);
  CHECK(one.num_edges() == 0);
  CHECK(random_grid(3, 3, {}).num_edges() == 12);
}
