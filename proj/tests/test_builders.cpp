#include <doctest.h>

#include <cmath>

#include "blockstab/builders.hpp"
#include "blockstab/lp_solver.hpp"
#include "support.hpp"

using namespace blockstab;

namespace {

GrayImage gray(int w, int h, std::vector<double> px) { return GrayImage{w, h, std::move(px)}; }

}  // namespace

TEST_CASE("segmentation weights") {
  CHECK(segmentation_weight(0.0, 1.0) == 105.0);
  CHECK(segmentation_weight(5.0, 1.0) == doctest::Approx(5.0 + 100.0 * std::exp(-0.5)));
  CHECK(segmentation_weight(5.0, 1.0) == doctest::Approx(65.65).epsilon(1e-3));
  CHECK(segmentation_weight(0.0, 2.0) == 55.0);
  CHECK_THROWS(segmentation_weight(0.0, 0.0));

  RgbImage img{2, 1, {{10, 20, 30}, {13, 24, 30}}};
  const PottsInstance seg = build_segmentation(img, {{1, 2}, {3, 4}});
  REQUIRE(seg.num_edges() == 1);
  CHECK(seg.edge(0).weight == doctest::Approx(5.0 + 100.0 * std::exp(-25.0 / 50.0)));
  CHECK(seg.cost(1, 0) == 3.0);
  CHECK_THROWS(build_segmentation(img, {{1, 2}}));
}

TEST_CASE("stereo on a uniform image") {
  const GrayImage flat = gray(4, 3, std::vector<double>(12, 80.0));
  const PottsInstance s = build_stereo(flat, flat, {3, 50.0, 2.0, 4.0, true});
  CHECK(s.num_edges() == 17);
  for (const Edge& e : s.edges()) CHECK(e.weight == 100.0);
  for (NodeId u = 0; u < 12; ++u) {
    const int c = u % 4;
    for (Label i = 0; i < 3; ++i) {
      if (c - i < 0)
        CHECK(is_forbidden(s.cost(u, i)));
      else
        CHECK(s.cost(u, i) == 0.0);
    }
  }
}

TEST_CASE("stereo by hand on a 2x2 pair") {
  // left = [10 30; 50 50], right = [20 40; 50 90]
  const GrayImage left = gray(2, 2, {10, 30, 50, 50});
  const GrayImage right = gray(2, 2, {20, 40, 50, 90});
  const PottsInstance s = build_stereo(left, right, {2, 50.0, 2.0, 4.0, false});
  CHECK(s.cost(0, 0) == 100.0);  // (10 - 20)^2
  CHECK(is_forbidden(s.cost(0, 1)));
  CHECK(s.cost(1, 0) == 100.0);  // (30 - 40)^2
  CHECK(s.cost(1, 1) == 100.0);  // (30 - 20)^2
  CHECK(s.cost(2, 0) == 0.0);
  CHECK(s.cost(3, 0) == 1600.0);  // (50 - 90)^2
  CHECK(s.cost(3, 1) == 0.0);
  REQUIRE(s.num_edges() == 4);
  CHECK(s.edge(0).weight == 50.0);   // 0-1: |10 - 30| >= 4
  CHECK(s.edge(1).weight == 50.0);   // 0-2
  CHECK(s.edge(2).weight == 50.0);   // 1-3
  CHECK(s.edge(3).weight == 100.0);  // 2-3: equal intensities
}

TEST_CASE("Birchfield-Tomasi dissimilarity") {
  // Rising ramp on the right: right(1) = 20 spans [15, 25] at half pixels.
  const GrayImage left = gray(3, 1, {0, 22, 0});
  const GrayImage right = gray(3, 1, {10, 20, 30});
  CHECK(birchfield_tomasi(left, right, 0, 1, 1) == 0.0);
  const GrayImage far = gray(3, 1, {0, 40, 0});
  // Left 40 vs right interval [15, 25] gives 15; right 20 vs left [20, 40] gives 0.
  CHECK(birchfield_tomasi(far, right, 0, 1, 1) == 0.0);
  const GrayImage flat = gray(3, 1, {40, 40, 40});
  CHECK(birchfield_tomasi(flat, right, 0, 1, 1) == 15.0);
  CHECK(birchfield_tomasi(flat, right, 0, 1, 1) == birchfield_tomasi(right, flat, 0, 1, 1));
  // Never larger than the plain absolute difference.
  const auto pair = synthetic_stereo_pair(6, 9, 4, 3);
  for (int c = 3; c < 9; ++c)
    for (int i = 0; i < 4; ++i)
      CHECK(birchfield_tomasi(pair.left, pair.right, 2, c, c - i) <=
            std::abs(pair.left.at(2, c) - pair.right.at(2, c - i)));
}

TEST_CASE("stereo builder validation") {
  const GrayImage a = gray(2, 2, {0, 0, 0, 0});
  const GrayImage b = gray(1, 2, {0, 0});
  CHECK_THROWS_AS(build_stereo(a, b), ModelError);
  CHECK_THROWS_AS(build_stereo(a, a, {3, 50.0, 2.0, 4.0, true}), ModelError);
}

TEST_CASE("synthetic stereo pair") {
  const StereoPair p = synthetic_stereo_pair(20, 20, 8, 7);
  const StereoPair q = synthetic_stereo_pair(20, 20, 8, 7);
  CHECK(p.left.pixels == q.left.pixels);
  CHECK(p.disparity.size() == 400);
  for (int d : p.disparity) {
    CHECK(d >= 0);
    CHECK(d < 8);
  }
  // Ground truth is consistent with the images away from the left border.
  for (int r = 0; r < 20; ++r)
    for (int c = 8; c < 20; ++c) {
      const int d = p.disparity[static_cast<std::size_t>(r) * 20 + c];
      CHECK(p.left.at(r, c) == p.right.at(r, c - d));
    }
}

TEST_CASE("random grids and trees") {
  const PottsInstance g = random_grid(3, 3, ref::grid_spec(1));
  CHECK(g.num_edges() == 12);
  for (const Edge& e : g.edges()) {
    CHECK(e.weight == std::floor(e.weight));
    CHECK(e.weight >= 0.0);
    CHECK(e.weight <= 3.0);
  }
  RandomSpec spec;
  spec.seed = 4;
  const PottsInstance t = random_tree(12, spec);
  CHECK(t.num_edges() == 11);
  for (const Edge& e : t.edges()) CHECK(e.u < e.v);
  const PottsInstance t2 = random_tree(12, spec);
  CHECK(t.weights() == t2.weights());
}
