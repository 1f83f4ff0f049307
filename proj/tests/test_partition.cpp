#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rbfpu/data.hpp"
#include "rbfpu/errors.hpp"
#include "rbfpu/partition.hpp"
#include "rbfpu/pu.hpp"
#include "sorting_partition.hpp"

using namespace rbfpu;

TEST_CASE("bounding box") {
  auto b = bounding_box(PointSet::from_rows({{0, 0}, {1, 1}}));
  CHECK(b.mins == std::vector<double>{0, 0});
  CHECK(b.l_box == 1.0);
  CHECK_FALSE(b.degenerate());

  b = bounding_box(PointSet::from_rows({{0, 0}, {2, 1}}));
  CHECK(b.l_box == 2.0);
  CHECK(b.volume() == 2.0);

  b = bounding_box(PointSet::from_rows({{0.3, 0.3}}));
  CHECK(b.l_box == 0.0);
  CHECK(b.degenerate());

  CHECK_THROWS_AS(bounding_box(PointSet(2)), InputError);
}

TEST_CASE("l_box spans the extreme coordinates of all axes") {
  // max of maxima minus min of minima, not the widest single axis
  auto b = bounding_box(PointSet::from_rows({{0.0, 0.5}, {0.2, 1.5}}));
  CHECK(b.l_box == 1.5);
}

TEST_CASE("strip index") {
  CHECK(strip_index(0.3, 0.0, 0.25, 4) == 2);
  CHECK(strip_index(0.0, 0.0, 0.25, 4) == 1);
  CHECK(strip_index(1.0, 0.0, 0.25, 4) == 4);
  CHECK(strip_index(1.0 + 1e-12, 0.0, 0.25, 4) == 4);
  CHECK(strip_index(-1.0, 0.0, 0.25, 4) == 1);
}

TEST_CASE("block index") {
  const std::size_t a[] = {2, 3};
  CHECK(block_index(a, 4) == 7);
  const std::size_t b[] = {1, 1};
  CHECK(block_index(b, 4) == 1);
  const std::size_t c[] = {2, 1, 3};
  CHECK(block_index(c, 3) == 12);
  const std::size_t bad[] = {0, 1};
  CHECK_THROWS_AS(block_index(bad, 4), InputError);
  const std::size_t high[] = {5, 1};
  CHECK_THROWS_AS(block_index(high, 4), InputError);
}

TEST_CASE("shell half width") {
  CHECK(shell_half_width(0.1, 0.25) == 1);
  CHECK(shell_half_width(0.25, 0.25) == 1);
  CHECK(shell_half_width(0.3, 0.25) == 2);
  CHECK(shell_half_width(1.0, 0.25) == 4);
}

TEST_CASE("one point per block") {
  auto pts = PointSet::from_rows({{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}});
  BoundingBox box{{0, 0}, {1, 1}, 1.0};
  BlockGrid g(pts, box, 0.5);
  CHECK(g.q() == 2);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(g.bucket(k).size() == 1);
  CHECK(g.bucket(2)[0] == 1);  // (1,2) -> second block
}

TEST_CASE("coincident points share one bucket") {
  auto pts = PointSet::from_rows({{0.4, 0.4}, {0.4, 0.4}, {0.4, 0.4}});
  auto box = bounding_box(pts);
  BlockGrid g(pts, box, 0.1);
  CHECK(g.block_count() == 1);
  CHECK(g.bucket(1).size() == 3);
  const double c[] = {0.4, 0.4};
  CHECK(g.range_query(c, 1e-3).size() == 3);
}

TEST_CASE("points outside the box are rejected") {
  auto pts = PointSet::from_rows({{0.5, 0.5}, {2.0, 0.5}});
  BoundingBox box{{0, 0}, {1, 1}, 1.0};
  CHECK_THROWS_AS(BlockGrid(pts, box, 0.25), InputError);
  CHECK_THROWS_AS(BlockGrid(pts, bounding_box(pts), 0.0), InputError);
}

TEST_CASE("Halton occupancy and build cost") {
  auto pts = halton(289, 2);
  auto box = bounding_box(pts);
  auto cov = make_covering(box, pts.size(), box.volume());
  BlockGrid g(pts, box, cov.min_radius);
  std::size_t total = 0;
  std::set<std::size_t> seen;
  for (std::size_t k = 1; k <= g.block_count(); ++k) {
    for (auto i : g.bucket(k)) {
      CHECK(seen.insert(i).second);
      ++total;
    }
  }
  CHECK(total == 289);
  CHECK(seen.size() == 289);
  CHECK(g.index_computations() == 289);
  CHECK(g.q() == static_cast<std::size_t>(std::ceil(box.l_box / cov.min_radius)));
}

TEST_CASE("range query small cases") {
  std::mt19937_64 rng(3);
  auto pts = oracle::random_points(200, 2, rng);
  auto box = bounding_box(pts);
  BlockGrid g(pts, box, 0.1);

  const auto c = pts.point(17);
  auto only = g.range_query(c, 1e-9);
  REQUIRE(only.size() == 1);
  CHECK(only[0] == 17);

  const double mid[] = {0.5, 0.5};
  CHECK(g.range_query(mid, 0.2) == oracle::brute_force_range(pts, mid, 0.2));
  CHECK(g.range_query(mid, box.l_box * std::sqrt(2.0)).size() == 200);
  CHECK(g.count_in_ball(mid, 0.2) == oracle::brute_force_range(pts, mid, 0.2).size());
}

TEST_CASE("range queries match a linear scan in 1 to 4 dimensions") {
  std::mt19937_64 rng(2024);
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    auto pts = oracle::random_points(400, dim, rng, -1.0, 2.0);
    auto box = bounding_box(pts);
    std::uniform_real_distribution<double> udelta(0.05, 0.6);
    BlockGrid g(pts, box, udelta(rng));
    std::uniform_real_distribution<double> ur(1e-6, 1.0);
    for (int qn = 0; qn < 150; ++qn) {
      std::vector<double> c(dim);
      for (std::size_t m = 0; m < dim; ++m) {
        std::uniform_real_distribution<double> uc(box.mins[m], box.maxs[m]);
        c[m] = uc(rng);
      }
      // some centres sit exactly on nodes to exercise the boundary test
      if (qn % 5 == 0) c.assign(pts.point(qn).begin(), pts.point(qn).end());
      const double radius = ur(rng) * box.l_box * std::sqrt(double(dim));
      QueryStats stats;
      auto got = g.range_query(c, radius, &stats);
      CHECK(got == oracle::brute_force_range(pts, c, radius));
      const double shell = 2.0 * double(shell_half_width(radius, g.delta())) + 1.0;
      CHECK(double(stats.blocks_visited) <= std::pow(shell, double(dim)));
    }
  }
}

TEST_CASE("integer grid agrees with the sort-based partition") {
  auto pts = halton(3000, 2);
  auto box = bounding_box(pts);
  const double delta = 0.037;
  BlockGrid g(pts, box, delta);
  auto sorted = tools::sort_partition(pts, box, delta);
  REQUIRE(sorted.q == g.q());
  REQUIRE(sorted.buckets.size() == g.block_count());
  std::size_t total = 0;
  for (std::size_t k = 1; k <= g.block_count(); ++k) {
    std::vector<std::size_t> a(g.bucket(k).begin(), g.bucket(k).end());
    std::sort(a.begin(), a.end());
    CHECK(a == sorted.buckets[k - 1]);
    total += a.size();
  }
  CHECK(total == pts.size());
}
