#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "c2approx/sampling.hpp"

using namespace c2approx;

TEST_CASE("grid mode parsing") {
  CHECK(grid_mode_from_string("tensor") == GridMode::Tensor);
  CHECK(grid_mode_from_string("boundary-layered") == GridMode::BoundaryLayered);
  CHECK(grid_mode_from_string("monte-carlo") == GridMode::MonteCarlo);
  CHECK_THROWS_AS(grid_mode_from_string("bogus"), ParameterError);
}

TEST_CASE("tensor grid integrates the disk area") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::Tensor, 64, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(disk.inside(grid.point(i)));
    CHECK(grid.weight(i) > 0.0);
    CHECK(grid.boundary_distance(i) ==
          doctest::Approx(disk.boundary_distance(grid.point(i))).epsilon(1e-12));
  }
  CHECK(grid.total_weight() == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("boundary-layered grid stays inside and measures the area") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::BoundaryLayered, 20, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(disk.inside(grid.point(i)));
  CHECK(grid.total_weight() == doctest::Approx(M_PI).epsilon(0.05));
  // layering puts a decent share of points within 0.05 of the boundary
  std::size_t close = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.boundary_distance(i) < 0.05) ++close;
  CHECK(close * 10 >= grid.size());
}

TEST_CASE("monte carlo grid is deterministic in the seed") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid a = build_grid(disk, GridMode::MonteCarlo, 2000, 42);
  SampleGrid b = build_grid(disk, GridMode::MonteCarlo, 2000, 42);
  SampleGrid c = build_grid(disk, GridMode::MonteCarlo, 2000, 43);
  REQUIRE(a.size() == b.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    dmax = std::max(dmax, (a.point(i) - b.point(i)).norm());
  CHECK(dmax == 0.0);
  CHECK(a.size() == 2000);
  CHECK(c.point(0) != a.point(0));
  CHECK(a.total_weight() == doctest::Approx(M_PI).epsilon(0.1));
}

TEST_CASE("weighted lp reductions") {
  std::vector<double> v{1.0, -2.0, 3.0};
  std::vector<double> w{0.5, 0.25, 0.25};
  CHECK(lp_norm(v, w, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
  CHECK(lp_norm(v, w, 2.0) ==
        doctest::Approx(std::sqrt(0.5 + 0.25 * 4 + 0.25 * 9)));
  CHECK(lp_norm(v, w, 1.0) == doctest::Approx(0.5 + 0.5 + 0.75));
}

TEST_CASE("radius query matches brute force") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::MonteCarlo, 3000, 5);
  Rng rng(9);
  for (int s = 0; s < 20; ++s) {
    Vec p = disk.sample_inside(rng);
    double r = rng.uniform(0.05, 0.4);
    auto got = grid.within(p, r);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if ((grid.point(i) - p).norm() <= r) expect.push_back(i);
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
  }
}

TEST_CASE("metric ball contents") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::MonteCarlo, 20000, 12);
  Vec xi = make_vec({0.2, 0.1});
  BallSubset ball = metric_ball(xi, 0.2, disk, grid);
  CHECK(ball.measure > 0.0);
  CHECK(!ball.idx.empty());
  for (std::size_t i : ball.idx) CHECK(rho_omega(xi, grid.point(i), disk) <= 0.2);
  // completeness against brute force
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (rho_omega(xi, grid.point(i), disk) <= 0.2) ++count;
  CHECK(count == ball.idx.size());
  CHECK_THROWS_AS(metric_ball(make_vec({3.0, 0.0}), 0.2, disk, grid), DomainError);
}

TEST_CASE("balls shrink near the boundary") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::MonteCarlo, 40000, 8);
  BallSubset deep = metric_ball(make_vec({0.0, 0.0}), 0.1, disk, grid);
  BallSubset shallow = metric_ball(make_vec({0.985, 0.0}), 0.1, disk, grid);
  CHECK(shallow.measure < deep.measure);
}
