#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "c2approx/geometry.hpp"
#include "c2approx/smoothness.hpp"

using namespace c2approx;

namespace {
const Region kEverywhere = [](const Vec&) { return true; };
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("r-th differences annihilate degree r-1") {
  Rng rng(1);
  for (int r : {1, 2, 3}) {
    ScalarField f = [r](const Vec& v) {
      double s = 0.0;
      for (int k = 0; k < r; ++k) s += std::pow(v[0] + 0.5 * v[1], k);
      return s;
    };
    for (int s = 0; s < 10; ++s) {
      Vec eta = rng.point_in_box(make_vec({-1.0, -1.0}), make_vec({1.0, 1.0}));
      Vec h = make_vec({rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)});
      CHECK(finite_difference(f, h, eta, r, kEverywhere) ==
            doctest::Approx(0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("r-th difference of x^r is r! h^r") {
  for (int r : {1, 2, 3, 4}) {
    ScalarField f = [r](const Vec& v) { return std::pow(v[0], r); };
    Vec h = make_vec({0.05, 0.0});
    Vec eta = make_vec({-0.3, 0.2});
    double expect = std::tgamma(r + 1.0) * std::pow(0.05, r);
    CHECK(finite_difference(f, h, eta, r, kEverywhere) ==
          doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("restricted differences vanish when the segment leaves the region") {
  ScalarField f = [](const Vec& v) { return v[0] * v[0]; };
  Region half = [](const Vec& v) { return v[0] <= 0.0; };
  Vec h = make_vec({0.2, 0.0});
  CHECK(finite_difference(f, h, make_vec({-1.0, 0.0}), 2, half) != 0.0);
  // segment [-0.1, 0.3] pokes out
  CHECK(finite_difference(f, h, make_vec({-0.1, 0.0}), 2, half) == 0.0);
}

TEST_CASE("symmetric differences recenter the base") {
  ScalarField f = [](const Vec& v) { return std::sin(3.0 * v[0]); };
  Vec h = make_vec({0.04, 0.0});
  Vec eta = make_vec({0.1, 0.0});
  Vec shifted = make_vec({0.1 - 0.04, 0.0});
  CHECK(finite_difference(f, h, eta, 2, kEverywhere, true) ==
        doctest::Approx(finite_difference(f, h, shifted, 2, kEverywhere))
            .epsilon(1e-12));
}

TEST_CASE("overlapping-difference identity") {
  Rng rng(3);
  ScalarField f = [](const Vec& v) {
    return std::exp(0.5 * v[0]) * std::cos(v[1]) + v[0] * v[0] * v[1];
  };
  for (int r : {1, 2, 3, 4}) {
    for (int s = 0; s < 25; ++s) {
      Vec xi = rng.point_in_box(make_vec({-1.0, -1.0}), make_vec({1.0, 1.0}));
      Vec eta = rng.point_in_box(make_vec({-1.0, -1.0}), make_vec({1.0, 1.0}));
      Vec h = make_vec({rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)});
      auto [lhs, rhs] = difference_identity(f, xi, eta, h, r);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("h net is geometric and ends at t") {
  ModulusOptions opts;
  opts.h_per_octave = 4;
  opts.octaves = 3;
  std::vector<double> net = h_net(0.5, opts);
  REQUIRE(!net.empty());
  CHECK(net.back() == doctest::Approx(0.5));
  for (std::size_t k = 1; k < net.size(); ++k) CHECK(net[k] > net[k - 1]);
  CHECK(net.front() == doctest::Approx(0.5 * std::pow(2.0, -3.0)).epsilon(1e-12));
  double ratio = net[1] / net[0];
  CHECK(ratio == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("first-order modulus of a linear field is about t") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::Tensor, 48, 1);
  ScalarField f = [](const Vec& v) { return 2.0 * v[0]; };
  ModulusOptions opts;
  opts.h_per_octave = 4;
  opts.octaves = 3;
  std::vector<Vec> dirs{make_vec({1.0, 0.0})};
  Region inside = [&](const Vec& v) { return disk.inside(v); };
  double w = directional_modulus(f, dirs, 0.1, 1, kInf, grid, inside, opts);
  CHECK(w == doctest::Approx(0.2).epsilon(1e-6));
  // second differences of a linear field vanish
  CHECK(directional_modulus(f, dirs, 0.1, 2, kInf, grid, inside, opts) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("dt modulus weights shrink near the boundary") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::Tensor, 40, 1);
  ScalarField f = [](const Vec& v) { return v[0] * v[0] + v[1]; };
  ModulusOptions opts;
  opts.h_per_octave = 4;
  opts.octaves = 3;
  double w1 = dt_modulus(f, 0.1, 1, kInf, grid, opts);
  double w2 = dt_modulus(f, 0.2, 1, kInf, grid, opts);
  CHECK(w1 > 0.0);
  CHECK(w2 >= w1);          // monotone in t
  CHECK(w2 <= 2.5 * w1 + 1e-12);  // no faster than ~linear growth here
}

TEST_CASE("full modulus of a constant is zero") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::BoundaryLayered, 16, 1);
  ModulusOptions opts;
  opts.h_per_octave = 2;
  opts.octaves = 2;
  opts.u_samples = 4;
  ScalarField f = [](const Vec&) { return 3.0; };
  ModulusReport rep = full_modulus(f, disk, 0.25, 2, kInf, grid, opts);
  CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(!rep.parts.empty());
  // report serializes
  json j = rep.to_json();
  CHECK(j.contains("value"));
}

TEST_CASE("full modulus scales linearly") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::BoundaryLayered, 16, 1);
  ModulusOptions opts;
  opts.h_per_octave = 2;
  opts.octaves = 2;
  opts.u_samples = 4;
  ScalarField f = [](const Vec& v) { return std::sin(v[0] + 2.0 * v[1]); };
  double w = full_modulus(f, disk, 0.2, 1, kInf, grid, opts).value;
  ScalarField g = [&f](const Vec& v) { return 4.0 * f(v); };
  double w4 = full_modulus(g, disk, 0.2, 1, kInf, grid, opts).value;
  CHECK(w4 == doctest::Approx(4.0 * w).epsilon(1e-10));
}

TEST_CASE("averaged ball difference and tau") {
  CompositeDomain disk = make_unit_disk();
  SampleGrid grid = build_grid(disk, GridMode::MonteCarlo, 20000, 2);
  ScalarField f = [](const Vec& v) { return v[0]; };
  double w = ivanov_w(f, make_vec({0.0, 0.0}), 0.3, 1, 1.0, disk, grid);
  CHECK(w > 0.0);
  CHECK(w < 0.7);  // differences bounded by the ball diameter times |f'|
  ModulusOptions opts;
  double tau = ivanov_tau(f, 0.3, 1, kInf, 1.0, disk, grid, opts);
  CHECK(tau >= w - 1e-12);
  CHECK(tau > 0.0);
  // constants give zero
  ScalarField c = [](const Vec&) { return 1.0; };
  CHECK(ivanov_tau(c, 0.3, 1, kInf, 1.0, disk, grid, opts) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cellwise modulus vanishes for degree r-1") {
  auto chart = std::make_shared<Chart>(make_disk_chart());
  auto part = build_partition(chart, 4);
  ModulusOptions opts;
  opts.h_per_octave = 2;
  opts.octaves = 2;
  opts.u_samples = 4;
  ScalarField lin = [](const Vec& v) { return 1.0 + v[0] - 2.0 * v[1]; };
  LocalModulusReport rep = local_modulus(lin, part, 2, kInf, opts);
  CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.cell_values.size() == part.cell_count());
  ScalarField quad = [](const Vec& v) { return v[0] * v[0] + v[1] * v[1]; };
  CHECK(local_modulus(quad, part, 2, kInf, opts).value > 0.0);
}

TEST_CASE("1-D averaged modulus reference values") {
  // f = x on [0,1], r = 1, p = 1, t = 1/4:
  // t^{-1} int_{t/4}^{t} h (1 - h) dh = 0.096679...
  auto id = [](double x) { return x; };
  CHECK(averaged_modulus_1d(id, 0.0, 1.0, 0.25, 1, 1.0) ==
        doctest::Approx(0.0966797).epsilon(1e-3));
  // f = x^2, r = 1, p = inf: sup_h h(2 - h) = t(2 - t) = 0.4375
  auto sq = [](double x) { return x * x; };
  CHECK(averaged_modulus_1d(sq, 0.0, 1.0, 0.25, 1, kInf) ==
        doctest::Approx(0.4375).epsilon(1e-2));
  // linear functions have zero second modulus
  CHECK(averaged_modulus_1d(id, 0.0, 1.0, 0.25, 2, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}
