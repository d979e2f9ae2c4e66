#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "c2approx/unity.hpp"

using namespace c2approx;

TEST_CASE("1-D angular family sums to one and is nonnegative") {
  for (int n : {4, 8}) {
    ChebUnityFamily fam = chebyshev_unity_1d(n, 3);
    REQUIRE(int(fam.members.size()) == n);
    Rng rng(21);
    for (int s = 0; s < 100; ++s) {
      double x = rng.uniform(-1.0, 1.0);
      double sum = 0.0;
      for (const auto& m : fam.members) {
        double v = m(x);
        CHECK(v >= -1e-13);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("1-D members localize away from their node") {
  ChebUnityFamily fam = chebyshev_unity_1d(8, 3);
  // member 0 lives near cos(pi/16); far across the interval it is tiny
  double near = fam.members[0](fam.node(0));
  double far = fam.members[0](fam.node(7));
  CHECK(near > 0.5);
  CHECK(far < 1e-4);
  CHECK(far < near * 1e-3);
}

TEST_CASE("box family sums to one on the box") {
  Box bx{make_vec({-0.5, 0.0}), make_vec({1.5, 1.0})};
  BoxUnityFamily fam(bx, 4, 3);
  CHECK(fam.count() == 16);
  Rng rng(31);
  for (int s = 0; s < 60; ++s) {
    Vec p = rng.point_in_box(bx.lo, bx.hi);
    double sum = 0.0;
    for (std::size_t m = 0; m < fam.count(); ++m) {
      double v = fam.eval(m, p);
      CHECK(v >= -1e-12);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-11));
    Vec c = fam.center(s % fam.count());
    for (int k = 0; k < 2; ++k) {
      CHECK(c[k] >= bx.lo[k]);
      CHECK(c[k] <= bx.hi[k]);
    }
  }
}

TEST_CASE("special unity sums to one over the chart body") {
  auto chart = std::make_shared<Chart>(make_disk_chart());
  auto part = std::make_shared<CellPartition>(build_partition(chart, 6));
  SpecialUnity su(part, 3);
  CHECK(su.count() == part->cell_count());
  Rng rng(41);
  double b = chart->b();
  for (int s = 0; s < 40; ++s) {
    Vec cp(2);
    cp[0] = rng.uniform(-b, b);
    cp[1] = chart->g(cp.head(1)) - rng.uniform(1e-6, 0.999);
    std::vector<double> vals = su.eval_all(cp);
    REQUIRE(vals.size() == su.count());
    double sum = 0.0;
    for (double v : vals) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // eval_all agrees with per-member evaluation
    CellIndex c = part->cell_at(s % part->cell_count());
    CHECK(vals[part->flat_index(c)] ==
          doctest::Approx(su.eval_q(c, cp)).epsilon(1e-11));
  }
}

TEST_CASE("special unity member concentrates near its own cell") {
  auto chart = std::make_shared<Chart>(make_disk_chart());
  auto part = std::make_shared<CellPartition>(build_partition(chart, 6));
  SpecialUnity su(part, 3);
  // the member of a mid cell is small at a chart point several cells away
  CellIndex c = part->cell_at(part->cell_count() / 2);
  Vec cp(2);
  cp[0] = part->knot(0) + 1e-4;            // far edge of the base
  cp[1] = chart->g(cp.head(1)) - 0.95;     // near the bottom
  CellIndex at = part->locate(chart->to_world(cp));
  if (std::abs(at.i[0] - c.i[0]) > 2 || std::abs(at.j - c.j) > 2)
    CHECK(su.eval_q(c, cp) < 1e-3);
}

TEST_CASE("gate polynomial bounds") {
  Box inner{make_vec({-0.5, -0.5}), make_vec({0.5, 0.5})};
  Box ref{make_vec({-2.0, -2.0}), make_vec({2.0, 2.0})};
  int n = 8;
  double theta = 0.5, mu = 0.5;
  GatePoly gate = fast_decreasing(inner, mu, theta, n, ref);
  double tail = std::pow(theta, n);
  Rng rng(51);
  for (int s = 0; s < 400; ++s) {
    Vec p = rng.point_in_box(ref.lo, ref.hi);
    double v = gate(p);
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
    bool in_core = std::abs(p[0]) <= mu * 0.5 && std::abs(p[1]) <= mu * 0.5;
    bool in_inner = std::abs(p[0]) <= 0.5 && std::abs(p[1]) <= 0.5;
    if (in_core) CHECK(v >= 1.0 - 2 * tail);
    if (!in_inner) CHECK(v <= 2 * tail);
  }
  CHECK(gate.degree_bound() > 0);
}

TEST_CASE("global unity sums to one on the domain") {
  CompositeDomain disk = make_unit_disk();
  GlobalUnity gu(disk, 4, 3);
  CHECK(gu.count() > 0);
  CHECK(gu.degree_bound() > 0);
  Rng rng(61);
  for (int s = 0; s < 30; ++s) {
    Vec p = disk.sample_inside(rng);
    std::vector<double> vals = gu.eval_all(p);
    REQUIRE(vals.size() == gu.count());
    double sum = 0.0;
    for (double v : vals) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-7));
    // spot check against single-member evaluation
    std::size_t m = s % gu.count();
    CHECK(vals[m] == doctest::Approx(gu.eval(m, p)).epsilon(1e-9));
  }
  // centers separated and inside
  for (std::size_t m = 0; m < gu.count(); ++m) CHECK(disk.inside(gu.center(m)));
}

TEST_CASE("patching two approximants with a gate") {
  Box bx{make_vec({-1.0, -1.0}), make_vec({1.0, 1.0})};
  MultiPolynomial p1 = MultiPolynomial::random(bx, 3, 1);
  MultiPolynomial p2 = MultiPolynomial::random(bx, 3, 2);
  MultiPolynomial gate(bx, 1);
  gate.coef() = {0.5, 0.25, 0.0};  // 0.5 + 0.25 T1(x)
  MultiPolynomial mixed = patch_approximants(p1, p2, gate);
  Rng rng(71);
  for (int s = 0; s < 30; ++s) {
    Vec q = rng.point_in_box(bx.lo, bx.hi);
    double expect = gate(q) * p1(q) + (1.0 - gate(q)) * p2(q);
    CHECK(mixed(q) == doctest::Approx(expect).epsilon(1e-11));
  }
  CHECK(mixed.degree() <= 4);
}
