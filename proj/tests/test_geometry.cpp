#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "c2approx/geometry.hpp"

using namespace c2approx;

TEST_CASE("unit disk membership and boundary distance") {
  CompositeDomain disk = make_unit_disk();
  CHECK(disk.dim() == 2);
  CHECK(disk.inside(make_vec({0.0, 0.0})));
  CHECK(disk.inside(make_vec({0.7, 0.7})));
  CHECK_FALSE(disk.inside(make_vec({0.8, 0.7})));
  CHECK(disk.boundary_distance(make_vec({0.0, 0.0})) == doctest::Approx(1.0));
  CHECK(disk.boundary_distance(make_vec({0.5, 0.0})) == doctest::Approx(0.5));
}

TEST_CASE("boundary metric on the disk") {
  CompositeDomain disk = make_unit_disk();
  Vec a = make_vec({0.0, 0.0}), b = make_vec({0.5, 0.0});
  // ||a-b|| = 0.5, |sqrt(1) - sqrt(0.5)| = 1 - 0.7071...
  double expected = 0.5 + (1.0 - std::sqrt(0.5));
  CHECK(rho_omega(a, b, disk) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(rho_omega(a, b, disk) == doctest::Approx(rho_omega(b, a, disk)));
  CHECK(rho_omega(a, a, disk) == doctest::Approx(0.0));
  CHECK_THROWS_AS(rho_omega(a, make_vec({2.0, 0.0}), disk), DomainError);
}

TEST_CASE("ellipse graph extension is C2 at the junctions") {
  GraphFn g = ellipse_top_graph(1.0, 1.0, 0.6, 0.2);
  CHECK(g.value(make_vec({0.0})) == doctest::Approx(1.0));
  // exact arc inside |x| <= xc
  CHECK(g.value(make_vec({0.5})) == doctest::Approx(std::sqrt(1.0 - 0.25)));
  // continuity of value, first and second derivative across both junctions
  for (double x0 : {0.6, 0.8}) {
    double h = 1e-6;
    Vec xm = make_vec({x0 - h}), xp = make_vec({x0 + h});
    CHECK(g.value(xp) - g.value(xm) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(g.gradient(xp)[0] - g.gradient(xm)[0] == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(g.hessian(xp)(0, 0) - g.hessian(xm)(0, 0) ==
          doctest::Approx(0.0).epsilon(2e-4));
  }
  // derivative consistency against central differences
  for (double x0 : {0.1, 0.55, 0.7, 0.95, 1.3}) {
    double h = 1e-5;
    double num = (g.value(make_vec({x0 + h})) - g.value(make_vec({x0 - h}))) / (2 * h);
    CHECK(g.gradient(make_vec({x0}))[0] == doctest::Approx(num).epsilon(1e-6));
    double num2 = (g.gradient(make_vec({x0 + h}))[0] -
                   g.gradient(make_vec({x0 - h}))[0]) / (2 * h);
    CHECK(g.hessian(make_vec({x0}))(0, 0) == doctest::Approx(num2).epsilon(1e-5));
  }
  // even symmetry
  CHECK(g.value(make_vec({-0.7})) == doctest::Approx(g.value(make_vec({0.7}))));
  CHECK(g.gradient(make_vec({-0.7}))[0] ==
        doctest::Approx(-g.gradient(make_vec({0.7}))[0]));
}

TEST_CASE("chart coordinate round trip and membership") {
  CompositeDomain disk = make_unit_disk();
  REQUIRE(disk.charts().size() == 4);
  Rng rng(42);
  for (const auto& ac : disk.charts()) {
    const Chart& c = ac.chart;
    for (int s = 0; s < 50; ++s) {
      Vec cp(2);
      cp[0] = rng.uniform(-c.b(), c.b());
      cp[1] = rng.uniform(-1.0, 1.0);
      Vec w = c.to_world(cp);
      Vec back = c.to_chart(w);
      CHECK((back - cp).norm() < 1e-12);
    }
    // point on the graph has zero depth
    Vec x = make_vec({0.3 * c.b()});
    Vec cp = make_vec({x[0], c.g(x)});
    CHECK(c.depth(c.to_world(cp)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(c.contains(c.to_world(make_vec({x[0], c.g(x) + 0.01}))));
  }
}

TEST_CASE("chart parameter admissibility is enforced") {
  GraphFn flat;
  flat.value = [](const Vec&) { return 0.0; };
  flat.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  flat.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
  CHECK_NOTHROW(Chart(2, 1, Orientation::Up, Vec::Zero(2), 0.5, 1.0, flat));
  GraphFn steep;
  steep.value = [](const Vec& x) { return 3.0 * x[0]; };
  steep.gradient = [](const Vec& x) { return Vec(3.0 * Vec::Ones(x.size())); };
  steep.hessian = [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); };
  // L = 1 < 4 sqrt(d) * 3 + 1
  CHECK_THROWS_AS(Chart(2, 1, Orientation::Up, Vec::Zero(2), 0.5, 1.0, steep),
                  ParameterError);
}

TEST_CASE("chart metric") {
  Chart chart = make_disk_chart();
  Vec a(2), b(2);
  a << 0.0, chart.g(make_vec({0.0}));  // on the graph
  Vec aw = chart.to_world(a);
  b << 0.01, chart.g(make_vec({0.01})) - 0.09;  // depth 0.09
  Vec bw = chart.to_world(b);
  double expected = std::max(0.01, std::sqrt(0.09));
  CHECK(rho_hat(aw, bw, chart) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("cover verification on the disk") {
  CompositeDomain disk = make_unit_disk();
  CHECK_NOTHROW(disk.verify_cover(2000, 7));
}

TEST_CASE("segment membership probes") {
  CompositeDomain disk = make_unit_disk();
  CHECK(segment_in_domain(make_vec({-0.5, 0.0}), make_vec({0.5, 0.0}), disk));
  CHECK_FALSE(segment_in_domain(make_vec({-0.99, 0.0}), make_vec({0.0, 1.5}), disk));
}

TEST_CASE("directional weight phi") {
  CompositeDomain disk = make_unit_disk();
  Vec e = make_vec({1.0, 0.0});
  // through the center the chord is [-1, 1]: phi = sqrt(1 * 1)
  CHECK(phi_weight(e, make_vec({0.0, 0.0}), disk) == doctest::Approx(1.0).epsilon(1e-6));
  // at (0.6, 0): reaches 1.6 backward, 0.4 forward
  CHECK(phi_weight(e, make_vec({0.6, 0.0}), disk) ==
        doctest::Approx(std::sqrt(1.6 * 0.4)).epsilon(1e-6));
  // shrinks like sqrt(dist) near the boundary in the normal direction
  double p1 = phi_weight(e, make_vec({1.0 - 1e-2, 0.0}), disk);
  double p2 = phi_weight(e, make_vec({1.0 - 1e-4, 0.0}), disk);
  CHECK(p1 / p2 == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("essential boundary distance of a chart") {
  Chart chart = make_disk_chart();
  Vec x = make_vec({0.0});
  double depth = 0.05;
  Vec w = chart.to_world(make_vec({0.0, chart.g(x) - depth}));
  double d = chart.essential_boundary_distance(w);
  // the graph is nearly flat at the apex, so the distance is close to depth
  CHECK(d == doctest::Approx(depth).epsilon(0.05));
  CHECK(d <= depth + 1e-12);
}

TEST_CASE("domain JSON round trip") {
  CompositeDomain disk = make_unit_disk();
  CompositeDomain back = domain_from_json(disk.to_json());
  CHECK(back.dim() == disk.dim());
  CHECK(back.charts().size() == disk.charts().size());
  Rng rng(3);
  for (int s = 0; s < 100; ++s) {
    Vec p = rng.point_in_box(make_vec({-1.2, -1.2}), make_vec({1.2, 1.2}));
    CHECK(back.inside(p) == disk.inside(p));
  }
}

TEST_CASE("ellipse domain") {
  CompositeDomain ell = make_ellipse(2.0, 1.0);
  CHECK(ell.inside(make_vec({1.9, 0.0})));
  CHECK_FALSE(ell.inside(make_vec({0.0, 1.1})));
  CHECK(ell.boundary_distance(make_vec({0.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_NOTHROW(ell.verify_cover(1000, 9));
}

TEST_CASE("graph domain") {
  GraphFn g = ellipse_top_graph(1.0, 0.2, 0.3, 0.2);
  CompositeDomain dom = make_graph_domain(g, 1, 0.5, 9.0);
  Vec inside = make_vec({0.0, g.value(make_vec({0.0})) - 0.05});
  CHECK(dom.inside(inside));
  CHECK(dom.boundary_distance(inside) > 0.0);
  CHECK_FALSE(dom.inside(make_vec({0.0, g.value(make_vec({0.0})) + 0.05})));
}
