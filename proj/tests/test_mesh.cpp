#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "c2approx/mesh.hpp"

using namespace c2approx;

namespace {
std::shared_ptr<const Chart> canonical() {
  static auto chart = std::make_shared<Chart>(make_disk_chart());
  return chart;
}
}  // namespace

TEST_CASE("layer schedule") {
  auto part = build_partition(canonical(), 8);
  int n = part.n(), N = part.layer_count();
  CHECK(N == part.ell1() * n);
  CHECK(part.layer(0) == 0.0);
  CHECK(part.layer(n) == 1.0);  // pinned exactly
  for (int j = 0; j < N; ++j) CHECK(part.layer(j) < part.layer(j + 1));
  // quadratic spacing near the surface: alpha_j ~ alpha (pi j / (2N))^2 * 2
  double a1 = part.layer(1);
  double predicted = 2.0 * part.alpha() * std::pow(std::sin(M_PI / (2.0 * N)), 2);
  CHECK(a1 == doctest::Approx(predicted).epsilon(1e-12));
  // clamped star values
  CHECK(part.alpha_star(-3) == 0.0);
  CHECK(part.alpha_star(n + 5) == 1.0);
  CHECK(part.alpha_star(2) == part.layer(2));
}

TEST_CASE("knots are uniform") {
  auto part = build_partition(canonical(), 8);
  double b = part.chart().b();
  CHECK(part.knot(0) == doctest::Approx(-b));
  CHECK(part.knot(8) == doctest::Approx(b));
  for (int i = 0; i < 8; ++i)
    CHECK(part.knot(i + 1) - part.knot(i) == doctest::Approx(2 * b / 8).epsilon(1e-12));
}

TEST_CASE("flat index round trip and measures") {
  auto part = build_partition(canonical(), 8);
  double total = 0.0;
  for (std::size_t flat = 0; flat < part.cell_count(); ++flat) {
    CellIndex c = part.cell_at(flat);
    CHECK(part.flat_index(c) == flat);
    double m = part.measure(c);
    CHECK(m > 0.0);
    total += m;
  }
  // cells tile (-b,b)^d x depth [0, 1]
  double b = part.chart().b();
  CHECK(total == doctest::Approx(2 * b * 1.0).epsilon(1e-10));
}

TEST_CASE("locate agrees with the cell boxes") {
  auto part = build_partition(canonical(), 8);
  const Chart& chart = part.chart();
  Rng rng(17);
  double b = chart.b();
  for (int s = 0; s < 200; ++s) {
    Vec cp(2);
    cp[0] = rng.uniform(-b * 0.999, b * 0.999);
    double depth = rng.uniform(1e-9, 0.999);
    cp[1] = chart.g(cp.head(1)) - depth;
    CellIndex c = part.locate(chart.to_world(cp));
    Box base = part.base_cell(c.i);
    CHECK(cp[0] >= base.lo[0] - 1e-12);
    CHECK(cp[0] <= base.hi[0] + 1e-12);
    CHECK(depth >= part.layer(c.j) - 1e-12);
    CHECK(depth <= part.layer(c.j + 1) + 1e-12);
    CHECK(part.in_extended_cell(c, cp));
  }
  CHECK_THROWS_AS(part.locate(chart.to_world(make_vec({2 * b, -0.5}))), DomainError);
}

TEST_CASE("extended cells widen the base by m0 knots") {
  auto part = build_partition(canonical(), 8);
  std::vector<int> i{3};
  Box cell = part.base_cell(i), ext = part.base_cell_ext(i);
  double w = part.knot(1) - part.knot(0);
  CHECK(ext.lo[0] == doctest::Approx(cell.lo[0] - part.m0() * w));
  CHECK(ext.hi[0] == doctest::Approx(cell.hi[0] + part.m0() * w));
  // clamped at the chart base
  Box edge = part.base_cell_ext({0});
  CHECK(edge.lo[0] == doctest::Approx(-part.chart().b()));
}

TEST_CASE("slabs are nonempty and nested") {
  auto part = build_partition(canonical(), 8);
  for (std::size_t flat = 0; flat < part.cell_count(); ++flat) {
    CellIndex c = part.cell_at(flat);
    auto [inner, outer] = part.slabs(c);
    CHECK(inner.c_lo < inner.c_hi);
    CHECK(outer.c_lo < inner.c_lo);
    CHECK(inner.c_hi < outer.c_hi);
    // mid-slab point at x_star belongs to the inner slab
    Vec cp(2);
    cp[0] = inner.x_star[0];
    cp[1] = part.tangent_plane(c.i, inner.x_star.head(1)) +
            0.5 * (inner.c_lo + inner.c_hi);
    CHECK(inner.contains_chart(cp));
    CHECK(outer.contains_chart(cp));
  }
}

TEST_CASE("tangent vectors") {
  Chart chart = make_disk_chart();
  Vec x = make_vec({0.01});
  Vec t = tangent_vector(chart, x, 0);
  CHECK(t[0] == doctest::Approx(1.0));
  CHECK(t[1] == doctest::Approx(chart.grad_g(x)[0]));
  Vec tn = tangent_vector(chart, x, 0, true);
  CHECK(tn.norm() == doctest::Approx(1.0));
}

TEST_CASE("subgraph set excludes a boundary strip") {
  Chart chart = make_disk_chart();
  auto pred = subgraph_set(chart, 0.1, 4.0);
  Vec x = make_vec({0.0});
  // depth 0.2 >> 4 * 0.01 is kept, depth 0.001 is not
  CHECK(pred(chart.to_world(make_vec({0.0, chart.g(x) - 0.2}))));
  CHECK_FALSE(pred(chart.to_world(make_vec({0.0, chart.g(x) - 0.001}))));
}

TEST_CASE("parameter derivation and admissibility") {
  auto chart = canonical();
  int l1 = minimal_ell1(*chart);
  CHECK(l1 >= 2);
  double alpha = 1.0 / (2.0 * std::pow(std::sin(M_PI / (2.0 * l1)), 2));
  double bound = 5.0 * chart->base_dim() * (chart->max_abs_g() + chart->max_hess_norm());
  CHECK(alpha >= bound);
  // one step smaller must violate the bound
  if (l1 > 2) {
    double alpha_small = 1.0 / (2.0 * std::pow(std::sin(M_PI / (2.0 * (l1 - 1))), 2));
    CHECK(alpha_small < bound);
  }
  CHECK_THROWS_AS(CellPartition(chart, 8, 2, 2, 1, 4.0), ParameterError);
}

TEST_CASE("csv dump has one row per cell") {
  auto part = build_partition(canonical(), 4);
  std::istringstream in(part.to_csv());
  std::string line;
  std::getline(in, line);
  CHECK(line.find("flat") == 0);
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == part.cell_count());
}
