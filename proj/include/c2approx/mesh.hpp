#pragma once

#include <memory>

#include "c2approx/common.hpp"
#include "c2approx/geometry.hpp"

namespace c2approx {

struct CellIndex {
  std::vector<int> i;  // base cell per horizontal dimension, 0..n-1
  int j = 0;           // depth layer, 0..n-1
};

/// Tangent vector of the graph at x along horizontal axis j (chart
/// coordinates): e_j + d_j g(x) e_{d+1}; optionally normalized.
Vec tangent_vector(const Chart& chart, const Vec& x, int j, bool normalized = false);

/// Membership predicate (world coordinates) for the chart body points at
/// least A0*t^2 away from the graph surface.
std::function<bool(const Vec&)> subgraph_set(const Chart& chart, double t,
                                             double A0 = 4.0);

/// Anisotropic partition of a chart body into n^d x n cells: uniform knots
/// in the base, Chebyshev-spaced depth layers with alpha_n = 1 exactly.
class CellPartition {
 public:
  struct Slab {
    // base box (chart x-coordinates) between two planes parallel to the
    // tangent plane H at x_star: c_lo <= y - H(x) <= c_hi
    Box base;
    Vec x_star;
    double g_star = 0.0;
    Vec grad_star;
    double c_lo = 0.0, c_hi = 0.0;
    bool contains_chart(const Vec& chart_pt) const;
  };

  CellPartition(std::shared_ptr<const Chart> chart, int n, int ell1, int m0,
                int m1, double A0);

  const Chart& chart() const { return *chart_; }
  int n() const { return n_; }
  int ell1() const { return ell1_; }
  int m0() const { return m0_; }
  int m1() const { return m1_; }
  double A0() const { return A0_; }
  double alpha() const { return alpha_; }
  int layer_count() const { return int(layers_.size()) - 1; }  // N = ell1*n

  double knot(int i) const;          // t_i = -b + 2 i b / n, 0 <= i <= n
  double layer(int j) const;         // alpha_j, 0 <= j <= N
  double alpha_star(int j) const;    // clamped: 0 below, 1 above n
  double M0() const { return M0_; }

  std::size_t cell_count() const;    // n^d * n
  CellIndex cell_at(std::size_t flat) const;
  std::size_t flat_index(const CellIndex& c) const;

  /// Locate the cell containing a world point (DomainError when the point is
  /// outside the partitioned part of the body).
  CellIndex locate(const Vec& world) const;

  Box base_cell(const std::vector<int>& i) const;       // Delta_i
  Box base_cell_ext(const std::vector<int>& i) const;   // Delta*_i (clamped)
  Vec x_star(const std::vector<int>& i) const;          // center of Delta*_i
  double tangent_plane(const std::vector<int>& i, const Vec& x) const;

  /// Lebesgue measure of cell I_{i,j}.
  double measure(const CellIndex& c) const;

  /// Extended cell membership test, chart coordinates: x in Delta*_i and
  /// alpha*_{j-m1} <= g(x)-y <= alpha*_{j+m1}.
  bool in_extended_cell(const CellIndex& c, const Vec& chart_pt) const;

  /// Inner and outer tangent-plane slabs around cell (i,j).  Throws
  /// ParameterError("empty slab ...") when the inner slab is empty.
  std::pair<Slab, Slab> slabs(const CellIndex& c) const;

  std::string to_csv() const;

 private:
  std::shared_ptr<const Chart> chart_;
  int n_, ell1_, m0_, m1_;
  double A0_;
  double alpha_;
  double M0_;
  std::vector<double> layers_;  // alpha_0 .. alpha_N
};

/// Builds the partition, deriving defaults: ell1 smallest admissible for the
/// chart's bounds, m0 = 2, m1 smallest admissible (and large enough that no
/// inner slab is empty).  Pass -1 to derive a parameter.
CellPartition build_partition(std::shared_ptr<const Chart> chart, int n,
                              int ell1 = -1, int m0 = 2, int m1 = -1,
                              double A0 = 4.0);

/// Smallest ell1 whose alpha = 1/(2 sin^2(pi/(2 ell1))) clears the chart's
/// size bound 5 d (max|g| + max|hess g|).
int minimal_ell1(const Chart& chart);

}  // namespace c2approx
