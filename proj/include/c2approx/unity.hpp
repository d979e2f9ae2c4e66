#pragma once

#include <memory>

#include "c2approx/mesh.hpp"
#include "c2approx/poly.hpp"
#include "c2approx/sampling.hpp"

namespace c2approx {

/// Family of n nonnegative polynomials of degree <= 2n on [-1,1] summing to
/// one exactly (coefficient-level), member j localized at the angular
/// interval [j pi/n, (j+1) pi/n] with decay order ell.  Built by integrating
/// a normalized even Jackson-type kernel over the interval.
struct ChebUnityFamily {
  int n = 0;            // member count
  int ell = 0;          // decay order
  int kernel_power = 0; // kernel exponent k, decay t^{-2k}
  int kernel_size = 0;  // kernel frequency parameter
  std::vector<Polynomial1D> members;  // on [-1,1]

  double node(int j) const;  // cos((j+1/2) pi / n), localization center
  json to_json() const;
};

ChebUnityFamily chebyshev_unity_1d(int n, int ell);

/// Tensor partition of unity over a box: per dimension, members of a
/// size-2n angular family are regrouped onto the n uniform cells.
class BoxUnityFamily {
 public:
  BoxUnityFamily() = default;
  BoxUnityFamily(const Box& box, int n, int ell);

  const Box& box() const { return box_; }
  int n() const { return n_; }
  int dim() const { return int(box_.lo.size()); }
  std::size_t count() const;  // n^dim

  double eval(std::size_t flat, const Vec& p) const;
  double eval_dim(int k, int cell, double x) const;
  Vec center(std::size_t flat) const;
  int degree_bound() const { return degree_; }

  json to_json() const;

 private:
  Box box_;
  int n_ = 0, ell_ = 0, degree_ = 0;
  std::vector<std::vector<Polynomial1D>> per_dim_;  // [dim][cell]
};

/// Layered partition of unity attached to a chart cell partition:
/// q*_{i,j}(x,y) = u_j(f_i(x) - y) v_i(x) with u the angular family on
/// [0, 2 alpha] and f_i a convex paraboloid above the graph; the last kept
/// layer absorbs the tail so that n^d * n members sum to one exactly.
class SpecialUnity {
 public:
  SpecialUnity(std::shared_ptr<const CellPartition> part, int ell);

  const CellPartition& partition() const { return *part_; }
  int n() const { return part_->n(); }
  int N() const { return part_->layer_count(); }
  int ell() const { return ell_; }
  double alpha() const { return part_->alpha(); }
  double M() const { return M_; }
  std::size_t count() const { return part_->cell_count(); }

  /// f_i(x) - value of the shifted paraboloid for base cell i.
  double f_cell(const std::vector<int>& i, const Vec& x) const;

  /// q_{i,j} at a chart point (tail-absorbed for j = n-1).
  double eval_q(const CellIndex& c, const Vec& chart_pt) const;
  /// q*_{i,j} for any layer j < N.
  double eval_qstar(const std::vector<int>& i, int j, const Vec& chart_pt) const;
  /// all kept members at once, indexed by CellPartition::flat_index.
  std::vector<double> eval_all(const Vec& chart_pt) const;

  Vec center(const CellIndex& c) const;  // representative point, world coords
  int degree_bound() const;

  const ChebUnityFamily& u_family() const { return u_; }
  const BoxUnityFamily& v_family() const { return v_; }

  json to_json() const;

 private:
  std::shared_ptr<const CellPartition> part_;
  int ell_;
  double M_;
  ChebUnityFamily u_;                 // on [0, 2 alpha] via t = alpha(1 - cos)
  std::vector<Polynomial1D> u_on_t_;  // members remapped to [0, 2 alpha]
  BoxUnityFamily v_;
  std::vector<Vec> cell_centers_;     // x_i per base cell (flattened)
  double u_of_t(int j, double t) const;
};

/// Product of per-axis fast-decreasing gate polynomials: values in [0,1] on
/// the reference box, >= 1 - theta^n on mu*inner, <= theta^n outside inner.
class GatePoly {
 public:
  double operator()(const Vec& p) const;
  int degree_bound() const { return degree_; }
  json to_json() const;

 private:
  friend GatePoly fast_decreasing(const Box& inner, double mu, double theta,
                                  int n, const Box& reference);
  struct Axis {
    Polynomial1D step;  // smoothed indicator on the reference interval
    int k = 0;          // amplifier order (regularized incomplete beta)
  };
  std::vector<Axis> axes_;
  int degree_ = 0;
};

GatePoly fast_decreasing(const Box& inner, double mu, double theta, int n,
                         const Box& reference);

/// Globally glued partition of unity over a composite domain: chart families
/// and interior box families chained with fast-decreasing gates, centers
/// merged to 1/n separation in the boundary metric.
class GlobalUnity {
 public:
  GlobalUnity(const CompositeDomain& dom, int n, int ell,
              double theta = 0.5, double min_overlap = 0.02);

  std::size_t count() const { return members_.size(); }
  const Vec& center(std::size_t m) const { return members_[m].center; }
  double eval(std::size_t m, const Vec& world) const;
  /// all member values at a point (shared subexpressions, same results).
  std::vector<double> eval_all(const Vec& world) const;
  int degree_bound() const;
  int n() const { return n_; }

  json to_json() const;

 private:
  struct ChartSet {
    std::shared_ptr<const CellPartition> part;
    std::shared_ptr<SpecialUnity> family;
  };
  struct Piece {
    int set = 0;
    std::size_t member = 0;
  };
  struct Member {
    Vec center;
    std::vector<Piece> pieces;
  };
  const CompositeDomain* dom_;
  int n_, ell_;
  std::vector<ChartSet> chart_sets_;
  std::vector<BoxUnityFamily> box_sets_;  // after the chart sets in order
  std::vector<GatePoly> gates_;           // gate s applies to set s (s >= 1)
  std::vector<Member> members_;
  std::size_t set_count() const { return chart_sets_.size() + box_sets_.size(); }
  std::size_t set_size(std::size_t s) const;
  double raw_member(std::size_t s, std::size_t m, const Vec& world) const;
  double chain(std::size_t s, const std::vector<double>& gate_vals) const;
};

/// Blend two polynomial approximants with a gate: R*P1 + (1-R)*P2, expanded
/// in coefficients.
MultiPolynomial patch_approximants(const MultiPolynomial& p1,
                                   const MultiPolynomial& p2,
                                   const MultiPolynomial& gate);

}  // namespace c2approx
