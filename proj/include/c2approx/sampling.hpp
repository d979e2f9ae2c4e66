#pragma once

#include <string>
#include <vector>

#include "c2approx/common.hpp"
#include "c2approx/geometry.hpp"

namespace c2approx {

enum class GridMode { Tensor, BoundaryLayered, MonteCarlo };

GridMode grid_mode_from_string(const std::string& s);

/// Quadrature grid over a domain: points, weights (summing to ~|Omega|),
/// cached boundary distances, and a uniform-bucket spatial index for radius
/// queries.
class SampleGrid {
 public:
  SampleGrid(const CompositeDomain& dom, std::vector<Vec> points,
             std::vector<double> weights);

  const CompositeDomain& domain() const { return *dom_; }
  std::size_t size() const { return points_.size(); }
  const Vec& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double boundary_distance(std::size_t i) const { return bdist_[i]; }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  double total_weight() const;

  /// Indices of all grid points within euclidean distance r of p (superset
  /// candidates filtered exactly).
  std::vector<std::size_t> within(const Vec& p, double r) const;

 private:
  const CompositeDomain* dom_;
  std::vector<Vec> points_;
  std::vector<double> weights_;
  std::vector<double> bdist_;
  // bucket index
  Vec blo_;
  double bucket_ = 0.0;
  std::vector<int> bdims_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t bucket_of(const Vec& p) const;
};

/// resolution semantics: Tensor ~ points per axis; BoundaryLayered ~ points
/// per chart axis and depth layers per chart; MonteCarlo ~ total points.
SampleGrid build_grid(const CompositeDomain& dom, GridMode mode, int resolution,
                      std::uint64_t seed = 1234);

/// Weighted l^p reduction of values on a grid; p = infinity -> max |v|.
double lp_norm(const std::vector<double>& values, const std::vector<double>& weights,
               double p);

struct BallSubset {
  std::vector<std::size_t> idx;
  double measure = 0.0;  // sum of quadrature weights
};

/// Grid portion of the metric ball U(xi, t) in the boundary metric.
/// Throws DomainError when xi is outside or the ball captures no grid point.
BallSubset metric_ball(const Vec& xi, double t, const CompositeDomain& dom,
                       const SampleGrid& grid);

}  // namespace c2approx
