#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "c2approx/common.hpp"

namespace c2approx {

using json = nlohmann::json;

// Scale factor for the "inner" portion of a chart used by cover checks and
// by the gluing construction.
inline constexpr double kLambda0 = 0.75;

enum class Orientation { Up, Down };

/// A C^2 graph function R^d -> R together with its first two derivatives.
struct GraphFn {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// Local coordinate patch: the domain boundary is the graph of g over the
/// base cube (-b,b)^d, seen along a coordinate axis, and the body of the
/// patch extends to depth L*b below the graph.
///
/// Chart coordinates are (x_1..x_d, y) with y the graph axis; to_world maps
/// them into ambient coordinates (axis permutation, optional flip, offset).
class Chart {
 public:
  Chart(int ambient_dim, int axis, Orientation orient, Vec offset, double b,
        double L, GraphFn g);

  int ambient_dim() const { return dim_; }
  int base_dim() const { return dim_ - 1; }
  int axis() const { return axis_; }
  Orientation orientation() const { return orient_; }
  const Vec& offset() const { return offset_; }
  double b() const { return b_; }
  double L() const { return L_; }

  double g(const Vec& x) const { return g_.value(x); }
  Vec grad_g(const Vec& x) const { return g_.gradient(x); }
  Mat hess_g(const Vec& x) const { return g_.hessian(x); }

  // sampled bounds used by parameter checks downstream
  double max_grad_norm() const { return max_grad_; }   // over [-2b,2b]^d
  double max_hess_norm() const { return max_hess_; }   // over [-4b,4b]^d
  double max_abs_g() const { return max_abs_g_; }      // over [-4b,4b]^d

  Vec to_chart(const Vec& world) const;
  Vec to_world(const Vec& chart) const;

  /// Signed depth g(x) - y in chart coordinates; negative above the graph.
  double depth(const Vec& world) const;

  /// Membership in the body scaled by lambda: |x_i| < lambda*b and
  /// g(x) - lambda*L*b < y <= g(x).
  bool contains(const Vec& world, double lambda = 1.0) const;

  /// Distance to the graph surface {(u, g(u)) : u in (-b,b)^d}.
  double essential_boundary_distance(const Vec& world) const;

  json to_json() const;
  std::string name;  // optional label used in serialization

 private:
  int dim_;
  int axis_;
  Orientation orient_;
  Vec offset_;
  double b_;
  double L_;
  GraphFn g_;
  double max_grad_ = 0.0, max_hess_ = 0.0, max_abs_g_ = 0.0;
};

struct Box {
  Vec lo, hi;
  bool contains(const Vec& p) const {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  Vec center() const { return 0.5 * (lo + hi); }
  Box scaled(double s) const {
    Vec c = center();
    return Box{c + s * (lo - c), c + s * (hi - c)};
  }
  json to_json() const;
};

/// A bounded domain described by boundary charts (each with a containing box
/// marking where it is attached to the boundary) plus interior boxes, with a
/// membership predicate and a distance-to-boundary function.
class CompositeDomain {
 public:
  struct AttachedChart {
    Chart chart;
    Box q;  // containing box in ambient coordinates
  };

  CompositeDomain(std::string name, int dim,
                  std::function<bool(const Vec&)> inside,
                  std::function<double(const Vec&)> boundary_distance,
                  Box bounding_box, double cover_margin);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  bool inside(const Vec& p) const { return inside_(p); }
  double boundary_distance(const Vec& p) const { return bdist_(p); }
  const Box& bounding_box() const { return bbox_; }
  double diameter() const { return (bbox_.hi - bbox_.lo).norm(); }
  double cover_margin() const { return cover_margin_; }

  void add_chart(Chart c, Box q) { charts_.push_back({std::move(c), std::move(q)}); }
  void add_interior_box(Box b);

  const std::vector<AttachedChart>& charts() const { return charts_; }
  const std::vector<Box>& interior_boxes() const { return interior_boxes_; }

  /// True when p is in the inner (lambda0) portion of some chart's body.
  bool in_some_chart(const Vec& p, double lambda = 1.0) const;

  /// Checks that points within cover_margin of the boundary fall in the
  /// lambda0 portion of some chart, and random inside points are covered by
  /// chart bodies or interior boxes.  Throws DomainError on failure.
  void verify_cover(int n_samples, std::uint64_t seed) const;

  /// Draw a uniform random point of the domain (rejection from the box).
  Vec sample_inside(Rng& rng) const;

  json to_json() const;

 private:
  std::string name_;
  int dim_;
  std::function<bool(const Vec&)> inside_;
  std::function<double(const Vec&)> bdist_;
  Box bbox_;
  double cover_margin_;
  std::vector<AttachedChart> charts_;
  std::vector<Box> interior_boxes_;
};

/// Boundary metric: ||xi - eta|| + |sqrt(dist(xi)) - sqrt(dist(eta))|.
double rho_omega(const Vec& xi, const Vec& eta, const CompositeDomain& dom);

/// Chart metric: max(||xi_x - eta_x||, |sqrt(depth xi) - sqrt(depth eta)|),
/// arguments in ambient coordinates, both below the chart graph.
double rho_hat(const Vec& xi, const Vec& eta, const Chart& chart);

/// Segment test by k_samples equally spaced membership probes.
bool segment_in_domain(const Vec& a, const Vec& b, const CompositeDomain& dom,
                       int k_samples = 65);

/// Directional weight: sqrt(l1*l2) with l1, l2 the maximal backward/forward
/// reach of the segment through xi in direction e.  Bisection to tol.
double phi_weight(const Vec& e, const Vec& xi, const CompositeDomain& dom,
                  double tol = 1e-10);

CompositeDomain make_unit_disk();
CompositeDomain make_ellipse(double a, double b);

/// Domain whose upper boundary is the graph of g over (-b,b)^d and whose
/// remaining boundary is the box walls at depth L*b.
CompositeDomain make_graph_domain(const GraphFn& g, int base_dim, double b,
                                  double L);

/// Canonical small boundary chart at the top of the unit disk; base size
/// chosen so the quantitative mesh parameters are in their intended regime.
Chart make_disk_chart(double b = 0.035);

/// Flattened ellipse-arc graph: exact arc B*sqrt(1-(x/A)^2) for |x| <= xc,
/// curvature faded to zero over [xc, xc+w], linear beyond.  C^2 everywhere.
GraphFn ellipse_top_graph(double A, double B, double xc, double w);

CompositeDomain domain_from_json(const json& j);

}  // namespace c2approx
