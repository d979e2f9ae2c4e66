#include "c2approx/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace c2approx {

GridMode grid_mode_from_string(const std::string& s) {
  if (s == "tensor") return GridMode::Tensor;
  if (s == "boundary-layered") return GridMode::BoundaryLayered;
  if (s == "monte-carlo") return GridMode::MonteCarlo;
  throw ParameterError("grid mode must be tensor|boundary-layered|monte-carlo");
}

SampleGrid::SampleGrid(const CompositeDomain& dom, std::vector<Vec> points,
                       std::vector<double> weights)
    : dom_(&dom), points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size())
    throw ParameterError("SampleGrid: points/weights size mismatch");
  bdist_.resize(points_.size());
  parallel_for(points_.size(), 0,
               [&](std::size_t i) { bdist_[i] = dom_->boundary_distance(points_[i]); });
  // bucket index sized so an average bucket holds a handful of points
  const Box& bb = dom_->bounding_box();
  blo_ = bb.lo;
  const int D = dom_->dim();
  double vol = 1.0;
  for (int k = 0; k < D; ++k) vol *= bb.hi[k] - bb.lo[k];
  double target = std::pow(vol / std::max<std::size_t>(1, points_.size()) * 4.0, 1.0 / D);
  bucket_ = std::max(target, 1e-6);
  bdims_.resize(D);
  std::size_t total = 1;
  for (int k = 0; k < D; ++k) {
    bdims_[k] = std::max(1, int(std::ceil((bb.hi[k] - bb.lo[k]) / bucket_)));
    total *= bdims_[k];
  }
  buckets_.resize(total);
  for (std::size_t i = 0; i < points_.size(); ++i)
    buckets_[bucket_of(points_[i])].push_back(i);
}

std::size_t SampleGrid::bucket_of(const Vec& p) const {
  std::size_t f = 0;
  for (int k = dom_->dim() - 1; k >= 0; --k) {
    int c = std::clamp(int((p[k] - blo_[k]) / bucket_), 0, bdims_[k] - 1);
    f = f * bdims_[k] + c;
  }
  return f;
}

double SampleGrid::total_weight() const {
  KahanSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

std::vector<std::size_t> SampleGrid::within(const Vec& p, double r) const {
  const int D = dom_->dim();
  std::vector<int> lo(D), hi(D), cur(D);
  for (int k = 0; k < D; ++k) {
    lo[k] = std::clamp(int((p[k] - r - blo_[k]) / bucket_), 0, bdims_[k] - 1);
    hi[k] = std::clamp(int((p[k] + r - blo_[k]) / bucket_), 0, bdims_[k] - 1);
    cur[k] = lo[k];
  }
  std::vector<std::size_t> out;
  const double r2 = r * r;
  while (true) {
    std::size_t f = 0;
    for (int k = D - 1; k >= 0; --k) f = f * bdims_[k] + cur[k];
    for (std::size_t i : buckets_[f])
      if ((points_[i] - p).squaredNorm() <= r2) out.push_back(i);
    int k = 0;
    while (k < D && ++cur[k] > hi[k]) {
      cur[k] = lo[k];
      ++k;
    }
    if (k == D) break;
  }
  return out;
}

namespace {

void tensor_points(const CompositeDomain& dom, int res, std::vector<Vec>& pts,
                   std::vector<double>& wts,
                   const std::function<bool(const Vec&)>& accept) {
  const Box& bb = dom.bounding_box();
  const int D = dom.dim();
  double cellw = 1.0;
  for (int k = 0; k < D; ++k) cellw *= (bb.hi[k] - bb.lo[k]) / res;
  std::vector<int> idx(D, 0);
  Vec p(D);
  while (true) {
    for (int k = 0; k < D; ++k)
      p[k] = bb.lo[k] + (bb.hi[k] - bb.lo[k]) * (idx[k] + 0.5) / res;
    if (dom.inside(p) && accept(p)) {
      pts.push_back(p);
      wts.push_back(cellw);
    }
    int k = 0;
    while (k < D && ++idx[k] == res) idx[k++] = 0;
    if (k == D) break;
  }
}

}  // namespace

SampleGrid build_grid(const CompositeDomain& dom, GridMode mode, int resolution,
                      std::uint64_t seed) {
  if (resolution < 2) throw ParameterError("build_grid: resolution must be >= 2");
  std::vector<Vec> pts;
  std::vector<double> wts;
  switch (mode) {
    case GridMode::Tensor: {
      tensor_points(dom, resolution, pts, wts, [](const Vec&) { return true; });
      break;
    }
    case GridMode::BoundaryLayered: {
      // chart-aligned layers, quadratically refined toward the graph
      const auto& charts = dom.charts();
      for (std::size_t ci = 0; ci < charts.size(); ++ci) {
        const Chart& ch = charts[ci].chart;
        const int d = ch.base_dim();
        const double b = ch.b();
        const double dep_max = std::min(1.0, ch.L() * b);
        auto dep_edge = [&](int j) {
          double u = double(j) / resolution;
          return dep_max * u * u;
        };
        std::vector<int> idx(d, 0);
        Vec x(d);
        while (true) {
          for (int k = 0; k < d; ++k) x[k] = -b + 2.0 * b * (idx[k] + 0.5) / resolution;
          double xw = 1.0;
          for (int k = 0; k < d; ++k) xw *= 2.0 * b / resolution;
          double gx = ch.g(x);
          for (int j = 0; j < resolution; ++j) {
            double dlo = dep_edge(j), dhi = dep_edge(j + 1);
            Vec cpt(d + 1);
            cpt.head(d) = x;
            cpt[d] = gx - 0.5 * (dlo + dhi);
            Vec w = ch.to_world(cpt);
            if (!dom.inside(w)) continue;
            bool dup = false;  // first chart owning a point keeps it
            for (std::size_t cj = 0; cj < ci && !dup; ++cj) {
              const Chart& prev = charts[cj].chart;
              dup = prev.contains(w) &&
                    prev.depth(w) < std::min(1.0, prev.L() * prev.b());
            }
            if (dup) continue;
            pts.push_back(w);
            wts.push_back(xw * (dhi - dlo));
          }
          int k = 0;
          while (k < d && ++idx[k] == resolution) idx[k++] = 0;
          if (k == d) break;
        }
      }
      // interior filler: tensor points not claimed by any chart layer zone
      tensor_points(dom, resolution, pts, wts, [&](const Vec& p) {
        for (const auto& ac : dom.charts()) {
          const Chart& ch = ac.chart;
          if (ch.contains(p) && ch.depth(p) < std::min(1.0, ch.L() * ch.b()))
            return false;
        }
        return true;
      });
      break;
    }
    case GridMode::MonteCarlo: {
      Rng rng(seed);
      const Box& bb = dom.bounding_box();
      const int D = dom.dim();
      double boxvol = 1.0;
      for (int k = 0; k < D; ++k) boxvol *= bb.hi[k] - bb.lo[k];
      std::size_t tries = 0;
      while (pts.size() < std::size_t(resolution) && tries < std::size_t(resolution) * 10000) {
        ++tries;
        Vec p = rng.point_in_box(bb.lo, bb.hi);
        if (dom.inside(p)) pts.push_back(p);
      }
      if (pts.empty()) throw DomainError("build_grid: monte-carlo found no inside points");
      double vol_est = boxvol * double(pts.size()) / double(tries);
      wts.assign(pts.size(), vol_est / double(pts.size()));
      break;
    }
  }
  if (pts.empty()) throw DomainError("build_grid: empty grid");
  return SampleGrid(dom, std::move(pts), std::move(wts));
}

double lp_norm(const std::vector<double>& values, const std::vector<double>& weights,
               double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p <= 0) throw ParameterError("lp_norm: p must be positive or infinity");
  KahanSum s;
  for (std::size_t i = 0; i < values.size(); ++i)
    s.add(weights[i] * std::pow(std::abs(values[i]), p));
  return std::pow(s.value(), 1.0 / p);
}

BallSubset metric_ball(const Vec& xi, double t, const CompositeDomain& dom,
                       const SampleGrid& grid) {
  if (!dom.inside(xi)) throw DomainError("metric_ball: center outside domain");
  double dxi = std::sqrt(std::max(0.0, dom.boundary_distance(xi)));
  BallSubset out;
  KahanSum m;
  for (std::size_t i : grid.within(xi, t)) {
    double rho = (grid.point(i) - xi).norm() +
                 std::abs(dxi - std::sqrt(std::max(0.0, grid.boundary_distance(i))));
    if (rho <= t) {
      out.idx.push_back(i);
      m.add(grid.weight(i));
    }
  }
  out.measure = m.value();
  if (out.idx.empty())
    throw DomainError("metric_ball: no grid points captured (grid too coarse)");
  return out;
}

}  // namespace c2approx
