#include "c2approx/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace c2approx {

namespace {

// plain (unrestricted) forward difference
double forward_difference(const ScalarField& f, const Vec& h, const Vec& base, int r) {
  KahanSum s;
  for (int k = 0; k <= r; ++k) {
    double c = binomial(r, k);
    double sign = ((r - k) % 2 == 0) ? 1.0 : -1.0;
    s.add(sign * c * f(base + double(k) * h));
  }
  return s.value();
}

// affine image of a chart-coordinate direction in world coordinates
Vec world_direction(const Chart& chart, const Vec& chart_dir) {
  Vec z = Vec::Zero(chart_dir.size());
  return chart.to_world(chart_dir) - chart.to_world(z);
}

}  // namespace

double finite_difference(const ScalarField& f, const Vec& h, const Vec& eta, int r,
                         const Region& region, bool symmetric, int segment_samples) {
  Vec base = symmetric ? Vec(eta - 0.5 * double(r) * h) : eta;
  // the whole segment [base, base + r h] must stay inside the region
  for (int s = 0; s < segment_samples; ++s) {
    double u = (segment_samples == 1) ? 0.0 : double(s) / double(segment_samples - 1);
    if (!region(base + u * double(r) * h)) return 0.0;
  }
  return forward_difference(f, h, base, r);
}

std::pair<double, double> difference_identity(const ScalarField& f, const Vec& xi,
                                              const Vec& eta, const Vec& h, int r) {
  double lhs = forward_difference(f, h, xi, r);

  // bracket form: r-th difference from u toward v with step (v-u)/r
  auto bracket = [&](const Vec& u, const Vec& v) {
    Vec step = (v - u) / double(r);
    return forward_difference(f, step, u, r);
  };

  KahanSum rhs;
  for (int j = 0; j < r; ++j) {
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double w = double(j) / double(r);
    Vec v = w * (xi + double(r) * h) + (1.0 - w) * eta;
    rhs.add(sign * binomial(r, j) * bracket(xi + double(j) * h, v));
  }
  for (int j = 1; j <= r; ++j) {
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double w = double(j) / double(r);
    Vec u = (1.0 - w) * xi + w * eta;
    rhs.add(-sign * binomial(r, j) * bracket(u, xi + double(r) * h));
  }
  return {lhs, rhs.value()};
}

std::vector<double> h_net(double t, const ModulusOptions& opts) {
  if (t <= 0.0) throw ParameterError("h_net: t must be positive");
  std::vector<double> net;
  int count = opts.h_per_octave * opts.octaves;
  net.reserve(count + 1);
  for (int k = count; k >= 0; --k)
    net.push_back(t * std::pow(2.0, -double(k) / double(opts.h_per_octave)));
  return net;
}

double directional_modulus(const ScalarField& f, const std::vector<Vec>& dirs,
                           double t, int r, double p, const SampleGrid& grid,
                           const Region& region, const ModulusOptions& opts) {
  std::vector<double> steps = h_net(t, opts);
  std::size_t m = grid.size();
  std::vector<double> vals(m), wts(m);
  double best = 0.0;
  for (const Vec& e : dirs) {
    for (double s : steps) {
      Vec h = s * e;
      parallel_for(m, opts.threads, [&](std::size_t i) {
        const Vec& pt = grid.point(i);
        if (!region(pt)) {
          vals[i] = 0.0;
          wts[i] = 0.0;
          return;
        }
        vals[i] = finite_difference(f, h, pt, r, region, false, opts.segment_samples);
        wts[i] = grid.weight(i);
      });
      best = std::max(best, lp_norm(vals, wts, p));
    }
  }
  return best;
}

std::vector<double> phi_field(const SampleGrid& grid, const Vec& e) {
  std::vector<double> phi(grid.size());
  const CompositeDomain& dom = grid.domain();
  parallel_for(grid.size(), 0, [&](std::size_t i) {
    phi[i] = phi_weight(e, grid.point(i), dom);
  });
  return phi;
}

double dt_modulus(const ScalarField& f, double t, int r, double p,
                  const SampleGrid& grid, const ModulusOptions& opts,
                  const std::vector<Vec>* dirs,
                  const std::vector<std::vector<double>>* phi_cache) {
  const CompositeDomain& dom = grid.domain();
  std::vector<Vec> axes;
  if (dirs == nullptr) {
    for (int k = 0; k < dom.dim(); ++k) {
      Vec e = Vec::Zero(dom.dim());
      e[k] = 1.0;
      axes.push_back(e);
    }
    dirs = &axes;
  }
  Region region = [&dom](const Vec& q) { return dom.inside(q); };
  std::vector<double> steps = h_net(std::min(t, 1.0), opts);
  std::size_t m = grid.size();
  std::vector<double> vals(m);
  double best = 0.0;
  for (std::size_t d = 0; d < dirs->size(); ++d) {
    const Vec& e = (*dirs)[d];
    std::vector<double> phi;
    const std::vector<double>* phip;
    if (phi_cache != nullptr && d < phi_cache->size()) {
      phip = &(*phi_cache)[d];
    } else {
      phi = phi_field(grid, e);
      phip = &phi;
    }
    for (double s : steps) {
      parallel_for(m, opts.threads, [&](std::size_t i) {
        Vec h = s * (*phip)[i] * e;
        vals[i] = finite_difference(f, h, grid.point(i), r, region, true,
                                    opts.segment_samples);
      });
      best = std::max(best, lp_norm(vals, grid.weights(), p));
    }
  }
  return best;
}

ChartFieldCache::ChartFieldCache(const SampleGrid& grid, const Chart& chart) {
  std::size_t m = grid.size();
  chart_pts.resize(m);
  ess_dist.assign(m, 0.0);
  in_body.assign(m, 0);
  parallel_for(m, 0, [&](std::size_t i) {
    const Vec& w = grid.point(i);
    chart_pts[i] = chart.to_chart(w);
    if (chart.contains(w)) {
      in_body[i] = 1;
      ess_dist[i] = chart.essential_boundary_distance(w);
    }
  });
}

double tangential_modulus(const ScalarField& f, const Chart& chart, double t,
                          int r, double p, const SampleGrid& grid,
                          const ModulusOptions& opts, const ChartFieldCache* cache) {
  t = std::min(t, 1.0);
  if (t <= 0.0) throw ParameterError("tangential_modulus: t must be positive");
  ChartFieldCache local;
  if (cache == nullptr) {
    local = ChartFieldCache(grid, chart);
    cache = &local;
  }
  const CompositeDomain& dom = grid.domain();
  Region region = [&dom](const Vec& q) { return dom.inside(q); };
  std::vector<double> steps = h_net(t, opts);
  int d = chart.base_dim();
  double b = chart.b();
  double margin = opts.A0 * t * t;

  std::size_t m = grid.size();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i)
    if (cache->in_body[i] && cache->ess_dist[i] >= margin) active.push_back(i);
  if (active.empty()) return 0.0;

  std::vector<double> vals(active.size()), wts(active.size());
  parallel_for(active.size(), opts.threads, [&](std::size_t a) {
    std::size_t i = active[a];
    const Vec& cp = cache->chart_pts[i];
    Rng rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    // base window I_x(t b) of side t b, clamped to the chart base
    Vec lo(d), hi(d);
    double vol = 1.0;
    for (int k = 0; k < d; ++k) {
      lo[k] = std::max(cp[k] - 0.5 * t * b, -b);
      hi[k] = std::min(cp[k] + 0.5 * t * b, b);
      vol *= std::max(hi[k] - lo[k], 0.0);
    }
    double scale = vol / std::pow(b * t, double(d));
    Vec world = chart.to_world(cp);
    KahanSum acc;
    for (int s = 0; s < opts.u_samples; ++s) {
      Vec u = rng.point_in_box(lo, hi);
      double local_sup = 0.0;
      for (int j = 0; j < d; ++j) {
        Vec dir = world_direction(chart, tangent_vector(chart, u, j, true));
        for (double step : steps) {
          double dv = finite_difference(f, Vec(step * dir), world, r, region, true,
                                        opts.segment_samples);
          local_sup = std::max(local_sup, std::abs(dv));
        }
      }
      acc.add(local_sup);
    }
    vals[a] = scale * acc.value() / double(opts.u_samples);
    wts[a] = grid.weight(i);
  });
  return lp_norm(vals, wts, p);
}

json ModulusReport::to_json() const {
  json j;
  j["value"] = value;
  j["parts"] = json::object();
  for (const auto& [k, v] : parts) j["parts"][k] = v;
  j["meta"] = meta;
  return j;
}

ModulusReport full_modulus(const ScalarField& f, const CompositeDomain& dom,
                           double t, int r, double p, const SampleGrid& grid,
                           const ModulusOptions& opts) {
  ModulusReport rep;
  double dt_max = 0.0;
  for (int k = 0; k < dom.dim(); ++k) {
    Vec e = Vec::Zero(dom.dim());
    e[k] = 1.0;
    std::vector<Vec> one{e};
    double w = dt_modulus(f, t, r, p, grid, opts, &one);
    rep.parts["dt_axis_" + std::to_string(k)] = w;
    dt_max = std::max(dt_max, w);
  }
  double tang_sum = 0.0;
  int idx = 0;
  for (const auto& ac : dom.charts()) {
    double w = tangential_modulus(f, ac.chart, t, r, p, grid, opts);
    std::string label = ac.chart.name.empty() ? std::to_string(idx) : ac.chart.name;
    rep.parts["tangential_" + label] = w;
    tang_sum += w;
    ++idx;
  }
  rep.value = dt_max + tang_sum;
  rep.meta = {{"t", t},
              {"r", r},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"grid_size", grid.size()},
              {"dt_max", dt_max},
              {"tangential_sum", tang_sum}};
  return rep;
}

double ivanov_w(const ScalarField& f, const Vec& xi, double delta, int r, double q,
                const CompositeDomain& dom, const SampleGrid& grid,
                int segment_samples) {
  BallSubset ball = metric_ball(xi, delta, dom, grid);
  Region region = [&dom](const Vec& pt) { return dom.inside(pt); };
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i : ball.idx) {
      Vec h = (grid.point(i) - xi) / double(r);
      best = std::max(best,
                      std::abs(finite_difference(f, h, xi, r, region, false,
                                                 segment_samples)));
    }
    return best;
  }
  KahanSum acc;
  for (std::size_t i : ball.idx) {
    Vec h = (grid.point(i) - xi) / double(r);
    double dv = finite_difference(f, h, xi, r, region, false, segment_samples);
    acc.add(grid.weight(i) * std::pow(std::abs(dv), q));
  }
  return std::pow(acc.value() / ball.measure, 1.0 / q);
}

double ivanov_tau(const ScalarField& f, double delta, int r, double p, double q,
                  const CompositeDomain& dom, const SampleGrid& grid,
                  const ModulusOptions& opts) {
  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    vals[i] = ivanov_w(f, grid.point(i), delta, r, q, dom, grid,
                       opts.segment_samples);
  });
  return lp_norm(vals, grid.weights(), p);
}

LocalModulusReport local_modulus(const ScalarField& f, const CellPartition& part,
                                 int r, double p, const ModulusOptions& opts) {
  const Chart& chart = part.chart();
  int d = chart.base_dim();
  int n = part.n();
  double b = chart.b();
  std::size_t cells = part.cell_count();
  LocalModulusReport rep;
  rep.cell_values.assign(cells, 0.0);
  const int side = 3;  // sample points per dimension inside a cell

  parallel_for(cells, opts.threads, [&](std::size_t flat) {
    CellIndex c = part.cell_at(flat);
    Box base = part.base_cell(c.i);
    double a_lo = part.layer(c.j), a_hi = part.layer(c.j + 1);
    double depth_ext = a_hi - a_lo;
    double omega = 0.0;

    // vertical part: differences along the graph axis inside the extended
    // cell, starting from a small grid of interior points
    Region vregion = [&](const Vec& w) {
      Vec cp = chart.to_chart(w);
      for (int k = 0; k < d; ++k)
        if (cp[k] < -b || cp[k] > b) return false;
      return part.in_extended_cell(c, cp);
    };
    Vec ey = Vec::Zero(d + 1);
    ey[d] = -1.0;  // deeper into the body: g(x) - y increases
    Vec vdir = world_direction(chart, ey);
    std::size_t pts = 1;
    for (int k = 0; k <= d; ++k) pts *= side;
    for (std::size_t idx = 0; idx < pts; ++idx) {
      std::size_t rem = idx;
      Vec cp(d + 1);
      for (int k = 0; k < d; ++k) {
        int q = int(rem % side);
        rem /= side;
        cp[k] = base.lo[k] + (q + 0.5) / double(side) * (base.hi[k] - base.lo[k]);
      }
      double depth = a_lo + (int(rem) + 0.5) / double(side) * depth_ext;
      cp[d] = chart.g(cp.head(d)) - depth;
      Vec world = chart.to_world(cp);
      for (double s : h_net(depth_ext / double(r), opts)) {
        double dv = finite_difference(f, Vec(s * vdir), world, r, vregion, false,
                                      opts.segment_samples);
        omega = std::max(omega, std::abs(dv));
      }
    }

    // tangential part: differences along tangent directions of the plane at
    // x_star inside the inner slab
    try {
      auto [inner, outer] = part.slabs(c);
      (void)outer;
      Region sregion = [&](const Vec& w) {
        return inner.contains_chart(chart.to_chart(w));
      };
      Vec xs = part.x_star(c.i);
      double cmid = 0.5 * (inner.c_lo + inner.c_hi);
      for (int j = 0; j < d; ++j) {
        Vec tj = tangent_vector(chart, xs, j, true);
        Vec tdir = world_direction(chart, tj);
        // start points spread along the slab in direction j
        for (int q = 0; q < side; ++q) {
          Vec x = xs;
          x[j] = inner.base.lo[j] +
                 (q + 0.5) / double(side) * (inner.base.hi[j] - inner.base.lo[j]);
          Vec cp(d + 1);
          cp.head(d) = x;
          cp[d] = part.tangent_plane(c.i, x) + cmid;  // y - H = cmid, mid-slab
          Vec world = chart.to_world(cp);
          for (double s : h_net(2.0 * b / (double(n) * double(r)), opts)) {
            double dv = finite_difference(f, Vec(s * tdir), world, r, sregion,
                                          false, opts.segment_samples);
            omega = std::max(omega, std::abs(dv));
          }
        }
      }
    } catch (const ParameterError&) {
      // no admissible inner slab at this cell: vertical part only
    }

    rep.cell_values[flat] = omega;
  });

  if (std::isinf(p)) {
    for (double v : rep.cell_values) rep.value = std::max(rep.value, v);
  } else {
    KahanSum acc;
    for (std::size_t flat = 0; flat < cells; ++flat) {
      CellIndex c = part.cell_at(flat);
      acc.add(part.measure(c) * std::pow(rep.cell_values[flat], p));
    }
    rep.value = std::pow(acc.value(), 1.0 / p);
  }
  return rep;
}

double averaged_modulus_1d(const std::function<double(double)>& f, double a,
                           double b, double t, int r, double p) {
  if (t <= 0.0 || b <= a) throw ParameterError("averaged_modulus_1d: bad range");
  auto diff = [&](double x, double h) {
    KahanSum s;
    for (int k = 0; k <= r; ++k) {
      double sign = ((r - k) % 2 == 0) ? 1.0 : -1.0;
      s.add(sign * binomial(r, k) * f(x + k * h));
    }
    return s.value();
  };
  double h_lo = t / (4.0 * r), h_hi = t;
  const int nh = 64, nx = 256;
  if (std::isinf(p)) {
    double best = 0.0;
    for (int i = 0; i < nh; ++i) {
      double h = h_lo + (i + 0.5) / nh * (h_hi - h_lo);
      if (b - r * h <= a) continue;
      for (int j = 0; j < nx; ++j) {
        double x = a + (j + 0.5) / nx * (b - r * h - a);
        best = std::max(best, std::abs(diff(x, h)));
      }
    }
    return best;
  }
  KahanSum outer;
  double dh = (h_hi - h_lo) / nh;
  for (int i = 0; i < nh; ++i) {
    double h = h_lo + (i + 0.5) * dh;
    double xmax = b - r * h;
    if (xmax <= a) continue;
    double dx = (xmax - a) / nx;
    KahanSum inner;
    for (int j = 0; j < nx; ++j) {
      double x = a + (j + 0.5) * dx;
      inner.add(std::pow(std::abs(diff(x, h)), p));
    }
    outer.add(inner.value() * dx * dh);
  }
  return std::pow(outer.value() / t, 1.0 / p);
}

}  // namespace c2approx
