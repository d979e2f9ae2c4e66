#include "c2approx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace c2approx {

namespace {

// ambient indices of the horizontal chart coordinates, increasing order
std::vector<int> horizontal_axes(int dim, int axis) {
  std::vector<int> h;
  for (int i = 0; i < dim; ++i)
    if (i != axis) h.push_back(i);
  return h;
}

// iterate a tensor grid of `per` points per dimension over [lo,hi]^d
template <typename F>
void for_grid(int d, double lo, double hi, int per, F&& fn) {
  std::vector<int> idx(d, 0);
  Vec x(d);
  while (true) {
    for (int k = 0; k < d; ++k)
      x[k] = lo + (hi - lo) * idx[k] / double(per - 1);
    fn(x);
    int k = 0;
    while (k < d && ++idx[k] == per) idx[k++] = 0;
    if (k == d) break;
  }
}

}  // namespace

Chart::Chart(int ambient_dim, int axis, Orientation orient, Vec offset,
             double b, double L, GraphFn g)
    : dim_(ambient_dim),
      axis_(axis),
      orient_(orient),
      offset_(std::move(offset)),
      b_(b),
      L_(L),
      g_(std::move(g)) {
  if (dim_ < 2) throw ParameterError("chart: ambient dimension must be >= 2");
  if (axis_ < 0 || axis_ >= dim_) throw ParameterError("chart: axis out of range");
  if (b_ <= 0 || L_ <= 0) throw ParameterError("chart: b and L must be positive");
  const int d = base_dim();
  const int per = (d == 1) ? 129 : 25;
  for_grid(d, -2.0 * b_, 2.0 * b_, per, [&](const Vec& x) {
    max_grad_ = std::max(max_grad_, g_.gradient(x).norm());
  });
  for_grid(d, -4.0 * b_, 4.0 * b_, per, [&](const Vec& x) {
    max_abs_g_ = std::max(max_abs_g_, std::abs(g_.value(x)));
    max_hess_ = std::max(max_hess_, g_.hessian(x).norm());
  });
  double need = 4.0 * std::sqrt(double(d)) * max_grad_ + 1.0;
  if (L_ < need)
    throw ParameterError("chart: L below slope bound (needs >= 4*sqrt(d)*max|grad g| + 1 = " +
                         std::to_string(need) + ")");
}

Vec Chart::to_chart(const Vec& world) const {
  Vec v = world - offset_;
  Vec c(dim_);
  auto h = horizontal_axes(dim_, axis_);
  for (int k = 0; k < dim_ - 1; ++k) c[k] = v[h[k]];
  c[dim_ - 1] = (orient_ == Orientation::Up) ? v[axis_] : -v[axis_];
  return c;
}

Vec Chart::to_world(const Vec& chart) const {
  Vec w(dim_);
  auto h = horizontal_axes(dim_, axis_);
  for (int k = 0; k < dim_ - 1; ++k) w[h[k]] = chart[k];
  w[axis_] = (orient_ == Orientation::Up) ? chart[dim_ - 1] : -chart[dim_ - 1];
  return w + offset_;
}

double Chart::depth(const Vec& world) const {
  Vec c = to_chart(world);
  return g_.value(c.head(dim_ - 1)) - c[dim_ - 1];
}

bool Chart::contains(const Vec& world, double lambda) const {
  Vec c = to_chart(world);
  for (int k = 0; k < dim_ - 1; ++k)
    if (std::abs(c[k]) >= lambda * b_) return false;
  double dep = g_.value(c.head(dim_ - 1)) - c[dim_ - 1];
  return dep >= 0.0 && dep < lambda * L_ * b_;
}

double Chart::essential_boundary_distance(const Vec& world) const {
  Vec c = to_chart(world);
  Vec p = c.head(dim_ - 1);
  double py = c[dim_ - 1];
  const int d = dim_ - 1;
  auto dist2 = [&](const Vec& u) {
    double dy = g_.value(u) - py;
    return (u - p).squaredNorm() + dy * dy;
  };
  // multistart coarse scan, then projected gradient refinement
  const int per = (d == 1) ? 129 : 17;
  Vec best(d);
  double best_v = std::numeric_limits<double>::infinity();
  for_grid(d, -b_, b_, per, [&](const Vec& u) {
    double v = dist2(u);
    if (v < best_v) {
      best_v = v;
      best = u;
    }
  });
  Vec u = best;
  double step = b_ / per;
  for (int it = 0; it < 200; ++it) {
    double dy = g_.value(u) - py;
    Vec grad = 2.0 * (u - p) + 2.0 * dy * g_.gradient(u);
    if (grad.norm() * step < 1e-14) break;
    Vec cand = u - step * grad / std::max(grad.norm(), 1e-300);
    for (int k = 0; k < d; ++k) cand[k] = std::clamp(cand[k], -b_, b_);
    double v = dist2(cand);
    if (v < best_v) {
      best_v = v;
      u = cand;
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  return std::sqrt(best_v);
}

json Chart::to_json() const {
  json j;
  j["name"] = name;
  j["ambient_dim"] = dim_;
  j["axis"] = axis_;
  j["orientation"] = (orient_ == Orientation::Up) ? "up" : "down";
  j["offset"] = std::vector<double>(offset_.data(), offset_.data() + offset_.size());
  j["b"] = b_;
  j["L"] = L_;
  return j;
}

json Box::to_json() const {
  return json{{"lo", std::vector<double>(lo.data(), lo.data() + lo.size())},
              {"hi", std::vector<double>(hi.data(), hi.data() + hi.size())}};
}

CompositeDomain::CompositeDomain(std::string name, int dim,
                                 std::function<bool(const Vec&)> inside,
                                 std::function<double(const Vec&)> boundary_distance,
                                 Box bounding_box, double cover_margin)
    : name_(std::move(name)),
      dim_(dim),
      inside_(std::move(inside)),
      bdist_(std::move(boundary_distance)),
      bbox_(std::move(bounding_box)),
      cover_margin_(cover_margin) {}

void CompositeDomain::add_interior_box(Box b) { interior_boxes_.push_back(std::move(b)); }

bool CompositeDomain::in_some_chart(const Vec& p, double lambda) const {
  for (const auto& ac : charts_)
    if (ac.chart.contains(p, lambda)) return true;
  return false;
}

Vec CompositeDomain::sample_inside(Rng& rng) const {
  for (int tries = 0; tries < 100000; ++tries) {
    Vec p = rng.point_in_box(bbox_.lo, bbox_.hi);
    if (inside_(p)) return p;
  }
  throw DomainError("sample_inside: rejection sampling failed");
}

void CompositeDomain::verify_cover(int n_samples, std::uint64_t seed) const {
  Rng rng(seed);
  int near_found = 0;
  for (int i = 0; i < n_samples; ++i) {
    Vec p = sample_inside(rng);
    bool covered = in_some_chart(p, 1.0);
    if (!covered)
      for (const auto& bx : interior_boxes_)
        if (bx.contains(p)) {
          covered = true;
          break;
        }
    if (!covered) throw DomainError("cover: interior point not covered by charts or boxes");
    if (bdist_(p) < cover_margin_) {
      ++near_found;
      if (!in_some_chart(p, kLambda0))
        throw DomainError("cover: boundary-near point outside all inner chart portions");
    }
  }
  if (!charts_.empty() && near_found == 0)
    throw DomainError("cover: no boundary-near samples drawn; increase n_samples");
}

json CompositeDomain::to_json() const {
  json j;
  j["name"] = name_;
  j["dim"] = dim_;
  j["cover_margin"] = cover_margin_;
  j["bounding_box"] = bbox_.to_json();
  j["charts"] = json::array();
  for (const auto& ac : charts_) {
    json cj = ac.chart.to_json();
    cj["q"] = ac.q.to_json();
    j["charts"].push_back(cj);
  }
  j["interior_boxes"] = json::array();
  for (const auto& bx : interior_boxes_) j["interior_boxes"].push_back(bx.to_json());
  return j;
}

double rho_omega(const Vec& xi, const Vec& eta, const CompositeDomain& dom) {
  if (!dom.inside(xi) || !dom.inside(eta))
    throw DomainError("rho_omega: point outside domain");
  double dx = std::sqrt(std::max(0.0, dom.boundary_distance(xi)));
  double de = std::sqrt(std::max(0.0, dom.boundary_distance(eta)));
  return (xi - eta).norm() + std::abs(dx - de);
}

double rho_hat(const Vec& xi, const Vec& eta, const Chart& chart) {
  Vec cx = chart.to_chart(xi);
  Vec ce = chart.to_chart(eta);
  int d = chart.base_dim();
  double depx = chart.g(cx.head(d)) - cx[d];
  double depe = chart.g(ce.head(d)) - ce[d];
  if (depx < -1e-12 || depe < -1e-12)
    throw DomainError("rho_hat: point above chart graph");
  double horiz = (cx.head(d) - ce.head(d)).norm();
  double vert = std::abs(std::sqrt(std::max(0.0, depx)) - std::sqrt(std::max(0.0, depe)));
  return std::max(horiz, vert);
}

bool segment_in_domain(const Vec& a, const Vec& b, const CompositeDomain& dom,
                       int k_samples) {
  for (int i = 0; i < k_samples; ++i) {
    double t = (k_samples == 1) ? 0.5 : double(i) / (k_samples - 1);
    if (!dom.inside(a + t * (b - a))) return false;
  }
  return true;
}

namespace {

// length of the maximal ray [xi, xi + l*e] staying inside, via march + bisection
double ray_reach(const Vec& e, const Vec& xi, const CompositeDomain& dom, double tol) {
  double diam = dom.diameter();
  double step = diam / 256.0;
  double lin = 0.0, lout = -1.0;
  for (double l = step; l <= diam + step; l += step) {
    if (dom.inside(xi + l * e)) {
      lin = l;
    } else {
      lout = l;
      break;
    }
  }
  if (lout < 0) return lin;  // never exited (cannot happen for bounded domains)
  while (lout - lin > tol) {
    double mid = 0.5 * (lin + lout);
    if (dom.inside(xi + mid * e))
      lin = mid;
    else
      lout = mid;
  }
  return lin;
}

}  // namespace

double phi_weight(const Vec& e, const Vec& xi, const CompositeDomain& dom, double tol) {
  if (!dom.inside(xi)) throw DomainError("phi_weight: point outside domain");
  Vec u = e / e.norm();
  double l2 = ray_reach(u, xi, dom, tol);
  double l1 = ray_reach(-u, xi, dom, tol);
  return std::sqrt(l1 * l2);
}

GraphFn ellipse_top_graph(double A, double B, double xc, double w) {
  if (!(xc > 0 && xc < A && w > 0))
    throw ParameterError("ellipse_top_graph: need 0 < xc < A and w > 0");
  // one-sided pieces at s = |x| (g is even)
  auto gc = [A, B](double s) { return B * std::sqrt(1.0 - (s / A) * (s / A)); };
  auto gcp = [A, B](double s) {
    double u = s / A;
    return -B * u / (A * std::sqrt(1.0 - u * u));
  };
  auto gcpp = [A, B](double s) {
    double u = s / A;
    return -B / (A * A * std::pow(1.0 - u * u, 1.5));
  };
  const double v0 = gc(xc), d0 = gcp(xc), a0 = gcpp(xc);
  // phase 1 (width w): fade the curvature a0 to zero, psi = (1-t^2)^2
  auto Psi1 = [](double t) { return t - 2.0 * t * t * t / 3.0 + std::pow(t, 5) / 5.0; };
  auto Psi2 = [](double t) {
    return t * t / 2.0 - std::pow(t, 4) / 6.0 + std::pow(t, 6) / 30.0;
  };
  const double dE = d0 + a0 * w * Psi1(1.0);
  const double vE = v0 + d0 * w + a0 * w * w * Psi2(1.0);
  // phase 2 (width w2): fade the slope dE to zero with a curvature bump
  // phi = 16 t^2 (1-t)^2 whose peak matches |a0|; the graph is constant after
  auto Phi = [](double t) { return 16.0 * t * t * (1.0 - t) * (1.0 - t); };
  auto Phi1 = [](double t) {
    return 16.0 * (t * t * t / 3.0 - std::pow(t, 4) / 2.0 + std::pow(t, 5) / 5.0);
  };
  auto Phi2 = [](double t) {
    return 16.0 * (std::pow(t, 4) / 12.0 - std::pow(t, 5) / 10.0 + std::pow(t, 6) / 30.0);
  };
  const double w2 = std::abs(dE) / ((16.0 / 30.0) * std::abs(a0));
  const double a1 = -dE / ((16.0 / 30.0) * w2);
  const double x1 = xc + w;
  const double vF = vE + dE * w2 + a1 * w2 * w2 * Phi2(1.0);
  auto val1 = [=](double s) {
    if (s <= xc) return gc(s);
    if (s <= x1) {
      double t = (s - xc) / w;
      return v0 + d0 * (s - xc) + a0 * w * w * Psi2(t);
    }
    if (s <= x1 + w2) {
      double t = (s - x1) / w2;
      return vE + dE * (s - x1) + a1 * w2 * w2 * Phi2(t);
    }
    return vF;
  };
  auto der1 = [=](double s) {
    if (s <= xc) return gcp(s);
    if (s <= x1) return d0 + a0 * w * Psi1((s - xc) / w);
    if (s <= x1 + w2) return dE + a1 * w2 * Phi1((s - x1) / w2);
    return 0.0;
  };
  auto der2 = [=](double s) {
    if (s <= xc) return gcpp(s);
    if (s <= x1) {
      double t = (s - xc) / w;
      double psi = (1.0 - t * t) * (1.0 - t * t);
      return a0 * psi;
    }
    if (s <= x1 + w2) return a1 * Phi((s - x1) / w2);
    return 0.0;
  };
  GraphFn g;
  g.value = [val1](const Vec& x) { return val1(std::abs(x[0])); };
  g.gradient = [der1](const Vec& x) {
    Vec r(1);
    double s = std::abs(x[0]);
    r[0] = (x[0] < 0 ? -1.0 : 1.0) * der1(s);
    return r;
  };
  g.hessian = [der2](const Vec& x) {
    Mat r(1, 1);
    r(0, 0) = der2(std::abs(x[0]));
    return r;
  };
  return g;
}

namespace {

double choose_L(const GraphFn& g, int d, double b) {
  double mg = 0.0;
  const int per = (d == 1) ? 129 : 25;
  for_grid(d, -2.0 * b, 2.0 * b, per, [&](const Vec& x) {
    mg = std::max(mg, g.gradient(x).norm());
  });
  return std::ceil(4.0 * std::sqrt(double(d)) * mg + 1.0) + 1.0;
}

double ellipse_boundary_distance(double A, double B, const Vec& p) {
  // distance to {(A cos t, B sin t)}: coarse scan then local refinement
  auto d2 = [&](double t) {
    double dx = A * std::cos(t) - p[0];
    double dy = B * std::sin(t) - p[1];
    return dx * dx + dy * dy;
  };
  const int per = 512;
  double best_t = 0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < per; ++i) {
    double t = 2.0 * M_PI * i / per;
    double v = d2(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double lo = best_t - 2.0 * M_PI / per, hi = best_t + 2.0 * M_PI / per;
  for (int it = 0; it < 80; ++it) {  // golden-section refinement
    double m1 = lo + 0.381966 * (hi - lo);
    double m2 = hi - 0.381966 * (hi - lo);
    if (d2(m1) < d2(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::sqrt(d2(0.5 * (lo + hi)));
}

// four boundary charts of an axis-aligned ellipse (A=1=B gives the disk)
void attach_ellipse_charts(CompositeDomain& dom, double A, double B) {
  struct Side {
    int axis;
    Orientation o;
    double across, along;  // semi-axes seen from this side: y along `axis`
  };
  const Side sides[4] = {{1, Orientation::Up, A, B},
                         {1, Orientation::Down, A, B},
                         {0, Orientation::Up, B, A},
                         {0, Orientation::Down, B, A}};
  const char* names[4] = {"top", "bottom", "right", "left"};
  for (int s = 0; s < 4; ++s) {
    double Aa = sides[s].across, Bb = sides[s].along;
    // base wide enough that the whole domain projects into (-b, b); exact
    // arc out past the lambda0 cover radius
    double b = 1.05 * Aa, xc = 0.79 * Aa, w = 0.5 * Aa;
    GraphFn g = ellipse_top_graph(Aa, Bb, xc, w);
    double L = choose_L(g, 1, b);
    Chart c(2, sides[s].axis, sides[s].o, Vec::Zero(2), b, L, g);
    c.name = names[s];
    // containing box: the inner portion of this side in ambient coordinates
    Vec qlo(2), qhi(2);
    int ax = sides[s].axis, hx = 1 - ax;
    double sign = (sides[s].o == Orientation::Up) ? 1.0 : -1.0;
    qlo[hx] = -0.93 * Aa;
    qhi[hx] = 0.93 * Aa;
    if (sign > 0) {
      qlo[ax] = -0.25 * Bb;
      qhi[ax] = 1.001 * Bb;
    } else {
      qlo[ax] = -1.001 * Bb;
      qhi[ax] = 0.25 * Bb;
    }
    dom.add_chart(std::move(c), Box{qlo, qhi});
  }
  double s = 0.17 * std::min(A, B);
  dom.add_interior_box(Box{make_vec({-s, -s}), make_vec({s, s})});
}

}  // namespace

CompositeDomain make_unit_disk() {
  auto inside = [](const Vec& p) { return p.norm() <= 1.0; };
  auto bdist = [](const Vec& p) { return std::abs(1.0 - p.norm()); };
  CompositeDomain dom("disk", 2, inside, bdist,
                      Box{make_vec({-1.0, -1.0}), make_vec({1.0, 1.0})}, 0.05);
  attach_ellipse_charts(dom, 1.0, 1.0);
  return dom;
}

CompositeDomain make_ellipse(double a, double b) {
  if (a <= 0 || b <= 0) throw ParameterError("ellipse: semi-axes must be positive");
  auto inside = [a, b](const Vec& p) {
    double u = p[0] / a, v = p[1] / b;
    return u * u + v * v <= 1.0;
  };
  auto bdist = [a, b](const Vec& p) { return ellipse_boundary_distance(a, b, p); };
  CompositeDomain dom("ellipse", 2, inside, bdist,
                      Box{make_vec({-a, -b}), make_vec({a, b})},
                      0.05 * std::min(a, b));
  attach_ellipse_charts(dom, a, b);
  return dom;
}

CompositeDomain make_graph_domain(const GraphFn& g, int base_dim, double b, double L) {
  const int D = base_dim + 1;
  // box walls close the subgraph body at depth L*b
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -gmin;
  const int per = (base_dim == 1) ? 257 : 33;
  for_grid(base_dim, -b, b, per, [&](const Vec& x) {
    gmin = std::min(gmin, g.value(x));
    gmax = std::max(gmax, g.value(x));
  });
  const double floor_y = gmin - L * b;
  GraphFn gcopy = g;
  auto inside = [gcopy, b, floor_y, base_dim](const Vec& p) {
    for (int k = 0; k < base_dim; ++k)
      if (std::abs(p[k]) > b) return false;
    double y = p[base_dim];
    return y >= floor_y && y <= gcopy.value(p.head(base_dim));
  };
  Vec lo(D), hi(D);
  for (int k = 0; k < base_dim; ++k) {
    lo[k] = -b;
    hi[k] = b;
  }
  lo[base_dim] = floor_y;
  hi[base_dim] = gmax;
  Chart chart(D, base_dim, Orientation::Up, Vec::Zero(D), b, L, g);
  chart.name = "graph";
  auto bdist = [chart, b, floor_y, base_dim](const Vec& p) {
    double walls = std::numeric_limits<double>::infinity();
    for (int k = 0; k < base_dim; ++k)
      walls = std::min(walls, b - std::abs(p[k]));
    walls = std::min(walls, p[base_dim] - floor_y);
    return std::min(walls, chart.essential_boundary_distance(p));
  };
  CompositeDomain dom("graph", D, inside, bdist, Box{lo, hi}, 0.05 * b);
  dom.add_chart(chart, Box{lo, hi});
  // closing box hugging the flat part of the body
  Vec blo = lo, bhi = hi;
  bhi[base_dim] = gmin;
  dom.add_interior_box(Box{blo, bhi});
  return dom;
}

Chart make_disk_chart(double b) {
  // exact unit-circle arc over the whole sampled range [-4b, 4b]
  if (!(b > 0 && 4.0 * b < 0.99))
    throw ParameterError("make_disk_chart: need 0 < b < 0.2475");
  GraphFn g = ellipse_top_graph(1.0, 1.0, std::min(0.95, 4.5 * b), 0.04);
  double L = std::max(1.0 / b, choose_L(g, 1, b));
  Chart c(2, 1, Orientation::Up, Vec::Zero(2), b, L, g);
  c.name = "disk-top";
  return c;
}

CompositeDomain domain_from_json(const json& j) {
  std::string type = j.value("type", j.value("name", ""));
  if (type == "disk") return make_unit_disk();
  if (type == "ellipse") return make_ellipse(j.at("a").get<double>(), j.at("b").get<double>());
  throw ParameterError("domain_from_json: unsupported type '" + type + "'");
}

}  // namespace c2approx
