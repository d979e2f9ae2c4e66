#include "c2approx/unity.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

namespace c2approx {

namespace {

// cosine coefficients f_m of the normalized even Jackson-type kernel
// F(t) = c (sin(Nt/2)/sin(t/2))^{2k}, with integral 1 over the period
// (2 pi f_0 = 1).  Exact discrete cosine transform: F is a cosine polynomial
// of degree k(N-1).
std::vector<double> jackson_coeffs(int N, int k) {
  const int deg = k * (N - 1);
  const int M = 4 * (deg + 1);
  std::vector<double> vals(M);
  for (int i = 0; i < M; ++i) {
    double t = 2.0 * M_PI * i / M;
    double s = std::sin(0.5 * t);
    double ratio = (std::abs(s) < 1e-14) ? double(N) : std::sin(0.5 * N * t) / s;
    vals[i] = std::pow(ratio * ratio, k);
  }
  std::vector<double> f(deg + 1, 0.0);
  for (int m = 0; m <= deg; ++m) {
    KahanSum acc;
    for (int i = 0; i < M; ++i) acc.add(vals[i] * std::cos(m * 2.0 * M_PI * i / M));
    f[m] = (m == 0 ? 1.0 : 2.0) * acc.value() / M;
  }
  const double c = 1.0 / (2.0 * M_PI * f[0]);
  for (double& x : f) x *= c;
  return f;
}

// member coefficients: integral of the kernel over the angular interval
// [ta, tb] (even reflection included); exact sum-to-one over a partition of
// [0, pi] because the m >= 1 terms telescope to sin(m pi) - sin(0) = 0.
std::vector<double> angular_window_coeffs(const std::vector<double>& f, double ta,
                                          double tb) {
  std::vector<double> c(f.size());
  c[0] = 2.0 * f[0] * (tb - ta);
  for (std::size_t m = 1; m < f.size(); ++m)
    c[m] = 2.0 * f[m] * (std::sin(m * tb) - std::sin(m * ta)) / double(m);
  return c;
}

int kernel_power_for(int ell) { return std::max(2, (ell + 2) / 2); }

}  // namespace

double ChebUnityFamily::node(int j) const {
  return std::cos((j + 0.5) * M_PI / n);
}

json ChebUnityFamily::to_json() const {
  json j;
  j["n"] = n;
  j["ell"] = ell;
  j["kernel_power"] = kernel_power;
  j["kernel_size"] = kernel_size;
  j["members"] = json::array();
  for (const auto& m : members) j["members"].push_back(m.to_json());
  return j;
}

ChebUnityFamily chebyshev_unity_1d(int n, int ell) {
  if (n < 2) throw ParameterError("chebyshev_unity_1d: n must be >= 2");
  ChebUnityFamily fam;
  fam.n = n;
  fam.ell = ell;
  fam.kernel_power = kernel_power_for(ell);
  fam.kernel_size = std::max(2, 2 * n / fam.kernel_power + 1);
  // degree bound 2n: k(N-1) <= 2n
  while (fam.kernel_power * (fam.kernel_size - 1) > 2 * n) --fam.kernel_size;
  auto f = jackson_coeffs(fam.kernel_size, fam.kernel_power);
  fam.members.reserve(n);
  for (int j = 0; j < n; ++j) {
    auto c = angular_window_coeffs(f, j * M_PI / n, (j + 1) * M_PI / n);
    fam.members.emplace_back(-1.0, 1.0, std::move(c));
  }
  return fam;
}

BoxUnityFamily::BoxUnityFamily(const Box& box, int n, int ell)
    : box_(box), n_(n), ell_(ell) {
  const int d = dim();
  // one angular family per dimension, regrouped onto the n uniform cells;
  // grow the family until every cell captures at least one member
  int nu = 2 * n;
  ChebUnityFamily fam;
  std::vector<std::vector<int>> groups;
  for (;; nu *= 2) {
    if (nu > 64 * n) throw ParameterError("box_unity: regrouping failed");
    fam = chebyshev_unity_1d(nu, ell);
    groups.assign(n, {});
    bool ok = true;
    for (int i = 0; i < nu; ++i) {
      double x = fam.node(i);  // in (-1, 1)
      int cell = std::clamp(int((x + 1.0) * 0.5 * n), 0, n - 1);
      groups[cell].push_back(i);
    }
    for (int c = 0; c < n; ++c)
      if (groups[c].empty()) ok = false;
    if (ok) break;
  }
  per_dim_.resize(d);
  degree_ = 0;
  for (int k = 0; k < d; ++k) {
    per_dim_[k].reserve(n);
    for (int c = 0; c < n; ++c) {
      std::vector<double> coef;
      for (int i : groups[c]) {
        const auto& mc = fam.members[i].coef();
        if (coef.size() < mc.size()) coef.resize(mc.size(), 0.0);
        for (std::size_t m = 0; m < mc.size(); ++m) coef[m] += mc[m];
      }
      per_dim_[k].emplace_back(box_.lo[k], box_.hi[k], std::move(coef));
    }
    degree_ += fam.kernel_power * (fam.kernel_size - 1);
  }
}

std::size_t BoxUnityFamily::count() const {
  std::size_t c = 1;
  for (int k = 0; k < dim(); ++k) c *= n_;
  return c;
}

double BoxUnityFamily::eval_dim(int k, int cell, double x) const {
  return per_dim_[k][cell](x);
}

double BoxUnityFamily::eval(std::size_t flat, const Vec& p) const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) {
    int cell = int(flat % n_);
    flat /= n_;
    v *= per_dim_[k][cell](p[k]);
  }
  return v;
}

Vec BoxUnityFamily::center(std::size_t flat) const {
  Vec c(dim());
  for (int k = 0; k < dim(); ++k) {
    int cell = int(flat % n_);
    flat /= n_;
    c[k] = box_.lo[k] + (box_.hi[k] - box_.lo[k]) * (cell + 0.5) / n_;
  }
  return c;
}

json BoxUnityFamily::to_json() const {
  json j;
  j["box"] = box_.to_json();
  j["n"] = n_;
  j["ell"] = ell_;
  j["per_dim"] = json::array();
  for (const auto& dimfam : per_dim_) {
    json dj = json::array();
    for (const auto& p : dimfam) dj.push_back(p.to_json());
    j["per_dim"].push_back(dj);
  }
  return j;
}

SpecialUnity::SpecialUnity(std::shared_ptr<const CellPartition> part, int ell)
    : part_(std::move(part)), ell_(ell) {
  const Chart& ch = part_->chart();
  const int d = ch.base_dim();
  const int n = part_->n();
  const int N = part_->layer_count();
  const double alpha = part_->alpha();
  M_ = d * ch.max_hess_norm() + 1.0;
  // angular family of all N layers; member j lives on t in [alpha_j, alpha_{j+1}]
  // under t = alpha (1 - cos theta)
  u_ = chebyshev_unity_1d(N, ell);
  u_on_t_.reserve(N);
  for (int j = 0; j < N; ++j) {
    std::vector<double> c = u_.members[j].coef();
    for (std::size_t m = 1; m < c.size(); m += 2) c[m] = -c[m];  // x -> -x
    u_on_t_.emplace_back(0.0, 2.0 * alpha, std::move(c));
  }
  Vec lo = Vec::Constant(d, -ch.b()), hi = Vec::Constant(d, ch.b());
  v_ = BoxUnityFamily(Box{lo, hi}, n, ell);
  // base cell centers
  std::size_t bases = 1;
  for (int k = 0; k < d; ++k) bases *= n;
  cell_centers_.resize(bases);
  for (std::size_t f = 0; f < bases; ++f) {
    std::vector<int> iv(d);
    std::size_t r = f;
    for (int k = 0; k < d; ++k) {
      iv[k] = int(r % n);
      r /= n;
    }
    cell_centers_[f] = part_->base_cell(iv).center();
  }
  // range check: f_i(x) - y must stay inside [0, 2 alpha] over the body
  double tmax = 0.0, tmin = 0.0;
  const int per = (d == 1) ? 65 : 17;
  for (std::size_t f = 0; f < bases; ++f) {
    std::vector<int> iv(d);
    std::size_t r = f;
    for (int k = 0; k < d; ++k) {
      iv[k] = int(r % n);
      r /= n;
    }
    std::vector<int> idx(d, 0);
    Vec x(d);
    while (true) {
      for (int k = 0; k < d; ++k)
        x[k] = -ch.b() + 2.0 * ch.b() * idx[k] / double(per - 1);
      double off = f_cell(iv, x) - ch.g(x);
      tmin = std::min(tmin, off);
      tmax = std::max(tmax, off + 1.0);  // + max partitioned depth
      int k = 0;
      while (k < d && ++idx[k] == per) idx[k++] = 0;
      if (k == d) break;
    }
  }
  if (tmin < -1e-9 || tmax > 2.0 * alpha)
    throw ParameterError(
        "special_unity: range of f_i(x)-y leaves [0, 2 alpha]; increase ell1");
}

double SpecialUnity::f_cell(const std::vector<int>& i, const Vec& x) const {
  const Chart& ch = part_->chart();
  const int d = ch.base_dim();
  const int n = part_->n();
  std::size_t f = 0;
  for (int k = d - 1; k >= 0; --k) f = f * n + i[k];
  const Vec& xi = cell_centers_[f];
  Vec dx = x - xi;
  return ch.g(xi) + ch.grad_g(xi).dot(dx) + 0.5 * M_ * dx.squaredNorm();
}

double SpecialUnity::u_of_t(int j, double t) const { return u_on_t_[j](t); }

double SpecialUnity::eval_qstar(const std::vector<int>& i, int j,
                                const Vec& chart_pt) const {
  const int d = part_->chart().base_dim();
  Vec x = chart_pt.head(d);
  double t = f_cell(i, x) - chart_pt[d];
  double v = 1.0;
  for (int k = 0; k < d; ++k) v *= v_.eval_dim(k, i[k], x[k]);
  return u_of_t(j, t) * v;
}

double SpecialUnity::eval_q(const CellIndex& c, const Vec& chart_pt) const {
  const int n = part_->n();
  if (c.j < n - 1) return eval_qstar(c.i, c.j, chart_pt);
  // tail member: sum of layers n-1..N-1 = 1 - sum of the first n-1 layers
  const int d = part_->chart().base_dim();
  Vec x = chart_pt.head(d);
  double t = f_cell(c.i, x) - chart_pt[d];
  KahanSum partial;
  for (int k = 0; k < n - 1; ++k) partial.add(u_of_t(k, t));
  double v = 1.0;
  for (int k = 0; k < d; ++k) v *= v_.eval_dim(k, c.i[k], x[k]);
  return (1.0 - partial.value()) * v;
}

std::vector<double> SpecialUnity::eval_all(const Vec& chart_pt) const {
  const Chart& ch = part_->chart();
  const int d = ch.base_dim();
  const int n = part_->n();
  std::vector<double> out(part_->cell_count(), 0.0);
  Vec x = chart_pt.head(d);
  // per-dim v values once
  std::vector<std::vector<double>> vdim(d, std::vector<double>(n));
  for (int k = 0; k < d; ++k)
    for (int c = 0; c < n; ++c) vdim[k][c] = v_.eval_dim(k, c, x[k]);
  std::size_t bases = cell_centers_.size();
  for (std::size_t f = 0; f < bases; ++f) {
    std::vector<int> iv(d);
    std::size_t r = f;
    double v = 1.0;
    for (int k = 0; k < d; ++k) {
      iv[k] = int(r % n);
      r /= n;
      v *= vdim[k][iv[k]];
    }
    double t = f_cell(iv, x) - chart_pt[d];
    KahanSum partial;
    CellIndex c;
    c.i = iv;
    for (int j = 0; j < n - 1; ++j) {
      double uj = u_of_t(j, t);
      partial.add(uj);
      c.j = j;
      out[part_->flat_index(c)] = uj * v;
    }
    c.j = n - 1;
    out[part_->flat_index(c)] = (1.0 - partial.value()) * v;
  }
  return out;
}

Vec SpecialUnity::center(const CellIndex& c) const {
  const Chart& ch = part_->chart();
  const int d = ch.base_dim();
  const int n = part_->n();
  std::size_t f = 0;
  for (int k = d - 1; k >= 0; --k) f = f * n + c.i[k];
  const Vec& xi = cell_centers_[f];
  double mid = 0.5 * (part_->layer(c.j) + part_->layer(c.j + 1));
  Vec cp(d + 1);
  cp.head(d) = xi;
  cp[d] = ch.g(xi) - mid;
  return ch.to_world(cp);
}

int SpecialUnity::degree_bound() const {
  int udeg = u_.kernel_power * (u_.kernel_size - 1);
  return 2 * udeg + v_.degree_bound();
}

json SpecialUnity::to_json() const {
  json j;
  j["type"] = "special-unity";
  j["n"] = part_->n();
  j["N"] = part_->layer_count();
  j["ell"] = ell_;
  j["alpha"] = part_->alpha();
  j["M"] = M_;
  j["u_family"] = u_.to_json();
  j["v_family"] = v_.to_json();
  json cells = json::array();
  const Chart& ch = part_->chart();
  for (const auto& xi : cell_centers_) {
    json cj;
    cj["x_center"] = std::vector<double>(xi.data(), xi.data() + xi.size());
    cj["g"] = ch.g(xi);
    Vec gr = ch.grad_g(xi);
    cj["grad_g"] = std::vector<double>(gr.data(), gr.data() + gr.size());
    cells.push_back(cj);
  }
  j["paraboloids"] = cells;
  return j;
}

// ---------------------------------------------------------------------------

double GatePoly::operator()(const Vec& p) const {
  double v = 1.0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    double s = std::clamp(axes_[k].step(p[int(k)]), 0.0, 1.0);
    v *= boost::math::ibeta(axes_[k].k + 1, axes_[k].k + 1, s);
  }
  return v;
}

json GatePoly::to_json() const {
  json j;
  j["degree_bound"] = degree_;
  j["axes"] = json::array();
  for (const auto& a : axes_) {
    j["axes"].push_back(json{{"step", a.step.to_json()}, {"amplifier", a.k}});
  }
  return j;
}

GatePoly fast_decreasing(const Box& inner, double mu, double theta, int n,
                         const Box& reference) {
  const int D = int(inner.lo.size());
  if (!(mu > 0 && mu < 1) || !(theta > 0 && theta < 1))
    throw ParameterError("fast_decreasing: need mu, theta in (0,1)");
  const double eps = std::pow(theta, n) / (2.0 * D);
  GatePoly gate;
  gate.axes_.resize(D);
  gate.degree_ = 0;
  for (int k = 0; k < D; ++k) {
    const double rlo = reference.lo[k], rhi = reference.hi[k];
    auto unit = [&](double x) { return (2.0 * x - rlo - rhi) / (rhi - rlo); };
    const double a = unit(inner.lo[k]), b = unit(inner.hi[k]);
    if (a <= -1.0 || b >= 1.0)
      throw ParameterError("fast_decreasing: inner box not inside reference");
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double am = c - mu * h, bm = c + mu * h;
    // indicator band midway between the mu-box and the box, in theta coords
    const double xa = 0.5 * (a + am), xb = 0.5 * (b + bm);
    const double t_hi = std::acos(std::clamp(xa, -1.0, 1.0));  // arccos decreasing
    const double t_lo = std::acos(std::clamp(xb, -1.0, 1.0));
    double margin = std::min(
        {std::acos(std::clamp(a, -1.0, 1.0)) - t_hi,
         t_hi - std::acos(std::clamp(am, -1.0, 1.0)),
         std::acos(std::clamp(bm, -1.0, 1.0)) - t_lo,
         t_lo - std::acos(std::clamp(b, -1.0, 1.0))});
    if (margin <= 0) throw ParameterError("fast_decreasing: degenerate margins");
    int n1 = std::max(8, int(std::ceil(12.0 / margin)));
    int kamp = int(std::ceil((n * std::log(1.0 / theta) + std::log(2.0 * D)) / 0.32)) + 2;
    const int kpow = 3;  // kernel decay for the step
    bool ok = false;
    Polynomial1D step;
    for (int attempt = 0; attempt < 6 && !ok; ++attempt, n1 *= 2) {
      if (kpow * n1 > 20000) break;
      auto f = jackson_coeffs(n1, kpow);
      auto coef = angular_window_coeffs(f, t_lo, t_hi);
      step = Polynomial1D(rlo, rhi, std::move(coef));
      // verify on a dense sample of the reference interval
      ok = true;
      const int per = 4096;
      for (int i = 0; i <= per && ok; ++i) {
        double x = rlo + (rhi - rlo) * i / per;
        double u = unit(x);
        double s = step(x);
        if (s < -1e-9 || s > 1.0 + 1e-9) ok = false;
        if (u >= am && u <= bm && s < 0.85) ok = false;
        if ((u <= a || u >= b) && s > 0.15) ok = false;
      }
    }
    if (!ok)
      throw ParameterError("fast_decreasing: step degree budget exhausted");
    // amplifier: verify decay, doubling on failure
    for (int attempt = 0;; ++attempt, kamp *= 2) {
      if (attempt >= 6 || kamp > 2000000)
        throw ParameterError("fast_decreasing: amplifier degree budget exhausted");
      bool good = true;
      const int per = 4096;
      for (int i = 0; i <= per && good; ++i) {
        double x = rlo + (rhi - rlo) * i / per;
        double u = unit(x);
        double s = std::clamp(step(x), 0.0, 1.0);
        double g = boost::math::ibeta(kamp + 1, kamp + 1, s);
        if (u >= am && u <= bm && g < 1.0 - eps) good = false;
        if ((u <= a || u >= b) && g > eps) good = false;
      }
      if (good) break;
    }
    gate.axes_[k].step = step;
    gate.axes_[k].k = kamp;
    gate.degree_ += step.degree() * (2 * kamp + 1);
  }
  return gate;
}

// ---------------------------------------------------------------------------

std::size_t GlobalUnity::set_size(std::size_t s) const {
  if (s < chart_sets_.size()) return chart_sets_[s].family->count();
  return box_sets_[s - chart_sets_.size()].count();
}

double GlobalUnity::raw_member(std::size_t s, std::size_t m, const Vec& world) const {
  if (s < chart_sets_.size()) {
    const auto& cs = chart_sets_[s];
    Vec cp = cs.part->chart().to_chart(world);
    return cs.family->eval_q(cs.part->cell_at(m), cp);
  }
  return box_sets_[s - chart_sets_.size()].eval(m, world);
}

double GlobalUnity::chain(std::size_t s, const std::vector<double>& gate_vals) const {
  double c = (s == 0) ? 1.0 : gate_vals[s];
  for (std::size_t t = s + 1; t < set_count(); ++t) c *= 1.0 - gate_vals[t];
  return c;
}

GlobalUnity::GlobalUnity(const CompositeDomain& dom, int n, int ell, double theta,
                         double min_overlap)
    : dom_(&dom), n_(n), ell_(ell) {
  if (dom.charts().empty())
    throw ParameterError("global_unity: domain has no charts");
  // one layered family per chart; slab parameters are not used here, so m1
  // is pinned to 1 rather than derived
  for (const auto& ac : dom.charts()) {
    auto chart = std::make_shared<Chart>(ac.chart);
    std::shared_ptr<const CellPartition> part;
    std::shared_ptr<SpecialUnity> fam;
    std::string last_err;
    int ell1 = minimal_ell1(*chart);
    for (int bump = 0; bump < 8; ++bump) {
      try {
        part = std::make_shared<const CellPartition>(chart, n, ell1 + bump, 2, 1, 4.0);
        fam = std::make_shared<SpecialUnity>(part, ell);
        break;
      } catch (const ParameterError& e) {
        last_err = e.what();
        fam.reset();
      }
    }
    if (!fam)
      throw ParameterError("global_unity: chart family failed: " + last_err);
    chart_sets_.push_back({part, fam});
  }
  const std::size_t S = set_count();
  // chaining: consecutive sets must overlap in a ball of workable radius
  {
    Rng rng(20240817);
    auto region_margin = [&](std::size_t s, const Vec& p) -> double {
      const Chart& ch = chart_sets_[s].part->chart();
      Vec cp = ch.to_chart(p);
      const int d = ch.base_dim();
      double m = std::numeric_limits<double>::infinity();
      for (int k = 0; k < d; ++k) m = std::min(m, ch.b() - std::abs(cp[k]));
      double dep = ch.g(cp.head(d)) - cp[d];
      m = std::min(m, 1.0 - dep);
      m = std::min(m, dep + 1.0);  // allow points slightly above depth 0
      return m;
    };
    for (std::size_t s = 1; s < S; ++s) {
      double best = 0.0;
      for (int it = 0; it < 4000; ++it) {
        Vec p = dom.sample_inside(rng);
        double m = std::min(region_margin(s - 1, p), region_margin(s, p));
        best = std::max(best, m);
      }
      if (best < min_overlap)
        throw ParameterError("global_unity: consecutive sets overlap too thin");
    }
  }
  // gates: one per set s >= 1, shaped on the chart's attached box
  Box ref = dom.bounding_box().scaled(1.5);
  gates_.resize(S);
  for (std::size_t s = 1; s < S; ++s)
    gates_[s] = fast_decreasing(dom.charts()[s].q, kLambda0, theta, n, ref);
  // candidate centers, projected into the domain, merged to 1/n separation
  Vec anchor = dom.bounding_box().center();
  if (!dom.inside(anchor)) {
    Rng rng(97);
    anchor = dom.sample_inside(rng);
  }
  auto project_inside = [&](Vec c) {
    if (dom.inside(c)) return c;
    double lo = 0.0, hi = 1.0;  // c + t*(anchor - c)
    while (!dom.inside(c + hi * (anchor - c)) && hi < 1.0) hi = std::min(1.0, hi + 0.1);
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (dom.inside(c + mid * (anchor - c)))
        hi = mid;
      else
        lo = mid;
    }
    return Vec(c + std::min(1.0, hi + 1e-6) * (anchor - c));
  };
  std::vector<double> center_sqrt_bdist;
  const double sep = 1.0 / n;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t m = 0; m < set_size(s); ++m) {
      Vec c;
      if (s < chart_sets_.size())
        c = chart_sets_[s].family->center(chart_sets_[s].part->cell_at(m));
      else
        c = box_sets_[s - chart_sets_.size()].center(m);
      c = project_inside(c);
      double sb = std::sqrt(std::max(0.0, dom.boundary_distance(c)));
      // nearest existing center in the boundary metric
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        double rho = (members_[i].center - c).norm() +
                     std::abs(center_sqrt_bdist[i] - sb);
        if (rho < best) {
          best = rho;
          best_i = i;
        }
      }
      if (best < sep) {
        members_[best_i].pieces.push_back({int(s), m});
      } else {
        members_.push_back({c, {{int(s), m}}});
        center_sqrt_bdist.push_back(sb);
      }
    }
  }
}

double GlobalUnity::eval(std::size_t m, const Vec& world) const {
  const std::size_t S = set_count();
  std::vector<double> gv(S, 0.0);
  for (std::size_t s = 1; s < S; ++s) gv[s] = gates_[s](world);
  KahanSum acc;
  for (const auto& pc : members_[m].pieces)
    acc.add(raw_member(pc.set, pc.member, world) * chain(pc.set, gv));
  return acc.value();
}

std::vector<double> GlobalUnity::eval_all(const Vec& world) const {
  const std::size_t S = set_count();
  std::vector<double> gv(S, 0.0);
  for (std::size_t s = 1; s < S; ++s) gv[s] = gates_[s](world);
  // per-set raw values with shared subexpressions
  std::vector<std::vector<double>> raw(S);
  for (std::size_t s = 0; s < S; ++s) {
    if (s < chart_sets_.size()) {
      Vec cp = chart_sets_[s].part->chart().to_chart(world);
      raw[s] = chart_sets_[s].family->eval_all(cp);
    } else {
      const auto& bf = box_sets_[s - chart_sets_.size()];
      raw[s].resize(bf.count());
      for (std::size_t m = 0; m < bf.count(); ++m) raw[s][m] = bf.eval(m, world);
    }
    double c = chain(s, gv);
    for (double& v : raw[s]) v *= c;
  }
  std::vector<double> out(members_.size(), 0.0);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    KahanSum acc;
    for (const auto& pc : members_[m].pieces) acc.add(raw[pc.set][pc.member]);
    out[m] = acc.value();
  }
  return out;
}

int GlobalUnity::degree_bound() const {
  int base = 0;
  for (const auto& cs : chart_sets_) base = std::max(base, cs.family->degree_bound());
  for (const auto& bs : box_sets_) base = std::max(base, bs.degree_bound());
  int gates = 0;
  for (const auto& g : gates_) gates += g.degree_bound();
  return base + gates;
}

json GlobalUnity::to_json() const {
  json j;
  j["type"] = "global-unity";
  j["n"] = n_;
  j["ell"] = ell_;
  j["member_count"] = members_.size();
  j["degree_bound"] = degree_bound();
  j["sets"] = json::array();
  for (const auto& cs : chart_sets_) j["sets"].push_back(cs.family->to_json());
  for (const auto& bs : box_sets_) j["sets"].push_back(bs.to_json());
  j["gates"] = json::array();
  for (std::size_t s = 1; s < gates_.size(); ++s) j["gates"].push_back(gates_[s].to_json());
  json mem = json::array();
  for (const auto& m : members_) {
    json mj;
    mj["center"] = std::vector<double>(m.center.data(), m.center.data() + m.center.size());
    json pieces = json::array();
    for (const auto& pc : m.pieces) pieces.push_back(json{{"set", pc.set}, {"member", pc.member}});
    mj["pieces"] = pieces;
    mem.push_back(mj);
  }
  j["members"] = mem;
  return j;
}

MultiPolynomial patch_approximants(const MultiPolynomial& p1, const MultiPolynomial& p2,
                                   const MultiPolynomial& gate) {
  // R*P1 + (1-R)*P2 = P2 + R*(P1 - P2)
  return p2 + gate * (p1 - p2);
}

}  // namespace c2approx
