#include "c2approx/mesh.hpp"

#include <cmath>
#include <sstream>

namespace c2approx {

Vec tangent_vector(const Chart& chart, const Vec& x, int j, bool normalized) {
  const int d = chart.base_dim();
  if (j < 0 || j >= d) throw ParameterError("tangent_vector: axis out of range");
  Vec xi = Vec::Zero(d + 1);
  xi[j] = 1.0;
  xi[d] = chart.grad_g(x)[j];
  if (normalized) xi /= xi.norm();
  return xi;
}

std::function<bool(const Vec&)> subgraph_set(const Chart& chart, double t, double A0) {
  double margin = A0 * t * t;
  return [&chart, margin](const Vec& world) {
    if (!chart.contains(world)) return false;
    return chart.essential_boundary_distance(world) >= margin;
  };
}

int minimal_ell1(const Chart& chart) {
  const int d = chart.base_dim();
  const double bound = 5.0 * d * (chart.max_abs_g() + chart.max_hess_norm());
  for (int l = 2; l <= 4096; ++l) {
    double s = std::sin(M_PI / (2.0 * l));
    if (1.0 / (2.0 * s * s) >= bound) return l;
  }
  throw ParameterError("minimal_ell1: no admissible ell1 <= 4096 (parameter too small)");
}

CellPartition::CellPartition(std::shared_ptr<const Chart> chart, int n, int ell1,
                             int m0, int m1, double A0)
    : chart_(std::move(chart)), n_(n), ell1_(ell1), m0_(m0), m1_(m1), A0_(A0) {
  if (n_ < 2) throw ParameterError("partition: n must be >= 2");
  if (ell1_ < 2) throw ParameterError("partition: ell1 must be >= 2");
  if (m0_ < 1 || m1_ < 1) throw ParameterError("partition: m0, m1 must be >= 1");
  const double s = std::sin(M_PI / (2.0 * ell1_));
  alpha_ = 1.0 / (2.0 * s * s);
  const int d = chart_->base_dim();
  const double bound = 5.0 * d * (chart_->max_abs_g() + chart_->max_hess_norm());
  if (alpha_ < bound)
    throw ParameterError("partition: ell1 too small for this chart (needs alpha >= " +
                         std::to_string(bound) + ")");
  const int N = ell1_ * n_;
  layers_.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    double sj = std::sin(j * M_PI / (2.0 * N));
    layers_[j] = 2.0 * alpha_ * sj * sj;
  }
  layers_[n_] = 1.0;  // exact by construction; pin against rounding
  const double b = chart_->b();
  M0_ = 8.0 * m0_ * m0_ * b * b * chart_->max_hess_norm() + A0_;
}

double CellPartition::knot(int i) const {
  const double b = chart_->b();
  return -b + 2.0 * b * i / n_;
}

double CellPartition::layer(int j) const { return layers_.at(j); }

double CellPartition::alpha_star(int j) const {
  if (j < 0) return 0.0;
  if (j > n_) return 1.0;
  return layers_[j];
}

std::size_t CellPartition::cell_count() const {
  std::size_t c = n_;  // depth layers
  for (int k = 0; k < chart_->base_dim(); ++k) c *= n_;
  return c;
}

CellIndex CellPartition::cell_at(std::size_t flat) const {
  CellIndex c;
  c.j = int(flat % n_);
  flat /= n_;
  c.i.resize(chart_->base_dim());
  for (int k = 0; k < chart_->base_dim(); ++k) {
    c.i[k] = int(flat % n_);
    flat /= n_;
  }
  return c;
}

std::size_t CellPartition::flat_index(const CellIndex& c) const {
  std::size_t f = 0;
  for (int k = chart_->base_dim() - 1; k >= 0; --k) f = f * n_ + c.i[k];
  return f * n_ + c.j;
}

CellIndex CellPartition::locate(const Vec& world) const {
  Vec cp = chart_->to_chart(world);
  const int d = chart_->base_dim();
  const double b = chart_->b();
  CellIndex c;
  c.i.resize(d);
  for (int k = 0; k < d; ++k) {
    if (cp[k] < -b || cp[k] > b) throw DomainError("locate: point outside chart base");
    c.i[k] = std::min(n_ - 1, int((cp[k] + b) / (2.0 * b / n_)));
  }
  double dep = chart_->g(cp.head(d)) - cp[d];
  if (dep < 0.0 || dep > 1.0)
    throw DomainError("locate: point depth outside partitioned range [0,1]");
  int lo = 0, hi = n_;  // binary search over layers 0..n
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (dep >= layers_[mid])
      lo = mid;
    else
      hi = mid;
  }
  c.j = std::min(lo, n_ - 1);
  return c;
}

Box CellPartition::base_cell(const std::vector<int>& i) const {
  const int d = chart_->base_dim();
  Vec lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = knot(i[k]);
    hi[k] = knot(i[k] + 1);
  }
  return Box{lo, hi};
}

Box CellPartition::base_cell_ext(const std::vector<int>& i) const {
  const int d = chart_->base_dim();
  const double b = chart_->b();
  Vec lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = std::max(-b, knot(i[k] - m0_));
    hi[k] = std::min(b, knot(i[k] + 1 + m0_));
  }
  return Box{lo, hi};
}

Vec CellPartition::x_star(const std::vector<int>& i) const {
  return base_cell_ext(i).center();
}

double CellPartition::tangent_plane(const std::vector<int>& i, const Vec& x) const {
  Vec xs = x_star(i);
  return chart_->g(xs) + chart_->grad_g(xs).dot(x - xs);
}

double CellPartition::measure(const CellIndex& c) const {
  double m = layers_[c.j + 1] - layers_[c.j];
  for (int k = 0; k < chart_->base_dim(); ++k) m *= knot(c.i[k] + 1) - knot(c.i[k]);
  return m;
}

bool CellPartition::in_extended_cell(const CellIndex& c, const Vec& chart_pt) const {
  const int d = chart_->base_dim();
  Box ext = base_cell_ext(c.i);
  for (int k = 0; k < d; ++k)
    if (chart_pt[k] < ext.lo[k] || chart_pt[k] > ext.hi[k]) return false;
  double dep = chart_->g(chart_pt.head(d)) - chart_pt[d];
  return dep >= alpha_star(c.j - m1_) && dep <= alpha_star(c.j + m1_);
}

bool CellPartition::Slab::contains_chart(const Vec& chart_pt) const {
  const Eigen::Index d = base.lo.size();
  for (Eigen::Index k = 0; k < d; ++k)
    if (chart_pt[k] < base.lo[k] || chart_pt[k] > base.hi[k]) return false;
  double h = g_star + grad_star.dot(chart_pt.head(d) - x_star);
  double off = chart_pt[d] - h;
  return off >= c_lo && off <= c_hi;
}

std::pair<CellPartition::Slab, CellPartition::Slab> CellPartition::slabs(
    const CellIndex& c) const {
  Slab inner, outer;
  inner.base = outer.base = base_cell_ext(c.i);
  inner.x_star = outer.x_star = x_star(c.i);
  inner.g_star = outer.g_star = chart_->g(inner.x_star);
  inner.grad_star = outer.grad_star = chart_->grad_g(inner.x_star);
  const double shift = M0_ / double(n_ * n_);
  const double a_lo = alpha_star(c.j - m1_);
  const double a_hi = alpha_star(c.j + m1_);
  // y - H between -(a_hi) and -(a_lo), shrunk (inner) or widened (outer)
  inner.c_lo = -a_hi + shift;
  inner.c_hi = -a_lo - shift;
  outer.c_lo = -a_hi - shift;
  outer.c_hi = -a_lo + shift;
  if (inner.c_lo >= inner.c_hi)
    throw ParameterError("empty slab at cell j=" + std::to_string(c.j) +
                         " (increase m1 or n)");
  return {inner, outer};
}

std::string CellPartition::to_csv() const {
  std::ostringstream os;
  const int d = chart_->base_dim();
  os << "flat,j";
  for (int k = 0; k < d; ++k) os << ",i" << k;
  for (int k = 0; k < d; ++k) os << ",x_lo" << k << ",x_hi" << k;
  os << ",depth_lo,depth_hi,measure\n";
  os.precision(12);
  for (std::size_t f = 0; f < cell_count(); ++f) {
    CellIndex c = cell_at(f);
    Box bx = base_cell(c.i);
    os << f << "," << c.j;
    for (int k = 0; k < d; ++k) os << "," << c.i[k];
    for (int k = 0; k < d; ++k) os << "," << bx.lo[k] << "," << bx.hi[k];
    os << "," << layers_[c.j] << "," << layers_[c.j + 1] << "," << measure(c) << "\n";
  }
  return os.str();
}

CellPartition build_partition(std::shared_ptr<const Chart> chart, int n, int ell1,
                              int m0, int m1, double A0) {
  if (ell1 < 0) ell1 = minimal_ell1(*chart);
  if (m0 < 0) m0 = 2;
  const double s = std::sin(M_PI / (2.0 * ell1));
  const double alpha = 1.0 / (2.0 * s * s);
  const double b = chart->b();
  if (m1 < 0) {
    double need = 32.0 * ell1 * ell1 * m0 * m0 * b * b * chart->max_hess_norm() / alpha;
    m1 = std::max(1, int(std::ceil(need)));
    // grow until every inner slab is nonempty at this n
    for (; m1 <= ell1 * n; ++m1) {
      CellPartition cand(chart, n, ell1, m0, m1, A0);
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        double span = cand.alpha_star(j + m1) - cand.alpha_star(j - m1);
        ok = span > 2.0 * cand.M0() / double(n * n);
      }
      if (ok) return cand;
    }
    throw ParameterError("build_partition: no m1 yields nonempty slabs (n too small)");
  }
  return CellPartition(chart, n, ell1, m0, m1, A0);
}

}  // namespace c2approx
