#include "c2approx/bestapprox.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace c2approx {

std::size_t BasisSpec::prefix(int d) const {
  std::size_t k = 0;
  for (const auto& e : exps) {
    if (std::accumulate(e.begin(), e.end(), 0) > d) break;
    ++k;
  }
  return k;
}

void BasisSpec::eval_row(const Vec& p, double* out) const {
  int D = dim();
  thread_local std::vector<std::vector<double>> tv;
  tv.assign(D, {});
  for (int k = 0; k < D; ++k) {
    tv[k].resize(degree + 1);
    double t = (2.0 * p[k] - box.lo[k] - box.hi[k]) / (box.hi[k] - box.lo[k]);
    cheb_values(t, degree, tv[k].data());
  }
  for (std::size_t c = 0; c < exps.size(); ++c) {
    double v = 1.0;
    for (int k = 0; k < D; ++k) v *= tv[k][exps[c][k]];
    out[c] = v * col_scale[c];
  }
}

BasisSpec make_basis(const Box& box, int degree) {
  BasisSpec bs;
  bs.box = box;
  bs.degree = degree;
  bs.exps = MultiPolynomial::make_exponents(int(box.lo.size()), degree);
  bs.col_scale.assign(bs.exps.size(), 1.0);
  return bs;
}

namespace {

// raw (unscaled-column) design matrix
Mat design_matrix(const BasisSpec& bs, const std::vector<Vec>& pts) {
  Mat A(pts.size(), bs.size());
  std::vector<double> row(bs.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bs.eval_row(pts[i], row.data());
    for (std::size_t c = 0; c < bs.size(); ++c) A(i, c) = row[c];
  }
  return A;
}

struct Factorization {
  Mat Q;  // orthonormal columns spanning graded prefixes
  Mat R;  // upper triangular, A = Q R (after column scaling)
  Vec scale;
  double condition = 0.0;  // Gram condition (cond(R)^2)
};

// modified Gram-Schmidt with reorthogonalization; columns in graded order so
// every prefix spans the corresponding total-degree space
Factorization factorize(Mat A, const SolverConfig& cfg) {
  Eigen::Index m = A.rows(), K = A.cols();
  Factorization fac;
  fac.scale = Vec::Ones(K);
  for (Eigen::Index c = 0; c < K; ++c) {
    double nrm = A.col(c).norm();
    if (nrm < 1e-300) throw SolverError("best_approx: zero basis column");
    fac.scale[c] = 1.0 / nrm;
    A.col(c) *= fac.scale[c];
  }
  fac.Q = Mat(m, K);
  fac.R = Mat::Zero(K, K);
  for (Eigen::Index c = 0; c < K; ++c) {
    Vec v = A.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < c; ++j) {
        double proj = fac.Q.col(j).dot(v);
        fac.R(j, c) += proj;
        v -= proj * fac.Q.col(j);
      }
    }
    double nrm = v.norm();
    // columns enter normalized, so nrm is the sine of the angle to the span
    // of the previous columns; reorthogonalization keeps Q orthonormal even
    // for tiny angles, so only outright dependence is fatal
    if (nrm < 1e-14) throw SolverError("best_approx: rank-deficient design (grid too small or degenerate)");
    fac.R(c, c) = nrm;
    fac.Q.col(c) = v / nrm;
  }
  Eigen::JacobiSVD<Mat> svd(fac.R);
  double smin = svd.singularValues()(K - 1), smax = svd.singularValues()(0);
  double cnd = smax / std::max(smin, 1e-300);
  fac.condition = cnd * cnd;  // Gram = R^T R
  if (fac.condition > cfg.cond_warn && !cfg.quiet)
    std::cerr << "best_approx: Gram condition " << fac.condition
              << " exceeds warning threshold\n";
  return fac;
}

// polynomial from prefix coefficients in the factorized basis
MultiPolynomial assemble(const BasisSpec& bs, const Factorization& fac,
                         const Vec& gamma, std::size_t K) {
  // solve R c = gamma on the leading K x K block
  Mat Rk = fac.R.topLeftCorner(K, K);
  Vec g = gamma.head(K);
  Vec c = Rk.triangularView<Eigen::Upper>().solve(g);
  std::vector<double> coef(bs.size(), 0.0);
  for (std::size_t k = 0; k < K; ++k)
    coef[k] = c[k] * fac.scale[k] * bs.col_scale[k];
  MultiPolynomial poly(bs.box, bs.degree);
  poly.coef() = coef;
  return poly;
}

// weighted LS on the orthonormalized columns: min sum d_i (f_i - (Q g)_i)^2
Vec weighted_solve(const Mat& Q, const Vec& f, const Vec& d, std::size_t K) {
  Mat G = Q.leftCols(K).transpose() * d.asDiagonal() * Q.leftCols(K);
  Vec rhs = Q.leftCols(K).transpose() * (d.asDiagonal() * f);
  Eigen::LDLT<Mat> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("best_approx: weighted normal equations failed");
  return ldlt.solve(rhs);
}

int count_alternations(const std::vector<Vec>& pts, const Vec& r, double err,
                       double tol) {
  // 1-D: sort by coordinate, count sign alternations among near-extremal pts
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  int alt = 0, last = 0;
  for (std::size_t i : order) {
    if (std::abs(r[i]) < err - tol) continue;
    int s = r[i] >= 0 ? 1 : -1;
    if (last == 0 || s != last) {
      ++alt;
      last = s;
    }
  }
  return alt;
}

// discrete Remez exchange on a 1-D point set
BestApproxResult remez_1d(const BasisSpec& bs, const Factorization& fac,
                          const std::vector<Vec>& pts, const Vec& fv, int n,
                          const SolverConfig& cfg) {
  std::size_t m = pts.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  std::size_t K = bs.prefix(n);
  std::size_t refs = K + 1;  // n + 2 for a full 1-D basis
  if (m < refs) throw SolverError("best_approx: grid too small for exchange");
  std::vector<std::size_t> ref(refs);
  for (std::size_t i = 0; i < refs; ++i)
    ref[i] = order[(i * (m - 1)) / (refs - 1)];

  Mat Araw = design_matrix(bs, pts);
  BestApproxResult res;
  double scale = fv.cwiseAbs().maxCoeff() + 1e-300;
  Vec coef_ref;
  for (int it = 0; it < cfg.max_iter; ++it) {
    // levelled system: sum_k c_k B(x_i, k) + (-1)^i h = f(x_i)
    Mat S(refs, refs);
    Vec rhs(refs);
    for (std::size_t i = 0; i < refs; ++i) {
      for (std::size_t k = 0; k < K; ++k) S(i, k) = Araw(ref[i], k);
      S(i, K) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs[i] = fv[ref[i]];
    }
    Vec sol = S.colPivHouseholderQr().solve(rhs);
    coef_ref = sol.head(K);
    double h = std::abs(sol[K]);
    Vec r = fv - Araw.leftCols(K) * coef_ref;
    Eigen::Index worst;
    double rmax = r.cwiseAbs().maxCoeff(&worst);
    res.iterations = it + 1;
    if (rmax - h <= 1e-12 * scale) {
      res.converged = true;
      res.error = rmax;
      res.alternations = count_alternations(pts, r, rmax, 1e-6 * std::max(1.0, rmax));
      break;
    }
    // single-point exchange preserving alternation
    double xw = pts[std::size_t(worst)][0];
    int sw = r[worst] >= 0 ? 1 : -1;
    bool placed = false;
    for (std::size_t i = 0; i < refs; ++i) {
      double xi = pts[ref[i]][0];
      int si = r[ref[i]] >= 0 ? 1 : -1;
      bool in_slot = (i == 0 || pts[ref[i - 1]][0] < xw) &&
                     (i + 1 == refs || xw < pts[ref[i + 1]][0]);
      (void)xi;
      if (in_slot && si == sw) {
        ref[i] = std::size_t(worst);
        placed = true;
        break;
      }
    }
    if (!placed) {
      // outside the reference range: shift the whole set
      if (xw < pts[ref[0]][0]) {
        if ((r[ref[0]] >= 0 ? 1 : -1) == sw) {
          ref[0] = std::size_t(worst);
        } else {
          for (std::size_t i = refs - 1; i > 0; --i) ref[i] = ref[i - 1];
          ref[0] = std::size_t(worst);
        }
      } else {
        if ((r[ref[refs - 1]] >= 0 ? 1 : -1) == sw) {
          ref[refs - 1] = std::size_t(worst);
        } else {
          for (std::size_t i = 0; i + 1 < refs; ++i) ref[i] = ref[i + 1];
          ref[refs - 1] = std::size_t(worst);
        }
      }
    }
    res.error = rmax;
    res.converged = false;
  }
  // translate to MultiPolynomial (coefficients in scaled-column basis)
  std::vector<double> coef(bs.size(), 0.0);
  for (std::size_t k = 0; k < K; ++k) coef[k] = coef_ref[k] * bs.col_scale[k];
  MultiPolynomial poly(bs.box, bs.degree);
  poly.coef() = coef;
  res.poly = std::move(poly);
  res.condition = fac.condition;
  if (res.alternations == 0) {
    Vec r = fv - Araw.leftCols(K) * coef_ref;
    res.alternations =
        count_alternations(pts, r, res.error, 1e-6 * std::max(1.0, res.error));
  }
  return res;
}

}  // namespace

BestApproxResult best_approx_points(const std::vector<Vec>& pts,
                                    const std::vector<double>& wts,
                                    const std::vector<double>& fvals,
                                    const Box& box, int n, double p,
                                    const SolverConfig& cfg) {
  if (pts.empty()) throw SolverError("best_approx: empty point set");
  BasisSpec bs = make_basis(box, n);
  std::size_t K = bs.size();
  if (pts.size() < K)
    throw SolverError("best_approx: fewer points than basis elements");
  Vec fv = Eigen::Map<const Vec>(fvals.data(), fvals.size());
  Vec w = Eigen::Map<const Vec>(wts.data(), wts.size());
  double scale = fv.cwiseAbs().maxCoeff() + 1e-300;

  Mat A = design_matrix(bs, pts);
  Factorization fac = factorize(A, cfg);

  if (std::isinf(p) && bs.dim() == 1) return remez_1d(bs, fac, pts, fv, n, cfg);

  BestApproxResult res;
  res.condition = fac.condition;

  auto lp_err = [&](const Vec& r) {
    if (std::isinf(p)) return r.cwiseAbs().maxCoeff();
    KahanSum s;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      s.add(w[i] * std::pow(std::abs(r[i]), p));
    return std::pow(s.value(), 1.0 / p);
  };

  if (p == 2.0) {
    Vec d = w;
    Vec gamma = weighted_solve(fac.Q, fv, d, K);
    res.poly = assemble(bs, fac, gamma, K);
    res.error = lp_err(fv - fac.Q.leftCols(K) * gamma);
    res.iterations = 1;
    return res;
  }

  // IRLS: Lawson for p = inf, p-weights otherwise; best iterate retained
  Vec d = std::isinf(p) ? Vec(Vec::Ones(fv.size()) / double(fv.size())) : w;
  double eps = 1e-10 * scale;
  double prev = std::numeric_limits<double>::infinity();
  double best_err = std::numeric_limits<double>::infinity();
  Vec best_gamma;
  res.converged = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    Vec gamma = weighted_solve(fac.Q, fv, d, K);
    Vec r = fv - fac.Q.leftCols(K) * gamma;
    double err = lp_err(r);
    res.iterations = it + 1;
    if (err < best_err) {
      best_err = err;
      best_gamma = gamma;
    }
    if (std::abs(prev - err) <= cfg.rel_tol * std::max(err, 1e-300)) {
      res.converged = true;
      break;
    }
    prev = err;
    if (std::isinf(p)) {
      // Lawson update
      for (Eigen::Index i = 0; i < d.size(); ++i) d[i] *= std::abs(r[i]) + eps;
      d /= d.sum();
    } else {
      for (Eigen::Index i = 0; i < d.size(); ++i)
        d[i] = w[i] * std::pow(std::abs(r[i]) + eps, p - 2.0);
    }
  }
  res.poly = assemble(bs, fac, best_gamma, K);
  res.error = best_err;
  if (std::isinf(p) && bs.dim() == 1) {
    Vec r = fv - fac.Q.leftCols(K) * best_gamma;
    res.alternations =
        count_alternations(pts, r, best_err, 1e-6 * std::max(1.0, best_err));
  }
  return res;
}

BestApproxResult best_approx(const ScalarField& f, const SampleGrid& grid, int n,
                             double p, const SolverConfig& cfg) {
  BasisSpec bs = make_basis(grid.domain().bounding_box(), n);
  if (grid.size() < 2 * bs.size())
    throw SolverError("best_approx: grid size below twice the basis size");
  std::vector<double> fv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fv[i] = f(grid.point(i));
  return best_approx_points(grid.points(), grid.weights(), fv,
                            grid.domain().bounding_box(), n, p, cfg);
}

std::vector<double> best_approx_sequence(const ScalarField& f,
                                         const SampleGrid& grid,
                                         const std::vector<int>& n_list, double p,
                                         const SolverConfig& cfg) {
  std::vector<double> out(n_list.size(), 0.0);
  if (n_list.empty()) return out;
  int n_max = *std::max_element(n_list.begin(), n_list.end());

  if (p == 2.0) {
    // one factorization at n_max; prefix residuals give every smaller n
    BasisSpec bs = make_basis(grid.domain().bounding_box(), n_max);
    if (grid.size() < 2 * bs.size())
      throw SolverError("best_approx: grid size below twice the basis size");
    Vec fv(grid.size());
    Vec w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      fv[i] = f(grid.point(i));
      w[i] = grid.weight(i);
    }
    Mat A = design_matrix(bs, grid.points());
    // weighted inner product: orthogonalize sqrt(w)-scaled rows
    Vec sw = w.cwiseSqrt();
    Mat B = sw.asDiagonal() * A;
    Factorization fac = factorize(std::move(B), cfg);
    Vec r = sw.asDiagonal() * fv;
    std::vector<double> err_at_prefix(bs.size() + 1);
    err_at_prefix[0] = r.norm();
    for (std::size_t k = 0; k < bs.size(); ++k) {
      double proj = fac.Q.col(k).dot(r);
      r -= proj * fac.Q.col(k);
      err_at_prefix[k + 1] = r.norm();
    }
    for (std::size_t t = 0; t < n_list.size(); ++t)
      out[t] = err_at_prefix[bs.prefix(n_list[t])];
  } else {
    parallel_for(n_list.size(), 0, [&](std::size_t t) {
      out[t] = best_approx(f, grid, n_list[t], p, cfg).error;
    });
    // enforce monotone nonincreasing output (larger space can only help)
    for (std::size_t t = 1; t < out.size(); ++t)
      out[t] = std::min(out[t], out[t - 1]);
  }
  return out;
}

}  // namespace c2approx
