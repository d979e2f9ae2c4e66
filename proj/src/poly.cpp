#include "c2approx/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace c2approx {

void cheb_values(double t, int n, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = t;
  for (int k = 2; k <= n; ++k) out[k] = 2.0 * t * out[k - 1] - out[k - 2];
}

double Polynomial1D::operator()(double x) const {
  if (coef_.empty()) return 0.0;
  const double t = map_to_unit(x);
  const int m = int(coef_.size());
  if (m == 1) return coef_[0];
  // Clenshaw recurrence
  double b1 = 0.0, b2 = 0.0;
  const double t2 = 2.0 * t;
  for (int k = m - 1; k >= 1; --k) {
    double b0 = coef_[k] + t2 * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coef_[0] + t * b1 - b2;
}

Polynomial1D Polynomial1D::derivative() const {
  const int m = int(coef_.size());
  if (m <= 1) return Polynomial1D(lo_, hi_, {0.0});
  std::vector<double> b(m, 0.0);  // derivative coefficients on [-1,1]
  std::vector<double> work(m + 2, 0.0);
  for (int k = m - 1; k >= 1; --k)
    work[k - 1] = work[k + 1] + 2.0 * k * coef_[k];
  work[0] *= 0.5;
  b.assign(work.begin(), work.begin() + (m - 1));
  const double scale = 2.0 / (hi_ - lo_);
  for (double& c : b) c *= scale;
  return Polynomial1D(lo_, hi_, std::move(b));
}

int Polynomial1D::effective_degree(double tol) const {
  for (int k = int(coef_.size()) - 1; k >= 0; --k)
    if (std::abs(coef_[k]) > tol) return k;
  return 0;
}

json Polynomial1D::to_json() const {
  return json{{"basis", "chebyshev"}, {"interval", {lo_, hi_}}, {"coef", coef_}};
}

Polynomial1D Polynomial1D::from_json(const json& j) {
  return Polynomial1D(j.at("interval")[0].get<double>(), j.at("interval")[1].get<double>(),
                      j.at("coef").get<std::vector<double>>());
}

std::vector<std::vector<int>> MultiPolynomial::make_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(dim, 0);
  // enumerate |a| <= degree grouped by total degree, lexicographic inside
  for (int total = 0; total <= degree; ++total) {
    std::function<void(int, int)> gen = [&](int pos, int remaining) {
      if (pos == dim - 1) {
        a[pos] = remaining;
        out.push_back(a);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        a[pos] = k;
        gen(pos + 1, remaining - k);
      }
    };
    gen(0, total);
  }
  return out;
}

MultiPolynomial::MultiPolynomial(Box domain, int degree)
    : domain_(std::move(domain)),
      degree_(degree),
      exps_(make_exponents(int(domain_.lo.size()), degree)),
      coef_(exps_.size(), 0.0) {}

MultiPolynomial::MultiPolynomial(Box domain, int degree, std::vector<double> coef)
    : domain_(std::move(domain)),
      degree_(degree),
      exps_(make_exponents(int(domain_.lo.size()), degree)),
      coef_(std::move(coef)) {
  if (coef_.size() != exps_.size())
    throw ParameterError("MultiPolynomial: coefficient count mismatch");
}

double MultiPolynomial::operator()(const Vec& p) const {
  const int D = dim();
  // per-dimension Chebyshev values
  thread_local std::vector<double> tv;
  tv.resize(std::size_t(D) * (degree_ + 1));
  for (int j = 0; j < D; ++j) {
    double t = (2.0 * p[j] - domain_.lo[j] - domain_.hi[j]) / (domain_.hi[j] - domain_.lo[j]);
    cheb_values(t, degree_, tv.data() + std::size_t(j) * (degree_ + 1));
  }
  KahanSum s;
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    if (coef_[i] == 0.0) continue;
    double term = coef_[i];
    for (int j = 0; j < D; ++j)
      term *= tv[std::size_t(j) * (degree_ + 1) + exps_[i][j]];
    s.add(term);
  }
  return s.value();
}

MultiPolynomial MultiPolynomial::derivative(int axis) const {
  MultiPolynomial out(domain_, degree_);
  std::map<std::vector<int>, std::size_t> pos;
  for (std::size_t i = 0; i < exps_.size(); ++i) pos[exps_[i]] = i;
  const double scale = 2.0 / (domain_.hi[axis] - domain_.lo[axis]);
  // group coefficients along `axis` with the other exponents fixed
  std::map<std::vector<int>, std::vector<double>> slices;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    std::vector<int> key = exps_[i];
    int k = key[axis];
    key[axis] = -1;
    auto& sl = slices[key];
    if (int(sl.size()) <= k) sl.resize(k + 1, 0.0);
    sl[k] = coef_[i];
  }
  for (auto& [key, sl] : slices) {
    const int m = int(sl.size());
    if (m <= 1) continue;
    std::vector<double> work(m + 2, 0.0);
    for (int k = m - 1; k >= 1; --k) work[k - 1] = work[k + 1] + 2.0 * k * sl[k];
    work[0] *= 0.5;
    for (int k = 0; k < m - 1; ++k) {
      if (work[k] == 0.0) continue;
      std::vector<int> a = key;
      a[axis] = k;
      out.coef_[pos.at(a)] += scale * work[k];
    }
  }
  return out;
}

MultiPolynomial MultiPolynomial::operator+(const MultiPolynomial& o) const {
  int n = std::max(degree_, o.degree_);
  MultiPolynomial out(domain_, n);
  std::map<std::vector<int>, std::size_t> pos;
  for (std::size_t i = 0; i < out.exps_.size(); ++i) pos[out.exps_[i]] = i;
  for (std::size_t i = 0; i < exps_.size(); ++i) out.coef_[pos.at(exps_[i])] += coef_[i];
  for (std::size_t i = 0; i < o.exps_.size(); ++i) out.coef_[pos.at(o.exps_[i])] += o.coef_[i];
  return out;
}

MultiPolynomial MultiPolynomial::operator-(const MultiPolynomial& o) const {
  return *this + o.scaled(-1.0);
}

MultiPolynomial MultiPolynomial::operator*(const MultiPolynomial& o) const {
  const int D = dim();
  MultiPolynomial out(domain_, degree_ + o.degree_);
  std::map<std::vector<int>, std::size_t> pos;
  for (std::size_t i = 0; i < out.exps_.size(); ++i) pos[out.exps_[i]] = i;
  // per-dimension product rule T_i T_j = (T_{i+j} + T_{|i-j|})/2, expanded
  // over the 2^D sign choices
  std::vector<int> a(D);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (coef_[i] == 0.0) continue;
    for (std::size_t j = 0; j < o.exps_.size(); ++j) {
      if (o.coef_[j] == 0.0) continue;
      for (int mask = 0; mask < (1 << D); ++mask) {
        double w = coef_[i] * o.coef_[j];
        for (int k = 0; k < D; ++k) {
          a[k] = (mask >> k) & 1 ? std::abs(exps_[i][k] - o.exps_[j][k])
                                 : exps_[i][k] + o.exps_[j][k];
          w *= 0.5;
        }
        out.coef_[pos.at(a)] += w;
      }
    }
  }
  return out;
}

MultiPolynomial MultiPolynomial::scaled(double s) const {
  MultiPolynomial out = *this;
  for (double& c : out.coef_) c *= s;
  return out;
}

double MultiPolynomial::coefficient_tail(int d) const {
  double m = 0.0;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    int total = 0;
    for (int e : exps_[i]) total += e;
    if (total > d) m = std::max(m, std::abs(coef_[i]));
  }
  return m;
}

MultiPolynomial MultiPolynomial::random(const Box& domain, int degree,
                                        std::uint64_t seed) {
  MultiPolynomial out(domain, degree);
  Rng rng(seed);
  for (double& c : out.coef_) c = rng.uniform(-1.0, 1.0);
  return out;
}

MultiPolynomial MultiPolynomial::constant(const Box& domain, double value) {
  MultiPolynomial out(domain, 0);
  out.coef_[0] = value;
  return out;
}

json MultiPolynomial::to_json() const {
  return json{{"basis", "tensor-chebyshev-total-degree"},
              {"domain", domain_.to_json()},
              {"degree", degree_},
              {"coef", coef_}};
}

MultiPolynomial MultiPolynomial::from_json(const json& j) {
  auto dj = j.at("domain");
  auto lov = dj.at("lo").get<std::vector<double>>();
  auto hiv = dj.at("hi").get<std::vector<double>>();
  Box b{Eigen::Map<Vec>(lov.data(), lov.size()), Eigen::Map<Vec>(hiv.data(), hiv.size())};
  return MultiPolynomial(b, j.at("degree").get<int>(), j.at("coef").get<std::vector<double>>());
}

}  // namespace c2approx
