#pragma once

#include <vector>

#include <json.hpp>

#include "c2approx/common.hpp"
#include "c2approx/geometry.hpp"

namespace c2approx {

/// Fill out[0..n] with T_0(t) .. T_n(t).
void cheb_values(double t, int n, double* out);

/// Univariate polynomial in the Chebyshev basis on an interval.
class Polynomial1D {
 public:
  Polynomial1D() : lo_(-1.0), hi_(1.0) {}
  Polynomial1D(double lo, double hi, std::vector<double> coef)
      : lo_(lo), hi_(hi), coef_(std::move(coef)) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& coef() const { return coef_; }
  int degree() const { return coef_.empty() ? 0 : int(coef_.size()) - 1; }

  double operator()(double x) const;
  double map_to_unit(double x) const { return (2.0 * x - lo_ - hi_) / (hi_ - lo_); }

  Polynomial1D derivative() const;

  /// Largest index with |coef| above tol (degree accounting).
  int effective_degree(double tol = 1e-12) const;

  json to_json() const;
  static Polynomial1D from_json(const json& j);

 private:
  double lo_, hi_;
  std::vector<double> coef_;  // sum coef_[k] * T_k(mapped x)
};

/// Dense multivariate polynomial over a box, tensor-Chebyshev basis
/// restricted to total degree <= n, exponents in graded lexicographic order.
class MultiPolynomial {
 public:
  MultiPolynomial() = default;
  MultiPolynomial(Box domain, int degree);
  MultiPolynomial(Box domain, int degree, std::vector<double> coef);

  int dim() const { return int(domain_.lo.size()); }
  int degree() const { return degree_; }
  const Box& domain() const { return domain_; }
  const std::vector<double>& coef() const { return coef_; }
  std::vector<double>& coef() { return coef_; }
  const std::vector<std::vector<int>>& exponents() const { return exps_; }

  double operator()(const Vec& p) const;

  MultiPolynomial derivative(int axis) const;
  MultiPolynomial operator+(const MultiPolynomial& o) const;
  MultiPolynomial operator-(const MultiPolynomial& o) const;
  MultiPolynomial operator*(const MultiPolynomial& o) const;
  MultiPolynomial scaled(double s) const;

  /// Max |coef| over basis elements of total degree > d.
  double coefficient_tail(int d) const;

  static std::vector<std::vector<int>> make_exponents(int dim, int degree);
  static MultiPolynomial random(const Box& domain, int degree, std::uint64_t seed);
  static MultiPolynomial constant(const Box& domain, double value);

  json to_json() const;
  static MultiPolynomial from_json(const json& j);

 private:
  Box domain_;
  int degree_ = 0;
  std::vector<std::vector<int>> exps_;
  std::vector<double> coef_;
};

}  // namespace c2approx
