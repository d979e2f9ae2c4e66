#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace c2approx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point lies outside the domain it was required to be in.
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction parameter violates its admissibility constraint.
class ParameterError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed (rank deficiency, no convergence).
class SolverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compensated (Kahan) accumulator, so reductions are insensitive to order
/// at the 1e-12 level required of parallel map-reduce results.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Deterministic RNG wrapper; every stochastic routine takes an explicit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(eng_);
  }
  int uniform_int(int a, int b) {
    std::uniform_int_distribution<int> d(a, b);
    return d(eng_);
  }
  double normal() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(eng_);
  }
  Vec point_in_box(const Vec& lo, const Vec& hi) {
    Vec p(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
    return p;
  }
  Vec unit_vector(int dim) {
    Vec v(dim);
    double n = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n = v.norm();
    } while (n < 1e-12);
    return v / n;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Static partition of [0, count) over a fixed number of worker threads.
/// Each worker reduces independently; callers combine with KahanSum so the
/// result does not depend on the thread count.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

int default_thread_count();
void set_default_thread_count(int n);

double binomial(int n, int k);

}  // namespace c2approx
