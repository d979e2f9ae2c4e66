#pragma once

#include "c2approx/poly.hpp"
#include "c2approx/sampling.hpp"
#include "c2approx/smoothness.hpp"

namespace c2approx {

/// Tensor-Chebyshev basis restricted to total degree, with per-column
/// scaling to unit grid norm.
struct BasisSpec {
  Box box;
  int degree = 0;
  std::vector<std::vector<int>> exps;  // graded lex, matches MultiPolynomial
  std::vector<double> col_scale;       // applied after evaluation

  int dim() const { return int(box.lo.size()); }
  std::size_t size() const { return exps.size(); }
  /// number of basis elements of total degree <= d
  std::size_t prefix(int d) const;
  /// row of basis values at a point (scaled)
  void eval_row(const Vec& p, double* out) const;
};

BasisSpec make_basis(const Box& box, int degree);

struct SolverConfig {
  int max_iter = 200;
  double rel_tol = 1e-8;
  double cond_warn = 1e12;
  bool quiet = false;
};

struct BestApproxResult {
  MultiPolynomial poly;
  double error = 0.0;
  int iterations = 0;
  double condition = 0.0;  // Gram condition number on the grid
  bool converged = true;
  int alternations = 0;  // minimax certificate, 1-D only
};

/// Discrete best approximation on explicit points: minimizes the weighted
/// l^p norm of f - P over Pi_n.  p = 2 direct orthogonalization; p = inf
/// Lawson iteration (1-D: Remez exchange on the grid); other p IRLS.
BestApproxResult best_approx_points(const std::vector<Vec>& pts,
                                    const std::vector<double>& wts,
                                    const std::vector<double>& fvals,
                                    const Box& box, int n, double p,
                                    const SolverConfig& cfg = {});

/// Same over a SampleGrid (box = domain bounding box); requires
/// grid size >= 2 * basis size.
BestApproxResult best_approx(const ScalarField& f, const SampleGrid& grid, int n,
                             double p, const SolverConfig& cfg = {});

/// Batched errors for increasing n (shared factorization for p = 2);
/// output is monotone nonincreasing.
std::vector<double> best_approx_sequence(const ScalarField& f,
                                         const SampleGrid& grid,
                                         const std::vector<int>& n_list, double p,
                                         const SolverConfig& cfg = {});

}  // namespace c2approx
