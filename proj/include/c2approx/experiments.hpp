#pragma once

#include "c2approx/bestapprox.hpp"
#include "c2approx/unity.hpp"

namespace c2approx {

struct ExperimentConfig {
  std::string domain = "disk";
  GridMode mode = GridMode::BoundaryLayered;
  int resolution = 20;
  std::uint64_t seed = 1234;
  double ratio_bound = 10.0;
  int threads = 0;
  ModulusOptions modulus;  // cheapened defaults, see make_experiment_config
  SolverConfig solver;
  json to_json() const;
};

/// Defaults tuned for the experiment sweeps (coarser nets than the
/// module-level defaults).
ExperimentConfig make_experiment_config();

struct TableRow {
  std::string f;
  double x = 0.0;  // n or t
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  bool degenerate = false;
};

struct Table {
  std::string experiment;
  std::vector<TableRow> rows;
  json meta;

  double max_ratio() const;
  double min_ratio() const;
  /// per-f max/min ratio over nondegenerate rows <= bound
  bool bounded(double bound) const;
};

/// Fixed test-function suite (name, field) in the given ambient dimension.
std::vector<std::pair<std::string, ScalarField>> test_suite(int dim);

/// E_n(f)_p vs omega^r(f, 1/n)_p across the suite.
Table run_jackson(const CompositeDomain& dom, int r, double p,
                  const std::vector<int>& n_list, const ExperimentConfig& cfg);

/// omega^r(f,1/n)_p and tau_r(f,1/n)_{p,p} vs the weighted sum
/// n^{-r} sum_{j<=n} (j+1)^{r-1} E_j(f)_p.
Table run_inverse(const CompositeDomain& dom, int r, double p,
                  const std::vector<int>& n_list, const ExperimentConfig& cfg);

/// omega^r(f,t)_p / tau_r(f, A t)_{p,q} over a t sweep.
Table run_tau_compare(const CompositeDomain& dom, int r, double p, double q,
                      const std::vector<double>& t_list, double A,
                      const ExperimentConfig& cfg);

/// Tangential Bernstein ratios for random polynomials on a chart.
Table run_bernstein_check(const Chart& chart, const std::vector<int>& n_list,
                          double p, int trials, const ExperimentConfig& cfg);

/// Cell-level best-approximation error vs the local modulus, one row per
/// cell of the partition.
Table run_whitney(const CellPartition& part, int r, double p,
                  const ExperimentConfig& cfg);

std::uint64_t fnv1a(const std::string& s);

/// CSV per table plus a JSON manifest (config echo, config hash, fitted
/// constants); byte-stable under fixed seed/config.
void emit_report(const std::vector<Table>& tables, const std::string& dir,
                 const ExperimentConfig& cfg);

}  // namespace c2approx
