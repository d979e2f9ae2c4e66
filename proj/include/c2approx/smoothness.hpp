#pragma once

#include <map>

#include "c2approx/mesh.hpp"
#include "c2approx/sampling.hpp"

namespace c2approx {

using ScalarField = std::function<double(const Vec&)>;
using Region = std::function<bool(const Vec&)>;

struct ModulusOptions {
  int h_per_octave = 8;   // geometric h-net density per factor of 2
  int octaves = 5;        // net spans [t 2^-octaves, t]
  int u_samples = 32;     // quasi-random inner average (tangential modulus)
  double A0 = 4.0;        // subgraph margin coefficient
  int segment_samples = 33;
  int threads = 0;
  std::uint64_t seed = 1234;
};

/// r-th forward difference with step h at eta, restricted to a region: zero
/// unless the whole segment [eta, eta + r h] stays inside (probed at
/// segment_samples points).  symmetric shifts the base by -(r/2) h.
double finite_difference(const ScalarField& f, const Vec& h, const Vec& eta, int r,
                         const Region& region, bool symmetric = false,
                         int segment_samples = 33);

/// Both sides of the overlapping-difference recombination identity
/// (difference at step h versus differences toward a third point eta);
/// unrestricted evaluation, for verification.
std::pair<double, double> difference_identity(const ScalarField& f, const Vec& xi,
                                              const Vec& eta, const Vec& h, int r);

/// Geometric step net {t 2^{-k/h_per_octave}} plus the endpoint t.
std::vector<double> h_net(double t, const ModulusOptions& opts);

/// sup over directions and net steps of || Delta^r_{h e} (f, region, .) ||_p
/// on the grid (grid points outside `region` are skipped).
double directional_modulus(const ScalarField& f, const std::vector<Vec>& dirs,
                           double t, int r, double p, const SampleGrid& grid,
                           const Region& region, const ModulusOptions& opts = {});

/// phi_Omega(e, xi) for every grid point (bisection-based reach).
std::vector<double> phi_field(const SampleGrid& grid, const Vec& e);

/// Ditzian-Totik-type modulus: symmetric differences with step
/// h phi_Omega(e, xi) e, sup over |h| <= min(t, 1), max over directions.
double dt_modulus(const ScalarField& f, double t, int r, double p,
                  const SampleGrid& grid, const ModulusOptions& opts = {},
                  const std::vector<Vec>* dirs = nullptr,
                  const std::vector<std::vector<double>>* phi_cache = nullptr);

/// Per-chart caches reused across tangential modulus evaluations.
struct ChartFieldCache {
  std::vector<Vec> chart_pts;      // chart coordinates per grid point
  std::vector<double> ess_dist;    // distance to the graph surface
  std::vector<char> in_body;      // inside the chart body
  ChartFieldCache() = default;
  ChartFieldCache(const SampleGrid& grid, const Chart& chart);
};

/// Tangential modulus over one chart: differences along graph tangents at
/// nearby base points, averaged over the base ball, integrated over the
/// subgraph set G^t.  t is clamped to 1.
double tangential_modulus(const ScalarField& f, const Chart& chart, double t,
                          int r, double p, const SampleGrid& grid,
                          const ModulusOptions& opts = {},
                          const ChartFieldCache* cache = nullptr);

struct ModulusReport {
  double value = 0.0;
  std::map<std::string, double> parts;
  json meta;
  json to_json() const;
};

/// Composite modulus: max of the weighted directional part over coordinate
/// directions plus the sum of per-chart tangential parts.
ModulusReport full_modulus(const ScalarField& f, const CompositeDomain& dom,
                           double t, int r, double p, const SampleGrid& grid,
                           const ModulusOptions& opts = {});

/// Pointwise averaged difference over the metric ball U(xi, delta).
double ivanov_w(const ScalarField& f, const Vec& xi, double delta, int r, double q,
                const CompositeDomain& dom, const SampleGrid& grid,
                int segment_samples = 33);

/// tau_{r}(f, delta)_{p,q}: L^p norm over the grid of ivanov_w.
double ivanov_tau(const ScalarField& f, double delta, int r, double p, double q,
                  const CompositeDomain& dom, const SampleGrid& grid,
                  const ModulusOptions& opts = {});

struct LocalModulusReport {
  double value = 0.0;
  std::vector<double> cell_values;  // per-cell contribution (already ^p for p<inf)
};

/// Cellwise modulus: vertical differences over the extended cell plus
/// tangent-direction differences over the inner slab, aggregated in l^p.
LocalModulusReport local_modulus(const ScalarField& f, const CellPartition& part,
                                 int r, double p, const ModulusOptions& opts = {});

/// 1-D averaged modulus on [a,b]:
/// ( t^{-1} int_{t/(4r)}^{t} int_a^{b-rh} |Delta_h^r f|^p dx dh )^{1/p}.
double averaged_modulus_1d(const std::function<double(double)>& f, double a,
                           double b, double t, int r, double p);

}  // namespace c2approx
