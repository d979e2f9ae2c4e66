#include "c2approx/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

namespace c2approx {

namespace {

constexpr double kDegenerate = 1e-12;

// tau needs metric balls with several grid points even at the smallest
// scales, so it gets a dense Monte-Carlo grid of its own
SampleGrid tau_grid(const CompositeDomain& dom, const ExperimentConfig& cfg) {
  int count = std::max(20000, cfg.resolution * cfg.resolution);
  return build_grid(dom, GridMode::MonteCarlo, count, cfg.seed + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double suite_scale(const ScalarField& f, const SampleGrid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    s = std::max(s, std::abs(f(grid.point(i))));
  return s + 1e-300;
}

}  // namespace

json ExperimentConfig::to_json() const {
  json j;
  j["domain"] = domain;
  j["mode"] = mode == GridMode::Tensor          ? "tensor"
              : mode == GridMode::MonteCarlo    ? "monte-carlo"
                                                : "boundary-layered";
  j["resolution"] = resolution;
  j["seed"] = seed;
  j["ratio_bound"] = ratio_bound;
  j["threads"] = threads;
  j["modulus"] = {{"h_per_octave", modulus.h_per_octave},
                  {"octaves", modulus.octaves},
                  {"u_samples", modulus.u_samples},
                  {"A0", modulus.A0},
                  {"segment_samples", modulus.segment_samples}};
  j["solver"] = {{"max_iter", solver.max_iter},
                 {"rel_tol", solver.rel_tol},
                 {"cond_warn", solver.cond_warn}};
  return j;
}

ExperimentConfig make_experiment_config() {
  ExperimentConfig cfg;
  cfg.resolution = 28;
  cfg.modulus.h_per_octave = 4;
  cfg.modulus.octaves = 3;
  cfg.modulus.u_samples = 8;
  cfg.modulus.segment_samples = 9;
  cfg.solver.max_iter = 80;
  cfg.solver.rel_tol = 1e-6;
  cfg.solver.quiet = true;
  return cfg;
}

double Table::max_ratio() const {
  double m = 0.0;
  for (const auto& r : rows)
    if (!r.degenerate) m = std::max(m, r.ratio);
  return m;
}

double Table::min_ratio() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    if (!r.degenerate) m = std::min(m, r.ratio);
  return m;
}

bool Table::bounded(double bound) const {
  std::map<std::string, std::pair<double, double>> span;  // f -> (min, max)
  for (const auto& r : rows) {
    if (r.degenerate) continue;
    auto it = span.find(r.f);
    if (it == span.end()) {
      span[r.f] = {r.ratio, r.ratio};
    } else {
      it->second.first = std::min(it->second.first, r.ratio);
      it->second.second = std::max(it->second.second, r.ratio);
    }
  }
  for (const auto& [name, mm] : span) {
    (void)name;
    if (mm.first <= 0.0) return false;
    if (mm.second / mm.first > bound) return false;
  }
  return true;
}

std::vector<std::pair<std::string, ScalarField>> test_suite(int dim) {
  auto coord = [dim](const Vec& p, int k) {
    return k < dim ? p[k] : 0.0;
  };
  std::vector<std::pair<std::string, ScalarField>> suite;
  suite.emplace_back("cubic", [coord](const Vec& p) {
    double x = coord(p, 0), y = coord(p, 1);
    return 1.0 + x - y + x * y + 0.3 * x * x * x - 0.2 * y * y * y;
  });
  suite.emplace_back("expxy", [coord](const Vec& p) {
    return std::exp(coord(p, 0) + coord(p, 1));
  });
  suite.emplace_back("sincos", [coord](const Vec& p) {
    return std::sin(3.0 * coord(p, 0)) * std::cos(2.0 * coord(p, 1));
  });
  suite.emplace_back("radial32", [](const Vec& p) {
    return std::pow(p.norm(), 1.5);
  });
  // C^1 but not C^2 across x = 0
  suite.emplace_back("spline_c1", [coord](const Vec& p) {
    double x = coord(p, 0);
    return x * std::abs(x) + 0.5 * coord(p, 1);
  });
  return suite;
}

Table run_jackson(const CompositeDomain& dom, int r, double p,
                  const std::vector<int>& n_list, const ExperimentConfig& cfg) {
  Table tab;
  tab.experiment = "jackson_r" + std::to_string(r) + "_p" +
                   (std::isinf(p) ? std::string("inf") : fmt(p));
  SampleGrid grid = build_grid(dom, cfg.mode, cfg.resolution, cfg.seed);
  ModulusOptions mopt = cfg.modulus;
  mopt.threads = cfg.threads;
  for (const auto& [name, f] : test_suite(dom.dim())) {
    double scale = suite_scale(f, grid);
    std::vector<double> errs = best_approx_sequence(f, grid, n_list, p, cfg.solver);
    for (std::size_t t = 0; t < n_list.size(); ++t) {
      TableRow row;
      row.f = name;
      row.x = n_list[t];
      row.lhs = errs[t];
      row.rhs = full_modulus(f, dom, 1.0 / n_list[t], r, p, grid, mopt).value;
      row.degenerate = row.lhs < kDegenerate * scale && row.rhs < kDegenerate * scale;
      row.ratio = row.degenerate ? 0.0 : row.lhs / std::max(row.rhs, 1e-300);
      tab.rows.push_back(row);
    }
  }
  tab.meta = {{"r", r},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"grid_size", grid.size()},
              {"max_ratio", tab.max_ratio()}};
  return tab;
}

Table run_inverse(const CompositeDomain& dom, int r, double p,
                  const std::vector<int>& n_list, const ExperimentConfig& cfg) {
  Table tab;
  tab.experiment = "inverse_r" + std::to_string(r) + "_p" +
                   (std::isinf(p) ? std::string("inf") : fmt(p));
  SampleGrid grid = build_grid(dom, cfg.mode, cfg.resolution, cfg.seed);
  SampleGrid tgrid = tau_grid(dom, cfg);
  ModulusOptions mopt = cfg.modulus;
  mopt.threads = cfg.threads;
  int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<int> all_n(n_max + 1);
  for (int j = 0; j <= n_max; ++j) all_n[j] = j;
  for (const auto& [name, f] : test_suite(dom.dim())) {
    double scale = suite_scale(f, grid);
    std::vector<double> errs = best_approx_sequence(f, grid, all_n, p, cfg.solver);
    for (int n : n_list) {
      KahanSum s;
      for (int j = 0; j <= n; ++j)
        s.add(std::pow(j + 1.0, r - 1.0) * errs[j]);
      double rhs = s.value() / std::pow(double(n), double(r));
      double om = full_modulus(f, dom, 1.0 / n, r, p, grid, mopt).value;
      double tau = ivanov_tau(f, 1.0 / n, r, p, p, dom, tgrid, mopt);
      TableRow row;
      row.f = name;
      row.x = n;
      row.lhs = om;
      row.rhs = rhs;
      row.degenerate = om < kDegenerate * scale && rhs < kDegenerate * scale;
      row.ratio = row.degenerate ? 0.0 : om / std::max(rhs, 1e-300);
      tab.rows.push_back(row);
      TableRow trow;
      trow.f = name + "(tau)";
      trow.x = n;
      trow.lhs = tau;
      trow.rhs = rhs;
      trow.degenerate = tau < kDegenerate * scale && rhs < kDegenerate * scale;
      trow.ratio = trow.degenerate ? 0.0 : tau / std::max(rhs, 1e-300);
      tab.rows.push_back(trow);
    }
  }
  tab.meta = {{"r", r},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"grid_size", grid.size()}};
  return tab;
}

Table run_tau_compare(const CompositeDomain& dom, int r, double p, double q,
                      const std::vector<double>& t_list, double A,
                      const ExperimentConfig& cfg) {
  Table tab;
  tab.experiment = "tau_compare_r" + std::to_string(r);
  SampleGrid grid = build_grid(dom, cfg.mode, cfg.resolution, cfg.seed);
  SampleGrid tgrid = tau_grid(dom, cfg);
  ModulusOptions mopt = cfg.modulus;
  mopt.threads = cfg.threads;
  for (const auto& [name, f] : test_suite(dom.dim())) {
    double scale = suite_scale(f, grid);
    for (double t : t_list) {
      TableRow row;
      row.f = name;
      row.x = t;
      row.lhs = full_modulus(f, dom, t, r, p, grid, mopt).value;
      row.rhs = ivanov_tau(f, A * t, r, p, q, dom, tgrid, mopt);
      row.degenerate = row.lhs < kDegenerate * scale && row.rhs < kDegenerate * scale;
      row.ratio = row.degenerate ? 0.0 : row.lhs / std::max(row.rhs, 1e-300);
      tab.rows.push_back(row);
    }
  }
  tab.meta = {{"r", r},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"q", std::isinf(q) ? json("inf") : json(q)},
              {"A", A},
              {"grid_size", grid.size()}};
  return tab;
}

namespace {

// chart-coordinate tensor grid over the scaled body G(lambda)
void chart_grid(const Chart& chart, double lambda, int res,
                std::vector<Vec>* pts, std::vector<double>* wts) {
  int d = chart.base_dim();
  double b = lambda * chart.b();
  double depth_max = lambda * chart.L() * chart.b();
  std::vector<int> idx(d, 0);
  std::size_t base_count = 1;
  for (int k = 0; k < d; ++k) base_count *= res;
  double cellw = std::pow(2.0 * b / res, double(d)) * (depth_max / res);
  for (std::size_t flat = 0; flat < base_count; ++flat) {
    std::size_t rem = flat;
    Vec x(d);
    for (int k = 0; k < d; ++k) {
      x[k] = -b + (int(rem % res) + 0.5) * 2.0 * b / res;
      rem /= res;
    }
    double g = chart.g(x);
    for (int jz = 0; jz < res; ++jz) {
      Vec cp(d + 1);
      cp.head(d) = x;
      cp[d] = g - (jz + 0.5) * depth_max / res;
      pts->push_back(cp);
      wts->push_back(cellw);
    }
  }
}

}  // namespace

Table run_bernstein_check(const Chart& chart, const std::vector<int>& n_list,
                          double p, int trials, const ExperimentConfig& cfg) {
  Table tab;
  tab.experiment = "bernstein_p" + (std::isinf(p) ? std::string("inf") : fmt(p));
  const double lambda = 1.5, mu = 2.0;
  int d = chart.base_dim();
  if (d != 1)
    throw ParameterError("run_bernstein_check: one-dimensional base expected");
  double b = chart.b();

  // chart-coordinate boxes covering G and G(lambda)
  std::vector<Vec> pts1, ptsL;
  std::vector<double> w1, wL;
  chart_grid(chart, 1.0, 24, &pts1, &w1);
  chart_grid(chart, lambda, 24, &ptsL, &wL);
  Vec lo = make_vec({-lambda * b, 0.0}), hi = make_vec({lambda * b, 0.0});
  for (const Vec& cp : ptsL) {
    lo[1] = std::min(lo[1], cp[1]);
    hi[1] = std::max(hi[1], cp[1]);
  }
  hi[1] += 1e-9;
  Box box{lo, hi};

  struct Combo {
    int abs_alpha, i, j;
  };
  const Combo combos[] = {{1, 0, 0}, {0, 0, 1}, {1, 1, 0}};

  for (int n : n_list) {
    for (int trial = 0; trial < trials; ++trial) {
      MultiPolynomial P =
          MultiPolynomial::random(box, n, cfg.seed + 1000 * n + trial);
      MultiPolynomial Px = P.derivative(0);
      MultiPolynomial Py = P.derivative(1);
      MultiPolynomial Pxy = Py.derivative(0);
      MultiPolynomial Pyy = Py.derivative(1);
      // ||P||_{L^p(G(lambda))}
      std::vector<double> pv(ptsL.size());
      for (std::size_t i = 0; i < ptsL.size(); ++i) pv[i] = P(ptsL[i]);
      double pnorm = lp_norm(pv, wL, p) + 1e-300;

      for (const Combo& c : combos) {
        std::vector<double> vals(pts1.size());
        double reach = std::min(mu / n, 1.0) * b;
        for (std::size_t i = 0; i < pts1.size(); ++i) {
          const Vec& cp = pts1[i];
          double phi = std::sqrt(std::max(chart.g(cp.head(1)) - cp[1], 0.0)) +
                       1.0 / n;
          double best = 0.0;
          if (c.abs_alpha == 0) {
            best = std::abs(Py(cp));
          } else {
            const MultiPolynomial& Ax = (c.i + c.j == 0) ? Px : Pxy;
            const MultiPolynomial& Ay = (c.i + c.j == 0) ? Py : Pyy;
            for (int s = 0; s < 8; ++s) {
              Vec u(1);
              u[0] = std::clamp(cp[0] - reach + (s + 0.5) * 2.0 * reach / 8.0,
                                -2.0 * b, 2.0 * b);
              double gp = chart.grad_g(u)[0];
              best = std::max(best, std::abs(Ax(cp) + gp * Ay(cp)));
            }
          }
          vals[i] = std::pow(phi, double(c.i)) * best;
        }
        double lhs = lp_norm(vals, w1, p);
        double rhs =
            std::pow(double(n), double(c.abs_alpha + 2 * c.j + c.i)) * pnorm;
        TableRow row;
        row.f = "combo(" + std::to_string(c.abs_alpha) + "," +
                std::to_string(c.i) + "," + std::to_string(c.j) + ")";
        row.x = n;
        row.lhs = lhs;
        row.rhs = rhs;
        row.degenerate = lhs < kDegenerate && rhs < kDegenerate;
        row.ratio = row.degenerate ? 0.0 : lhs / rhs;
        tab.rows.push_back(row);
      }
    }
  }
  tab.meta = {{"lambda", lambda}, {"mu", mu}, {"trials", trials}};
  return tab;
}

Table run_whitney(const CellPartition& part, int r, double p,
                  const ExperimentConfig& cfg) {
  Table tab;
  tab.experiment = "whitney_r" + std::to_string(r) + "_n" + std::to_string(part.n());
  const Chart& chart = part.chart();
  int d = chart.base_dim();
  int deg = (d + 1) * (r - 1);
  const int side = 5;  // sample points per dimension in the extended cell
  ModulusOptions mopt = cfg.modulus;
  mopt.threads = cfg.threads;

  for (const auto& [name, f] : test_suite(d + 1)) {
    LocalModulusReport loc = local_modulus(f, part, r, p, mopt);
    double scale = 0.0;
    for (std::size_t flat = 0; flat < part.cell_count(); ++flat) {
      CellIndex c = part.cell_at(flat);
      // sample the extended cell I* in chart coordinates
      Box base = part.base_cell_ext(c.i);
      double a_lo = part.alpha_star(c.j - part.m1());
      double a_hi = part.alpha_star(c.j + part.m1());
      std::vector<Vec> pts;
      std::vector<double> wts;
      std::size_t cnt = 1;
      for (int k = 0; k <= d; ++k) cnt *= side;
      Vec wlo, whi;
      for (std::size_t idx = 0; idx < cnt; ++idx) {
        std::size_t rem = idx;
        Vec cp(d + 1);
        for (int k = 0; k < d; ++k) {
          cp[k] = base.lo[k] +
                  (int(rem % side) + 0.5) / double(side) * (base.hi[k] - base.lo[k]);
          rem /= side;
        }
        double depth = a_lo + (int(rem) + 0.5) / double(side) * (a_hi - a_lo);
        cp[d] = chart.g(cp.head(d)) - depth;
        Vec w = chart.to_world(cp);
        if (pts.empty()) {
          wlo = w;
          whi = w;
        } else {
          wlo = wlo.cwiseMin(w);
          whi = whi.cwiseMax(w);
        }
        pts.push_back(w);
        wts.push_back(1.0 / double(cnt));
      }
      Box wbox{wlo - Vec::Constant(d + 1, 1e-12), whi + Vec::Constant(d + 1, 1e-12)};
      std::vector<double> fv(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        fv[i] = f(pts[i]);
        scale = std::max(scale, std::abs(fv[i]));
      }
      double lhs = best_approx_points(pts, wts, fv, wbox, deg, p, cfg.solver).error;
      TableRow row;
      row.f = name;
      row.x = double(flat);
      row.lhs = lhs;
      row.rhs = loc.cell_values[flat];
      row.degenerate =
          row.lhs < kDegenerate * (scale + 1e-300) && row.rhs < kDegenerate;
      row.ratio = row.degenerate ? 0.0 : row.lhs / std::max(row.rhs, 1e-300);
      tab.rows.push_back(row);
    }
  }
  tab.meta = {{"n", part.n()}, {"r", r}, {"degree", deg}};
  return tab;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void emit_report(const std::vector<Table>& tables, const std::string& dir,
                 const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  json manifest;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = fnv1a(cfg.to_json().dump());
  manifest["tables"] = json::array();
  std::string mode = cfg.to_json()["mode"];
  for (const Table& tab : tables) {
    std::string file = tab.experiment + ".csv";
    std::ofstream out(fs::path(dir) / file);
    out << "experiment,f,n_or_t,lhs,rhs,ratio,degenerate,grid_mode,resolution,seed\n";
    for (const TableRow& r : tab.rows) {
      out << tab.experiment << ',' << r.f << ',' << fmt(r.x) << ',' << fmt(r.lhs)
          << ',' << fmt(r.rhs) << ',' << fmt(r.ratio) << ','
          << (r.degenerate ? 1 : 0) << ',' << mode << ',' << cfg.resolution << ','
          << cfg.seed << '\n';
    }
    json t;
    t["file"] = file;
    t["experiment"] = tab.experiment;
    t["rows"] = tab.rows.size();
    t["max_ratio"] = tab.max_ratio();
    t["min_ratio"] = tab.rows.empty() ? 0.0 : tab.min_ratio();
    t["bounded"] = tab.bounded(cfg.ratio_bound);
    t["meta"] = tab.meta;
    manifest["tables"].push_back(t);
  }
  std::ofstream mout(fs::path(dir) / "manifest.json");
  mout << manifest.dump(2) << '\n';
}

}  // namespace c2approx
