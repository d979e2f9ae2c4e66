#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "c2approx/experiments.hpp"

namespace py = pybind11;
using namespace c2approx;

namespace {

double parse_p(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[Eigen::Index(i)] = v[i];
  return out;
}

ScalarField field_for(const std::string& name) {
  if (name == "const") return [](const Vec&) { return 1.0; };
  for (auto& [n, f] : test_suite(2))
    if (n == name) return f;
  throw ParameterError("unknown built-in function: " + name);
}

}  // namespace

PYBIND11_MODULE(_c2approx, m) {
  m.doc() = "polynomial approximation on C2 domains (unit-disk front end)";

  m.def("suite_names", []() {
    std::vector<std::string> names;
    for (auto& [n, f] : test_suite(2)) names.push_back(n);
    return names;
  });

  m.def(
      "rho",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        static CompositeDomain disk = make_unit_disk();
        return rho_omega(to_vec(a), to_vec(b), disk);
      },
      py::arg("xi"), py::arg("eta"),
      "boundary metric between two points of the unit disk");

  m.def(
      "best_error",
      [](const std::string& f, int n, const std::string& p, int resolution) {
        CompositeDomain disk = make_unit_disk();
        SampleGrid grid = build_grid(disk, GridMode::BoundaryLayered, resolution, 1);
        return best_approx(field_for(f), grid, n, parse_p(p)).error;
      },
      py::arg("f"), py::arg("n"), py::arg("p") = "2", py::arg("resolution") = 20,
      "discrete best-approximation error of a built-in function on the disk");

  m.def(
      "modulus",
      [](const std::string& f, double t, int r, const std::string& p,
         int resolution) {
        CompositeDomain disk = make_unit_disk();
        SampleGrid grid = build_grid(disk, GridMode::BoundaryLayered, resolution, 1);
        ExperimentConfig cfg = make_experiment_config();
        return full_modulus(field_for(f), disk, t, r, parse_p(p), grid, cfg.modulus)
            .value;
      },
      py::arg("f"), py::arg("t"), py::arg("r") = 1, py::arg("p") = "inf",
      py::arg("resolution") = 16,
      "composite modulus of smoothness on the unit disk");

  m.def(
      "unity_residual",
      [](int n, int samples) {
        auto chart = std::make_shared<Chart>(make_disk_chart());
        auto part =
            std::make_shared<const CellPartition>(build_partition(chart, n));
        SpecialUnity q(part, 4);
        Rng rng(1);
        double b = chart->b(), worst = 0.0;
        for (int s = 0; s < samples; ++s) {
          Vec cp(2);
          cp[0] = rng.uniform(-b, b);
          cp[1] = chart->g(cp.head(1)) - rng.uniform(1e-6, 1.0 - 1e-6);
          KahanSum sum;
          for (double v : q.eval_all(cp)) sum.add(v);
          worst = std::max(worst, std::abs(sum.value() - 1.0));
        }
        return worst;
      },
      py::arg("n") = 8, py::arg("samples") = 500,
      "max |sum - 1| of the chart partition of unity at sampled points");
}
