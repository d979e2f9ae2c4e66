#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "c2approx/experiments.hpp"

using namespace c2approx;
namespace fs = std::filesystem;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg = make_experiment_config();
  cfg.resolution = 10;
  cfg.modulus.h_per_octave = 2;
  cfg.modulus.octaves = 2;
  cfg.modulus.u_samples = 4;
  cfg.modulus.segment_samples = 5;
  cfg.solver.max_iter = 40;
  return cfg;
}
}  // namespace

TEST_CASE("suite names are stable") {
  auto suite = test_suite(2);
  REQUIRE(suite.size() == 5);
  CHECK(suite[0].first == "cubic");
  CHECK(suite[1].first == "expxy");
  CHECK(suite[2].first == "sincos");
  CHECK(suite[3].first == "radial32");
  CHECK(suite[4].first == "spline_c1");
  for (auto& [name, f] : suite)
    CHECK(std::isfinite(f(make_vec({0.3, -0.2}))));
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(fnv1a("a") == 12638187200555641996ULL);
  CHECK(fnv1a("ab") != fnv1a("ba"));
}

TEST_CASE("table ratio statistics") {
  Table t;
  t.experiment = "synthetic";
  t.rows = {{"f", 1, 1.0, 2.0, 0.5, false},
            {"f", 2, 1.0, 0.5, 2.0, false},
            {"g", 1, 3.0, 1.0, 3.0, false},
            {"g", 2, 0.0, 0.0, 0.0, true}};
  CHECK(t.max_ratio() == doctest::Approx(3.0));
  CHECK(t.min_ratio() == doctest::Approx(0.5));
  // per-f spread: f spans 4x, g spans 1x (its degenerate row is ignored)
  CHECK(t.bounded(5.0));
  CHECK_FALSE(t.bounded(3.0));
}

TEST_CASE("report emission is byte stable") {
  std::vector<Table> tables(1);
  tables[0].experiment = "empty";
  ExperimentConfig cfg = tiny_config();
  fs::path dir = fs::temp_directory_path() / "c2approx_report_test";
  fs::remove_all(dir);
  emit_report(tables, dir.string(), cfg);
  std::string csv = slurp(dir / "empty.csv");
  CHECK(csv ==
        "experiment,f,n_or_t,lhs,rhs,ratio,degenerate,grid_mode,resolution,seed\n");
  std::string manifest = slurp(dir / "manifest.json");
  json j = json::parse(manifest);
  CHECK(j.contains("config_hash"));
  CHECK(j.contains("config"));
  // rerun and compare bytes
  emit_report(tables, dir.string(), cfg);
  CHECK(slurp(dir / "empty.csv") == csv);
  CHECK(slurp(dir / "manifest.json") == manifest);
  fs::remove_all(dir);
}

TEST_CASE("jackson sweep produces finite nondegenerate rows") {
  CompositeDomain disk = make_unit_disk();
  ExperimentConfig cfg = tiny_config();
  Table t = run_jackson(disk, 1, 2.0, {2, 4}, cfg);
  CHECK(t.rows.size() == 10);  // 5 functions x 2 degrees
  for (const auto& row : t.rows) {
    CHECK(std::isfinite(row.lhs));
    CHECK(std::isfinite(row.rhs));
    if (!row.degenerate) CHECK(row.ratio > 0.0);
  }
  CHECK(t.meta.contains("r"));
}

TEST_CASE("tau comparison stays positive at small scale") {
  CompositeDomain disk = make_unit_disk();
  ExperimentConfig cfg = tiny_config();
  Table t = run_tau_compare(disk, 1, 2.0, 1.0, {0.25, 0.125}, 2.0, cfg);
  CHECK(t.rows.size() == 10);
  for (const auto& row : t.rows)
    if (!row.degenerate) {
      CHECK(row.lhs > 0.0);
      CHECK(row.rhs > 0.0);
    }
}

TEST_CASE("bernstein ratios are finite and bounded") {
  Chart chart = make_disk_chart();
  ExperimentConfig cfg = tiny_config();
  Table t = run_bernstein_check(chart, {4, 8}, kInf, 2, cfg);
  CHECK(!t.rows.empty());
  for (const auto& row : t.rows) {
    CHECK(std::isfinite(row.ratio));
    if (!row.degenerate) CHECK(row.ratio > 0.0);
  }
}

TEST_CASE("whitney table has one row per cell") {
  auto chart = std::make_shared<Chart>(make_disk_chart());
  auto part = build_partition(chart, 4);
  ExperimentConfig cfg = tiny_config();
  Table t = run_whitney(part, 2, 2.0, cfg);
  // one row per (cell, suite function)
  CHECK(t.rows.size() == part.cell_count() * test_suite(2).size());
  for (const auto& row : t.rows) CHECK(std::isfinite(row.ratio));
}
