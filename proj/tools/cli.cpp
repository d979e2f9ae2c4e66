#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "c2approx/experiments.hpp"

namespace fs = std::filesystem;
using namespace c2approx;

namespace {

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

CompositeDomain resolve_domain(const std::string& spec) {
  if (spec == "disk") return make_unit_disk();
  if (fs::exists(spec)) {
    std::ifstream in(spec);
    json j;
    in >> j;
    return domain_from_json(j);
  }
  // inline JSON
  return domain_from_json(json::parse(spec));
}

ScalarField resolve_field(const std::string& name, int dim) {
  if (name == "const") return [](const Vec&) { return 1.0; };
  for (auto& [n, f] : test_suite(dim))
    if (n == name) return f;
  throw ParameterError("unknown built-in function: " + name);
}

void write_json(const fs::path& dir, const std::string& file, const json& j) {
  fs::create_directories(dir);
  std::ofstream out(dir / file);
  out << j.dump(2) << '\n';
}

struct Options {
  std::string domain = "disk";
  std::string f = "expxy";
  int n = 8;
  int r = 1;
  std::string p = "2", q = "2";
  double t = 0.125;
  std::uint64_t seed = 1234;
  int resolution = 20;
  int threads = 0;
  std::string out;
  std::string config;
  json cfg_json = json::object();

  ExperimentConfig experiment_config() const {
    ExperimentConfig ec = make_experiment_config();
    ec.domain = domain;
    ec.resolution = resolution;
    ec.seed = seed;
    ec.threads = threads;
    if (cfg_json.contains("ratio_bound"))
      ec.ratio_bound = cfg_json["ratio_bound"].get<double>();
    return ec;
  }
  std::vector<int> n_list() const {
    if (cfg_json.contains("n_list"))
      return cfg_json["n_list"].get<std::vector<int>>();
    return {4, 8, 12, 16, 20, 24};
  }
};

int cmd_unity(const Options& o) {
  auto chart = std::make_shared<Chart>(make_disk_chart());
  auto part = std::make_shared<const CellPartition>(build_partition(chart, o.n));
  SpecialUnity q(part, 4);
  Rng rng(o.seed);
  double worst = 0.0;
  double b = chart->b();
  for (int s = 0; s < 2000; ++s) {
    Vec x(1);
    x[0] = rng.uniform(-b, b);
    Vec cp(2);
    cp[0] = x[0];
    cp[1] = chart->g(x) - rng.uniform(0.0, chart->L() * b);
    KahanSum sum;
    for (double v : q.eval_all(cp)) sum.add(v);
    worst = std::max(worst, std::abs(sum.value() - 1.0));
  }
  CompositeDomain dom = resolve_domain(o.domain);
  GlobalUnity glue(dom, std::min(o.n, 8), 4);
  double gworst = 0.0;
  for (int s = 0; s < 500; ++s) {
    Vec pnt = dom.sample_inside(rng);
    KahanSum sum;
    for (double v : glue.eval_all(pnt)) sum.add(v);
    gworst = std::max(gworst, std::abs(sum.value() - 1.0));
  }
  if (!o.out.empty()) {
    json j;
    j["chart_family"] = q.to_json();
    j["global"] = glue.to_json();
    j["chart_residual"] = worst;
    j["global_residual"] = gworst;
    j["n"] = o.n;
    j["seed"] = o.seed;
    write_json(o.out, "unity.json", j);
  }
  std::printf("unity n=%d chart_residual=%.3g global_residual=%.3g\n", o.n, worst,
              gworst);
  return (worst < 1e-7 && gworst < 1e-6) ? 0 : 1;
}

int cmd_modulus(const Options& o) {
  CompositeDomain dom = resolve_domain(o.domain);
  ScalarField f = resolve_field(o.f, dom.dim());
  SampleGrid grid = build_grid(dom, GridMode::BoundaryLayered, o.resolution, o.seed);
  ExperimentConfig ec = o.experiment_config();
  ModulusOptions mo = ec.modulus;
  mo.threads = o.threads;
  mo.seed = o.seed;
  ModulusReport rep =
      full_modulus(f, dom, o.t, o.r, parse_exponent(o.p), grid, mo);
  if (!o.out.empty()) write_json(o.out, "modulus.json", rep.to_json());
  std::printf("modulus f=%s r=%d t=%g p=%s value=%.12g\n", o.f.c_str(), o.r, o.t,
              o.p.c_str(), rep.value);
  return 0;
}

int cmd_bestapprox(const Options& o) {
  CompositeDomain dom = resolve_domain(o.domain);
  ScalarField f = resolve_field(o.f, dom.dim());
  SampleGrid grid = build_grid(dom, GridMode::BoundaryLayered, o.resolution, o.seed);
  SolverConfig sc;
  BestApproxResult res = best_approx(f, grid, o.n, parse_exponent(o.p), sc);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream csv(fs::path(o.out) / "bestapprox.csv");
    csv << "n,p,error,iterations,condition\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%s,%.12g,%d,%.12g\n", o.n, o.p.c_str(),
                  res.error, res.iterations, res.condition);
    csv << buf;
    write_json(o.out, "bestapprox.json",
               {{"n", o.n},
                {"p", o.p},
                {"error", res.error},
                {"iterations", res.iterations},
                {"condition", res.condition},
                {"converged", res.converged},
                {"poly", res.poly.to_json()}});
  }
  std::printf("bestapprox f=%s n=%d p=%s error=%.12g\n", o.f.c_str(), o.n,
              o.p.c_str(), res.error);
  return 0;
}

int run_table(const Options& o, const std::string& which) {
  CompositeDomain dom = resolve_domain(o.domain);
  ExperimentConfig ec = o.experiment_config();
  Table tab;
  if (which == "jackson") {
    tab = run_jackson(dom, o.r, parse_exponent(o.p), o.n_list(), ec);
  } else if (which == "inverse") {
    tab = run_inverse(dom, o.r, parse_exponent(o.p), o.n_list(), ec);
  } else if (which == "compare-tau") {
    double A = o.cfg_json.value("A", 2.0);
    std::vector<double> t_list{0.125, 0.0625, 0.03125, 0.015625};
    if (o.cfg_json.contains("t_list"))
      t_list = o.cfg_json["t_list"].get<std::vector<double>>();
    tab = run_tau_compare(dom, o.r, parse_exponent(o.p), parse_exponent(o.q),
                          t_list, A, ec);
  } else {  // bernstein
    int trials = o.cfg_json.value("trials", 10);
    std::vector<int> n_list = o.cfg_json.contains("n_list")
                                  ? o.cfg_json["n_list"].get<std::vector<int>>()
                                  : std::vector<int>{8, 16};
    tab = run_bernstein_check(make_disk_chart(), n_list, parse_exponent(o.p),
                              trials, ec);
  }
  if (!o.out.empty()) emit_report({tab}, o.out, ec);
  bool ok = tab.bounded(ec.ratio_bound);
  std::printf("%s max_ratio=%.6g min_ratio=%.6g bounded=%d\n",
              tab.experiment.c_str(), tab.max_ratio(), tab.min_ratio(), ok ? 1 : 0);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial approximation on C2 domains: constructions and experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--domain", o.domain, "domain name or JSON (file or inline)");
    sub->add_option("--f", o.f, "built-in test function name");
    sub->add_option("--n", o.n, "degree / partition parameter");
    sub->add_option("--r", o.r, "difference order");
    sub->add_option("--p", o.p, "exponent (number or inf)");
    sub->add_option("--q", o.q, "inner exponent (number or inf)");
    sub->add_option("--t", o.t, "modulus scale");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--resolution", o.resolution, "grid resolution");
    sub->add_option("--threads", o.threads, "worker threads (0 = auto)");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--config", o.config, "JSON config file");
  };
  const char* names[] = {"unity",   "modulus",     "bestapprox", "jackson",
                         "inverse", "compare-tau", "bernstein"};
  for (const char* nm : names) add_common(app.add_subcommand(nm));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!o.config.empty()) {
      std::ifstream in(o.config);
      if (!in) throw ParameterError("config file not found: " + o.config);
      in >> o.cfg_json;
      // config supplies defaults; explicit flags already took precedence at
      // parse time, so only fill fields the user left untouched
      CLI::App* sub = app.get_subcommands().front();
      auto absent = [&](const std::string& flag) {
        return sub->count(flag) == 0;
      };
      if (o.cfg_json.contains("domain") && absent("--domain"))
        o.domain = o.cfg_json["domain"].get<std::string>();
      if (o.cfg_json.contains("f") && absent("--f"))
        o.f = o.cfg_json["f"].get<std::string>();
      if (o.cfg_json.contains("n") && absent("--n")) o.n = o.cfg_json["n"].get<int>();
      if (o.cfg_json.contains("r") && absent("--r")) o.r = o.cfg_json["r"].get<int>();
      if (o.cfg_json.contains("p") && absent("--p"))
        o.p = o.cfg_json["p"].is_string() ? o.cfg_json["p"].get<std::string>()
                                          : std::to_string(o.cfg_json["p"].get<double>());
      if (o.cfg_json.contains("q") && absent("--q"))
        o.q = o.cfg_json["q"].is_string() ? o.cfg_json["q"].get<std::string>()
                                          : std::to_string(o.cfg_json["q"].get<double>());
      if (o.cfg_json.contains("t") && absent("--t"))
        o.t = o.cfg_json["t"].get<double>();
      if (o.cfg_json.contains("seed") && absent("--seed"))
        o.seed = o.cfg_json["seed"].get<std::uint64_t>();
      if (o.cfg_json.contains("resolution") && absent("--resolution"))
        o.resolution = o.cfg_json["resolution"].get<int>();
      if (o.cfg_json.contains("threads") && absent("--threads"))
        o.threads = o.cfg_json["threads"].get<int>();
    }
    if (o.threads > 0) set_default_thread_count(o.threads);

    std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "unity") return cmd_unity(o);
    if (sub == "modulus") return cmd_modulus(o);
    if (sub == "bestapprox") return cmd_bestapprox(o);
    return run_table(o, sub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
