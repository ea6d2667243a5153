// stackel_cli: verify | simulate | quantum | plot
// Exit codes: 0 all verdicts as expected, 1 unexpected verdict,
// 2 configuration / usage / CSV error, 3 internal failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "report_io.hpp"
#include "runs.hpp"
#include "stackel/geodesic_flow.hpp"
#include "stackel/quantization.hpp"
#include "svg_plot.hpp"

namespace {

using namespace stackel;
using namespace stackel::cli;

constexpr int kExitOk = 0, kExitUnexpected = 1, kExitConfig = 2, kExitInternal = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Rational> parse_axes(const std::vector<std::string>& items) {
  std::vector<Rational> a;
  for (const auto& s : items) {
    try {
      a.push_back(Rational::parse(s));
    } catch (const std::exception&) {
      throw ConfigError("a: cannot parse '" + s + "' as a rational");
    }
  }
  return a;
}

std::vector<SystemKind> parse_systems(const std::vector<std::string>& items) {
  std::vector<SystemKind> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse_system(s));
    } catch (const std::exception&) {
      throw ConfigError("systems: unknown system '" + s + "'");
    }
  }
  return out;
}

std::vector<Area> parse_areas(const std::vector<std::string>& items) {
  std::vector<Area> out;
  for (const auto& s : items) {
    const auto a = parse_area(s);
    if (!a) throw ConfigError("checks: unknown area '" + s + "'");
    out.push_back(*a);
  }
  return out;
}

std::vector<Rational> standard_axes(int n) {
  if (n < 1 || n > 7) throw ConfigError("n: must lie in 1..7 when --a is omitted");
  const SemiAxes a = SemiAxes::standard(n);
  return {a.values().begin(), a.values().end()};
}

// Options shared by verify, simulate and quantum.
struct CommonOptions {
  int n = 0;
  std::string a;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-n", o.n, "sphere dimension (len(a) - 1)");
  cmd->add_option("--a", o.a, "comma-separated semi-axes, e.g. 1,2,4,7 or 1/2,3,5");
  cmd->add_option("--seed", o.seed, "random seed");
}

// Resolves n and a from either or both flags (default n = 3).
void resolve_axes(RunConfig& c, const CommonOptions& o, bool n_given) {
  if (!o.a.empty()) c.a = parse_axes(split_list(o.a));
  if (n_given) c.n = o.n;
  if (c.a.empty()) c.a = standard_axes(c.n > 0 ? c.n : 3);
  if (c.n == 0) c.n = static_cast<int>(c.a.size()) - 1;
}

void check_config(const RunConfig& c) {
  const auto errs = validate(c);
  if (errs.empty()) return;
  std::string msg;
  for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
  throw ConfigError(msg);
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n") c.n = v.get<int>();
      else if (key == "a") {
        std::vector<std::string> items;
        for (const auto& e : v) items.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        c.a = parse_axes(items);
      } else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "systems") c.systems = parse_systems(v.get<std::vector<std::string>>());
      else if (key == "checks") c.checks = parse_areas(v.get<std::vector<std::string>>());
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "samples") c.samples = v.get<int>();
      else if (key == "T") c.T = v.get<double>();
      else if (key == "flow_samples") c.flow_samples = v.get<int>();
      else if (key == "quantum_points") c.quantum_points = v.get<int>();
      else if (key == "test_functions") c.test_functions = v.get<int>();
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
}

int finish(const std::string& command, const RunConfig& c, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sections = run_checks(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto report = report_json(command, c, sections, secs);
  write_reports(out_dir, report);
  for (const auto& s : sections)
    for (const auto& ch : s.report.checks)
      std::printf("%-4s %-8s %s%s\n", ch.passed ? "PASS" : "FAIL", to_string(ch.expected), ch.name.c_str(),
                  ch.as_expected() ? "" : "  <-- unexpected");
  const Outcome o = summarize(sections);
  std::printf("%zu checks, %zu passed, %zu failed, %zu unexpected (%.2fs); reports in %s\n", o.total, o.passed,
              o.failed, o.unexpected, secs, out_dir.c_str());
  return o.ok() ? kExitOk : kExitUnexpected;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact and numerical checks for Staeckel systems on the sphere"};
  app.require_subcommand(1);

  // verify
  CommonOptions vo;
  bool all = false;
  std::string systems_arg, checks_arg, config_path;
  int samples = 20;
  double T = 10;
  auto* verify = app.add_subcommand("verify", "run exact and numerical checks, write report.json and report.md");
  add_common(verify, vo);
  verify->add_flag("--all", all, "every check area (quantum skipped when n < 3)");
  verify->add_option("--systems", systems_arg, "comma-separated: dual-moser,neumann,jacobi-moser");
  verify->add_option("--checks", checks_arg, "comma-separated: classical,stackel,curvature,quantum,flow,projective");
  verify->add_option("--samples", samples, "sample points per check");
  verify->add_option("--tol", vo.tol, "integrator tolerance for flow checks");
  verify->add_option("-T", T, "flow integration time");
  verify->add_option("--config", config_path, "JSON configuration file; flags override it");
  verify->add_option("--out", vo.out, "report directory");

  // simulate
  CommonOptions so;
  std::string sim_system = "dual-moser", csv_path;
  double sim_T = 10;
  int sim_samples = 1000;
  auto* simulate = app.add_subcommand("simulate", "integrate a geodesic flow and report drift");
  add_common(simulate, so);
  simulate->add_option("--system", sim_system, "dual-moser (g2) or jacobi-moser (g1)");
  simulate->add_option("-T", sim_T, "integration time");
  simulate->add_option("--tol", so.tol, "integrator tolerance");
  simulate->add_option("--samples", sim_samples, "output samples");
  simulate->add_option("--csv", csv_path, "trajectory CSV path");

  // quantum
  CommonOptions qo;
  std::string q_system = "dual-moser";
  int points = 10, tests = 5;
  auto* quantum = app.add_subcommand("quantum", "quantum commutator checks for one system");
  add_common(quantum, qo);
  quantum->add_option("--system", q_system, "dual-moser, neumann or jacobi-moser");
  quantum->add_option("--points", points, "sample points");
  quantum->add_option("--tests", tests, "test functions per point");
  quantum->add_option("--out", qo.out, "report directory");

  // plot
  std::string plot_csv, plot_out = ".";
  auto* plot = app.add_subcommand("plot", "render drift.svg and trace.svg from a trajectory CSV");
  plot->add_option("csv", plot_csv, "trajectory CSV")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) {
      RunConfig c;
      if (!config_path.empty()) apply_config_file(c, config_path);
      if (verify->count("--seed")) c.seed = vo.seed;
      if (verify->count("--samples")) c.samples = samples;
      if (verify->count("--tol")) c.tol = vo.tol;
      if (verify->count("-T")) c.T = T;
      resolve_axes(c, vo, verify->count("-n") > 0);
      if (!systems_arg.empty()) c.systems = parse_systems(split_list(systems_arg));
      if (c.systems.empty()) c.systems.assign(std::begin(kAllSystems), std::end(kAllSystems));
      if (!checks_arg.empty()) c.checks = parse_areas(split_list(checks_arg));
      if (all || c.checks.empty()) {
        if (all && !checks_arg.empty()) throw ConfigError("--all and --checks are exclusive");
        c.checks.clear();
        for (Area a : kAllAreas)
          if (a != Area::Quantum || c.n >= 3) c.checks.push_back(a);
      }
      check_config(c);
      return finish("verify", c, vo.out);
    }
    if (quantum->parsed()) {
      RunConfig c;
      c.seed = qo.seed;
      resolve_axes(c, qo, quantum->count("-n") > 0);
      c.systems = parse_systems({q_system});
      c.checks = {Area::Quantum};
      c.quantum_points = points;
      c.test_functions = tests;
      c.samples = 5;
      check_config(c);
      return finish("quantum", c, qo.out);
    }
    if (simulate->parsed()) {
      RunConfig c;
      resolve_axes(c, so, simulate->count("-n") > 0);
      c.systems = parse_systems({sim_system});
      c.checks = {Area::Flow};
      c.tol = so.tol;
      c.T = sim_T;
      c.flow_samples = sim_samples;
      check_config(c);
      FlowMetric m;
      try {
        m = flow_metric_for(c.systems.front());
      } catch (const NotApplicableError&) {
        throw ConfigError("simulate: " + sim_system + " has no geodesic flow; use dual-moser or jacobi-moser");
      }
      const SemiAxes a(c.a);
      const FlowOptions opt{c.T, c.tol, c.flow_samples};
      Trajectory tr;
      try {
        tr = integrate(m, a, random_initial_state(m, a, so.seed), opt);
      } catch (const StiffSegmentError& e) {
        if (!csv_path.empty()) std::ofstream(csv_path) << trajectory_csv(e.partial());
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
      }
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << trajectory_csv(tr);
        if (!out) throw ConfigError("cannot write " + csv_path);
      }
      const Drift d = drift(tr);
      std::printf("%s flow on S^%d, T = %g, tol = %g: %zu accepted, %zu rejected steps\n",
                  std::string(flow_tag(m)).c_str(), c.n, c.T, c.tol, tr.accepted_steps, tr.rejected_steps);
      std::printf("drift H %.3e  F %.3e  J %.3e  constraint %.3e\n", d.H, d.max_F(), d.J, d.constraint);
      return kExitOk;
    }
    if (plot->parsed()) {
      for (const auto& p : plot_trajectory(read_csv(plot_csv), plot_out)) std::printf("wrote %s\n", p.c_str());
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const CsvError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const CoincidentAxesError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
