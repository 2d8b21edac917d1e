// Command-line front end.
//
// Exit status: 0 on success, 1 when the computation itself fails or does not
// apply (invalid parameters, degenerate verdicts, failed checks), 2 on usage
// errors. Failures print one "error: kind=... message=..." line to stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "bestab/errors.hpp"
#include "bestab/filippov.hpp"
#include "bestab/hybrid.hpp"
#include "bestab/simulator.hpp"
#include "bestab/spectrum.hpp"
#include "bestab/sweep.hpp"
#include "bestab/system_spec.hpp"

namespace fs = std::filesystem;
using namespace bestab;

namespace {

struct Failure {
  std::string kind;
  std::string message;
};

int fail(const Failure& f) {
  std::cerr << "error: kind=" << f.kind << " message=" << f.message << '\n';
  return 1;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v + 0.0);  // no "-0"
  return buf;
}

std::string fmt(const Vec3& v) { return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")"; }

void print_matrix(const char* name, const Mat3& m) {
  std::cout << name << ":\n";
  for (int i = 0; i < 3; ++i)
    std::cout << "  " << fmt(m(i, 0)) << "  " << fmt(m(i, 1)) << "  " << fmt(m(i, 2)) << '\n';
}

// "LO:HI"
std::pair<double, double> parse_range(const std::string& s, const char* name) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("");
    std::size_t n1 = 0, n2 = 0;
    const double lo = std::stod(s.substr(0, colon), &n1);
    const double hi = std::stod(s.substr(colon + 1), &n2);
    if (n1 != colon || n2 != s.size() - colon - 1) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw CLI::ValidationError(name, "expected LO:HI, got '" + s + "'");
  }
}

Vec3 parse_point(const std::string& s) {
  Vec3 x;
  std::istringstream in(s);
  std::string part;
  int k = 0;
  while (std::getline(in, part, ',')) {
    std::size_t n = 0;
    try {
      if (k >= 3) throw std::invalid_argument("");
      x[k] = std::stod(part, &n);
    } catch (const std::exception&) {
      n = std::string::npos;
    }
    if (n != part.size()) throw CLI::ValidationError("--x0", "expected X,Y,Z, got '" + s + "'");
    ++k;
  }
  if (k != 3) throw CLI::ValidationError("--x0", "expected X,Y,Z, got '" + s + "'");
  return x;
}

void print_lambda(const LambdaResult& r) {
  std::cout << describe(r) << '\n' << "verdict: " << stability_of(r) << '\n';
}

int cmd_lambda(const HybridParams& p, int steps) {
  if (!p.valid()) return fail({"ConstraintViolation", p.violation()});
  EventConfig cfg;
  cfg.steps_per_rotation = steps;
  print_lambda(lambda(p, cfg));
  return 0;
}

int cmd_classify(const std::string& file) {
  const SystemSpec spec = load_system_spec(file);
  const FilippovSystem sys = FilippovSystem::from_spec(spec);
  const BoundaryData bd = boundary_data(sys, spec.x_star);
  std::cout << "x*: " << fmt(bd.x_star) << '\n'
            << "p = grad H(x*): " << fmt(bd.p) << '\n'
            << "q = fR(x*): " << fmt(bd.q) << '\n'
            << "p.q: " << fmt(bd.pTq) << '\n';
  print_matrix("A", bd.A);
  print_matrix("B", bd.B);
  std::cout << "det Phi: " << fmt(bd.det_Phi)
            << (bd.observability_degenerate() ? " (degenerate)" : "") << '\n';

  const StabilityVerdict v = theorem_classify(bd);
  std::cout << "classification: " << describe(v) << '\n';
  if (const auto* d = std::get_if<Degenerate>(&v)) return fail({"Degenerate", d->reason});
  if (const auto* c = std::get_if<CaseIII>(&v)) {
    const HybridParams& p = c->params;
    std::cout << "hybrid parameters: a=" << fmt(p.a) << " b=" << fmt(p.b) << " c=" << fmt(p.c)
              << " d=" << fmt(p.d) << '\n';
    print_lambda(lambda(p));
  } else if (std::holds_alternative<StableCaseII>(v)) {
    std::cout << "verdict: asymptotically stable\n";
  } else {
    std::cout << "verdict: unstable\n";
  }
  return 0;
}

GridFormat parse_format(const std::string& s) { return s == "pgm" ? GridFormat::Pgm : GridFormat::Csv; }

int cmd_sweep(double a, double b, const std::string& c_range, const std::string& d_range, int nc,
              int nd, const std::string& out, const std::string& format) {
  const auto [c0, c1] = parse_range(c_range, "--c-range");
  const auto [d0, d1] = parse_range(d_range, "--d-range");
  const SweepGrid g = sweep(a, b, {c0, c1, d0, d1}, nc, nd);
  render_grid(g, out, parse_format(format));
  int counts[4] = {0, 0, 0, 0};
  for (const Cell& cell : g.cells) ++counts[static_cast<int>(cell.verdict)];
  std::cout << "wrote " << out << ": " << counts[0] << " stable, " << counts[1] << " unstable, "
            << counts[2] << " not applicable, " << counts[3] << " marginal\n";
  return 0;
}

int cmd_orbit(const HybridParams& p, double z0, double t_max, const std::string& out) {
  if (!p.valid()) return fail({"ConstraintViolation", p.violation()});
  if (!(z0 < 0)) return fail({"ConstraintViolation", "z0 must be negative"});
  const Orbit orbit = hybrid_orbit(HybridSystem(p), Vec3(0, 0, z0), t_max);
  export_orbit(orbit, out);
  std::cout << "wrote " << out << ": " << orbit.sample_count() << " samples, "
            << orbit.segments.size() << " segments, ended " << to_string(orbit.terminal)
            << " at t=" << fmt(orbit.back().t) << '\n';
  return 0;
}

int cmd_orbit_system(const std::string& file, const std::string& x0s, double t_max, double dt,
                     const std::string& out) {
  const SystemSpec spec = load_system_spec(file);
  const FilippovSystem sys = FilippovSystem::from_spec(spec);
  SimConfig cfg;
  cfg.t_max = t_max;
  cfg.dt = dt;
  cfg.center = spec.x_star;
  const Orbit orbit = simulate(sys, parse_point(x0s), cfg);
  export_orbit(orbit, out);
  std::cout << "wrote " << out << ": " << orbit.sample_count() << " samples, "
            << orbit.segments.size() << " segments, ended " << to_string(orbit.terminal)
            << " at t=" << fmt(orbit.back().t) << '\n';
  return 0;
}

int cmd_fig_c(const std::string& dir, int n) {
  fs::create_directories(dir);
  const SweepRanges ranges{};
  for (double a : {-1.2, -0.2, 0.2, 1.2}) {
    for (double b : {0.5, 2.0, 5.0}) {
      const SweepGrid g = sweep(a, b, ranges, n, n);
      const std::string stem = "panel_a" + fmt(a) + "_b" + fmt(b);
      render_grid(g, fs::path(dir) / (stem + ".pgm"), GridFormat::Pgm);
      render_grid(g, fs::path(dir) / (stem + ".csv"), GridFormat::Csv);
      std::cout << "wrote " << (fs::path(dir) / stem).string() << ".{pgm,csv}\n";
    }
  }
  return 0;
}

int cmd_check_triples(int trials, std::uint64_t seed) {
  const TripleSuiteReport r = run_triple_suite(trials, seed);
  std::cout << "trials: " << r.trials << '\n'
            << "eigenvector failures: " << r.eigenvector_failures << '\n'
            << "initial condition failures: " << r.initial_condition_failures << '\n'
            << "sign failures: " << r.sign_failures << '\n'
            << "worst eigenvector residual / scale: " << fmt(r.worst_eigen_residual) << '\n'
            << (r.passed() ? "PASS" : "FAIL") << '\n';
  return r.passed() ? 0 : fail({"CheckFailed", "negative-triple property suite reported failures"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bestab: sliding-return multipliers, classification and sweeps for 3D piecewise-smooth systems"};
  app.require_subcommand(1);

  HybridParams p;
  auto add_abcd = [&p](CLI::App* sub) {
    sub->add_option("--a", p.a)->required();
    sub->add_option("--b", p.b)->required();
    sub->add_option("--c", p.c)->required();
    sub->add_option("--d", p.d)->required();
  };

  auto* lam = app.add_subcommand("lambda", "Return-map multiplier of the hybrid system");
  add_abcd(lam);
  int steps = 256;
  lam->add_option("--steps", steps, "Event-search steps per rotation")->check(CLI::PositiveNumber);

  auto* cls = app.add_subcommand("classify", "Classify the boundary equilibrium of a system file");
  std::string system_file;
  cls->add_option("--system", system_file)->required();

  auto* sw = app.add_subcommand("sweep", "Sweep the (c, d) plane at fixed (a, b)");
  double sa = 0, sb = 0;
  std::string c_range = "-3:3", d_range = "0:10", out, format = "csv";
  int nc = 200, nd = 200;
  sw->add_option("--a", sa)->required();
  sw->add_option("--b", sb)->required();
  sw->add_option("--c-range", c_range)->capture_default_str();
  sw->add_option("--d-range", d_range)->capture_default_str();
  sw->add_option("--nc", nc)->capture_default_str()->check(CLI::Range(2, 100000));
  sw->add_option("--nd", nd)->capture_default_str()->check(CLI::Range(2, 100000));
  sw->add_option("--out", out)->required();
  sw->add_option("--format", format)->check(CLI::IsMember({"csv", "pgm"}))->capture_default_str();

  auto* orb = app.add_subcommand("orbit", "Export a hybrid-system orbit from (0, 0, z0)");
  add_abcd(orb);
  double z0 = -1, t_max = 100;
  orb->add_option("--z0", z0)->required();
  orb->add_option("--t-max", t_max)->required()->check(CLI::PositiveNumber);
  orb->add_option("--out", out)->required();

  auto* orbs = app.add_subcommand("orbit-system", "Simulate a Filippov system from a file");
  std::string x0s;
  double dt = 1e-3;
  orbs->add_option("--system", system_file)->required();
  orbs->add_option("--x0", x0s, "X,Y,Z")->required();
  orbs->add_option("--t-max", t_max)->required()->check(CLI::PositiveNumber);
  orbs->add_option("--dt", dt)->capture_default_str()->check(CLI::PositiveNumber);
  orbs->add_option("--out", out)->required();

  auto* fig = app.add_subcommand("fig-c", "Sweep all twelve (a, b) panels");
  int fig_n = 200;
  fig->add_option("--out", out)->required();
  fig->add_option("--n", fig_n, "Cells per axis")->capture_default_str()->check(CLI::Range(2, 100000));

  auto* apb = app.add_subcommand("check-appendix-b",
                                 "Property checks for three distinct negative eigenvalues");
  int trials = 1000;
  std::uint64_t seed = 1;
  apb->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
  apb->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lam) return cmd_lambda(p, steps);
    if (*cls) return cmd_classify(system_file);
    if (*sw) return cmd_sweep(sa, sb, c_range, d_range, nc, nd, out, format);
    if (*orb) return cmd_orbit(p, z0, t_max, out);
    if (*orbs) return cmd_orbit_system(system_file, x0s, t_max, dt, out);
    if (*fig) return cmd_fig_c(out, fig_n);
    if (*apb) return cmd_check_triples(trials, seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: kind=Usage message=" << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    return fail({std::string(to_string(e.kind())), e.what()});
  } catch (const std::exception& e) {
    return fail({"Internal", e.what()});
  }
  return 2;
}
