#pragma once

// Command-line front end. parse_run_config turns argv into a RunConfig;
// run executes it. Exit codes: 0 success, 1 invalid input, 2 numerical
// failure or a failed check.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscint/curve.hpp"
#include "oscint/curve_io.hpp"
#include "oscint/error.hpp"
#include "oscint/helmholtz.hpp"
#include "oscint/opcalc.hpp"
#include "oscint/planewave.hpp"
#include "oscint/report.hpp"
#include "oscint/rigidity.hpp"
#include "oscint/specfun.hpp"
#include "oscint/stphase.hpp"

namespace oscint::cli {

enum class Command { none, leibniz, phase, planewave, eigen, geometry, rigidity, selftest, specfun_selftest };

struct RunConfig {
  Command command = Command::none;
  std::string curve_file;
  std::string output;
  Format format = Format::csv;
  std::uint64_t seed = 42;

  // leibniz
  int nmax = 8;
  bool check = false;
  int pairs = 50;

  // phase
  double direction = 0.5 * std::numbers::pi;
  double t = 0.0;
  std::string lambda_grid = "100:6400:*2";
  bool paper_signs = false;
  bool uniform_signs = false;
  bool uniform_branch = false;
  int envelope = 8;
  bool allow_inadmissible = false;

  // planewave / rigidity
  std::string kind = "dirichlet";
  double alpha = 0.0;
  std::vector<double> ts{1.0};
  int dirs = 32;
  double tol_factor = 1e-6;

  // eigen / rigidity
  std::string alpha_window;
  double dev_tol = 1e-4;
  double scan_step = 0.02;
  int basis_order = 25;

  // geometry
  int samples = 720;
  double geom_tol = 1e-10;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "cannot parse " + what + " value '" + s + "'");
  }
}

/// "A:B:*F" (geometric), "A:B:+D" (arithmetic) or "v1,v2,...".
inline std::vector<double> parse_lambda_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) {
    std::vector<double> v;
    for (const auto& p : split(spec, ',')) v.push_back(to_double(p, "lambda grid"));
    return v;
  }
  if (parts.size() != 3 || parts[2].size() < 2) throw Error(ErrorKind::InvalidInput, "lambda grid must be A:B:*F or A:B:+D");
  const double a = to_double(parts[0], "lambda grid"), b = to_double(parts[1], "lambda grid");
  const double f = to_double(parts[2].substr(1), "lambda grid");
  if (parts[2][0] == '*') return geometric_grid(a, b, f);
  if (parts[2][0] != '+' || !(f > 0.0) || !(b >= a)) throw Error(ErrorKind::InvalidInput, "bad arithmetic lambda grid");
  std::vector<double> v;
  for (std::size_t i = 0;; ++i) {
    const double x = a + f * static_cast<double>(i);
    if (x > b * (1.0 + 1e-12)) break;
    v.push_back(x);
  }
  return v;
}

inline std::pair<double, double> parse_window(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw Error(ErrorKind::InvalidInput, "alpha window must be A:B");
  const double a = to_double(parts[0], "alpha window"), b = to_double(parts[1], "alpha window");
  if (!(a > 0.0) || !(b > a)) throw Error(ErrorKind::InvalidInput, "alpha window needs 0 < A < B");
  return {a, b};
}

inline BoundaryKind parse_kind(const std::string& s) {
  if (s == "dirichlet") return BoundaryKind::dirichlet;
  if (s == "neumann") return BoundaryKind::neumann;
  throw Error(ErrorKind::InvalidInput, "kind must be dirichlet or neumann");
}

inline std::string fmt(double v) { return format_double(v); }

inline SupportCurve require_curve(const RunConfig& cfg) {
  if (cfg.curve_file.empty()) throw Error(ErrorKind::InvalidInput, "--curve is required");
  return load_curve(cfg.curve_file);
}

struct Outcome {
  Table table;
  int code = 0;
};

// ---- subcommands -----------------------------------------------------------

inline Outcome run_leibniz(const RunConfig& cfg) {
  const opcalc::CoeffTable table(cfg.nmax);
  Outcome o;
  o.table.columns = {"n", "k", "d"};
  for (int n = 1; n <= cfg.nmax; ++n)
    for (int k = 1; k <= n + 1; ++k) o.table.add_row({std::int64_t{n}, std::int64_t{k}, table.d(k, n)});
  if (cfg.check) {
    if (cfg.pairs < 1) throw Error(ErrorKind::InvalidInput, "--pairs must be >= 1");
    const auto rep = opcalc::check_expansion(cfg.nmax, cfg.pairs, cfg.seed);
    int bad_identities = 0;
    for (int n = 1; n <= cfg.nmax; ++n) {
      std::int64_t sum = 0;
      for (int k = 1; k <= n + 1; ++k) sum += table.d(k, n) * (std::int64_t{1} << (n - k + 1));
      if (sum != (std::int64_t{1} << (2 * n))) ++bad_identities;
    }
    o.table.comments.push_back("expansion checks: " + std::to_string(rep.checks) + ", mismatches: " +
                               std::to_string(rep.mismatches));
    o.table.comments.push_back("exponential identity failures: " + std::to_string(bad_identities));
    for (const auto& f : rep.failures) o.table.comments.push_back("mismatch " + f);
    if (rep.ok() && bad_identities == 0) {
      o.table.comments.push_back("all checks passed");
    } else {
      o.table.comments.push_back("checks FAILED");
      o.code = 2;
    }
  }
  return o;
}

inline PhaseOptions phase_options(const RunConfig& cfg) {
  PhaseOptions p;
  if (cfg.paper_signs || cfg.uniform_signs) p.sign = SignConvention::uniform;
  if (cfg.paper_signs || cfg.uniform_branch) p.branch = BranchConvention::uniform;
  return p;
}

inline Outcome run_phase(const RunConfig& cfg) {
  const SupportCurve curve = require_curve(cfg);
  ScanOptions opt;
  opt.phase = phase_options(cfg);
  if (cfg.envelope < 1) throw Error(ErrorKind::InvalidInput, "--envelope must be >= 1");
  opt.envelope_samples = static_cast<std::size_t>(cfg.envelope);
  opt.allow_inadmissible = cfg.allow_inadmissible;
  const auto rep = convergence_scan(curve, cfg.direction, cfg.t, parse_lambda_grid(cfg.lambda_grid), opt);
  Outcome o;
  o.table.columns = {"lambda", "abs_integral", "resid_L0", "resid_L01"};
  for (const auto& r : rep.rows) o.table.add_row({r.lambda, r.abs_integral, r.resid_l0, r.resid_l01});
  o.table.comments.push_back("slope_L0=" + fmt(rep.slope_l0));
  o.table.comments.push_back("slope_L01=" + fmt(rep.slope_l01));
  o.table.comments.push_back("gamma=" + fmt(rep.gamma));
  std::string flags;
  for (const auto& r : rep.rows) flags += r.growth_ok ? '1' : '0';
  o.table.comments.push_back("growth_condition_per_row=" + flags);
  o.table.comments.push_back(std::string("sign_convention=") +
                             (opt.phase.sign == SignConvention::alternating ? "alternating" : "uniform"));
  o.table.comments.push_back(std::string("branch_convention=") +
                             (opt.phase.branch == BranchConvention::per_point ? "per_point" : "uniform"));
  o.table.comments.push_back("envelope_samples=" + std::to_string(opt.envelope_samples));
  return o;
}

inline Table rigidity_table(const RigidityReport& rep) {
  Table t;
  t.columns = {"dir_rad", "lambda", "t", "re_int", "im_int", "abs_int", "abs_surrogate", "abs_resid",
               "resid_times_lambda", "admissible"};
  for (const auto& r : rep.rows)
    t.add_row({r.direction, r.lambda, r.t, r.integral.real(), r.integral.imag(), std::abs(r.integral),
               std::abs(r.surrogate), r.abs_resid, r.resid_times_lambda, r.admissible});
  return t;
}

inline Outcome run_planewave(const RunConfig& cfg) {
  const SupportCurve curve = require_curve(cfg);
  const BoundaryKind kind = parse_kind(cfg.kind);
  if (cfg.dirs < 1) throw Error(ErrorKind::InvalidInput, "--dirs must be >= 1");
  std::vector<LevelPoint> grid;
  for (double t : cfg.ts) grid.push_back({cfg.alpha, t});
  const auto rep = rigidity_scan(curve, kind, grid, static_cast<std::size_t>(cfg.dirs), cfg.allow_inadmissible,
                                 cfg.tol_factor);
  Outcome o;
  o.table = rigidity_table(rep);
  o.table.comments.push_back("kind=" + to_string(kind));
  o.table.comments.push_back("tol=" + fmt(rep.tol));
  o.table.comments.push_back("min_over_params_max_abs_int=" + fmt(rep.best_max_abs));
  if (!rep.disk_consistent) o.table.comments.push_back("witness_dir_rad=" + fmt(rep.witness_direction));
  o.table.comments.push_back("verdict: " + rep.verdict());
  return o;
}

inline EigenScanConfig eigen_config(const RunConfig& cfg, std::pair<double, double> window) {
  EigenScanConfig e;
  e.alpha_min = window.first;
  e.alpha_max = window.second;
  e.scan_step = cfg.scan_step;
  if (cfg.basis_order < 1) throw Error(ErrorKind::InvalidInput, "--basis-order must be >= 1");
  e.basis_order = static_cast<std::size_t>(cfg.basis_order);
  e.seed = cfg.seed;
  e.validate();
  return e;
}

inline void add_mode_comments(Table& t, const EigenVerdict& v) {
  for (const auto& c : v.cross_checks)
    t.comments.push_back("cross_check alpha=" + fmt(c.alpha) + " max_abs_int=" + fmt(c.max_abs_integral) +
                         (c.passed ? " passed" : " failed"));
  t.comments.push_back("hits=" + std::to_string(v.hits.size()));
  if (!v.modes.empty()) t.comments.push_back("min_deviation=" + fmt(v.min_deviation));
}

inline Outcome run_eigen(const RunConfig& cfg) {
  const SupportCurve curve = require_curve(cfg);
  const BoundaryKind kind = parse_kind(cfg.kind);
  if (cfg.alpha_window.empty()) throw Error(ErrorKind::InvalidInput, "--alpha-window is required");
  const EigenScanConfig ecfg = eigen_config(cfg, parse_window(cfg.alpha_window));
  const EigenVerdict v = verdict_from_modes(curve, kind, eigen_scan(curve, kind, ecfg), cfg.dev_tol);
  Outcome o;
  o.table.columns = {"alpha", "multiplicity", "deviation"};
  for (const auto& m : v.modes) o.table.add_row({m.alpha, static_cast<std::int64_t>(m.multiplicity), m.deviation});
  o.table.comments.push_back("kind=" + to_string(kind));
  o.table.comments.push_back("dev_tol=" + fmt(cfg.dev_tol));
  add_mode_comments(o.table, v);
  o.table.comments.push_back("verdict: " + v.verdict());
  return o;
}

inline Outcome run_geometry(const RunConfig& cfg) {
  const SupportCurve curve = require_curve(cfg);
  if (cfg.samples < 16) throw Error(ErrorKind::InvalidInput, "--samples must be >= 16");
  const auto wp = width_profile(curve, static_cast<std::size_t>(cfg.samples), cfg.geom_tol);
  const auto cert = symmetry_and_circle_certificate(curve, cfg.geom_tol);
  Outcome o;
  o.table.columns = {"quantity", "value"};
  o.table.add_row({std::string("kind"), std::string(curve.kind() == CurveKind::ellipse ? "ellipse" : "support_fourier")});
  o.table.add_row({std::string("centrally_symmetric"), cert.centrally_symmetric});
  o.table.add_row({std::string("constant_width"), cert.constant_width});
  o.table.add_row({std::string("is_circle"), cert.is_circle});
  o.table.add_row({std::string("center_x"), cert.center.x});
  o.table.add_row({std::string("center_y"), cert.center.y});
  o.table.add_row({std::string("w_min"), wp.w_min});
  o.table.add_row({std::string("w_max"), wp.w_max});
  if (wp.breadth) o.table.add_row({std::string("breadth"), *wp.breadth});
  o.table.add_row({std::string("perimeter"), perimeter(curve, 4096)});
  o.table.add_row({std::string("area"), area(curve, 4096)});
  o.table.add_row({std::string("min_rho"), curve.min_rho()});
  o.table.add_row({std::string("gamma"), admissibility_gamma(curve)});
  return o;
}

inline Outcome run_rigidity(const RunConfig& cfg) {
  const SupportCurve curve = require_curve(cfg);
  const BoundaryKind kind = parse_kind(cfg.kind);
  if (!(cfg.alpha > 0.0)) throw Error(ErrorKind::InvalidInput, "--alpha must be positive");
  if (cfg.dirs < 1) throw Error(ErrorKind::InvalidInput, "--dirs must be >= 1");
  const auto window = cfg.alpha_window.empty()
                          ? std::pair<double, double>{std::max(cfg.alpha - 0.5, 0.5 * cfg.alpha), cfg.alpha + 0.5}
                          : parse_window(cfg.alpha_window);
  const double t = cfg.ts.empty() ? 1.0 : cfg.ts.front();
  const auto pw = rigidity_scan(curve, kind, {{cfg.alpha, t}}, static_cast<std::size_t>(cfg.dirs), true, cfg.tol_factor);
  const EigenVerdict ev = rigidity_verdict(curve, kind, eigen_config(cfg, window), cfg.dev_tol, t,
                                           static_cast<std::size_t>(cfg.dirs));
  Outcome o;
  o.table = rigidity_table(pw);
  o.table.comments.push_back("kind=" + to_string(kind));
  o.table.comments.push_back("tol=" + fmt(pw.tol));
  o.table.comments.push_back("max_abs_int=" + fmt(pw.best_max_abs));
  o.table.comments.push_back("planewave_verdict: " + pw.verdict());
  o.table.comments.push_back("alpha_window=" + fmt(window.first) + ":" + fmt(window.second));
  for (const auto& m : ev.modes)
    o.table.comments.push_back("mode alpha=" + fmt(m.alpha) + " multiplicity=" + std::to_string(m.multiplicity) +
                               " deviation=" + fmt(m.deviation));
  if (ev.scan_failed) o.table.comments.push_back("eigen scan: " + ev.scan_message);
  add_mode_comments(o.table, ev);
  o.table.comments.push_back("eigen_verdict: " + ev.verdict());
  const bool disk = pw.disk_consistent && ev.solvable;
  o.table.comments.push_back(std::string("verdict: ") + (disk ? "DISK-CONSISTENT" : "NOT-DISK"));
  return o;
}

struct CheckList {
  Table table;
  bool ok = true;

  CheckList() { table.columns = {"check", "passed", "value"}; }
  void add(const std::string& name, bool pass, double value) {
    table.add_row({name, pass, value});
    ok = ok && pass;
  }
};

inline void specfun_checks(CheckList& c) {
  using namespace specfun;
  c.add("J0(0)=1", bessel_j(0, 0.0) == 1.0, bessel_j(0, 0.0));
  c.add("J1(0)=0", bessel_j(1, 0.0) == 0.0, bessel_j(1, 0.0));
  double worst = 0.0;
  for (int i = 0; i <= 99; ++i) {
    const double x = 0.5 + 0.5 * i;
    const auto J = bessel_j_orders(11, x);
    for (int m = 1; m <= 10; ++m) worst = std::max(worst, std::abs(J[m - 1] + J[m + 1] - 2.0 * m / x * J[m]));
  }
  c.add("recurrence x in [0.5,50], m<=10", worst < 1e-10, worst);
  worst = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double x = 0.5 * i, h = 1e-5;
    const double fd = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2 * h);
    worst = std::max(worst, std::abs(fd + bessel_j(1, x)));
  }
  c.add("J0' = -J1 (central difference)", worst < 1e-9, worst);
  const auto J = bessel_j_orders(40, 10.0);
  double s = J[0] * J[0];
  for (int m = 1; m <= 40; ++m) s += 2.0 * J[m] * J[m];
  c.add("sum J_m(10)^2 over |m|<=40", std::abs(s - 1.0) < 1e-10, s - 1.0);
  for (int order = 0; order <= 2; ++order) {
    const double z = bessel_j_zero(order, 1);
    c.add("J" + std::to_string(order) + "(first zero)", std::abs(bessel_j(order, z)) < 1e-12, bessel_j(order, z));
  }
}

inline Outcome run_specfun_selftest(const RunConfig&) {
  CheckList c;
  specfun_checks(c);
  return {c.table, c.ok ? 0 : 2};
}

inline Outcome run_selftest(const RunConfig& cfg) {
  CheckList c;
  specfun_checks(c);
  const auto rep = opcalc::check_expansion(4, 3, cfg.seed);
  c.add("expansion formula = bruteforce (n<=4)", rep.ok(), rep.checks);
  const opcalc::CoeffTable tab(5);
  c.add("d[3][5] = 40", tab.d(3, 5) == 40, static_cast<double>(tab.d(3, 5)));
  const auto disk = SupportCurve::disk(1.0);
  const auto reuleaux = SupportCurve::fourier(1.0, {0.0, 0.0, 0.05});
  const auto cert = symmetry_and_circle_certificate(reuleaux);
  c.add("h=1+0.05cos3t constant width, not a circle", cert.constant_width && !cert.is_circle, 0.0);
  const double barbier = std::abs(perimeter(reuleaux, 256) - kTwoPi);
  c.add("Barbier perimeter", barbier < 1e-10, barbier);
  const Jet1D j = jet_at(disk, 1.0);
  c.add("unit circle jet c4 = 1/8", std::abs(j.coeffs.c[4] - 0.125) < 1e-12, j.coeffs.c[4]);
  const PlaneWaveParams p(20.0, 1.0, 0.3);
  const double e = std::abs(boundary_integral(disk, p, BoundaryKind::dirichlet) -
                            kTwoPi * specfun::bessel_j(0, std::sqrt(p.alpha())));
  c.add("disk Dirichlet integral vs Bessel", e < 1e-10, e);
  const Complex l1 = critical_expansion(disk, 1.5 * std::numbers::pi, PlaneWaveParams(100.0, 0.0, 0.5 * std::numbers::pi)).L1_coeff;
  c.add("L1 on the unit circle = i/8", std::abs(l1 - Complex(0.0, 0.125)) < 1e-12, l1.imag());
  return {c.table, c.ok ? 0 : 2};
}

}  // namespace detail

/// Executes a parsed configuration. Diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    detail::Outcome o;
    switch (cfg.command) {
      case Command::leibniz: o = detail::run_leibniz(cfg); break;
      case Command::phase: o = detail::run_phase(cfg); break;
      case Command::planewave: o = detail::run_planewave(cfg); break;
      case Command::eigen: o = detail::run_eigen(cfg); break;
      case Command::geometry: o = detail::run_geometry(cfg); break;
      case Command::rigidity: o = detail::run_rigidity(cfg); break;
      case Command::selftest: o = detail::run_selftest(cfg); break;
      case Command::specfun_selftest: o = detail::run_specfun_selftest(cfg); break;
      case Command::none: throw Error(ErrorKind::InvalidInput, "no subcommand given");
    }
    o.table.comments.push_back("seed=" + std::to_string(cfg.seed));
    const std::string text = emit_report(o.table, cfg.format);
    if (cfg.output.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw Error(ErrorKind::IoError, "cannot write " + cfg.output);
      f << text;
      if (!f) throw Error(ErrorKind::IoError, "write failed for " + cfg.output);
    }
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// Parses argv. Returns std::nullopt with `cfg` filled when the command
/// should run, or the exit code to return immediately (help, parse errors).
inline std::optional<int> parse_run_config(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                                           std::ostream& err) {
  CLI::App app{"Oscillatory boundary integrals, overdetermined eigenproblems and constant-width geometry"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file with option defaults");
  std::string format = "csv";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", cfg.output, "Output file (default stdout)");
  app.add_option("--seed", cfg.seed, "RNG seed for interior collocation points and random checks");

  auto* leib = app.add_subcommand("leibniz", "Coefficient table d_k^n of the box^n(uv) expansion");
  leib->add_option("--nmax", cfg.nmax, "Largest n")->required()->check(CLI::Range(1, opcalc::CoeffTable::kMaxN));
  leib->add_flag("--check", cfg.check, "Compare the expansion with brute force for n <= min(nmax, 8)");
  leib->add_option("--pairs", cfg.pairs, "Random polynomial pairs per dimension");

  auto* phase = app.add_subcommand("phase", "Stationary-phase convergence scan");
  phase->add_option("--curve", cfg.curve_file, "Curve JSON")->required();
  phase->add_option("--direction", cfg.direction, "Direction phi of xi (radians)");
  phase->add_option("--t", cfg.t, "Exponential tilt t");
  phase->add_option("--lambda-grid", cfg.lambda_grid, "A:B:*F, A:B:+D or a comma list");
  phase->add_flag("--paper-signs", cfg.paper_signs, "Uniform bracket signs and uniform branch factor");
  phase->add_flag("--uniform-signs", cfg.uniform_signs, "Uniform bracket signs only");
  phase->add_flag("--uniform-branch", cfg.uniform_branch, "Uniform branch factor only");
  phase->add_option("--envelope", cfg.envelope, "Residual envelope samples per lambda");
  phase->add_flag("--allow-inadmissible", cfg.allow_inadmissible, "Run even if no lambda satisfies the growth condition");

  auto* pw = app.add_subcommand("planewave", "Plane-wave boundary integrals");
  pw->require_subcommand(1);
  auto* scan = pw->add_subcommand("scan", "Scan directions and tilts on an alpha level set");
  scan->add_option("--curve", cfg.curve_file, "Curve JSON")->required();
  scan->add_option("--kind", cfg.kind, "dirichlet or neumann")->check(CLI::IsMember({"dirichlet", "neumann"}));
  scan->add_option("--alpha", cfg.alpha, "alpha = lambda^2 - t^2")->required();
  scan->add_option("--t", cfg.ts, "Tilts")->delimiter(',');
  scan->add_option("--dirs", cfg.dirs, "Number of directions");
  scan->add_option("--tol-factor", cfg.tol_factor, "Verdict tolerance relative to the perimeter");
  scan->add_flag("--allow-inadmissible", cfg.allow_inadmissible, "Run inadmissible (lambda, t)");

  auto* eig = app.add_subcommand("eigen", "Helmholtz eigenvalues and overdetermined deviation");
  eig->add_option("--curve", cfg.curve_file, "Curve JSON")->required();
  eig->add_option("--kind", cfg.kind, "dirichlet or neumann")->check(CLI::IsMember({"dirichlet", "neumann"}));
  eig->add_option("--alpha-window", cfg.alpha_window, "A:B")->required();
  eig->add_option("--dev-tol", cfg.dev_tol, "Deviation threshold for overdetermined modes");
  eig->add_option("--step", cfg.scan_step, "Scan step in alpha");
  eig->add_option("--basis-order", cfg.basis_order, "Fourier-Bessel order M");

  auto* geo = app.add_subcommand("geometry", "Width profile and symmetry certificate");
  geo->add_option("--curve", cfg.curve_file, "Curve JSON")->required();
  geo->add_option("--samples", cfg.samples, "Width samples");
  geo->add_option("--tol", cfg.geom_tol, "Relative tolerance");

  auto* rig = app.add_subcommand("rigidity", "Plane-wave scan combined with an eigen scan");
  rig->add_option("--curve", cfg.curve_file, "Curve JSON")->required();
  rig->add_option("--kind", cfg.kind, "dirichlet or neumann")->check(CLI::IsMember({"dirichlet", "neumann"}));
  rig->add_option("--alpha", cfg.alpha, "alpha")->required();
  rig->add_option("--t", cfg.ts, "Tilt")->delimiter(',');
  rig->add_option("--dirs", cfg.dirs, "Number of directions");
  rig->add_option("--alpha-window", cfg.alpha_window, "Eigen scan window A:B (default alpha -/+ 0.5)");
  rig->add_option("--dev-tol", cfg.dev_tol, "Deviation threshold");
  rig->add_option("--step", cfg.scan_step, "Scan step in alpha");
  rig->add_option("--basis-order", cfg.basis_order, "Fourier-Bessel order M");
  rig->add_option("--tol-factor", cfg.tol_factor, "Verdict tolerance relative to the perimeter");

  auto* self = app.add_subcommand("selftest", "Quick cross-module checks");
  auto* sf = app.add_subcommand("specfun", "Special functions");
  sf->require_subcommand(1);
  auto* sf_self = sf->add_subcommand("selftest", "Bessel identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  cfg.format = format == "json" ? Format::json : Format::csv;
  if (*leib) cfg.command = Command::leibniz;
  else if (*phase) cfg.command = Command::phase;
  else if (*scan) cfg.command = Command::planewave;
  else if (*eig) cfg.command = Command::eigen;
  else if (*geo) cfg.command = Command::geometry;
  else if (*rig) cfg.command = Command::rigidity;
  else if (*self) cfg.command = Command::selftest;
  else if (*sf_self) cfg.command = Command::specfun_selftest;
  return std::nullopt;
}

}  // namespace oscint::cli
