// Acceptance runner: one PASS/FAIL line per criterion.
// usage: acceptance <path to oscint binary> <curve data directory>

#include <sys/wait.h>

#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "oscint/curve.hpp"
#include "oscint/planewave.hpp"
#include "oscint/report.hpp"
#include "oscint/stphase.hpp"

using namespace oscint;

namespace {

std::string g_cli, g_data;

struct CliRun {
  int code = -1;
  std::string out;
};

// every command is run twice; criterion 10 compares the pairs
std::vector<std::pair<std::string, std::pair<std::string, std::string>>> g_runs;

CliRun run_once(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

CliRun cli(const std::string& args) {
  const CliRun a = run_once(args);
  const CliRun b = run_once(args);
  g_runs.push_back({args, {a.out, b.out}});
  return a;
}

std::string curve(const std::string& name) { return "'" + g_data + "/" + name + "'"; }

bool has_comment(const Table& t, const std::string& c) {
  return std::find(t.comments.begin(), t.comments.end(), c) != t.comments.end();
}

/// value of a "key=value" comment, NaN when absent
double comment_value(const Table& t, const std::string& key) {
  for (const auto& c : t.comments)
    if (c.rfind(key + "=", 0) == 0) return std::stod(c.substr(key.size() + 1));
  return std::nan("");
}

std::string comment_with_prefix(const Table& t, const std::string& prefix) {
  for (const auto& c : t.comments)
    if (c.rfind(prefix, 0) == 0) return c.substr(prefix.size());
  return "";
}

double num(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::nan("");
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      notes.push_back(what);
    }
  }
};

int g_failed = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) o.require(secs < budget_s, "runtime " + std::to_string(secs) + " s over budget");
  std::ostringstream line;
  line << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << std::fixed;
  line.precision(2);
  line << secs << " s)";
  for (const auto& n : o.notes) line << " | " << n;
  std::cout << line.str() << std::endl;
  if (!o.pass) ++g_failed;
}

std::int64_t binom(int n, int k) {
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - i + 1) / i;
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <oscint binary> <curve directory>\n";
    return 1;
  }
  g_cli = argv[1];
  g_data = argv[2];
  const double pi = std::numbers::pi;
  const double j01_sq = std::pow(boost::math::cyl_bessel_j_zero(0.0, 1), 2);

  criterion(1, "expansion formula equals brute force for n <= 8, N = 1..3, 50 pairs", 10.0, [](Outcome& o) {
    const auto r = cli("leibniz --nmax 8 --check --pairs 50");
    o.require(r.code == 0, "exit code " + std::to_string(r.code));
    const Table t = parse_csv(r.out);
    o.require(has_comment(t, "all checks passed"), "missing '# all checks passed'");
    o.require(has_comment(t, "expansion checks: 1200, mismatches: 0"), "expected 1200 checks without mismatch");
    const std::map<int, std::vector<std::int64_t>> rows = {
        {3, {1, 6, 12, 8}}, {4, {1, 8, 24, 32, 16}}, {5, {1, 10, 40, 80, 80, 32}}};
    for (const auto& [n, want] : rows)
      for (std::size_t k = 1; k <= want.size(); ++k) {
        bool found = false;
        for (const auto& row : t.rows)
          if (std::get<std::int64_t>(row[0]) == n && std::get<std::int64_t>(row[1]) == static_cast<std::int64_t>(k))
            found = std::get<std::int64_t>(row[2]) == want[k - 1];
        o.require(found, "d[" + std::to_string(k) + "][" + std::to_string(n) + "] != " + std::to_string(want[k - 1]));
      }
  });

  criterion(2, "coefficient identities for n <= 12", 1.0, [](Outcome& o) {
    const auto r = cli("leibniz --nmax 12");
    o.require(r.code == 0, "exit code " + std::to_string(r.code));
    std::map<std::pair<int, int>, std::int64_t> d;
    for (const auto& row : parse_csv(r.out).rows)
      d[{static_cast<int>(std::get<std::int64_t>(row[1])), static_cast<int>(std::get<std::int64_t>(row[0]))}] =
          std::get<std::int64_t>(row[2]);
    for (int n = 1; n <= 12; ++n) {
      const std::string at = " at n=" + std::to_string(n);
      o.require(d.at({2, n}) == 2 * n, "d2" + at);
      if (n >= 2) o.require(d.at({3, n}) == 2 * (n - 2) * (n + 1) + 4, "d3" + at);
      if (n >= 4) o.require(d.at({n, n}) == n * (std::int64_t{1} << (n - 1)), "dnn" + at);
      o.require(d.at({n + 1, n}) == (std::int64_t{1} << n), "d(n+1)n" + at);
      std::int64_t sum = 0;
      for (int k = 1; k <= n + 1; ++k) {
        sum += d.at({k, n}) * (std::int64_t{1} << (n - k + 1));
        o.require(d.at({k, n}) == binom(n, k - 1) << (k - 1), "binomial oracle k=" + std::to_string(k) + at);
      }
      o.require(sum == (std::int64_t{1} << (2 * n)), "4^n sum" + at);
    }
  });

  criterion(3, "disk plane-wave oracles (Dirichlet, Neumann, J0 zeros)", 5.0, [](Outcome& o) {
    const auto disk = SupportCurve::disk(1.0);
    double worst_d = 0.0, worst_n = 0.0, worst_z = 0.0;
    for (double lambda : {5.0, 20.0, 50.0})
      for (double t : {0.0, 1.0, 2.0}) {
        const PlaneWaveParams p(lambda, t, 0.7);
        const double s = std::sqrt(p.alpha());
        worst_d = std::max(worst_d, std::abs(boundary_integral(disk, p, BoundaryKind::dirichlet) -
                                             kTwoPi * boost::math::cyl_bessel_j(0, s)));
        worst_n = std::max(worst_n, std::abs(boundary_integral(disk, p, BoundaryKind::neumann) +
                                             kTwoPi * s * boost::math::cyl_bessel_j(1, s)));
      }
    for (int k = 1; k <= 3; ++k) {
      const double z = boost::math::cyl_bessel_j_zero(0.0, k);
      for (double t : {0.0, 1.0, 2.0})
        for (double phi : {0.0, 1.0, 2.5})
          worst_z = std::max(worst_z, std::abs(boundary_integral(disk, PlaneWaveParams::from_alpha(z * z, t, phi),
                                                                 BoundaryKind::dirichlet)));
    }
    o.require(worst_d < 1e-10, "Dirichlet error " + format_double(worst_d));
    o.require(worst_n < 1e-9, "Neumann error " + format_double(worst_n));
    o.require(worst_z < 1e-9, "|I_D| at zeros " + format_double(worst_z));
    o.notes.push_back("max errors " + format_double(worst_d) + ", " + format_double(worst_n) + ", " + format_double(worst_z));
  });

  criterion(4, "stationary-phase residual orders and sign-convention negative control", 60.0, [&](Outcome& o) {
    const std::string grid = " --lambda-grid 100:6400:*2";
    const auto disk = cli("phase --curve " + curve("disk.json") + " --t 0" + grid);
    o.require(disk.code == 0, "disk exit code " + std::to_string(disk.code));
    const Table d = parse_csv(disk.out);
    o.require(d.rows.size() == 7, "expected 7 lambda rows");
    const double s01 = comment_value(d, "slope_L01"), s0 = comment_value(d, "slope_L0");
    o.require(s01 >= -2.7 && s01 <= -2.3, "disk L0+L1 slope " + format_double(s01));
    o.require(s0 >= -1.7 && s0 <= -1.3, "disk L0 slope " + format_double(s0));
    // |integral| against 2 pi J0(lambda)
    for (const auto& row : d.rows)
      o.require(std::abs(num(row[1]) - std::abs(kTwoPi * boost::math::cyl_bessel_j(0, num(row[0])))) < 1e-10,
                "abs_integral mismatch at lambda " + format_double(num(row[0])));

    const auto ell = cli("phase --curve " + curve("ellipse.json") + " --t 0.5" + grid);
    o.require(ell.code == 0, "ellipse exit code " + std::to_string(ell.code));
    const Table e = parse_csv(ell.out);
    const double se = comment_value(e, "slope_L01");
    o.require(se <= -1.4, "ellipse L0+L1 slope " + format_double(se));

    const auto lit = cli("phase --curve " + curve("disk.json") + " --t 0 --paper-signs" + grid);
    const double sl = comment_value(parse_csv(lit.out), "slope_L01");
    o.require(lit.code == 0 && !(sl >= -2.7 && sl <= -2.3), "negative control did not fail the band: " + format_double(sl));
    const auto rule = cli("phase --curve " + curve("disk.json") + " --t 0 --uniform-signs" + grid);
    const double sr = comment_value(parse_csv(rule.out), "slope_L01");
    o.require(rule.code == 0 && !(sr >= -2.7 && sr <= -2.3), "sign-rule control did not fail the band: " + format_double(sr));
    // literal signs give the first correction -7i/8 instead of i/8
    PhaseOptions uniform;
    uniform.sign = SignConvention::uniform;
    const auto c = SupportCurve::disk(1.0);
    const PlaneWaveParams p(100.0, 0.0, 0.5 * pi);
    const Complex a = critical_expansion(c, 1.5 * pi, p).L1_coeff, b = critical_expansion(c, 1.5 * pi, p, uniform).L1_coeff;
    o.require(std::abs(b.imag() / a.imag() + 7.0) < 1e-12, "literal L1 is not -7 times the alternating one");
    o.notes.push_back("slopes disk " + format_double(s01) + " / " + format_double(s0) + ", ellipse " + format_double(se) +
                      ", literal " + format_double(sl) + ", sign rule " + format_double(sr));
  });

  criterion(5, "closed-form L1 on the unit circle and (g^2)^(6) = 20 g'''^2", 0.0, [&](Outcome& o) {
    Jet1D g = jet_at(SupportCurve::disk(1.0), 1.5 * pi);
    g.coeffs.c[2] = 0.0;
    for (double t : {0.0, 1.0, 2.0}) {
      const Complex l1 = l1_amplitude(g, 1.0, t);
      o.require(std::abs(l1 - Complex(0.0, t * t / 2 + 0.125)) < 1e-12, "L1 at t=" + format_double(t));
    }
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> coeff(-4096, 4096);
    int exact = 0;
    for (int i = 0; i < 100; ++i) {
      Jet1D r;
      for (std::size_t k = 3; k <= kMaxJetOrder; ++k) r.coeffs.c[k] = coeff(rng) / 256.0;
      const double g3 = 6.0 * r.coeffs.c[3];
      if (g_squared_sixth(r) == 20.0 * g3 * g3) ++exact;
    }
    o.require(exact == 100, std::to_string(100 - exact) + " random jets differ");
  });

  criterion(6, "admissibility gate", 0.0, [](Outcome& o) {
    const auto disk = SupportCurve::disk(1.0);
    const double gamma = admissibility_gamma(disk);
    o.require(std::abs(gamma - std::pow(24.0, 0.25)) < 1e-12, "gamma " + format_double(gamma));
    const double thr = std::exp(4.0 * gamma);
    o.require(std::abs(thr / 6998.5 - 1.0) < 1e-4, "threshold " + format_double(thr));
    o.require(admissible(disk, PlaneWaveParams(7100.0, 1.0, 0.0)).ok, "lambda=7100 should be admissible");
    o.require(!admissible(disk, PlaneWaveParams(6900.0, 1.0, 0.0)).ok, "lambda=6900 should be inadmissible");
    for (double lambda : {2.0, 100.0, 7100.0, 1e6})
      o.require(!admissible(disk, PlaneWaveParams(lambda, 0.0, 0.0)).ok, "t=0 admitted at lambda " + format_double(lambda));
    o.notes.push_back("threshold " + format_double(thr));
  });

  criterion(7, "eigensolver reference values", 30.0, [](Outcome& o) {
    const auto d = cli("eigen --curve " + curve("disk.json") + " --alpha-window 5:7");
    const Table dt = parse_csv(d.out);
    o.require(d.code == 0 && dt.rows.size() == 1, "disk Dirichlet scan");
    if (dt.rows.size() == 1) {
      const double a = num(dt.rows[0][0]);
      o.require(std::abs(a - 5.783185962946785) < 1e-6, "first Dirichlet " + format_double(a));
      o.require(num(dt.rows[0][2]) < 1e-6, "radial Dirichlet deviation " + format_double(num(dt.rows[0][2])));
    }
    const auto n = cli("eigen --curve " + curve("disk.json") + " --kind neumann --alpha-window 14.3:15");
    const Table nt = parse_csv(n.out);
    o.require(n.code == 0 && nt.rows.size() == 1, "disk Neumann scan");
    if (nt.rows.size() == 1) {
      const double a = num(nt.rows[0][0]);
      o.require(std::abs(a - 14.68197064) < 1e-5, "first radial Neumann " + format_double(a));
      o.require(num(nt.rows[0][2]) < 1e-6, "radial Neumann deviation " + format_double(num(nt.rows[0][2])));
    }
    const auto e = cli("eigen --curve " + curve("ellipse.json") + " --alpha-window 4:36");
    const Table et = parse_csv(e.out);
    std::size_t count = 0;
    double min_dev = INFINITY;
    for (const auto& row : et.rows) {
      if (count >= 10) break;
      ++count;
      min_dev = std::min(min_dev, num(row[2]));
    }
    o.require(e.code == 0 && count >= 10, "fewer than 10 ellipse modes in [4, 36]");
    o.require(min_dev > 1e-2, "ellipse minimum deviation " + format_double(min_dev));
    o.notes.push_back("ellipse min deviation over first 10 modes " + format_double(min_dev));
  });

  criterion(8, "geometry certificate", 5.0, [&](Outcome& o) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    int passed_both = 0;
    for (int i = 0; i < 1000; ++i) {
      // mix of circles, even curves, constant-width curves and generic ones
      const int type = pick(rng);
      std::vector<double> c(6, 0.0), s(6, 0.0);
      for (int k = 2; k <= 6; ++k) {
        const bool even = k % 2 == 0;
        const bool keep = type == 3 || (type == 1 && even) || (type == 2 && !even);
        if (!keep) continue;
        c[k - 1] = 0.02 * amp(rng) / (k * k);
        s[k - 1] = 0.02 * amp(rng) / (k * k);
      }
      const auto curve = SupportCurve::fourier(1.0, c, s);
      const auto cert = symmetry_and_circle_certificate(curve, 1e-10);
      if (cert.centrally_symmetric && cert.constant_width) {
        ++passed_both;
        bool small = true;
        for (std::size_t k = 1; k < c.size(); ++k) small = small && std::abs(c[k]) < 1e-10 && std::abs(s[k]) < 1e-10;
        o.require(small && cert.is_circle, "symmetric constant-width curve " + std::to_string(i) + " is not a circle");
      }
    }
    o.require(passed_both > 0, "no curve passed both tests");
    const auto r = cli("geometry --curve " + curve("reuleaux.json"));
    const Table t = parse_csv(r.out);
    std::map<std::string, Cell> v;
    for (const auto& row : t.rows) v[std::get<std::string>(row[0])] = row[1];
    o.require(r.code == 0, "geometry exit code");
    o.require(v["constant_width"] == Cell(true), "reuleaux constant_width");
    o.require(v["centrally_symmetric"] == Cell(false), "reuleaux centrally_symmetric");
    o.require(v["is_circle"] == Cell(false), "reuleaux is_circle");
    o.require(std::abs(num(v["breadth"]) - 2.0) < 1e-12, "breadth " + format_double(num(v["breadth"])));
    o.require(std::abs(num(v["perimeter"]) - 2.0 * pi) < 1e-10, "Barbier perimeter");
    const Table e = parse_csv(cli("geometry --curve " + curve("ellipse.json")).out);
    std::map<std::string, Cell> ev;
    for (const auto& row : e.rows) ev[std::get<std::string>(row[0])] = row[1];
    o.require(ev["centrally_symmetric"] == Cell(true), "ellipse centrally_symmetric");
    o.require(ev["constant_width"] == Cell(false), "ellipse constant_width");
    o.notes.push_back(std::to_string(passed_both) + " random curves passed both tests");
  });

  criterion(9, "end-to-end rigidity on disk, ellipse and Reuleaux-type curve", 60.0, [&](Outcome& o) {
    const std::string args = " --alpha " + format_double(j01_sq) + " --t 1 --dirs 16";
    const auto d = cli("rigidity --curve " + curve("disk.json") + args);
    const Table dt = parse_csv(d.out);
    o.require(d.code == 0, "disk exit code " + std::to_string(d.code));
    o.require(has_comment(dt, "verdict: DISK-CONSISTENT"), "disk verdict");
    double worst = 0.0;
    for (const auto& row : dt.rows) worst = std::max(worst, num(row[5]));
    o.require(dt.rows.size() == 16 && worst < 1e-9, "disk plane-wave max " + format_double(worst));
    const std::string mode = comment_with_prefix(dt, "mode ");
    const auto pos = mode.find("deviation=");
    o.require(pos != std::string::npos && std::stod(mode.substr(pos + 10)) < 1e-4, "disk mode deviation");
    for (const char* name : {"ellipse.json", "reuleaux.json"}) {
      const auto r = cli("rigidity --curve " + curve(name) + args);
      const Table t = parse_csv(r.out);
      o.require(r.code == 0, std::string(name) + " exit code " + std::to_string(r.code));
      o.require(has_comment(t, "verdict: NOT-DISK"), std::string(name) + " verdict");
      o.require(has_comment(t, "eigen_verdict: NO-OVERDETERMINED-MODE-IN-WINDOW"), std::string(name) + " eigen verdict");
    }
  });

  criterion(10, "determinism of every acceptance command", 0.0, [](Outcome& o) {
    for (const auto& [args, outs] : g_runs) o.require(outs.first == outs.second && !outs.first.empty(), "differs: " + args);
    o.notes.push_back(std::to_string(g_runs.size()) + " commands run twice");
  });

  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed") << std::endl;
  return g_failed == 0 ? 0 : 1;
}
