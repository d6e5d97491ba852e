#pragma once

// Stationary phase for boundary plane-wave integrals. Along the boundary the
// phase <xi, x> has exactly two critical points, theta = phi (maximum) and
// theta = phi + pi (minimum), where phi is the direction of xi. Each
// contributes
//   e^{t<eta,p>} e^{i lambda <xi,p>} (2 pi / (lambda |k|))^{1/2} e^{i s pi/4} (1 + L1/lambda)
// with s = +1 at the minimum and -1 at the maximum.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oscint/curve.hpp"
#include "oscint/error.hpp"
#include "oscint/parallel.hpp"
#include "oscint/planewave.hpp"

namespace oscint {

/// alternating: i[ box/2 - box^2/8 + box^3/96 ] (D = -i d).
/// uniform: -i[ box/2 + box^2/8 + box^3/96 ], the literal bracket signs.
enum class SignConvention { alternating, uniform };

/// per_point: e^{i sgn(f'') pi/4} at each point. uniform: e^{i pi/4} at both.
enum class BranchConvention { per_point, uniform };

struct PhaseOptions {
  SignConvention sign = SignConvention::alternating;
  BranchConvention branch = BranchConvention::per_point;
  bool include_l1 = true;

  static PhaseOptions literal_reading() { return {SignConvention::uniform, BranchConvention::uniform, true}; }
};

struct CriticalData {
  double theta = 0.0;
  Vec2 position;
  double phase_value = 0.0;  ///< <xi, p>
  double k1 = 0.0;           ///< signed second derivative of the phase
  Jet1D g_jet;               ///< phase - phase_value - k1 x^2 / 2
  double t = 0.0;            ///< tilt along the tangent: t <eta, u_perp(theta)>
  double tilt = 0.0;         ///< t <eta, p>
};

struct ExpansionResult {
  Complex L0_term;
  Complex L1_coeff;
  Complex surrogate;
  double lambda = 0.0;
};

inline CriticalData critical_data(const SupportCurve& curve, double theta_c, const PlaneWaveParams& params) {
  const BoundaryPoint p = point_at(curve, theta_c);
  if (std::abs(dot(p.tangent, params.xi())) > 1e-10)
    throw Error(ErrorKind::NotCritical, "theta = " + std::to_string(theta_c) + " is not a critical point of the phase");
  // phase - <xi, p> = sigma y(x1), sigma = +1 where the outward normal is -xi
  const double sigma = dot(params.xi(), p.outward_normal) < 0.0 ? 1.0 : -1.0;
  CriticalData d;
  d.theta = theta_c;
  d.position = p.position;
  d.phase_value = dot(params.xi(), p.position);
  d.k1 = sigma * p.curvature;
  const Jet1D y = jet_at(curve, theta_c);
  d.g_jet.center = theta_c;
  d.g_jet.coeffs = sigma * y.coeffs;
  d.g_jet.coeffs.c[2] = 0.0;
  d.t = params.t() * dot(params.eta(), p.tangent);
  d.tilt = params.t() * dot(params.eta(), p.position);
  return d;
}

namespace detail {
inline void check_third_order(const Jet1D& g) {
  for (std::size_t k = 0; k < 3; ++k)
    if (g.coeffs.c[k] != 0.0) throw Error(ErrorKind::BadJet, "phase remainder jet must vanish to third order");
}

inline Complex l1_bracket(double box1, double box2, double box3, SignConvention sign) {
  const Complex i(0.0, 1.0);
  if (sign == SignConvention::alternating) return i * (0.5 * box1 - box2 / 8.0 + box3 / 96.0);
  return -i * (0.5 * box1 + box2 / 8.0 + box3 / 96.0);
}
}  // namespace detail

/// (g^2)^(6)(0) from the jet.
inline double g_squared_sixth(const Jet1D& g) { return 720.0 * (g.coeffs * g.coeffs).c[6]; }

/// L1 psi for the amplitude psi = delta e^{t x1} (delta = ds/dx1):
///   i[ (t^2/k1 + k1)/2 - (g'''' + 4 t g''')/(8 k1^2) + (g^2)^(6)/(96 k1^3) ].
inline Complex l1_amplitude(const Jet1D& g, double k1, double t, SignConvention sign = SignConvention::alternating) {
  detail::check_third_order(g);
  if (k1 == 0.0) throw Error(ErrorKind::InvalidInput, "k1 must be nonzero");
  const double g3 = 6.0 * g.coeffs.c[3];
  const double g4 = 24.0 * g.coeffs.c[4];
  const double box1 = t * t / k1 + k1;
  const double box2 = (g4 + 4.0 * t * g3) / (k1 * k1);
  const double box3 = g_squared_sixth(g) / (k1 * k1 * k1);
  return detail::l1_bracket(box1, box2, box3, sign);
}

/// The same operator for an arbitrary amplitude jet psi:
///   box psi = psi''/k1, box^2(g psi) = (g psi)''''/k1^2, box^3(g^2 psi) = (g^2 psi)^(6)/k1^3.
inline Complex l1_general(const Jet1D& g, double k1, const RealJet<kMaxJetOrder>& psi,
                          SignConvention sign = SignConvention::alternating) {
  detail::check_third_order(g);
  if (k1 == 0.0) throw Error(ErrorKind::InvalidInput, "k1 must be nonzero");
  const double box1 = 2.0 * psi.c[2] / k1;
  const double box2 = 24.0 * (g.coeffs * psi).c[4] / (k1 * k1);
  const double box3 = 720.0 * (g.coeffs * g.coeffs * psi).c[6] / (k1 * k1 * k1);
  return detail::l1_bracket(box1, box2, box3, sign);
}

/// Amplitude jet delta(x1) e^{t x1} with delta = sqrt(1 + y'(x1)^2).
inline RealJet<kMaxJetOrder> amplitude_jet(const Jet1D& y, double t) {
  const RealJet<kMaxJetOrder> dy = y.coeffs.derivative_jet();
  RealJet<kMaxJetOrder> lin;
  lin.c[1] = t;
  return sqrt(1.0 + dy * dy) * exp(lin);
}

inline ExpansionResult critical_expansion(const SupportCurve& curve, double theta_c, const PlaneWaveParams& params,
                                          const PhaseOptions& opt = {}) {
  const CriticalData d = critical_data(curve, theta_c, params);
  const double lambda = params.lambda();
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidInput, "stationary phase needs lambda > 0");
  const double s = opt.branch == BranchConvention::uniform ? 1.0 : (d.k1 > 0.0 ? 1.0 : -1.0);
  ExpansionResult r;
  r.lambda = lambda;
  r.L0_term = std::exp(d.tilt) * std::polar(1.0, lambda * d.phase_value) *
              std::sqrt(kTwoPi / (lambda * std::abs(d.k1))) * std::polar(1.0, s * 0.25 * std::numbers::pi);
  r.L1_coeff = l1_amplitude(d.g_jet, d.k1, d.t, opt.sign);
  r.surrogate = opt.include_l1 ? r.L0_term * (1.0 + r.L1_coeff / lambda) : r.L0_term;
  return r;
}

inline Complex critical_contribution(const SupportCurve& curve, double theta_c, const PlaneWaveParams& params,
                                     const PhaseOptions& opt = {}) {
  return critical_expansion(curve, theta_c, params, opt).surrogate;
}

/// The two critical parameters: (maximum, minimum).
inline std::pair<double, double> critical_thetas(const PlaneWaveParams& params) {
  return {params.direction(), params.direction() + std::numbers::pi};
}

inline Complex two_point_surrogate(const SupportCurve& curve, const PlaneWaveParams& params,
                                   const PhaseOptions& opt = {}) {
  const auto [top, bottom] = critical_thetas(params);
  return critical_contribution(curve, top, params, opt) + critical_contribution(curve, bottom, params, opt);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidInput, "slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ConvergenceRow {
  double lambda = 0.0;
  double abs_integral = 0.0;
  double resid_l0 = 0.0;
  double resid_l01 = 0.0;
  bool growth_ok = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double slope_l0 = 0.0;
  double slope_l01 = 0.0;
  double gamma = 0.0;
  double beat_period = 0.0;
};

struct ScanOptions {
  PhaseOptions phase;
  std::size_t envelope_samples = 8;
  bool allow_inadmissible = false;
};

/// For each lambda: |integral|, and the residuals of the L0 and L0+L1
/// surrogates. Residuals are envelopes: the maximum over `envelope_samples`
/// values of lambda spread over one beat period 2 pi / w(phi) of the two
/// critical points. Slopes are fitted on all rows but the smallest lambda.
inline ConvergenceReport convergence_scan(const SupportCurve& curve, double direction, double t,
                                          const std::vector<double>& lambda_grid, const ScanOptions& opt = {}) {
  if (lambda_grid.size() < 4) throw Error(ErrorKind::InvalidInput, "lambda grid needs at least 4 points");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1])) throw Error(ErrorKind::InvalidInput, "lambda grid must be increasing");
  if (!(lambda_grid.front() > t)) throw Error(ErrorKind::InvalidInput, "lambda grid must exceed t");
  if (opt.envelope_samples < 1) throw Error(ErrorKind::InvalidInput, "envelope_samples must be >= 1");

  ConvergenceReport rep;
  rep.gamma = admissibility_gamma(curve);
  bool any_ok = false;
  for (double l : lambda_grid) any_ok = any_ok || admissible(rep.gamma, PlaneWaveParams(l, t, direction)).growth_ok;
  if (!any_ok && !opt.allow_inadmissible)
    throw Error(ErrorKind::InvalidInput, "inadmissible: exp(2 gamma t) > sqrt(lambda) for every lambda on the grid");
  rep.beat_period = kTwoPi / width_at(curve, direction);

  const std::size_t m = opt.envelope_samples;
  PhaseOptions l0 = opt.phase;
  l0.include_l1 = false;
  struct Sample {
    double abs_int, r0, r01;
  };
  const auto samples = parallel_map(lambda_grid.size() * m, [&](std::size_t idx) {
    const std::size_t i = idx / m, j = idx % m;
    const double lambda = lambda_grid[i] + rep.beat_period * static_cast<double>(j) / static_cast<double>(m);
    const PlaneWaveParams p(lambda, t, direction);
    const Complex integral = boundary_integral(curve, p, BoundaryKind::dirichlet);
    return Sample{std::abs(integral), std::abs(integral - two_point_surrogate(curve, p, l0)),
                  std::abs(integral - two_point_surrogate(curve, p, opt.phase))};
  });
  std::vector<double> xs, y0, y01;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    ConvergenceRow row;
    row.lambda = lambda_grid[i];
    row.abs_integral = samples[i * m].abs_int;
    for (std::size_t j = 0; j < m; ++j) {
      row.resid_l0 = std::max(row.resid_l0, samples[i * m + j].r0);
      row.resid_l01 = std::max(row.resid_l01, samples[i * m + j].r01);
    }
    row.growth_ok = admissible(rep.gamma, PlaneWaveParams(row.lambda, t, direction)).growth_ok;
    rep.rows.push_back(row);
    if (i > 0) {
      xs.push_back(row.lambda);
      y0.push_back(row.resid_l0);
      y01.push_back(row.resid_l01);
    }
  }
  rep.slope_l0 = loglog_slope(xs, y0);
  rep.slope_l01 = loglog_slope(xs, y01);
  return rep;
}

/// Geometric lambda grid a, a*f, a*f^2, ... <= b.
inline std::vector<double> geometric_grid(double a, double b, double factor) {
  if (!(a > 0.0) || !(b >= a) || !(factor > 1.0)) throw Error(ErrorKind::InvalidInput, "bad geometric grid");
  std::vector<double> g;
  for (double v = a; v <= b * (1.0 + 1e-12); v *= factor) g.push_back(v);
  return g;
}

}  // namespace oscint
