#pragma once

// Plane waves phi(x) = exp(t <eta, x>) exp(i lambda <xi, x>), xi orthogonal
// to eta, and their integrals over the boundary and interior of a convex
// domain. -Laplace phi = (lambda^2 - t^2) phi.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "oscint/curve.hpp"
#include "oscint/error.hpp"

namespace oscint {

using Complex = std::complex<double>;

class PlaneWaveParams {
 public:
  /// xi = (cos phi, sin phi), eta = (-sin phi, cos phi).
  PlaneWaveParams(double lambda, double t, double phi)
      : PlaneWaveParams(lambda, t, unit_at(phi), perp(unit_at(phi))) {
    phi_ = phi;
  }

  PlaneWaveParams(double lambda, double t, Vec2 xi, Vec2 eta) : lambda_(lambda), t_(t), xi_(xi), eta_(eta) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidInput, "lambda must be >= 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "t must be >= 0");
    // -Laplace phi = (lambda^2 |xi|^2 - t^2 |eta|^2 - 2 i lambda t <xi, eta>) phi
    if (std::abs(dot(xi, eta)) > 1e-14 || std::abs(dot(xi, xi) - 1.0) > 1e-14 || std::abs(dot(eta, eta) - 1.0) > 1e-14)
      throw Error(ErrorKind::InvalidInput, "xi and eta must be orthonormal");
    phi_ = std::atan2(xi.y, xi.x);
  }

  /// Point on the level set lambda^2 - t^2 = alpha.
  static PlaneWaveParams from_alpha(double alpha, double t, double phi) {
    const double l2 = alpha + t * t;
    if (!(l2 >= 0.0)) throw Error(ErrorKind::InvalidInput, "alpha + t^2 must be non-negative");
    return PlaneWaveParams(std::sqrt(l2), t, phi);
  }

  double lambda() const { return lambda_; }
  double t() const { return t_; }
  Vec2 xi() const { return xi_; }
  Vec2 eta() const { return eta_; }
  double direction() const { return phi_; }
  double alpha() const { return lambda_ * lambda_ - t_ * t_; }

  Complex value(Vec2 x) const { return std::polar(std::exp(t_ * dot(eta_, x)), lambda_ * dot(xi_, x)); }

  /// grad phi = (t eta + i lambda xi) phi; returns (t eta + i lambda xi) . v
  Complex gradient_factor(Vec2 v) const { return {t_ * dot(eta_, v), lambda_ * dot(xi_, v)}; }

  PlaneWaveParams rotated(double beta) const {
    return PlaneWaveParams(lambda_, t_, rotate(xi_, beta), rotate(eta_, beta));
  }

 private:
  double lambda_;
  double t_;
  Vec2 xi_;
  Vec2 eta_;
  double phi_ = 0.0;
};

enum class BoundaryKind { dirichlet, neumann };

inline std::string to_string(BoundaryKind k) { return k == BoundaryKind::dirichlet ? "dirichlet" : "neumann"; }

inline constexpr std::size_t kMaxQuadNodes = std::size_t{1} << 18;

struct QuadratureResult {
  Complex value;
  std::size_t nodes = 0;
  double last_change = 0.0;
};

namespace detail {
inline Complex boundary_integrand(const QuadNode& q, const PlaneWaveParams& p, BoundaryKind kind) {
  Complex f = p.value(q.position) * q.weight;
  if (kind == BoundaryKind::neumann) f *= p.gradient_factor(q.normal);
  return f;
}
}  // namespace detail

/// Dirichlet: integral over the boundary of phi dS. Neumann: integral of
/// d phi / d nu_out dS. Periodic trapezoid in theta with node doubling until
/// successive sums agree to 1e-12 max(1, |S|).
inline QuadratureResult boundary_integral_detail(const SupportCurve& curve, const PlaneWaveParams& params,
                                                 BoundaryKind kind, std::size_t n_nodes = 64) {
  if (n_nodes < 64) throw Error(ErrorKind::InvalidInput, "boundary_integral needs n_nodes >= 64");
  std::size_t n = n_nodes;
  Complex sum = 0.0;
  for (const auto& q : quad_nodes(curve, n)) sum += detail::boundary_integrand(q, params, kind);
  double change = 0.0;
  while (2 * n <= kMaxQuadNodes) {
    Complex odd = 0.0;
    for (const auto& q : quad_nodes(curve, 2 * n, true)) odd += detail::boundary_integrand(q, params, kind);
    // each odd node already carries weight rho * dt_{2n}; old nodes halve
    const Complex next = 0.5 * sum + odd;
    change = std::abs(next - sum);
    n *= 2;
    sum = next;
    if (change <= 1e-12 * std::max(1.0, std::abs(sum))) return {sum, n, change};
  }
  throw Error(ErrorKind::QuadratureFailure, "boundary integral did not converge with 2^18 nodes (last change " +
                                                std::to_string(change) + ")");
}

inline Complex boundary_integral(const SupportCurve& curve, const PlaneWaveParams& params, BoundaryKind kind,
                                 std::size_t n_nodes = 64) {
  return boundary_integral_detail(curve, params, kind, n_nodes).value;
}

/// Gauss-Legendre nodes and weights on [0, 1].
inline void gauss_legendre01(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Integral of phi over the domain, by the map (s, theta) -> c + s (x(theta) - c)
/// about the curve centre c, with dA = s rho(theta) (h(theta) - <c, u>) ds dtheta.
/// Gauss-Legendre in s times trapezoid in theta, doubled until stable.
inline Complex area_integral(const SupportCurve& curve, const PlaneWaveParams& params) {
  const Vec2 c = curve.center();
  auto eval = [&](std::size_t ns, std::size_t nt) {
    std::vector<double> xs, ws;
    gauss_legendre01(ns, xs, ws);
    Complex acc = 0.0;
    const double dt = kTwoPi / static_cast<double>(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      const BoundaryPoint b = point_at(curve, dt * static_cast<double>(j));
      const Vec2 d = b.position - c;
      const double jac = (1.0 / b.curvature) * dot(d, b.outward_normal);
      Complex inner = 0.0;
      for (std::size_t i = 0; i < ns; ++i) inner += ws[i] * xs[i] * params.value(c + xs[i] * d);
      acc += jac * inner;
    }
    return acc * dt;
  };
  std::size_t ns = 24, nt = 64;
  Complex prev = eval(ns, nt);
  for (int level = 0; level < 6; ++level) {
    ns *= 2;
    nt *= 2;
    const Complex next = eval(ns, nt);
    if (std::abs(next - prev) <= 1e-12 * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw Error(ErrorKind::QuadratureFailure, "area integral did not converge");
}

// ---- admissibility and thresholds ----------------------------------------

inline const double kGammaFloor = std::pow(24.0, 0.25);

struct Admissibility {
  bool ok = false;
  double gamma = 0.0;
  bool growth_ok = false;  ///< exp(2 gamma t) <= sqrt(lambda)
};

inline double admissibility_gamma(const SupportCurve& curve) { return std::max(max_width(curve), kGammaFloor); }

inline Admissibility admissible(double gamma, const PlaneWaveParams& params) {
  Admissibility a;
  a.gamma = gamma;
  a.growth_ok = std::exp(2.0 * gamma * params.t()) <= std::sqrt(params.lambda());
  a.ok = a.growth_ok && params.t() >= 1.0 && params.t() < params.lambda();
  return a;
}

inline Admissibility admissible(const SupportCurve& curve, const PlaneWaveParams& params) {
  return admissible(admissibility_gamma(curve), params);
}

/// lambda*^2 - t*^2.
inline double alpha_star(double lambda_star, double t_star) {
  if (!(t_star >= 1.0)) throw Error(ErrorKind::InvalidInput, "t* must be >= 1");
  if (!(t_star < lambda_star)) throw Error(ErrorKind::InvalidOrder, "t* must be smaller than lambda*");
  return lambda_star * lambda_star - t_star * t_star;
}

/// max{4 M_sum^2 k(p1), exp(4 gamma t_tilde)}.
inline double threshold_lambda(double m_sum, double k_p1, double gamma, double t_tilde) {
  return std::max(4.0 * m_sum * m_sum * k_p1, std::exp(4.0 * gamma * t_tilde));
}

enum class ThresholdBranch { curvature_ratio, log_ratio, degenerate };

struct ThresholdT {
  double value = 0.0;
  ThresholdBranch branch = ThresholdBranch::curvature_ratio;
};

/// C_* when sqrt(k(p*)) >= 2 sqrt(k(p)); otherwise
/// max{(ln(1/2) + ln(k(p*)/k(p))/2) / p*_1 + eps, C_*}. A vanishing p*_1 makes
/// the second branch vacuous and C_* is returned, flagged degenerate.
inline ThresholdT threshold_t(double k_p, double k_pstar, double p_star_x, double c_star, double eps) {
  if (!(k_p > 0.0) || !(k_pstar > 0.0)) throw Error(ErrorKind::InvalidInput, "curvatures must be positive");
  if (std::sqrt(k_pstar) >= 2.0 * std::sqrt(k_p)) return {c_star, ThresholdBranch::curvature_ratio};
  if (p_star_x == 0.0) return {c_star, ThresholdBranch::degenerate};
  const double v = (std::log(0.5) + 0.5 * std::log(k_pstar / k_p)) / p_star_x + eps;
  return {std::max(v, c_star), ThresholdBranch::log_ratio};
}

}  // namespace oscint
