#pragma once

// Dirichlet and Neumann Laplace eigenvalues of a convex domain by the method
// of particular solutions: Fourier-Bessel functions J_m(k r){cos, sin}(m phi)
// about the curve centre, k = sqrt(alpha), collocated on the boundary and at
// random interior points. Eigenvalues are the minima in alpha of the
// smallest singular value of the boundary block of an orthonormal basis of
// the full collocation space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oscint/curve.hpp"
#include "oscint/error.hpp"
#include "oscint/parallel.hpp"
#include "oscint/planewave.hpp"
#include "oscint/rigidity.hpp"
#include "oscint/specfun.hpp"

namespace oscint {

struct EigenScanConfig {
  double alpha_min = 5.0;
  double alpha_max = 7.0;
  double scan_step = 0.02;
  std::size_t basis_order = 25;
  std::size_t n_boundary = 0;  ///< 0 means 4 M
  std::size_t n_interior = 0;  ///< 0 means 2 M
  double refine_tol = 1e-9;
  double accept_sigma = 1e-6;
  std::uint64_t seed = 42;

  std::size_t boundary_points() const { return n_boundary ? n_boundary : 4 * basis_order; }
  std::size_t interior_points() const { return n_interior ? n_interior : 2 * basis_order; }

  void validate() const {
    if (!(alpha_min > 0.0)) throw Error(ErrorKind::InvalidInput, "alpha_min must be positive");
    if (!(alpha_max > alpha_min)) throw Error(ErrorKind::InvalidInput, "alpha_max must exceed alpha_min");
    if (!(scan_step > 0.0)) throw Error(ErrorKind::InvalidInput, "scan_step must be positive");
    if (basis_order < 1 || basis_order > static_cast<std::size_t>(specfun::kMaxOrder) - 1)
      throw Error(ErrorKind::InvalidInput, "basis order must be in [1, 59]");
    if (!(2 * basis_order < boundary_points())) throw Error(ErrorKind::InvalidInput, "need M < N_b / 2");
    if (interior_points() < basis_order) throw Error(ErrorKind::InvalidInput, "need N_i >= M");
    if (!(refine_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "refine_tol must be positive");
  }
};

struct EigenMode {
  double alpha = 0.0;
  BoundaryKind kind = BoundaryKind::dirichlet;
  std::vector<double> coefficients;  ///< J_0, then (cos, sin) pairs for m = 1..M
  Vec2 center;
  std::vector<std::pair<double, double>> boundary_data;  ///< (theta, du/dnu) or (theta, u)
  double deviation = 0.0;
  double sigma = 0.0;
  std::size_t multiplicity = 1;
};

/// std / rms of the samples; DegenerateMode if rms < 1e-12.
inline double deviation_of(const std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorKind::DegenerateMode, "no boundary data");
  double s = 0.0, s2 = 0.0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(v.size());
  const double rms = std::sqrt(s2 / n);
  if (rms < 1e-12) throw Error(ErrorKind::DegenerateMode, "boundary data vanish identically");
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  return std::sqrt(var) / rms;
}

inline double boundary_deviation(const EigenMode& mode) {
  std::vector<double> v;
  v.reserve(mode.boundary_data.size());
  for (const auto& [th, x] : mode.boundary_data) v.push_back(x);
  return deviation_of(v);
}

/// u(x) for a mode.
inline double mode_value(const EigenMode& mode, Vec2 x) {
  const std::size_t M = (mode.coefficients.size() - 1) / 2;
  const Vec2 d = x - mode.center;
  const double r = norm(d), ang = std::atan2(d.y, d.x);
  const auto J = specfun::bessel_j_orders(static_cast<int>(M), std::sqrt(mode.alpha) * r);
  double u = mode.coefficients[0] * J[0];
  for (std::size_t m = 1; m <= M; ++m) {
    const double md = static_cast<double>(m);
    u += J[m] * (mode.coefficients[2 * m - 1] * std::cos(md * ang) + mode.coefficients[2 * m] * std::sin(md * ang));
  }
  return u;
}

/// Normalised L2 inner product of two modes over the domain.
inline double mode_inner_product(const SupportCurve& curve, const EigenMode& a, const EigenMode& b,
                                 std::size_t ns = 40, std::size_t nt = 160) {
  std::vector<double> xs, ws;
  gauss_legendre01(ns, xs, ws);
  const Vec2 c = curve.center();
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    const BoundaryPoint p = point_at(curve, kTwoPi * static_cast<double>(j) / static_cast<double>(nt));
    const Vec2 d = p.position - c;
    const double jac = dot(d, p.outward_normal) / p.curvature;
    for (std::size_t i = 0; i < ns; ++i) {
      const Vec2 x = c + xs[i] * d;
      const double w = jac * ws[i] * xs[i];
      const double ua = mode_value(a, x), ub = mode_value(b, x);
      ab += w * ua * ub;
      aa += w * ua * ua;
      bb += w * ub * ub;
    }
  }
  return ab / std::sqrt(aa * bb);
}

namespace detail {

struct CollocationPoint {
  double theta = 0.0;
  double r = 0.0;
  double angle = 0.0;
  Vec2 normal;  ///< outward normal (boundary points only)
};

class MpsProblem {
 public:
  MpsProblem(const SupportCurve& curve, BoundaryKind kind, const EigenScanConfig& cfg)
      : kind_(kind), M_(cfg.basis_order), center_(curve.center()) {
    const std::size_t nb = cfg.boundary_points(), ni = cfg.interior_points();
    for (std::size_t j = 0; j < nb; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(nb);
      const BoundaryPoint p = point_at(curve, th);
      boundary_.push_back(polar(th, p.position, p.outward_normal));
    }
    std::mt19937_64 rng(cfg.seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (std::size_t j = 0; j < ni; ++j) {
      const double th = kTwoPi * unit();
      const double s = 0.9 * std::sqrt(unit());
      const BoundaryPoint p = point_at(curve, th);
      interior_.push_back(polar(th, center_ + s * (p.position - center_), {}));
    }
  }

  std::size_t columns() const { return 2 * M_ + 1; }
  std::size_t n_boundary() const { return boundary_.size(); }
  Vec2 center() const { return center_; }
  const std::vector<CollocationPoint>& boundary() const { return boundary_; }

  /// Boundary rows: u (Dirichlet) or du/dnu / max(k, 1) (Neumann).
  Eigen::MatrixXd matrix(double alpha) const {
    const double k = std::sqrt(alpha);
    Eigen::MatrixXd A(boundary_.size() + interior_.size(), columns());
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
      if (kind_ == BoundaryKind::dirichlet) value_row(boundary_[i], k, A, i);
      else normal_row(boundary_[i], k, A, i, 1.0 / std::max(k, 1.0));
    }
    for (std::size_t i = 0; i < interior_.size(); ++i) value_row(interior_[i], k, A, boundary_.size() + i);
    return A;
  }

  /// du/dnu (Dirichlet) or u (Neumann) basis rows at the boundary points.
  Eigen::MatrixXd trace_matrix(double alpha) const {
    const double k = std::sqrt(alpha);
    Eigen::MatrixXd T(boundary_.size(), columns());
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
      if (kind_ == BoundaryKind::dirichlet) normal_row(boundary_[i], k, T, i, 1.0);
      else value_row(boundary_[i], k, T, i);
    }
    return T;
  }

 private:
  CollocationPoint polar(double theta, Vec2 x, Vec2 normal) const {
    const Vec2 d = x - center_;
    return {theta, norm(d), std::atan2(d.y, d.x), normal};
  }

  void value_row(const CollocationPoint& p, double k, Eigen::MatrixXd& A, std::size_t row) const {
    const auto J = specfun::bessel_j_orders(static_cast<int>(M_), k * p.r);
    A(static_cast<Eigen::Index>(row), 0) = J[0];
    for (std::size_t m = 1; m <= M_; ++m) {
      const double md = static_cast<double>(m);
      A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(2 * m - 1)) = J[m] * std::cos(md * p.angle);
      A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(2 * m)) = J[m] * std::sin(md * p.angle);
    }
  }

  void normal_row(const CollocationPoint& p, double k, Eigen::MatrixXd& A, std::size_t row, double scale) const {
    const auto J = specfun::bessel_j_orders(static_cast<int>(M_) + 1, k * p.r);
    const Vec2 er = unit_at(p.angle), ep = perp(er);
    const double nr = dot(p.normal, er), np = dot(p.normal, ep);
    // grad(J_m(kr) cos m phi) = k J_m' cos er - (m / r) J_m sin ep
    const auto r = static_cast<Eigen::Index>(row);
    A(r, 0) = scale * (-k * J[1]) * nr;
    for (std::size_t m = 1; m <= M_; ++m) {
      const double md = static_cast<double>(m);
      const double dj = 0.5 * k * (J[m - 1] - J[m + 1]);
      const double jr = md * J[m] / p.r;
      const double c = std::cos(md * p.angle), s = std::sin(md * p.angle);
      A(r, static_cast<Eigen::Index>(2 * m - 1)) = scale * (dj * c * nr - jr * s * np);
      A(r, static_cast<Eigen::Index>(2 * m)) = scale * (dj * s * nr + jr * c * np);
    }
  }

  BoundaryKind kind_;
  std::size_t M_;
  Vec2 center_;
  std::vector<CollocationPoint> boundary_;
  std::vector<CollocationPoint> interior_;
};

struct SubspaceAngles {
  Eigen::VectorXd sigma;         ///< singular values of Q_B, ascending
  Eigen::MatrixXd coefficients;  ///< basis coefficients, one column per singular value
};

inline SubspaceAngles subspace_angles(const MpsProblem& prob, double alpha, bool want_vectors) {
  Eigen::MatrixXd A = prob.matrix(alpha);
  Eigen::VectorXd scale(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double n = A.col(j).norm();
    scale(j) = n > 0.0 ? 1.0 / n : 0.0;
    A.col(j) *= scale(j);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-12 * s(0)) ++r;
  const Eigen::MatrixXd QB = svd.matrixU().topLeftCorner(static_cast<Eigen::Index>(prob.n_boundary()), r);
  SubspaceAngles out;
  if (!want_vectors) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> sb(QB);
    out.sigma = sb.singularValues().reverse();
    return out;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> sb(QB, Eigen::ComputeThinV);
  out.sigma = sb.singularValues().reverse();
  const Eigen::MatrixXd W = sb.matrixV().rowwise().reverse();
  // Q = A_n V_r S_r^{-1}, so Q w = A_n (V_r S_r^{-1} w)
  const Eigen::MatrixXd C = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal() * W;
  out.coefficients = scale.asDiagonal() * C;
  return out;
}

inline double min_sigma(const MpsProblem& prob, double alpha) {
  const auto a = subspace_angles(prob, alpha, false);
  return a.sigma(0);
}

}  // namespace detail

struct EigenScanResult {
  std::vector<EigenMode> modes;
  std::vector<std::pair<double, double>> curve;  ///< (alpha, sigma_min) on the scan grid
  std::size_t dips = 0;
  std::size_t rejected = 0;
};

/// Modes in [alpha_min, alpha_max], sorted by alpha. A dip with refined
/// sigma_min >= accept_sigma is rejected; NoDipFound if the scan has no local
/// minimum, IllConditioned if every dip is rejected.
inline EigenScanResult eigen_scan_detail(const SupportCurve& curve, BoundaryKind kind, const EigenScanConfig& cfg) {
  cfg.validate();
  const detail::MpsProblem prob(curve, kind, cfg);
  const auto n = static_cast<std::size_t>(std::floor((cfg.alpha_max - cfg.alpha_min) / cfg.scan_step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = std::min(cfg.alpha_min + cfg.scan_step * static_cast<double>(i), cfg.alpha_max);
  const auto sig = parallel_map(n, [&](std::size_t i) { return detail::min_sigma(prob, grid[i]); });

  EigenScanResult res;
  for (std::size_t i = 0; i < n; ++i) res.curve.emplace_back(grid[i], sig[i]);
  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || sig[i] <= sig[i - 1];
    const bool right = i + 1 == n || sig[i] <= sig[i + 1];
    if (left && right && n > 1) minima.push_back(i);
  }
  res.dips = minima.size();
  if (minima.empty()) throw Error(ErrorKind::NoDipFound, "no dip of the subspace angle in the alpha window");

  struct Refined {
    double alpha, sigma;
  };
  const auto refined = parallel_map(minima.size(), [&](std::size_t d) {
    const std::size_t i = minima[d];
    double lo = grid[i == 0 ? 0 : i - 1], hi = grid[i + 1 == n ? n - 1 : i + 1];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = detail::min_sigma(prob, x1), f2 = detail::min_sigma(prob, x2);
    while (hi - lo > cfg.refine_tol) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = detail::min_sigma(prob, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = detail::min_sigma(prob, x2);
      }
    }
    return f1 < f2 ? Refined{x1, f1} : Refined{x2, f2};
  });

  bool interior_dip = false;
  for (std::size_t d = 0; d < minima.size(); ++d) {
    const auto& r = refined[d];
    interior_dip = interior_dip || (minima[d] > 0 && minima[d] + 1 < n);
    if (!(r.sigma < cfg.accept_sigma)) {
      ++res.rejected;
      continue;
    }
    const auto sa = detail::subspace_angles(prob, r.alpha, true);
    const double thresh = std::max(100.0 * sa.sigma(0), 1e-8);
    std::size_t mult = 0;
    while (mult < static_cast<std::size_t>(sa.sigma.size()) && sa.sigma(static_cast<Eigen::Index>(mult)) <= thresh) ++mult;
    mult = std::max<std::size_t>(mult, 1);
    const Eigen::MatrixXd T = prob.trace_matrix(r.alpha);
    for (std::size_t q = 0; q < mult; ++q) {
      EigenMode mode;
      mode.alpha = r.alpha;
      mode.kind = kind;
      mode.center = prob.center();
      mode.sigma = sa.sigma(static_cast<Eigen::Index>(q));
      mode.multiplicity = mult;
      const Eigen::VectorXd c = sa.coefficients.col(static_cast<Eigen::Index>(q));
      const Eigen::VectorXd trace = T * c;
      double s2 = 0.0, s1 = 0.0;
      for (Eigen::Index i = 0; i < trace.size(); ++i) {
        s2 += trace(i) * trace(i);
        s1 += trace(i);
      }
      const double rms = std::sqrt(s2 / static_cast<double>(trace.size()));
      const double norm_factor = rms > 0.0 ? (s1 < 0.0 ? -1.0 : 1.0) / rms : 1.0;
      mode.coefficients.assign(c.data(), c.data() + c.size());
      for (auto& v : mode.coefficients) v *= norm_factor;
      for (Eigen::Index i = 0; i < trace.size(); ++i)
        mode.boundary_data.emplace_back(prob.boundary()[static_cast<std::size_t>(i)].theta, trace(i) * norm_factor);
      mode.deviation = boundary_deviation(mode);
      res.modes.push_back(std::move(mode));
    }
  }
  // a monotone sigma curve only has endpoint minima: no dip at all
  if (res.modes.empty() && !interior_dip)
    throw Error(ErrorKind::NoDipFound, "no dip of the subspace angle in the alpha window");
  if (res.modes.empty())
    throw Error(ErrorKind::IllConditioned,
                "all " + std::to_string(res.dips) + " dips have smallest singular value >= " + std::to_string(cfg.accept_sigma));
  std::stable_sort(res.modes.begin(), res.modes.end(), [](const EigenMode& a, const EigenMode& b) { return a.alpha < b.alpha; });
  return res;
}

inline std::vector<EigenMode> eigen_scan(const SupportCurve& curve, BoundaryKind kind, const EigenScanConfig& cfg) {
  return eigen_scan_detail(curve, kind, cfg).modes;
}

struct CrossCheck {
  double alpha = 0.0;
  double max_abs_integral = 0.0;
  bool passed = false;
};

struct EigenVerdict {
  std::vector<EigenMode> modes;
  std::vector<std::size_t> hits;  ///< indices into modes with deviation < dev_tol
  std::vector<CrossCheck> cross_checks;
  double min_deviation = INFINITY;
  bool solvable = false;
  bool scan_failed = false;
  std::string scan_message;

  std::string verdict() const { return solvable ? "OVERDETERMINED-SOLVABLE" : "NO-OVERDETERMINED-MODE-IN-WINDOW"; }
};

/// Modes whose overdetermined boundary quantity is constant to dev_tol,
/// each cross-checked against the plane-wave integral at the same alpha.
inline EigenVerdict verdict_from_modes(const SupportCurve& curve, BoundaryKind kind, std::vector<EigenMode> modes,
                                       double dev_tol, double cross_t = 1.0, std::size_t cross_dirs = 16) {
  EigenVerdict v;
  v.modes = std::move(modes);
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    v.min_deviation = std::min(v.min_deviation, v.modes[i].deviation);
    if (v.modes[i].deviation < dev_tol) v.hits.push_back(i);
  }
  for (std::size_t i : v.hits) {
    const RigidityReport rep = rigidity_scan(curve, kind, {{v.modes[i].alpha, cross_t}}, cross_dirs, true);
    v.cross_checks.push_back({v.modes[i].alpha, rep.best_max_abs, rep.disk_consistent});
    v.solvable = v.solvable || rep.disk_consistent;
  }
  return v;
}

/// As verdict_from_modes on a fresh scan. A window without any accepted
/// dip yields no modes rather than an error.
inline EigenVerdict rigidity_verdict(const SupportCurve& curve, BoundaryKind kind, const EigenScanConfig& cfg,
                                     double dev_tol, double cross_t = 1.0, std::size_t cross_dirs = 16) {
  std::vector<EigenMode> modes;
  std::string message;
  try {
    modes = eigen_scan(curve, kind, cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoDipFound && e.kind() != ErrorKind::IllConditioned) throw;
    message = e.what();
  }
  EigenVerdict v = verdict_from_modes(curve, kind, std::move(modes), dev_tol, cross_t, cross_dirs);
  v.scan_failed = !message.empty();
  v.scan_message = message;
  return v;
}

}  // namespace oscint
