#pragma once

// Plane-wave rigidity scans: for a grid of directions and level-set points
// (alpha, t), compare the boundary integral with its two-point surrogate.

#include <cmath>
#include <string>
#include <vector>

#include "oscint/curve.hpp"
#include "oscint/parallel.hpp"
#include "oscint/planewave.hpp"
#include "oscint/stphase.hpp"

namespace oscint {

struct RigidityRow {
  double direction = 0.0;
  double lambda = 0.0;
  double t = 0.0;
  Complex integral;
  Complex surrogate;
  double abs_resid = 0.0;
  double resid_times_lambda = 0.0;
  double scaled_two_point = 0.0;
  bool admissible = false;
};

struct RigidityReport {
  BoundaryKind kind = BoundaryKind::dirichlet;
  std::vector<RigidityRow> rows;
  double tol = 0.0;
  bool disk_consistent = false;
  /// params index with the smallest max |integral| over directions
  std::size_t best_params = 0;
  double best_max_abs = 0.0;
  double witness_direction = 0.0;
  bool all_admissible = true;

  std::string verdict() const { return disk_consistent ? "DISK-CONSISTENT" : "NOT-DISK"; }
};

struct LevelPoint {
  double alpha = 0.0;
  double t = 0.0;
};

/// lambda^{1/2} |k(p)^{-1/2} e^{i lambda xi.p} + k(p*)^{-1/2} e^{i lambda xi.p*} e^{t eta.(p* - p)}|
/// with p the minimum point of the phase and p* the opposite one.
inline double scaled_two_point(const SupportCurve& curve, const PlaneWaveParams& params) {
  const auto [top, bottom] = critical_thetas(params);
  const BoundaryPoint p = point_at(curve, bottom);
  const BoundaryPoint q = point_at(curve, top);
  const Complex a = std::polar(1.0 / std::sqrt(p.curvature), params.lambda() * dot(params.xi(), p.position));
  const Complex b = std::polar(std::exp(params.t() * dot(params.eta(), q.position - p.position)) / std::sqrt(q.curvature),
                               params.lambda() * dot(params.xi(), q.position));
  return std::sqrt(params.lambda()) * std::abs(a + b);
}

/// Surrogate for the chosen kind. For Neumann each critical contribution is
/// multiplied by <t eta + i lambda xi, nu_out(p)>.
inline Complex kind_surrogate(const SupportCurve& curve, const PlaneWaveParams& params, BoundaryKind kind,
                              const PhaseOptions& opt = {}) {
  if (kind == BoundaryKind::dirichlet) return two_point_surrogate(curve, params, opt);
  const auto [top, bottom] = critical_thetas(params);
  Complex s = 0.0;
  for (double th : {top, bottom})
    s += params.gradient_factor(unit_at(th)) * critical_contribution(curve, th, params, opt);
  return s;
}

inline RigidityReport rigidity_scan(const SupportCurve& curve, BoundaryKind kind, const std::vector<LevelPoint>& grid,
                                    std::size_t n_dirs, bool allow_inadmissible = false, double tol_factor = 1e-6) {
  if (grid.empty()) throw Error(ErrorKind::InvalidInput, "rigidity scan needs at least one (alpha, t) point");
  if (n_dirs < 1) throw Error(ErrorKind::InvalidInput, "rigidity scan needs at least one direction");
  RigidityReport rep;
  rep.kind = kind;
  rep.tol = tol_factor * perimeter(curve);
  const double gamma = admissibility_gamma(curve);
  for (const auto& g : grid) {
    const bool ok = admissible(gamma, PlaneWaveParams::from_alpha(g.alpha, g.t, 0.0)).ok;
    rep.all_admissible = rep.all_admissible && ok;
  }
  if (!rep.all_admissible && !allow_inadmissible)
    throw Error(ErrorKind::InvalidInput, "inadmissible (lambda, t) on the grid; pass the override to force");

  rep.rows = parallel_map(grid.size() * n_dirs, [&](std::size_t idx) {
    const std::size_t gi = idx / n_dirs, di = idx % n_dirs;
    const double phi = kTwoPi * static_cast<double>(di) / static_cast<double>(n_dirs);
    const PlaneWaveParams p = PlaneWaveParams::from_alpha(grid[gi].alpha, grid[gi].t, phi);
    RigidityRow r;
    r.direction = phi;
    r.lambda = p.lambda();
    r.t = p.t();
    r.integral = boundary_integral(curve, p, kind);
    r.surrogate = kind_surrogate(curve, p, kind);
    r.abs_resid = std::abs(r.integral - r.surrogate);
    r.resid_times_lambda = r.abs_resid * r.lambda;
    r.scaled_two_point = scaled_two_point(curve, p);
    r.admissible = admissible(gamma, p).ok;
    return r;
  });

  rep.best_max_abs = INFINITY;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double worst = 0.0, worst_dir = 0.0;
    for (std::size_t di = 0; di < n_dirs; ++di) {
      const auto& r = rep.rows[gi * n_dirs + di];
      if (std::abs(r.integral) > worst) {
        worst = std::abs(r.integral);
        worst_dir = r.direction;
      }
    }
    if (worst < rep.best_max_abs) {
      rep.best_max_abs = worst;
      rep.best_params = gi;
      rep.witness_direction = worst_dir;
    }
  }
  rep.disk_consistent = rep.best_max_abs < rep.tol;
  return rep;
}

}  // namespace oscint
