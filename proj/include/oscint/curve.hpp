#pragma once

// Strictly convex planar curves given by their support function h(theta).
// The boundary point with outward normal u = (cos t, sin t) is
//   x(t) = h(t) u(t) + h'(t) u_perp(t),   u_perp = (-sin t, cos t),
// with radius of curvature rho = h + h'' > 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscint/error.hpp"
#include "oscint/jet.hpp"

namespace oscint {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_at(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

enum class CurveKind { support_fourier, ellipse };

struct BoundaryPoint {
  double theta = 0.0;
  Vec2 position;
  Vec2 outward_normal;
  Vec2 tangent;
  double curvature = 0.0;
};

class SupportCurve {
 public:
  /// h(t) = a0 + sum_n cos_n cos(n t) + sin_n sin(n t), harmonics numbered from 1.
  static SupportCurve fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs = {}) {
    SupportCurve c;
    c.kind_ = CurveKind::support_fourier;
    c.a0_ = a0;
    const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
    cos_coeffs.resize(n, 0.0);
    sin_coeffs.resize(n, 0.0);
    c.cos_ = std::move(cos_coeffs);
    c.sin_ = std::move(sin_coeffs);
    if (!(a0 > 0.0)) throw Error(ErrorKind::InvalidInput, "a0 must be positive");
    c.validate_convexity();
    return c;
  }

  static SupportCurve disk(double radius) { return fourier(radius, {}, {}); }

  /// Axis-aligned ellipse (rotated by `angle`) centred at the origin.
  static SupportCurve ellipse(double a, double b, double angle = 0.0) {
    if (!(b > 0.0) || !(a >= b)) throw Error(ErrorKind::InvalidInput, "ellipse requires a >= b > 0");
    SupportCurve c;
    c.kind_ = CurveKind::ellipse;
    c.a_ = a;
    c.b_ = b;
    c.angle_ = angle;
    c.validate_convexity();
    return c;
  }

  CurveKind kind() const { return kind_; }
  double a0() const { return a0_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  double semi_major() const { return a_; }
  double semi_minor() const { return b_; }
  double angle() const { return angle_; }

  /// Taylor jet of h at theta, order N.
  template <std::size_t N>
  RealJet<N> support_jet(double theta) const {
    RealJet<N> j;
    if (kind_ == CurveKind::support_fourier) {
      j.c[0] = a0_;
      double fact = 1.0;
      for (std::size_t k = 0; k <= N; ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        const double shift = 0.5 * std::numbers::pi * static_cast<double>(k);
        double acc = 0.0;
        for (std::size_t m = 0; m < cos_.size(); ++m) {
          const double n = static_cast<double>(m + 1);
          const double nk = std::pow(n, static_cast<double>(k));
          acc += nk * (cos_[m] * std::cos(n * theta + shift) + sin_[m] * std::sin(n * theta + shift));
        }
        j.c[k] += acc / fact;
      }
      return j;
    }
    RealJet<N> s, c;
    sincos(RealJet<N>::variable(theta - angle_), s, c);
    return sqrt(a_ * a_ * (c * c) + b_ * b_ * (s * s));
  }

  double h(double theta) const {
    if (kind_ == CurveKind::ellipse) {
      const double c = std::cos(theta - angle_), s = std::sin(theta - angle_);
      return std::sqrt(a_ * a_ * c * c + b_ * b_ * s * s);
    }
    double acc = a0_;
    for (std::size_t m = 0; m < cos_.size(); ++m) {
      const double n = static_cast<double>(m + 1);
      acc += cos_[m] * std::cos(n * theta) + sin_[m] * std::sin(n * theta);
    }
    return acc;
  }

  /// (h, h', h'') at theta.
  std::array<double, 3> h_derivs(double theta) const {
    if (kind_ == CurveKind::ellipse) {
      const auto j = support_jet<2>(theta);
      return {j.c[0], j.c[1], 2.0 * j.c[2]};
    }
    double h0 = a0_, h1 = 0.0, h2 = 0.0;
    for (std::size_t m = 0; m < cos_.size(); ++m) {
      const double n = static_cast<double>(m + 1);
      const double cn = std::cos(n * theta), sn = std::sin(n * theta);
      h0 += cos_[m] * cn + sin_[m] * sn;
      h1 += n * (-cos_[m] * sn + sin_[m] * cn);
      h2 -= n * n * (cos_[m] * cn + sin_[m] * sn);
    }
    return {h0, h1, h2};
  }

  /// Radius of curvature h + h''.
  double rho(double theta) const {
    if (kind_ == CurveKind::ellipse) {
      const double hv = h(theta);
      return a_ * a_ * b_ * b_ / (hv * hv * hv);
    }
    const auto d = h_derivs(theta);
    return d[0] + d[2];
  }

  /// Centre of the curve: the translation that removes the first harmonic.
  Vec2 center() const {
    if (kind_ == CurveKind::ellipse || cos_.empty()) return {};
    return {cos_[0], sin_[0]};
  }

  /// Same curve rotated about the origin by `beta`: h_new(t) = h(t - beta).
  SupportCurve rotated(double beta) const {
    if (kind_ == CurveKind::ellipse) return ellipse(a_, b_, angle_ + beta);
    std::vector<double> c(cos_.size()), s(sin_.size());
    for (std::size_t m = 0; m < cos_.size(); ++m) {
      const double n = static_cast<double>(m + 1);
      const double cb = std::cos(n * beta), sb = std::sin(n * beta);
      c[m] = cos_[m] * cb - sin_[m] * sb;
      s[m] = cos_[m] * sb + sin_[m] * cb;
    }
    return fourier(a0_, std::move(c), std::move(s));
  }

  SupportCurve scaled(double factor) const {
    if (!(factor > 0.0)) throw Error(ErrorKind::InvalidInput, "scale factor must be positive");
    if (kind_ == CurveKind::ellipse) return ellipse(factor * a_, factor * b_, angle_);
    std::vector<double> c = cos_, s = sin_;
    for (auto& v : c) v *= factor;
    for (auto& v : s) v *= factor;
    return fourier(factor * a0_, std::move(c), std::move(s));
  }

  /// Translation by d adds d.x cos t + d.y sin t to h (Fourier kind only).
  SupportCurve translated(Vec2 d) const {
    if (kind_ == CurveKind::ellipse) throw Error(ErrorKind::InvalidInput, "ellipse curves are centred at the origin");
    std::vector<double> c = cos_, s = sin_;
    if (c.empty()) {
      c.assign(1, 0.0);
      s.assign(1, 0.0);
    }
    c[0] += d.x;
    s[0] += d.y;
    return fourier(a0_, std::move(c), std::move(s));
  }

  double min_rho() const { return min_rho_; }

 private:
  SupportCurve() = default;

  void validate_convexity() {
    // dense grid, then golden-section refinement around the smallest samples
    const std::size_t harmonics = std::max<std::size_t>(cos_.size(), 4);
    const std::size_t n = 64 * harmonics;
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = rho(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    double best = *std::min_element(vals.begin(), vals.end());
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double prev = vals[(i + n - 1) % n], next = vals[(i + 1) % n];
      if (vals[i] > prev || vals[i] > next) continue;
      const double centre = step * static_cast<double>(i);
      double lo = centre - step, hi = centre + step;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = rho(x1), f2 = rho(x2);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = rho(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = rho(x2);
        }
      }
      best = std::min({best, f1, f2});
    }
    min_rho_ = best;
    const double scale = kind_ == CurveKind::ellipse ? a_ : a0_;
    if (!(best > 1e-12 * scale))
      throw Error(ErrorKind::NonConvex, "radius of curvature h + h'' reaches " + std::to_string(best));
  }

  CurveKind kind_ = CurveKind::support_fourier;
  double a0_ = 1.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
  double a_ = 1.0;
  double b_ = 1.0;
  double angle_ = 0.0;
  double min_rho_ = 0.0;
};

inline BoundaryPoint point_at(const SupportCurve& curve, double theta) {
  const auto [h0, h1, h2] = curve.h_derivs(theta);
  const double r = curve.kind() == CurveKind::ellipse ? curve.rho(theta) : h0 + h2;
  if (!(r > 0.0)) throw Error(ErrorKind::NonConvex, "rho <= 0 at theta = " + std::to_string(theta));
  const Vec2 u = unit_at(theta);
  const Vec2 t = perp(u);
  return {theta, h0 * u + h1 * t, u, t, 1.0 / r};
}

struct WidthProfile {
  std::vector<std::pair<double, double>> samples;
  double w_min = 0.0;
  double w_max = 0.0;
  bool is_constant = false;
  std::optional<double> breadth;
};

inline double width_at(const SupportCurve& curve, double theta) {
  return curve.h(theta) + curve.h(theta + std::numbers::pi);
}

inline WidthProfile width_profile(const SupportCurve& curve, std::size_t n_samples, double tol = 1e-10) {
  if (n_samples < 16) throw Error(ErrorKind::InvalidInput, "width_profile needs at least 16 samples");
  WidthProfile p;
  p.samples.reserve(n_samples);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(n_samples);
    const double w = width_at(curve, th);
    p.samples.emplace_back(th, w);
    sum += w;
  }
  const double mean = sum / static_cast<double>(n_samples);
  p.w_min = p.w_max = p.samples.front().second;
  double dev = 0.0;
  for (const auto& [th, w] : p.samples) {
    p.w_min = std::min(p.w_min, w);
    p.w_max = std::max(p.w_max, w);
    dev = std::max(dev, std::abs(w - mean));
  }
  p.is_constant = dev <= tol * mean;
  if (p.is_constant) p.breadth = mean;
  return p;
}

/// Maximum width, refined by golden section around the best grid sample.
inline double max_width(const SupportCurve& curve) {
  constexpr std::size_t n = 1024;
  std::size_t best_i = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = width_at(curve, std::numbers::pi * static_cast<double>(i) / n);
    if (w > best) {
      best = w;
      best_i = i;
    }
  }
  const double step = std::numbers::pi / n;
  double lo = step * (static_cast<double>(best_i) - 1.0), hi = lo + 2.0 * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (width_at(curve, x1) > width_at(curve, x2)) hi = x2;
    else lo = x1;
  }
  return std::max(best, width_at(curve, 0.5 * (lo + hi)));
}

struct Involution {
  BoundaryPoint p_star;
  double breadth = 0.0;
  double double_normal_residual = 0.0;
};

/// The opposite-normal point p* = x(theta + pi), the breadth in that
/// direction, and |h'(theta) + h'(theta + pi)|, which is zero exactly when
/// the chord p p* is a double normal.
inline Involution involution(const SupportCurve& curve, double theta) {
  const BoundaryPoint p = point_at(curve, theta);
  Involution inv;
  inv.p_star = point_at(curve, theta + std::numbers::pi);
  inv.breadth = dot(inv.p_star.position - p.position, -p.outward_normal);
  const double d1 = curve.h_derivs(theta)[1];
  const double d2 = curve.h_derivs(theta + std::numbers::pi)[1];
  inv.double_normal_residual = std::abs(d1 + d2);
  return inv;
}

struct CircleCertificate {
  bool centrally_symmetric = false;
  bool constant_width = false;
  bool is_circle = false;
  Vec2 center;
};

/// Central symmetry about the curve's own centre means every odd harmonic
/// n >= 3 vanishes; constant width means every even harmonic n >= 2
/// vanishes. Both together leave only a0: a circle of radius a0.
inline CircleCertificate symmetry_and_circle_certificate(const SupportCurve& curve, double tol = 1e-10) {
  CircleCertificate cert;
  cert.center = curve.center();
  if (curve.kind() == CurveKind::ellipse) {
    cert.centrally_symmetric = true;
    cert.constant_width = (curve.semi_major() - curve.semi_minor()) <= tol * curve.semi_major();
  } else {
    const double scale = tol * curve.a0();
    bool odd_ok = true, even_ok = true;
    for (std::size_t m = 1; m < curve.cos_coeffs().size(); ++m) {
      const std::size_t n = m + 1;
      const bool small = std::abs(curve.cos_coeffs()[m]) <= scale && std::abs(curve.sin_coeffs()[m]) <= scale;
      if (n % 2) odd_ok = odd_ok && small;
      else even_ok = even_ok && small;
    }
    cert.centrally_symmetric = odd_ok;
    cert.constant_width = even_ok;
  }
  cert.is_circle = cert.centrally_symmetric && cert.constant_width;
  return cert;
}

inline constexpr std::size_t kMaxJetOrder = 8;

struct Jet1D {
  double center = 0.0;
  RealJet<kMaxJetOrder> coeffs;
};

/// Taylor coefficients of the local graph y(x1) of the boundary near
/// theta_c, in the frame with origin x(theta_c), x1 along the tangent
/// u_perp(theta_c) and y along the inward normal -u(theta_c).
inline Jet1D jet_at(const SupportCurve& curve, double theta_c, std::size_t order = kMaxJetOrder) {
  if (order > kMaxJetOrder)
    throw Error(ErrorKind::JetOverflow, "jet order " + std::to_string(order) + " exceeds " + std::to_string(kMaxJetOrder));
  constexpr std::size_t N = kMaxJetOrder;
  const RealJet<N + 1> h_ext = curve.support_jet<N + 1>(theta_c);
  const RealJet<N> hj = h_ext.template truncate<N>();
  const RealJet<N> dh = h_ext.derivative_jet().template truncate<N>();
  RealJet<N> s, c;
  sincos(RealJet<N>::variable(theta_c), s, c);
  // x(t) = h u + h' u_perp with u = (c, s), u_perp = (-s, c)
  RealJet<N> px = hj * c - dh * s;
  RealJet<N> py = hj * s + dh * c;
  px.c[0] = 0.0;
  py.c[0] = 0.0;
  const Vec2 tangent = perp(unit_at(theta_c));
  const Vec2 inward = -unit_at(theta_c);
  const RealJet<N> X = tangent.x * px + tangent.y * py;
  RealJet<N> Y = inward.x * px + inward.y * py;
  Y.c[1] = 0.0;  // exact: Y'(0) = rho <u, u_perp> = 0
  RealJet<N> y = compose(Y, revert(X));
  y.c[0] = 0.0;
  y.c[1] = 0.0;
  for (std::size_t k = order + 1; k <= N; ++k) y.c[k] = 0.0;
  return {theta_c, y};
}

struct QuadNode {
  double theta = 0.0;
  Vec2 position;
  Vec2 normal;
  double weight = 0.0;
};

/// Periodic trapezoid nodes in theta with arc-length weights rho(theta) dtheta.
/// With `odd_only`, only the midpoints between the nodes of the n/2 rule
/// are produced (used for node doubling).
inline std::vector<QuadNode> quad_nodes(const SupportCurve& curve, std::size_t n, bool odd_only = false) {
  if (n < 8) throw Error(ErrorKind::InvalidInput, "quad_nodes needs n >= 8");
  std::vector<QuadNode> nodes;
  nodes.reserve(odd_only ? n / 2 : n);
  const double dt = kTwoPi / static_cast<double>(n);
  for (std::size_t i = odd_only ? 1 : 0; i < n; i += odd_only ? 2 : 1) {
    const double th = dt * static_cast<double>(i);
    const BoundaryPoint p = point_at(curve, th);
    nodes.push_back({th, p.position, p.outward_normal, dt / p.curvature});
  }
  return nodes;
}

inline double perimeter(const SupportCurve& curve, std::size_t n = 1024) {
  double acc = 0.0;
  for (const auto& q : quad_nodes(curve, n)) acc += q.weight;
  return acc;
}

/// Enclosed area (1/2) integral of h rho dtheta.
inline double area(const SupportCurve& curve, std::size_t n = 1024) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    acc += curve.h(th) * curve.rho(th);
  }
  return 0.5 * acc * kTwoPi / static_cast<double>(n);
}

}  // namespace oscint
