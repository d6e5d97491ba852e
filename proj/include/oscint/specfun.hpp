#pragma once

// Bessel functions of the first kind J_m for integer m >= 0 and real x,
// their positive zeros for small orders, and the modified function I_0.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "oscint/error.hpp"

namespace oscint::specfun {

enum class BesselMethod { series, asymptotic, recurrence };

struct BesselEval {
  int order = 0;
  double argument = 0.0;
  double value = 0.0;
  BesselMethod method = BesselMethod::series;
};

inline constexpr int kMaxOrder = 60;
inline constexpr double kMaxArgument = 1e6;

namespace detail {

inline constexpr double kSeriesLimit = 8.0;
inline constexpr double kAsymptoticLimit = 30.0;

inline double series(int m, double x) {
  // sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2) break;
  }
  return sum;
}

/// Miller's backward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
/// Fills out[0..max_order]; valid for any x > 0.
inline void miller(int max_order, double x, std::vector<double>& out) {
  const double ax = std::abs(x);
  int start = static_cast<int>(std::max<double>(max_order, ax)) + 30 +
              static_cast<int>(3.0 * std::cbrt(std::max(ax, 1.0)) * 4.0);
  if (start % 2) ++start;
  out.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  for (int n = start; n > 0; --n) {
    const double jm1 = 2.0 * n / ax * j - jp1;
    jp1 = j;
    j = jm1;
    // rescale to avoid overflow in the growing direction
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      for (auto& v : out) v *= 1e-250;
    }
    if (n - 1 <= max_order) out[static_cast<std::size_t>(n - 1)] = j;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
  }
  norm += j;
  for (auto& v : out) v /= norm;
}

/// Hankel asymptotic expansion for J_0 and J_1, accurate for x > 25.
inline void hankel01(double x, double& j0, double& j1) {
  auto pq = [x](int nu, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    const double z = 8.0 * x;
    p = 0.0;
    q = 0.0;
    double term = 1.0;
    double prev = 1e300;
    for (int k = 0; k < 60; ++k) {
      // term_k = prod_{i=1..k} (mu - (2i-1)^2) / (i z)
      if (k > 0) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * z);
      }
      if (std::abs(term) > prev) break;  // asymptotic series started to diverge
      prev = std::abs(term);
      const int r = k % 4;
      if (r == 0) p += term;
      else if (r == 1) q += term;
      else if (r == 2) p -= term;
      else q -= term;
      if (std::abs(term) < 1e-17) break;
    }
  };
  double p0, q0, p1, q1;
  pq(0, p0, q0);
  pq(1, p1, q1);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double c0 = x - 0.25 * std::numbers::pi;
  const double c1 = x - 0.75 * std::numbers::pi;
  j0 = amp * (p0 * std::cos(c0) - q0 * std::sin(c0));
  j1 = amp * (p1 * std::cos(c1) - q1 * std::sin(c1));
}

inline void check_range(int order, double x) {
  if (order < 0 || order > kMaxOrder)
    throw Error(ErrorKind::OutOfRange, "Bessel order " + std::to_string(order) + " outside [0, 60]");
  if (!(std::abs(x) <= kMaxArgument))
    throw Error(ErrorKind::OutOfRange, "Bessel argument outside |x| <= 1e6");
}

/// J_0..J_max at x >= 0, with the method used for the highest order.
inline BesselMethod all_orders(int max_order, double x, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return BesselMethod::series;
  }
  if (x <= kSeriesLimit) {
    for (int m = 0; m <= max_order; ++m) out[static_cast<std::size_t>(m)] = series(m, x);
    return BesselMethod::series;
  }
  if (x <= kAsymptoticLimit) {
    miller(max_order, x, out);
    return BesselMethod::recurrence;
  }
  double j0, j1;
  hankel01(x, j0, j1);
  out[0] = j0;
  if (max_order >= 1) out[1] = j1;
  // upward recurrence is stable while m < x
  const int up_to = std::min(max_order, static_cast<int>(x));
  for (int m = 1; m < up_to; ++m)
    out[static_cast<std::size_t>(m) + 1] = 2.0 * m / x * out[static_cast<std::size_t>(m)] - out[static_cast<std::size_t>(m) - 1];
  if (max_order > up_to) {
    std::vector<double> tail;
    miller(max_order, x, tail);
    for (int m = up_to + 1; m <= max_order; ++m) out[static_cast<std::size_t>(m)] = tail[static_cast<std::size_t>(m)];
    return BesselMethod::recurrence;
  }
  return BesselMethod::asymptotic;
}

}  // namespace detail

inline BesselEval bessel_j_eval(int order, double x) {
  detail::check_range(order, x);
  std::vector<double> v;
  const BesselMethod method = detail::all_orders(order, std::abs(x), v);
  double value = v[static_cast<std::size_t>(order)];
  if (x < 0 && order % 2) value = -value;
  return {order, x, value, method};
}

inline double bessel_j(int order, double x) { return bessel_j_eval(order, x).value; }

/// J_0(x), ..., J_max(x) in one pass.
inline std::vector<double> bessel_j_orders(int max_order, double x) {
  detail::check_range(max_order, x);
  std::vector<double> v;
  detail::all_orders(max_order, std::abs(x), v);
  if (x < 0)
    for (std::size_t m = 1; m < v.size(); m += 2) v[m] = -v[m];
  return v;
}

/// d/dx J_m(x) = (J_{m-1} - J_{m+1}) / 2, with J_{-1} = -J_1.
inline double bessel_j_prime(int order, double x) {
  if (order == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

/// k-th positive zero of J_order, order in {0, 1, 2}, k in [1, 20].
inline double bessel_j_zero(int order, int k) {
  if (order < 0 || order > 2) throw Error(ErrorKind::OutOfRange, "zero order must be 0, 1 or 2");
  if (k < 1 || k > 20) throw Error(ErrorKind::OutOfRange, "zero index must be in [1, 20]");
  // McMahon: j ~ b - (mu - 1) / (8 b) - 4 (mu - 1)(7 mu - 31) / (3 (8 b)^3)
  const double mu = 4.0 * order * order;
  const double b = (k + 0.5 * order - 0.25) * std::numbers::pi;
  const double guess = b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * b, 3));
  double lo = guess - 0.4, hi = guess + 0.4;
  double flo = bessel_j(order, lo), fhi = bessel_j(order, hi);
  if (flo * fhi > 0) throw Error(ErrorKind::OutOfRange, "failed to bracket Bessel zero");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j(order, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  // one Newton polish step
  const double d = bessel_j_prime(order, x);
  if (d != 0.0) {
    const double xn = x - bessel_j(order, x) / d;
    if (std::abs(xn - x) < 1e-12) x = xn;
  }
  return x;
}

/// Modified Bessel I_0 by its ascending series (all terms positive).
inline double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace oscint::specfun
