#pragma once

// Truncated univariate Taylor arithmetic. A Jet<T, N> stores the normalised
// coefficients c[k] = f^(k)(x0) / k! for k = 0..N; all products are truncated
// at order N.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "oscint/error.hpp"

namespace oscint {

template <typename T, std::size_t N>
struct Jet {
  std::array<T, N + 1> c{};

  static constexpr std::size_t order = N;

  Jet() = default;
  explicit Jet(T constant) { c[0] = constant; }

  /// The identity jet x0 + s.
  static Jet variable(T x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c[1] = T(1);
    return j;
  }

  T& operator[](std::size_t k) { return c[k]; }
  const T& operator[](std::size_t k) const { return c[k]; }

  T value() const { return c[0]; }

  /// k-th derivative at the expansion point.
  T derivative(std::size_t k) const {
    T f(1);
    for (std::size_t i = 2; i <= k; ++i) f *= T(static_cast<double>(i));
    return c[k] * f;
  }

  /// Jet of f'. The top coefficient is lost and set to zero.
  Jet derivative_jet() const {
    Jet r;
    for (std::size_t k = 0; k < N; ++k) r.c[k] = T(static_cast<double>(k + 1)) * c[k + 1];
    return r;
  }

  template <std::size_t M>
  Jet<T, M> truncate() const {
    static_assert(M <= N);
    Jet<T, M> r;
    for (std::size_t k = 0; k <= M; ++k) r.c[k] = c[k];
    return r;
  }

  T eval(T s) const {
    T acc{};
    for (std::size_t k = N + 1; k-- > 0;) acc = acc * s + c[k];
    return acc;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c) v = -v;
    return a;
  }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, T s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, T s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator+(T s, Jet a) { return a + s; }
  friend Jet operator-(T s, Jet a) { return -a + s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.c[0] == T(0)) throw Error(ErrorKind::DivisionByZero, "jet division by a jet with zero constant term");
    Jet r;
    for (std::size_t k = 0; k <= N; ++k) {
      T acc = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * r.c[k - j];
      r.c[k] = acc / b.c[0];
    }
    return r;
  }
};

template <std::size_t N>
using RealJet = Jet<double, N>;

template <typename T, std::size_t N>
Jet<T, N> sqrt(const Jet<T, N>& a) {
  using std::sqrt;
  Jet<T, N> r;
  r.c[0] = sqrt(a.c[0]);
  if (r.c[0] == T(0)) throw Error(ErrorKind::DivisionByZero, "jet sqrt at zero");
  for (std::size_t k = 1; k <= N; ++k) {
    T acc = a.c[k];
    for (std::size_t j = 1; j < k; ++j) acc -= r.c[j] * r.c[k - j];
    r.c[k] = acc / (T(2) * r.c[0]);
  }
  return r;
}

template <typename T, std::size_t N>
Jet<T, N> exp(const Jet<T, N>& a) {
  using std::exp;
  Jet<T, N> r;
  r.c[0] = exp(a.c[0]);
  // r' = a' r  =>  k r_k = sum_j j a_j r_{k-j}
  for (std::size_t k = 1; k <= N; ++k) {
    T acc{};
    for (std::size_t j = 1; j <= k; ++j) acc += T(static_cast<double>(j)) * a.c[j] * r.c[k - j];
    r.c[k] = acc / T(static_cast<double>(k));
  }
  return r;
}

/// Simultaneous sine and cosine via s' = a' c, c' = -a' s.
template <typename T, std::size_t N>
void sincos(const Jet<T, N>& a, Jet<T, N>& s, Jet<T, N>& co) {
  using std::cos;
  using std::sin;
  s = Jet<T, N>();
  co = Jet<T, N>();
  s.c[0] = sin(a.c[0]);
  co.c[0] = cos(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    T as{}, ac{};
    for (std::size_t j = 1; j <= k; ++j) {
      const T w = T(static_cast<double>(j)) * a.c[j];
      as += w * co.c[k - j];
      ac -= w * s.c[k - j];
    }
    s.c[k] = as / T(static_cast<double>(k));
    co.c[k] = ac / T(static_cast<double>(k));
  }
}

template <typename T, std::size_t N>
Jet<T, N> sin(const Jet<T, N>& a) {
  Jet<T, N> s, c;
  sincos(a, s, c);
  return s;
}

template <typename T, std::size_t N>
Jet<T, N> cos(const Jet<T, N>& a) {
  Jet<T, N> s, c;
  sincos(a, s, c);
  return c;
}

/// outer(inner(s)) for an inner jet with zero constant term.
template <typename T, std::size_t N>
Jet<T, N> compose(const Jet<T, N>& outer, const Jet<T, N>& inner) {
  if (inner.c[0] != T(0)) throw Error(ErrorKind::BadJet, "compose: inner jet must vanish at the origin");
  Jet<T, N> r(outer.c[N]);
  for (std::size_t k = N; k-- > 0;) r = r * inner + outer.c[k];
  return r;
}

/// Series reversion: the jet of the inverse function of f, where f(0) = 0 and
/// f'(0) != 0. Solved order by order from f(g(x)) = x.
template <typename T, std::size_t N>
Jet<T, N> revert(const Jet<T, N>& f) {
  if (f.c[0] != T(0)) throw Error(ErrorKind::BadJet, "revert: jet must vanish at the origin");
  if constexpr (N == 0) {
    return Jet<T, N>();
  } else {
    if (f.c[1] == T(0)) throw Error(ErrorKind::BadJet, "revert: zero linear coefficient");
    Jet<T, N> g;
    g.c[1] = T(1) / f.c[1];
    for (std::size_t k = 2; k <= N; ++k) {
      // With g_k unknown (currently zero), the order-k coefficient of f(g) is
      // residual + f_1 g_k.
      const Jet<T, N> fg = compose(f, g);
      g.c[k] = -fg.c[k] / f.c[1];
    }
    return g;
  }
}

}  // namespace oscint
