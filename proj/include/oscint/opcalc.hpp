#pragma once

// Exact calculus for the curvature-weighted operators
//   box u          = sum_i (1/k_i) d^2 u / dx_i^2
//   diamond(u, v)  = sum_i (1/k_i) (du/dx_i)(dv/dx_i)
// on polynomials with rational coefficients in up to three variables, and
// the Leibniz-type expansion of box^n(u v).

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oscint/error.hpp"

namespace oscint::opcalc {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kMaxVars = 3;
using Exponent = std::array<int, kMaxVars>;

class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::size_t n_vars) : n_vars_(n_vars) {
    if (n_vars == 0 || n_vars > kMaxVars) throw Error(ErrorKind::InvalidInput, "MultiPoly supports 1..3 variables");
  }

  static MultiPoly constant(std::size_t n_vars, const Rational& c) {
    MultiPoly p(n_vars);
    p.add_term({0, 0, 0}, c);
    return p;
  }

  /// x_var^power
  static MultiPoly monomial(std::size_t n_vars, Exponent e, const Rational& c = 1) {
    MultiPoly p(n_vars);
    for (std::size_t i = n_vars; i < kMaxVars; ++i)
      if (e[i] != 0) throw Error(ErrorKind::DimensionMismatch, "exponent on a variable beyond n_vars");
    p.add_term(e, c);
    return p;
  }

  std::size_t n_vars() const { return n_vars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0, 0});
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Exponent& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MultiPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
  friend MultiPoly operator*(const Rational& s, MultiPoly a) { return a *= s; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same(b);
    MultiPoly r(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  /// d/dx_var
  MultiPoly derivative(std::size_t var, int times = 1) const {
    if (var >= n_vars_) throw Error(ErrorKind::DimensionMismatch, "derivative variable out of range");
    MultiPoly r(n_vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] < times) continue;
      Rational f = c;
      for (int j = 0; j < times; ++j) f *= (e[var] - j);
      Exponent ne = e;
      ne[var] -= times;
      r.add_term(ne, f);
    }
    return r;
  }

  /// Partial derivative with multi-index beta.
  MultiPoly derivative(const Exponent& beta) const {
    MultiPoly r = *this;
    for (std::size_t i = 0; i < n_vars_; ++i)
      if (beta[i] > 0) r = r.derivative(i, beta[i]);
    return r;
  }

  Rational eval(const std::vector<Rational>& x) const {
    if (x.size() != n_vars_) throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < n_vars_; ++i)
        for (int j = 0; j < e[i]; ++j) t *= x[i];
      acc += t;
    }
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      for (std::size_t i = 0; i < n_vars_; ++i)
        if (e[i]) s += "*x" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
    }
    return s;
  }

 private:
  void check_same(const MultiPoly& o) const {
    if (o.n_vars_ != n_vars_) throw Error(ErrorKind::DimensionMismatch, "polynomials have different n_vars");
  }

  std::size_t n_vars_ = 1;
  std::map<Exponent, Rational> terms_;
};

/// Principal curvatures k_i, all nonzero.
class Curvatures {
 public:
  explicit Curvatures(std::vector<Rational> k) : k_(std::move(k)) {
    if (k_.empty() || k_.size() > kMaxVars) throw Error(ErrorKind::InvalidInput, "need 1..3 curvatures");
    for (const auto& v : k_)
      if (v == 0) throw Error(ErrorKind::InvalidInput, "curvatures must be nonzero");
  }
  std::size_t size() const { return k_.size(); }
  const Rational& operator[](std::size_t i) const { return k_[i]; }

 private:
  std::vector<Rational> k_;
};

namespace detail {
inline void check_dims(const MultiPoly& p, const Curvatures& kk) {
  if (p.n_vars() != kk.size())
    throw Error(ErrorKind::DimensionMismatch,
                "polynomial has " + std::to_string(p.n_vars()) + " variables, curvature list " + std::to_string(kk.size()));
}

inline Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// All multi-indices of |beta| = m over n variables.
inline std::vector<Exponent> multi_indices(std::size_t n, int m) {
  std::vector<Exponent> out;
  if (n == 1) {
    out.push_back({m, 0, 0});
  } else if (n == 2) {
    for (int a = 0; a <= m; ++a) out.push_back({a, m - a, 0});
  } else {
    for (int a = 0; a <= m; ++a)
      for (int b = 0; a + b <= m; ++b) out.push_back({a, b, m - a - b});
  }
  return out;
}
}  // namespace detail

inline MultiPoly apply_box(const MultiPoly& p, const Curvatures& kk) {
  detail::check_dims(p, kk);
  MultiPoly r(p.n_vars());
  for (std::size_t i = 0; i < kk.size(); ++i) r += p.derivative(i, 2) * (Rational(1) / kk[i]);
  return r;
}

inline MultiPoly box_power(MultiPoly p, int n, const Curvatures& kk) {
  for (int j = 0; j < n; ++j) p = apply_box(p, kk);
  return p;
}

inline MultiPoly apply_diamond(const MultiPoly& u, const MultiPoly& v, const Curvatures& kk) {
  detail::check_dims(u, kk);
  detail::check_dims(v, kk);
  MultiPoly r(u.n_vars());
  for (std::size_t i = 0; i < kk.size(); ++i) r += (u.derivative(i) * v.derivative(i)) * (Rational(1) / kk[i]);
  return r;
}

/// m-fold bilinear diamond on the ordered pair (u, v):
///   sum_{|beta| = m} (m! / beta!) prod_i k_i^{-beta_i} (d^beta u)(d^beta v).
inline MultiPoly diamond_power(const MultiPoly& u, const MultiPoly& v, int m, const Curvatures& kk) {
  detail::check_dims(u, kk);
  detail::check_dims(v, kk);
  if (m == 0) return u * v;
  MultiPoly r(u.n_vars());
  const Rational mf = detail::factorial(m);
  for (const auto& beta : detail::multi_indices(u.n_vars(), m)) {
    const MultiPoly du = u.derivative(beta);
    if (du.is_zero()) continue;
    const MultiPoly dv = v.derivative(beta);
    if (dv.is_zero()) continue;
    Rational w = mf;
    for (std::size_t i = 0; i < kk.size(); ++i) {
      w /= detail::factorial(beta[i]);
      for (int j = 0; j < beta[i]; ++j) w /= kk[i];
    }
    r += (du * dv) * w;
  }
  return r;
}

/// Integer table d[k][n], 1 <= k <= n + 1, built from the closed forms and
/// recurrences: d_1 = 1, d_2 = 2n, d_3 = 2(n-2)(n+1) + 4, d_n = n 2^(n-1),
/// d_{n+1} = 2^n and d_k^n = 2 sum_{j=k}^{n-1} d_{k-1}^j + d_k^k otherwise.
class CoeffTable {
 public:
  static constexpr int kMaxN = 30;

  explicit CoeffTable(int n_max) : n_max_(n_max) {
    if (n_max < 1 || n_max > kMaxN)
      throw Error(ErrorKind::InvalidInput, "n_max must be in [1, " + std::to_string(kMaxN) + "]");
    rows_.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 1; n <= n_max; ++n) {
      auto& row = rows_[static_cast<std::size_t>(n)];
      row.assign(static_cast<std::size_t>(n) + 2, 0);
      for (int k = 1; k <= n + 1; ++k) row[static_cast<std::size_t>(k)] = entry(k, n);
    }
  }

  int n_max() const { return n_max_; }

  std::int64_t d(int k, int n) const {
    if (n < 1 || n > n_max_ || k < 1 || k > n + 1) throw Error(ErrorKind::OutOfRange, "table index out of range");
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

 private:
  std::int64_t entry(int k, int n) const {
    if (k == 1) return 1;
    if (k == 2) return 2 * static_cast<std::int64_t>(n);
    if (k == n + 1) return std::int64_t{1} << n;
    if (k == 3) return 2 * static_cast<std::int64_t>(n - 2) * (n + 1) + 4;
    if (k == n) return static_cast<std::int64_t>(n) * (std::int64_t{1} << (n - 1));
    // 4 <= k <= n - 1
    std::int64_t acc = 0;
    for (int j = k; j <= n - 1; ++j) acc += rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)];
    return 2 * acc + rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
  }

  int n_max_;
  std::vector<std::vector<std::int64_t>> rows_;
};

inline CoeffTable leibniz_table(int n_max) { return CoeffTable(n_max); }

enum class ExpansionMode { formula, bruteforce };

inline constexpr int kMaxExpansionPower = 8;

inline Rational binomial(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// box^n(u v), either by iterating box on the product or through
///   sum_{k=1}^{n+1} d_k^n diamond^{k-1} sum_a C(n-k+1, a) box^{n-k+1-a} u box^a v.
inline MultiPoly expand_box_power(const MultiPoly& u, const MultiPoly& v, int n, const Curvatures& kk,
                                  ExpansionMode mode) {
  detail::check_dims(u, kk);
  detail::check_dims(v, kk);
  if (n < 0) throw Error(ErrorKind::InvalidInput, "power must be non-negative");
  if (n > kMaxExpansionPower)
    throw Error(ErrorKind::BudgetExceeded, "box power " + std::to_string(n) + " exceeds the exact-arithmetic budget 8");
  if (u.is_constant() || v.is_constant()) throw Error(ErrorKind::InvalidInput, "u and v must be nonconstant");
  if (mode == ExpansionMode::bruteforce || n == 0) return box_power(u * v, n, kk);

  const CoeffTable table(n);
  std::vector<MultiPoly> bu{u}, bv{v};
  for (int j = 1; j <= n; ++j) {
    bu.push_back(apply_box(bu.back(), kk));
    bv.push_back(apply_box(bv.back(), kk));
  }
  MultiPoly total(u.n_vars());
  for (int k = 1; k <= n + 1; ++k) {
    const int m = k - 1;
    const int r = n - m;
    MultiPoly inner(u.n_vars());
    for (int a = 0; a <= r; ++a) {
      const auto& left = bu[static_cast<std::size_t>(r - a)];
      const auto& right = bv[static_cast<std::size_t>(a)];
      if (left.is_zero() || right.is_zero()) continue;
      inner += diamond_power(left, right, m, kk) * binomial(r, a);
    }
    total += inner * Rational(table.d(k, n));
  }
  return total;
}

// ---- randomised equivalence suite ---------------------------------------

namespace detail {
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}
}  // namespace detail

/// Random nonconstant polynomial of total degree <= max_degree with small
/// rational coefficients.
inline MultiPoly random_poly(std::mt19937_64& rng, std::size_t n_vars, int max_degree = 4) {
  MultiPoly p(n_vars);
  while (p.is_constant()) {
    p = MultiPoly(n_vars);
    for (int d = 0; d <= max_degree; ++d)
      for (const auto& e : detail::multi_indices(n_vars, d)) {
        if (detail::uniform_int(rng, 0, 2) == 0) continue;
        const auto num = detail::uniform_int(rng, -6, 6);
        const auto den = detail::uniform_int(rng, 1, 5);
        p.add_term(e, Rational(num, den));
      }
  }
  return p;
}

inline Curvatures random_curvatures(std::mt19937_64& rng, std::size_t n_vars) {
  std::vector<Rational> k;
  for (std::size_t i = 0; i < n_vars; ++i) {
    auto num = detail::uniform_int(rng, 1, 7);
    if (detail::uniform_int(rng, 0, 1)) num = -num;
    k.emplace_back(num, detail::uniform_int(rng, 1, 4));
  }
  return Curvatures(std::move(k));
}

struct EquivalenceReport {
  int checks = 0;
  int mismatches = 0;
  std::vector<std::string> failures;
  bool ok() const { return mismatches == 0; }
};

/// formula == bruteforce for n = 1..n_max, N = 1..3 and `pairs` random pairs.
inline EquivalenceReport check_expansion(int n_max, int pairs, std::uint64_t seed) {
  EquivalenceReport rep;
  std::mt19937_64 rng(seed);
  const int top = std::min(n_max, kMaxExpansionPower);
  for (std::size_t dim = 1; dim <= kMaxVars; ++dim)
    for (int i = 0; i < pairs; ++i) {
      const MultiPoly u = random_poly(rng, dim);
      const MultiPoly v = random_poly(rng, dim);
      const Curvatures kk = random_curvatures(rng, dim);
      for (int n = 1; n <= top; ++n) {
        ++rep.checks;
        const MultiPoly f = expand_box_power(u, v, n, kk, ExpansionMode::formula);
        const MultiPoly b = expand_box_power(u, v, n, kk, ExpansionMode::bruteforce);
        if (!(f == b)) {
          ++rep.mismatches;
          rep.failures.push_back("N=" + std::to_string(dim) + " pair=" + std::to_string(i) + " n=" + std::to_string(n));
        }
      }
    }
  return rep;
}

}  // namespace oscint::opcalc
