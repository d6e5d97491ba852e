#include <boost/math/special_functions/ellint_2.hpp>
#include <catch_amalgamated.hpp>
#include <random>

#include "oscint/curve.hpp"

using namespace oscint;
using std::numbers::pi;

namespace {

SupportCurve reuleaux() { return SupportCurve::fourier(1.0, {0.0, 0.0, 0.05}); }

// Random trig polynomial support function that is strictly convex:
// sum_n n^2 |c_n| < a0 guarantees rho > 0.
SupportCurve random_curve(std::mt19937_64& rng, bool force_sym, bool force_cw) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> harm(1, 6);
  const int n = harm(rng);
  std::vector<double> c(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n));
  double budget = 0.0;
  for (int m = 0; m < n; ++m) {
    const int order = m + 1;
    const bool odd = order % 2 == 1;
    const bool killed = order >= 2 && ((force_sym && odd) || (force_cw && !odd));
    if (killed || u(rng) < -0.3) continue;
    c[m] = u(rng);
    s[m] = u(rng);
    if (order >= 2) budget += order * order * (std::abs(c[m]) + std::abs(s[m]));
  }
  const double a0 = 1.0;
  const double scale = budget > 0 ? 0.8 / budget : 1.0;
  for (int m = 1; m < n; ++m) {
    c[m] *= scale;
    s[m] *= scale;
  }
  return SupportCurve::fourier(a0, c, s);
}

}  // namespace

TEST_CASE("point_at examples") {
  const auto disk = SupportCurve::disk(1.0);
  const auto p = point_at(disk, 0.0);
  CHECK(p.position.x == Catch::Approx(1.0));
  CHECK(std::abs(p.position.y) < 1e-15);
  CHECK(p.outward_normal.x == 1.0);
  CHECK(p.curvature == Catch::Approx(1.0));

  const auto q = point_at(SupportCurve::fourier(1.0, {0.0, 0.0, 0.1}), 0.0);
  CHECK(q.position.x == Catch::Approx(1.1));
  CHECK(q.curvature == Catch::Approx(5.0));

  // curvature of (a cos s, b sin s): ab / (a^2 sin^2 s + b^2 cos^2 s)^{3/2}
  const auto e = point_at(SupportCurve::ellipse(2.0, 1.0), 0.0);
  CHECK(e.position.x == Catch::Approx(2.0));
  CHECK(e.curvature == Catch::Approx(2.0));
  const auto e2 = point_at(SupportCurve::ellipse(2.0, 1.0), pi / 2);
  CHECK(e2.position.y == Catch::Approx(1.0));
  CHECK(e2.curvature == Catch::Approx(0.25));
}

TEST_CASE("construction rejects non-convex and invalid curves") {
  CHECK_THROWS_AS(SupportCurve::fourier(1.0, {0.0, 0.0, 0.2}), Error);
  try {
    SupportCurve::fourier(1.0, {0.0, 0.0, 0.2});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvex);
  }
  CHECK_THROWS_AS(SupportCurve::fourier(1.0, {0.0, 0.34}), Error);  // rho = 1 - 3 * 0.34 < 0
  CHECK_NOTHROW(SupportCurve::fourier(1.0, {0.0, 0.33}));
  CHECK_THROWS_AS(SupportCurve::ellipse(1.0, 2.0), Error);
  CHECK_THROWS_AS(SupportCurve::fourier(0.0, {}), Error);
}

TEST_CASE("support identity and normals") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_curve(rng, false, false);
    for (int j = 0; j < 32; ++j) {
      const double th = kTwoPi * j / 32.0;
      const auto p = point_at(c, th);
      CHECK(std::abs(dot(p.position, p.outward_normal) - c.h(th)) <= 1e-12 * std::max(1.0, std::abs(c.h(th))));
      const auto ps = involution(c, th).p_star;
      CHECK((ps.outward_normal + p.outward_normal).x == Catch::Approx(0.0).margin(1e-15));
      CHECK((ps.outward_normal + p.outward_normal).y == Catch::Approx(0.0).margin(1e-15));
      CHECK(std::abs(width_at(c, th) - width_at(c, th + pi)) < 1e-14);
    }
  }
  const auto e = SupportCurve::ellipse(2.0, 1.0, 0.4);
  for (int j = 0; j < 32; ++j) {
    const double th = kTwoPi * j / 32.0;
    CHECK(std::abs(dot(point_at(e, th).position, unit_at(th)) - e.h(th)) < 1e-12);
  }
}

TEST_CASE("width profile") {
  const auto d = width_profile(SupportCurve::disk(1.5), 64);
  CHECK(d.is_constant);
  CHECK(*d.breadth == Catch::Approx(3.0));
  const auto r = width_profile(reuleaux(), 64);
  CHECK(r.is_constant);
  CHECK(std::abs(*r.breadth - 2.0) < 1e-12);
  const auto e = width_profile(SupportCurve::ellipse(2.0, 1.0), 64);
  CHECK_FALSE(e.is_constant);
  CHECK(e.w_min == Catch::Approx(2.0));
  CHECK(e.w_max == Catch::Approx(4.0));
  CHECK(max_width(SupportCurve::ellipse(2.0, 1.0, 0.3)) == Catch::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(width_profile(reuleaux(), 8), Error);
}

TEST_CASE("involution") {
  const auto inv = involution(SupportCurve::disk(1.0), 0.0);
  CHECK(inv.p_star.position.x == Catch::Approx(-1.0));
  CHECK(inv.breadth == Catch::Approx(2.0));
  CHECK(inv.double_normal_residual < 1e-15);
  for (double th : {0.1, 1.0, 2.5}) {
    const auto r = involution(reuleaux(), th);
    CHECK(r.breadth == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(r.double_normal_residual < 1e-15);
  }
  const auto c2 = involution(SupportCurve::fourier(1.0, {0.0, 0.05}), pi / 8);
  CHECK(c2.double_normal_residual == Catch::Approx(0.1414213562373095).epsilon(1e-12));
}

TEST_CASE("symmetry certificate examples") {
  const auto a = symmetry_and_circle_certificate(SupportCurve::disk(1.0));
  CHECK((a.centrally_symmetric && a.constant_width && a.is_circle));
  CHECK(a.center.x == 0.0);
  const auto b = symmetry_and_circle_certificate(reuleaux());
  CHECK_FALSE(b.centrally_symmetric);
  CHECK(b.constant_width);
  CHECK_FALSE(b.is_circle);
  const auto c = symmetry_and_circle_certificate(SupportCurve::fourier(1.0, {0.0, 0.05}));
  CHECK(c.centrally_symmetric);
  CHECK_FALSE(c.constant_width);
  const auto t = symmetry_and_circle_certificate(SupportCurve::fourier(1.0, {0.3, 0.0, 0.05}, {-0.2}));
  CHECK(t.center.x == Catch::Approx(0.3));
  CHECK(t.center.y == Catch::Approx(-0.2));
  CHECK(t.constant_width);
  const auto e = symmetry_and_circle_certificate(SupportCurve::ellipse(1.5, 1.0));
  CHECK(e.centrally_symmetric);
  CHECK_FALSE(e.constant_width);
}

TEST_CASE("translation leaves the certificate unchanged") {
  const auto c = reuleaux().translated({0.4, -0.1});
  const auto cert = symmetry_and_circle_certificate(c);
  CHECK(cert.constant_width);
  CHECK_FALSE(cert.centrally_symmetric);
  CHECK(cert.center.x == Catch::Approx(0.4));
  const auto d = symmetry_and_circle_certificate(SupportCurve::disk(2.0).translated({1.0, 1.0}));
  CHECK(d.is_circle);
}

TEST_CASE("property: symmetric and constant width implies circle") {
  std::mt19937_64 rng(2024);
  int both = 0;
  for (int i = 0; i < 1000; ++i) {
    const int mode = i % 4;
    const auto c = random_curve(rng, mode == 1 || mode == 3, mode == 2 || mode == 3);
    const auto cert = symmetry_and_circle_certificate(c);
    if (cert.centrally_symmetric && cert.constant_width) {
      ++both;
      CHECK(cert.is_circle);
      for (std::size_t m = 1; m < c.cos_coeffs().size(); ++m) {
        CHECK(std::abs(c.cos_coeffs()[m]) <= 1e-10);
        CHECK(std::abs(c.sin_coeffs()[m]) <= 1e-10);
      }
    } else {
      CHECK_FALSE(cert.is_circle);
    }
  }
  CHECK(both >= 250);
}

TEST_CASE("perimeter: Barbier and elliptic integral") {
  CHECK(std::abs(perimeter(reuleaux(), 256) - kTwoPi) < 1e-10 * kTwoPi);
  double sum16 = 0.0;
  for (const auto& q : quad_nodes(SupportCurve::disk(1.0), 16)) sum16 += q.weight;
  CHECK(std::abs(sum16 - kTwoPi) < 1e-14);
  // 4 a E(e), e^2 = 1 - b^2/a^2
  const double oracle = 4.0 * 2.0 * boost::math::ellint_2(std::sqrt(1.0 - 0.25));
  CHECK(std::abs(perimeter(SupportCurve::ellipse(2.0, 1.0), 512) - oracle) < 1e-12);
  CHECK(std::abs(oracle - 9.688448220547675) < 1e-12);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    const auto c = random_curve(rng, false, true);
    CHECK(std::abs(perimeter(c, 512) - pi * width_at(c, 0.3)) < 1e-10 * perimeter(c, 512));
  }
  CHECK(area(SupportCurve::disk(2.0)) == Catch::Approx(4.0 * pi));
  CHECK(area(SupportCurve::ellipse(1.5, 1.0)) == Catch::Approx(1.5 * pi));
  CHECK_THROWS_AS(quad_nodes(reuleaux(), 4), Error);
}

TEST_CASE("jets of the boundary graph") {
  for (double th : {0.0, 0.7, 3.0, 5.5}) {
    const auto j = jet_at(SupportCurve::disk(1.0), th);
    const double expect[] = {0, 0, 0.5, 0, 0.125, 0, 0.0625};
    for (int k = 0; k <= 6; ++k) CHECK(j.coeffs.c[k] == Catch::Approx(expect[k]).margin(1e-13));
  }
  const double R = 2.5;
  const auto jr = jet_at(SupportCurve::disk(R), 1.0);
  CHECK(jr.coeffs.c[2] == Catch::Approx(1 / (2 * R)).epsilon(1e-12));
  CHECK(jr.coeffs.c[4] == Catch::Approx(1 / (8 * R * R * R)).epsilon(1e-12));
  CHECK(jr.coeffs.c[6] == Catch::Approx(1 / (16 * std::pow(R, 5))).epsilon(1e-12));
  CHECK(jet_at(SupportCurve::ellipse(2.0, 1.0), pi / 2).coeffs.c[2] == Catch::Approx(0.125).epsilon(1e-12));
  CHECK(jet_at(SupportCurve::ellipse(2.0, 1.0), 0.0).coeffs.c[2] == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(jet_at(SupportCurve::disk(1.0), 0.0, 9), Error);
  try {
    jet_at(SupportCurve::disk(1.0), 0.0, 9);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::JetOverflow);
  }
  const auto tr = jet_at(SupportCurve::disk(1.0), 0.0, 4);
  CHECK(tr.coeffs.c[6] == 0.0);
}

TEST_CASE("jet c2 is half the curvature on a 64-point grid") {
  const SupportCurve curves[] = {reuleaux(), SupportCurve::ellipse(1.5, 1.0, 0.2),
                                 SupportCurve::fourier(1.0, {0.1, 0.05, 0.02, 0.01}, {0.0, -0.03, 0.0, 0.01})};
  for (const auto& c : curves)
    for (int i = 0; i < 64; ++i) {
      const double th = kTwoPi * i / 64.0;
      const double k = point_at(c, th).curvature;
      CHECK(std::abs(jet_at(c, th).coeffs.c[2] - 0.5 * k) <= 1e-12 * 0.5 * k);
    }
}

TEST_CASE("ellipse graph jet against sqrt expansion") {
  // At the vertex (a, 0) with inward normal: x = a sqrt(1 - y^2 / b^2) gives
  // depth d(y) = a - a sqrt(1 - y^2/b^2) = a (y^2/(2b^2) + y^4/(8b^4) + y^6/(16 b^6) + ...)
  const double a = 2.0, b = 1.0;
  const auto j = jet_at(SupportCurve::ellipse(a, b), 0.0);
  CHECK(j.coeffs.c[2] == Catch::Approx(a / (2 * b * b)).epsilon(1e-12));
  CHECK(j.coeffs.c[4] == Catch::Approx(a / (8 * std::pow(b, 4))).epsilon(1e-11));
  CHECK(j.coeffs.c[6] == Catch::Approx(a / (16 * std::pow(b, 6))).epsilon(1e-10));
  CHECK(std::abs(j.coeffs.c[3]) < 1e-13);
}

TEST_CASE("rotation and scaling") {
  const auto c = SupportCurve::fourier(1.0, {0.1, 0.05, 0.03}, {0.02, 0.0, -0.01});
  const auto r = c.rotated(0.7);
  for (double th : {0.0, 1.0, 2.0}) CHECK(r.h(th + 0.7) == Catch::Approx(c.h(th)).epsilon(1e-13));
  const auto s = c.scaled(2.0);
  CHECK(s.rho(0.3) == Catch::Approx(2.0 * c.rho(0.3)));
  const auto e = SupportCurve::ellipse(1.5, 1.0).rotated(0.4);
  CHECK(e.h(0.4) == Catch::Approx(1.5));
}
