#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "casimir/error.hpp"
#include "casimir/kernels.hpp"

using namespace casimir;

namespace {

struct PointPair {
  Vec3 r, rp;
};

PointPair random_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), dist(0.5, 3.0);
  const Vec3 rp(u(rng), u(rng), u(rng));
  const Vec3 d = Vec3(u(rng), u(rng), u(rng)).normalized();
  return {rp + dist(rng) * d, rp};
}

// Five-point central difference of f along axis k.
template <class F>
auto fd(const F& f, const Vec3& r, int k, double h) {
  const Vec3 e = h * Vec3::Unit(k);
  return (f(r - 2.0 * e) - 8.0 * f(r - e) + 8.0 * f(r + e) - f(r + 2.0 * e)) / (12.0 * h);
}

}  // namespace

TEST_CASE("kernel value") {
  const Vec3 r(1, 2, 3), rp(0.5, 2, 1);
  const double R = (r - rp).norm();
  CHECK(g_scalar(0.7, r, rp) == doctest::Approx(std::exp(-0.7 * R) / (4.0 * std::numbers::pi * R)).epsilon(1e-15));
  CHECK(g_scalar(0.0, r, rp) == doctest::Approx(g_static(R)).epsilon(1e-15));
  CHECK_THROWS_AS(g_scalar(1.0, r, r), NumericalError);
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ku(0.0, 3.0);
  const double h = 1e-3;
  for (int trial = 0; trial < 100; ++trial) {
    const auto [r, rp] = random_pair(rng);
    const double kappa = ku(rng);
    const Vec3 grad = g_gradient(kappa, r, rp);
    const Mat3 hess = g_hessian(kappa, r, rp);
    const Tensor3 third = g_third(kappa, r, rp);
    for (int k = 0; k < 3; ++k) {
      const double dg = fd([&](const Vec3& x) { return g_scalar(kappa, x, rp); }, r, k, h);
      CHECK(std::abs(dg - grad[k]) <= 1e-6 * grad.norm());
      const Vec3 dgrad = fd([&](const Vec3& x) { return Vec3(g_gradient(kappa, x, rp)); }, r, k, h);
      CHECK((dgrad - hess.col(k)).norm() <= 1e-6 * hess.norm());
      const Mat3 dhess = fd([&](const Vec3& x) { return Mat3(g_hessian(kappa, x, rp)); }, r, k, h);
      CHECK((dhess - third[k]).norm() <= 1e-6 * third[k].norm());
    }
  }
}

TEST_CASE("derivative symmetries") {
  const Vec3 r(0.3, -0.2, 1.1), rp(-0.4, 0.5, 0.2);
  const Mat3 H = g_hessian(1.2, r, rp);
  CHECK((H - H.transpose()).norm() <= 1e-15 * H.norm());
  const Tensor3 T = g_third(1.2, r, rp);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        CHECK(T[i](j, k) == doctest::Approx(T[j](i, k)).epsilon(1e-14));
        CHECK(T[i](j, k) == doctest::Approx(T[k](j, i)).epsilon(1e-14));
      }
  // Helmholtz: ∇²g = κ² g off the source.
  CHECK(H.trace() == doctest::Approx(1.44 * g_scalar(1.2, r, rp)).epsilon(1e-12));
  // Swapping the points flips odd derivatives.
  CHECK((g_gradient(1.2, r, rp) + g_gradient(1.2, rp, r)).norm() < 1e-16);
}

TEST_CASE("dyadic kernel") {
  const Vec3 r(0.0, 0.0, 0.0), p(0.3, -0.7, 0.2);
  const double kappa = 1.5;
  SUBCASE("linear in the polarization") {
    const Vec3 rp(1.0, 0.5, -0.3), q(-0.1, 0.4, 0.9);
    const Vec3 lhs = dyadic_G_apply(kappa, r, rp, p + 2.0 * q);
    const Vec3 rhs = dyadic_G_apply(kappa, r, rp, p) + 2.0 * dyadic_G_apply(kappa, r, rp, q);
    CHECK((lhs - rhs).norm() <= 1e-15 * lhs.norm());
  }
  SUBCASE("reciprocal") {
    const Vec3 rp(1.0, 0.5, -0.3), q(-0.1, 0.4, 0.9);
    CHECK(q.dot(dyadic_G_apply(kappa, r, rp, p)) ==
          doctest::Approx(p.dot(dyadic_G_apply(kappa, rp, r, q))).epsilon(1e-12));
  }
  SUBCASE("transverse far field") {
    // Along x with p ⟂ x only the identity term survives at large κR.
    const double R = 20.0 / kappa;
    const Vec3 rp(R, 0, 0), pt(0, 1, 0);
    const Vec3 G = dyadic_G_apply(kappa, r, rp, pt);
    CHECK(G.y() / (g_scalar(kappa, r, rp)) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(G.x()) < 1e-14);
  }
  SUBCASE("longitudinal part equals -g''/κ²") {
    const double R = 1.7;
    const Vec3 rp(R, 0, 0), pl(1, 0, 0);
    const double eps = 1e-4;
    auto g = [&](double x) { return std::exp(-kappa * x) / (4.0 * std::numbers::pi * x); };
    const double g2 = (g(R - eps) - 2.0 * g(R) + g(R + eps)) / (eps * eps);
    const double expected = g(R) - g2 / (kappa * kappa);
    CHECK(dyadic_G_apply(kappa, r, rp, pl).x() == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK_THROWS_AS(dyadic_G_apply(0.0, r, Vec3(1, 0, 0), p), NumericalError);
}

TEST_CASE("smooth remainder") {
  const double kappa = 2.5;
  CHECK(g_smooth(kappa, 0.0) == doctest::Approx(-kappa / (4.0 * std::numbers::pi)).epsilon(1e-15));
  for (double R : {1e-12, 1e-6, 1e-2, 1.0, 10.0}) {
    const double expected = std::expm1(-kappa * R) / (4.0 * std::numbers::pi * R);
    CHECK(g_smooth(kappa, R) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(g_smooth(kappa, 0.4) + g_static(0.4) ==
        doctest::Approx(std::exp(-kappa * 0.4) / (4.0 * std::numbers::pi * 0.4)).epsilon(1e-14));
  // Real frequency: κ = -ik
  const double k = 1.3, R = 0.8;
  const Complex expected = (std::exp(Complex(0, k * R)) - 1.0) / (4.0 * std::numbers::pi * R);
  const Complex got = g_smooth(Complex(0, -k), R);
  CHECK(std::abs(got - expected) < 1e-15);
  CHECK(std::abs(g_smooth(Complex(0, -k), 0.0) - Complex(0, k / (4.0 * std::numbers::pi))) < 1e-15);
}

TEST_CASE("magnitude decreases in R and in kappa") {
  const Vec3 o = Vec3::Zero();
  double prev = INFINITY;
  for (double R : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double v = g_scalar(0.8, Vec3(R, 0, 0), o);
    CHECK(v < prev);
    CHECK(std::isfinite(v));
    prev = v;
  }
  prev = INFINITY;
  for (double kappa : {0.0, 0.5, 1.0, 4.0}) {
    const double v = g_scalar(kappa, Vec3(1, 0, 0), o);
    CHECK(v < prev);
    prev = v;
  }
}
