#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "casimir/geometry.hpp"

namespace casimir {

using Complex = std::complex<double>;

/// Radial factors of the Helmholtz kernel g = e^{-κR}/(4πR) and its
/// Cartesian derivatives with respect to the field point, x = r - r':
///
///   ∂_i g         = A x_i
///   ∂_i∂_j g      = B x_i x_j + A δ_ij
///   ∂_i∂_j∂_k g   = C x_i x_j x_k + B (δ_ij x_k + δ_ik x_j + δ_jk x_i)
///
/// `T` is double on the imaginary axis; with T = complex and κ = -ik the same
/// expressions give the outgoing real-frequency kernel e^{ikR}/(4πR).
template <class T>
struct RadialCoeffs {
  T g{}, A{}, B{}, C{};
};

template <class T>
RadialCoeffs<T> radial_coeffs(T kappa, double R, int order) {
  constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  const T e = std::exp(-kappa * R);
  const T kr = kappa * R;
  RadialCoeffs<T> c;
  const double r2 = R * R;
  c.g = e * (inv4pi / R);
  if (order >= 1) c.A = -e * (kr + 1.0) * (inv4pi / (r2 * R));
  if (order >= 2) c.B = e * (kr * kr + 3.0 * kr + 3.0) * (inv4pi / (r2 * r2 * R));
  if (order >= 3) c.C = -e * (kr * kr * kr + 6.0 * kr * kr + 15.0 * kr + 15.0) * (inv4pi / (r2 * r2 * r2 * R));
  return c;
}

/// Third-derivative tensor: t[i](j, k) = ∂_i∂_j∂_k g.
using Tensor3 = std::array<Mat3, 3>;

/// e^{-κR}/(4πR), R = |r - rp|. Throws NumericalError when R = 0.
double g_scalar(double kappa, const Vec3& r, const Vec3& rp);
/// Derivatives with respect to r.
Vec3 g_gradient(double kappa, const Vec3& r, const Vec3& rp);
Mat3 g_hessian(double kappa, const Vec3& r, const Vec3& rp);
Tensor3 g_third(double kappa, const Vec3& r, const Vec3& rp);

/// ([I + ∇∇/k0²] g) p with k0² = -κ², i.e. g p - (∇∇g) p / κ². Throws for κ <= 0.
Vec3 dyadic_G_apply(double kappa, const Vec3& r, const Vec3& rp, const Vec3& p);

/// Smooth remainder (e^{-κR} - 1)/(4πR) of the kernel after removing the
/// static part; finite at R = 0 with limit -κ/(4π).
inline double g_smooth(double kappa, double R) {
  constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  if (R * kappa < 1e-8) return -kappa * inv4pi * (1.0 - 0.5 * kappa * R);
  return std::expm1(-kappa * R) * inv4pi / R;
}

/// (e^{ikR} - 1)/(4πR), limit ik/(4π) at R = 0.
inline Complex g_smooth(Complex kappa, double R) {
  constexpr double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  // κ = -ik
  const double k = kappa.imag() == 0.0 ? 0.0 : -kappa.imag();
  if (kappa.real() != 0.0) {
    const Complex z = -kappa * R;
    if (std::abs(z) < 1e-8) return -kappa * inv4pi * (1.0 + 0.5 * z);
    return (std::exp(z) - 1.0) * inv4pi / R;
  }
  const double x = k * R;
  if (std::abs(x) < 1e-8) return Complex(-0.5 * k * x, k) * inv4pi;
  const double s = std::sin(0.5 * x);
  return Complex(-2.0 * s * s, std::sin(x)) * (inv4pi / R);
}

/// Static kernel 1/(4πR).
inline double g_static(double R) { return 1.0 / (4.0 * std::numbers::pi * R); }

}  // namespace casimir
