#include "casimir/kernels.hpp"

#include "casimir/error.hpp"

namespace casimir {

namespace {

double separation(const Vec3& r, const Vec3& rp) {
  const double R = (r - rp).norm();
  if (!(R > 0.0)) throw NumericalError("kernel evaluated at coincident points");
  return R;
}

}  // namespace

double g_scalar(double kappa, const Vec3& r, const Vec3& rp) {
  return radial_coeffs(kappa, separation(r, rp), 0).g;
}

Vec3 g_gradient(double kappa, const Vec3& r, const Vec3& rp) {
  const auto c = radial_coeffs(kappa, separation(r, rp), 1);
  return c.A * (r - rp);
}

Mat3 g_hessian(double kappa, const Vec3& r, const Vec3& rp) {
  const Vec3 x = r - rp;
  const auto c = radial_coeffs(kappa, separation(r, rp), 2);
  return c.B * x * x.transpose() + c.A * Mat3::Identity();
}

Tensor3 g_third(double kappa, const Vec3& r, const Vec3& rp) {
  const Vec3 x = r - rp;
  const auto c = radial_coeffs(kappa, separation(r, rp), 3);
  Tensor3 t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        t[i](j, k) = c.C * x[i] * x[j] * x[k] +
                     c.B * ((i == j) * x[k] + (i == k) * x[j] + (j == k) * x[i]);
      }
    }
  }
  return t;
}

Vec3 dyadic_G_apply(double kappa, const Vec3& r, const Vec3& rp, const Vec3& p) {
  if (!(kappa > 0.0)) throw NumericalError("dyadic Green's function needs kappa > 0");
  const Vec3 x = r - rp;
  const auto c = radial_coeffs(kappa, separation(r, rp), 2);
  const Vec3 hp = c.B * x * x.dot(p) + c.A * p;
  return c.g * p - hp / (kappa * kappa);
}

}  // namespace casimir
