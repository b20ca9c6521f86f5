#pragma once

#include <complex>
#include <filesystem>
#include <vector>

namespace casimir {

enum class Polarization {
  e_plane,  // scattering plane contains the incident E field
  h_plane,  // scattering plane contains the incident H field
};

/// Mie coefficients of a perfectly conducting sphere,
/// a_l = ψ_l'(x)/ξ_l'(x), b_l = ψ_l(x)/ξ_l(x), x = ka, l = 1..L_max.
struct MieSeries {
  double ka = 0.0;
  int l_max = 0;
  std::vector<std::complex<double>> a, b;  // index 0 holds l = 1
};

/// Default truncation: ceil(ka + 4.05 ka^{1/3} + 10).
int mie_truncation(double ka);
MieSeries mie_series(double ka, int l_max = 0);

/// Bistatic σ/(πa²) at scattering angle theta (radians, 0 = forward) for
/// plane-wave incidence; `extra_orders` extends the default truncation.
double mie_rcs(double ka, double theta, Polarization pol, int extra_orders = 0);

/// Proximity-force estimate of the force between two equal spheres of radius
/// R at surface gap Z (ħ = c = 1; negative = attractive): -π³ R / (720 Z³).
double pfa_sphere_sphere(double R, double Z);

/// Ideal parallel-plate Casimir pressure -π² / (240 d⁴) (negative = attractive).
double ideal_plate_pressure(double d);

/// User-supplied reference curve: CSV with header row containing the columns
/// z_over_r and f_r2 (any order, extra columns ignored).
struct ReferencePoint {
  double z_over_r;
  double f_r2;
};

std::vector<ReferencePoint> read_reference_csv(const std::filesystem::path& path);

/// Linear interpolation in z_over_r; throws ConfigError outside the range.
double interpolate_reference(const std::vector<ReferencePoint>& ref, double z_over_r);

}  // namespace casimir
