#pragma once

#include <vector>

#include <Eigen/Dense>

#include "casimir/bem.hpp"

namespace casimir {

/// Real-frequency plane-wave scattering by a PEC body, used only to check
/// the EFIE core against the Mie series.
struct PlaneWaveSolution {
  double k = 0.0;
  Vec3 direction = Vec3::UnitZ();
  Vec3 polarization = Vec3::UnitX();
  Eigen::VectorXcd current;  // RWG coefficients of J
};

/// Solves ik Z a = -b with b_m = ∫ J_m · p̂ e^{ik k̂·r}.
PlaneWaveSolution solve_plane_wave(const BasisSet& basis, double k, const Vec3& direction, const Vec3& polarization,
                                   const QuadratureConfig& quad, const SingularCache& cache);

/// Bistatic radar cross section σ (area units) toward unit direction `obs`.
double bistatic_rcs(const BasisSet& basis, const PlaneWaveSolution& sol, const Vec3& obs);

enum class ScatteringPlane { e_plane, h_plane };

struct RcsSample {
  double theta_deg;
  double rcs_bem;  // σ / (πa²)
  double rcs_mie;
  double rel_err;
};

/// Sphere of radius `a` illuminated along +z with x polarization; samples
/// θ from 0 to 180 degrees in `step_deg` steps in the chosen plane.
std::vector<RcsSample> compare_sphere_rcs(const BasisSet& basis, double radius, double ka, ScatteringPlane plane,
                                          double step_deg, const QuadratureConfig& quad, const SingularCache& cache);

}  // namespace casimir
