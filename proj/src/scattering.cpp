#include "casimir/scattering.hpp"

#include <cmath>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/oracles.hpp"

namespace casimir {

namespace {

constexpr int kSurfaceDegree = 5;

}  // namespace

PlaneWaveSolution solve_plane_wave(const BasisSet& basis, double k, const Vec3& direction, const Vec3& polarization,
                                   const QuadratureConfig& quad, const SingularCache& cache) {
  if (!(k > 0.0)) throw ConfigError("wavenumber must be positive");
  const Mesh& mesh = basis.mesh();
  const TriangleRule& rule = triangle_rule(kSurfaceDegree);
  const Vec3 khat = direction.normalized();
  const Vec3 p = polarization.normalized();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const int t = static_cast<int>(ti);
    const double area = mesh.area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Vec3 x = l[0] * mesh.vertex(t, 0) + l[1] * mesh.vertex(t, 1) + l[2] * mesh.vertex(t, 2);
      const Complex phase = std::exp(Complex(0.0, k * khat.dot(x))) * (rule.weights[q] * area);
      for (int kk = 0; kk < 3; ++kk) {
        const TriangleRwg& r = basis.on_triangle(t, kk);
        if (r.function < 0) continue;
        const double coef = r.sign * basis[r.function].edge_length / (2.0 * area);
        b[r.function] += coef * (x - mesh.vertex(t, kk)).dot(p) * phase;
      }
    }
  }
  const Eigen::MatrixXcd Z = assemble_z_complex(basis, k, quad, cache);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Z);
  PlaneWaveSolution sol;
  sol.k = k;
  sol.direction = khat;
  sol.polarization = p;
  sol.current = lu.solve(b) * Complex(0.0, 1.0 / k);  // a = -Z⁻¹ b / (ik)
  return sol;
}

double bistatic_rcs(const BasisSet& basis, const PlaneWaveSolution& sol, const Vec3& obs) {
  const Mesh& mesh = basis.mesh();
  const TriangleRule& rule = triangle_rule(kSurfaceDegree);
  const Vec3 rhat = obs.normalized();
  Eigen::Vector3cd F = Eigen::Vector3cd::Zero();
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const int t = static_cast<int>(ti);
    const double area = mesh.area(t);
    std::array<Complex, 3> alpha{};
    for (int kk = 0; kk < 3; ++kk) {
      const TriangleRwg& r = basis.on_triangle(t, kk);
      if (r.function < 0) continue;
      alpha[kk] = sol.current[r.function] * (r.sign * basis[r.function].edge_length / (2.0 * area));
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Vec3 x = l[0] * mesh.vertex(t, 0) + l[1] * mesh.vertex(t, 1) + l[2] * mesh.vertex(t, 2);
      const Complex phase = std::exp(Complex(0.0, -sol.k * rhat.dot(x))) * (rule.weights[q] * area);
      for (int kk = 0; kk < 3; ++kk) F += (alpha[kk] * phase) * (x - mesh.vertex(t, kk)).cast<Complex>();
    }
  }
  const Eigen::Vector3cd r = rhat.cast<Complex>();
  const Eigen::Vector3cd Ft = F - r * (r.transpose() * F)(0);
  return sol.k * sol.k * Ft.squaredNorm() / (4.0 * std::numbers::pi);
}

std::vector<RcsSample> compare_sphere_rcs(const BasisSet& basis, double radius, double ka, ScatteringPlane plane,
                                          double step_deg, const QuadratureConfig& quad, const SingularCache& cache) {
  if (!(step_deg > 0.0)) throw ConfigError("angle step must be positive");
  const double k = ka / radius;
  const PlaneWaveSolution sol = solve_plane_wave(basis, k, Vec3::UnitZ(), Vec3::UnitX(), quad, cache);
  const double phi = plane == ScatteringPlane::e_plane ? 0.0 : 0.5 * std::numbers::pi;
  const double norm = std::numbers::pi * radius * radius;
  std::vector<RcsSample> out;
  const int n = static_cast<int>(std::lround(180.0 / step_deg));
  for (int i = 0; i <= n; ++i) {
    const double deg = std::min(180.0, i * step_deg);
    const double th = deg * std::numbers::pi / 180.0;
    const Vec3 obs(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th));
    RcsSample s;
    s.theta_deg = deg;
    s.rcs_bem = bistatic_rcs(basis, sol, obs) / norm;
    s.rcs_mie = mie_rcs(ka, th, plane == ScatteringPlane::e_plane ? Polarization::e_plane : Polarization::h_plane);
    s.rel_err = std::abs(s.rcs_bem - s.rcs_mie) / s.rcs_mie;
    out.push_back(s);
  }
  return out;
}

}  // namespace casimir
