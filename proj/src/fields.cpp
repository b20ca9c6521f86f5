#include "casimir/bem.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

struct FieldSums {
  Vec3 e = Vec3::Zero();  // ∫ g J - (1/κ²) ∫ (∇'·J) ∇g
  Vec3 h = Vec3::Zero();  // ∫ ∇g × J
};

FieldSums field_sums(const BasisSet& basis, const Eigen::VectorXd& a, const Vec3& r, double kappa,
                     const QuadratureConfig& quad, double min_distance) {
  if (!(kappa > 0.0)) throw NumericalError("field evaluation needs kappa > 0");
  if (a.size() != static_cast<Eigen::Index>(basis.size()))
    throw ConfigError("coefficient vector does not match the basis");
  const Mesh& mesh = basis.mesh();
  const double floor = std::max(min_distance, 1e-9 * mesh.bounding_box_diagonal());
  if (distance_to_mesh(mesh, r) < floor) throw NumericalError("field evaluation point lies on the surface");
  const double inv_k2 = 1.0 / (kappa * kappa);
  FieldSums out;
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const int t = static_cast<int>(ti);
    const double area = mesh.area(t);
    // current on this triangle: J(x) = Σ_k α_k (x - p_k), divergence 2 Σ_k α_k
    std::array<double, 3> alpha{};
    bool any = false;
    for (int k = 0; k < 3; ++k) {
      const TriangleRwg& rw = basis.on_triangle(t, k);
      if (rw.function < 0) continue;
      alpha[k] = a[rw.function] * rw.sign * basis[rw.function].edge_length / (2.0 * area);
      any = any || alpha[k] != 0.0;
    }
    if (!any) continue;
    const double div = 2.0 * (alpha[0] + alpha[1] + alpha[2]);
    const Vec3 jp = alpha[0] * mesh.vertex(t, 0) + alpha[1] * mesh.vertex(t, 1) + alpha[2] * mesh.vertex(t, 2);
    const double asum = alpha[0] + alpha[1] + alpha[2];
    integrate_near_point(mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2), r, quad.near_point,
                         [&](const Vec3& x, double w) {
                           const Vec3 d = r - x;
                           const auto k = radial_coeffs(kappa, d.norm(), 1);
                           const Vec3 J = asum * x - jp;
                           const Vec3 grad = k.A * d;
                           out.e += w * (k.g * J - inv_k2 * div * grad);
                           out.h += w * grad.cross(J);
                         });
  }
  return out;
}

}  // namespace

Vec3 eval_E_scattered(const BasisSet& basis, const Eigen::VectorXd& a, const Vec3& r, double kappa,
                      const QuadratureConfig& quad, double min_distance) {
  return -kappa * field_sums(basis, a, r, kappa, quad, min_distance).e;
}

Vec3 eval_H_scattered(const BasisSet& basis, const Eigen::VectorXd& a, const Vec3& r, double kappa,
                      const QuadratureConfig& quad, double min_distance) {
  return field_sums(basis, a, r, kappa, quad, min_distance).h;
}

}  // namespace casimir
