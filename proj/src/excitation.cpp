#include <limits>

#include "casimir/bem.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

/// Integrals over one triangle of the kernel seen from a source point r_i,
/// with ρ = r - centroid and all derivatives taken at the field point:
///   g0 = ∫ g,  rg = ∫ ρ g,  grad = ∫ ∇g,  rgrad = ∫ ρ ∇gᵀ,  hess = ∫ ∇∇g.
struct SourceMoments {
  double g0 = 0.0;
  Vec3 rg = Vec3::Zero();
  Vec3 grad = Vec3::Zero();
  Mat3 rgrad = Mat3::Zero();
  Mat3 hess = Mat3::Zero();
};

SourceMoments source_moments(const Mesh& mesh, int t, const Vec3& ri, double kappa, const AdaptiveOptions& opt) {
  SourceMoments m;
  const Vec3 c = mesh.centroid(t);
  integrate_near_point(mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2), ri, opt,
                       [&](const Vec3& x, double w) {
                         const Vec3 d = x - ri;
                         const Vec3 rho = x - c;
                         const auto k = radial_coeffs(kappa, d.norm(), 2);
                         const double gw = k.g * w;
                         const Vec3 grad = (k.A * w) * d;
                         m.g0 += gw;
                         m.rg += gw * rho;
                         m.grad += grad;
                         m.rgrad.noalias() += rho * grad.transpose();
                         m.hess.noalias() += (k.B * w) * d * d.transpose();
                         m.hess.diagonal().array() += k.A * w;
                       });
  return m;
}

void check_distance(const Mesh& mesh, const Vec3& p, double min_distance) {
  const double d = distance_to_mesh(mesh, p);
  const double floor = std::max(min_distance, 1e-9 * mesh.bounding_box_diagonal());
  if (d < floor)
    throw NumericalError("source or evaluation point lies too close to the surface (distance " + std::to_string(d) +
                         ", minimum " + std::to_string(floor) + ")");
}

Eigen::MatrixXd rhs_mixed(const BasisSet& basis, std::span<const SourceSpec> sources, double kappa,
                          const QuadratureConfig& quad) {
  const Mesh& mesh = basis.mesh();
  const Vec3& ri = sources.front().location;
  const double inv_k2 = 1.0 / (kappa * kappa);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()),
                                            static_cast<Eigen::Index>(sources.size()));
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const int t = static_cast<int>(ti);
    const SourceMoments m = source_moments(mesh, t, ri, kappa, quad.near_point);
    const double area = mesh.area(t);
    const Vec3 c = mesh.centroid(t);
    for (int k = 0; k < 3; ++k) {
      const TriangleRwg& r = basis.on_triangle(t, k);
      if (r.function < 0) continue;
      const double coef = r.sign * basis[r.function].edge_length;
      const Vec3 p = mesh.vertex(t, k) - c;
      for (std::size_t s = 0; s < sources.size(); ++s) {
        const Vec3& e = sources[s].orientation;
        double vec_part, div_part;
        if (sources[s].derivative) {
          const Vec3& d = *sources[s].derivative;
          vec_part = e.dot(m.rgrad * d) - e.dot(p) * m.grad.dot(d);
          div_part = e.dot(m.hess * d);
        } else {
          vec_part = e.dot(m.rg) - e.dot(p) * m.g0;
          div_part = e.dot(m.grad);
        }
        b(r.function, static_cast<Eigen::Index>(s)) += coef / (2.0 * area) * vec_part + coef / area * inv_k2 * div_part;
      }
    }
  }
  return b;
}

/// Unintegrated form: b = ∫ J·e^i with e^i built from third derivatives.
Eigen::MatrixXd rhs_direct(const BasisSet& basis, std::span<const SourceSpec> sources, double kappa,
                           const QuadratureConfig& quad) {
  const Mesh& mesh = basis.mesh();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()),
                                            static_cast<Eigen::Index>(sources.size()));
  for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const int t = static_cast<int>(ti);
    const double area = mesh.area(t);
    integrate_near_point(
        mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2), sources.front().location, quad.near_point,
        [&](const Vec3& x, double w) {
          for (std::size_t s = 0; s < sources.size(); ++s) {
            const Vec3 ei = incident_E(sources[s], x, kappa) / (-kappa);
            for (int k = 0; k < 3; ++k) {
              const TriangleRwg& r = basis.on_triangle(t, k);
              if (r.function < 0) continue;
              const double coef = r.sign * basis[r.function].edge_length / (2.0 * area);
              b(r.function, static_cast<Eigen::Index>(s)) += w * coef * (x - mesh.vertex(t, k)).dot(ei);
            }
          }
        });
  }
  return b;
}

}  // namespace

double distance_to_mesh(const Mesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int ti = static_cast<int>(t);
    best = std::min(best, point_triangle_distance(p, mesh.vertex(ti, 0), mesh.vertex(ti, 1), mesh.vertex(ti, 2)));
  }
  return best;
}

Eigen::MatrixXd assemble_rhs_block(const BasisSet& basis, std::span<const SourceSpec> sources, double kappa,
                                   const QuadratureConfig& quad, double min_distance) {
  if (!(kappa > 0.0)) throw NumericalError("excitation needs kappa > 0");
  if (sources.empty()) return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), 0);
  for (const SourceSpec& s : sources)
    if ((s.location - sources.front().location).norm() != 0.0)
      throw ConfigError("assemble_rhs_block needs sources at a common location");
  check_distance(basis.mesh(), sources.front().location, min_distance);
  return quad.rhs_direct ? rhs_direct(basis, sources, kappa, quad) : rhs_mixed(basis, sources, kappa, quad);
}

Eigen::VectorXd assemble_rhs(const BasisSet& basis, const SourceSpec& src, double kappa, const QuadratureConfig& quad,
                             double min_distance) {
  return assemble_rhs_block(basis, std::span<const SourceSpec>(&src, 1), kappa, quad, min_distance).col(0);
}

Vec3 incident_E(const SourceSpec& src, const Vec3& r, double kappa) {
  if (!(kappa > 0.0)) throw NumericalError("incident field needs kappa > 0");
  const Vec3 x = r - src.location;
  const double R = x.norm();
  if (!(R > 0.0)) throw NumericalError("incident field evaluated at the source point");
  const Vec3& e = src.orientation;
  const double inv_k2 = 1.0 / (kappa * kappa);
  Vec3 field;
  if (src.derivative) {
    const Vec3& d = *src.derivative;
    const auto c = radial_coeffs(kappa, R, 3);
    // (d·∇) g ê - (1/κ²) ∇ (d·∇)(ê·∇) g
    const double xd = x.dot(d), xe = x.dot(e), de = d.dot(e);
    const Vec3 third = c.C * xd * xe * x + c.B * (de * x + xe * d + xd * e);
    field = c.A * xd * e - inv_k2 * third;
  } else {
    const auto c = radial_coeffs(kappa, R, 2);
    field = c.g * e - inv_k2 * (c.B * x * x.dot(e) + c.A * e);
  }
  return -kappa * field;
}

Vec3 incident_H(const SourceSpec& src, const Vec3& r, double kappa) {
  const Vec3 x = r - src.location;
  const double R = x.norm();
  if (!(R > 0.0)) throw NumericalError("incident field evaluated at the source point");
  const Vec3& e = src.orientation;
  if (src.derivative) {
    const auto c = radial_coeffs(kappa, R, 2);
    const Vec3& d = *src.derivative;
    const Vec3 hd = c.B * x * x.dot(d) + c.A * d;
    return hd.cross(e);
  }
  const auto c = radial_coeffs(kappa, R, 1);
  return (c.A * x).cross(e);
}

}  // namespace casimir
