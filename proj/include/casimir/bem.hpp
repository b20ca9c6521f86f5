#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "casimir/geometry.hpp"
#include "casimir/kernels.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/singular.hpp"

namespace casimir {

/// Quadrature controls for matrix assembly, excitation and field evaluation.
struct QuadratureConfig {
  int far_degree = 2;            // triangle rule for well-separated pairs (3 points)
  int near_degree = 4;           // rule for pairs closer than `near_distance` (6 points)
  double near_distance = 2.0;    // in mean edge lengths, measured between centroids
  int singular_static_order = 12;    // Sauter-Schwab order for the cached 1/R part
  int singular_remainder_order = 6;  // order for the smooth remainder
  AdaptiveOptions near_point;    // excitation and field evaluation near the surface
  bool rhs_direct = false;       // use the third-derivative excitation kernel
};

/// Galerkin EFIE matrix on the imaginary axis,
///   Z_mn = ∫∫ [J_m·J_n + (∇·J_m)(∇'·J_n)/κ²] e^{-κR}/(4πR),
/// i.e. ∫ J_m · [I - ∇∇/κ²] g J_n after moving the gradients onto the RWG
/// divergences. Symmetric positive definite.
struct ImpedanceMatrix {
  double kappa = 0.0;
  Eigen::MatrixXd Z;
  std::shared_ptr<const Mesh> mesh;
};

ImpedanceMatrix assemble_z(const BasisSet& basis, double kappa, const QuadratureConfig& quad,
                           const SingularCache& cache);

/// Real-frequency matrix with kernel e^{ikR}/(4πR) and divergence factor -1/k².
Eigen::MatrixXcd assemble_z_complex(const BasisSet& basis, double k, const QuadratureConfig& quad,
                                    const SingularCache& cache);

/// max|Z - Zᵀ| / max|Z|.
double symmetry_residual(const Eigen::MatrixXd& Z);

/// Writes the matrix as CSV (one row per line, full precision).
void dump_matrix_csv(const Eigen::MatrixXd& Z, const std::filesystem::path& path);

/// Point current source J = ê δ(r' - r_i) or, with a derivative direction,
/// J = ê (d̂·∇') δ(r' - r_i). `row` tags the stress-tensor source it stands
/// for (1..5, 0 for a free-form source).
struct SourceSpec {
  Vec3 location = Vec3::Zero();
  Vec3 orientation = Vec3::UnitZ();
  std::optional<Vec3> derivative;
  int row = 0;
};

/// Excitation b_m = ∫ J_m · e^i with e^i the incident field of `src` in the
/// normalization e^i = [I - ∇∇/κ²] g ê (derivative sources: (d̂·∇) of that).
/// The scattering coefficients are a = -Z⁻¹ b. Throws NumericalError when the
/// source is closer than `min_distance` to the mesh.
Eigen::VectorXd assemble_rhs(const BasisSet& basis, const SourceSpec& src, double kappa, const QuadratureConfig& quad,
                             double min_distance = 0.0);

/// Several sources sharing one location, in a single pass over the mesh.
/// Column s of the result belongs to sources[s].
Eigen::MatrixXd assemble_rhs_block(const BasisSet& basis, std::span<const SourceSpec> sources, double kappa,
                                   const QuadratureConfig& quad, double min_distance = 0.0);

/// Shortest distance from a point to the mesh.
double distance_to_mesh(const Mesh& mesh, const Vec3& p);

/// LU factorization of Z with partial pivoting, reused for any number of
/// right-hand sides.
class SolveWorkspace {
 public:
  /// Throws NumericalError when the reciprocal condition estimate is below
  /// 1 / max_condition.
  explicit SolveWorkspace(const ImpedanceMatrix& Z, double max_condition = 1e12);

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }
  double rcond() const { return rcond_; }
  double kappa() const { return kappa_; }
  std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
  double kappa_ = 0.0;
};

SolveWorkspace factorize(const ImpedanceMatrix& Z, double max_condition = 1e12);

/// Physical scattered fields of the surface current Σ a_n J_n at r, per unit
/// source strength: E = -κ e^s and H = ∇ × e^s with
/// e^s = ∫ g J - (1/κ²) ∫ (∇'·J) ∇g.
Vec3 eval_E_scattered(const BasisSet& basis, const Eigen::VectorXd& a, const Vec3& r, double kappa,
                      const QuadratureConfig& quad, double min_distance = 0.0);
Vec3 eval_H_scattered(const BasisSet& basis, const Eigen::VectorXd& a, const Vec3& r, double kappa,
                      const QuadratureConfig& quad, double min_distance = 0.0);

/// Incident fields of a source in free space, same normalization.
Vec3 incident_E(const SourceSpec& src, const Vec3& r, double kappa);
Vec3 incident_H(const SourceSpec& src, const Vec3& r, double kappa);

}  // namespace casimir
