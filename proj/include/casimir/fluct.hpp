#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "casimir/bem.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

/// Quadrature on κ ∈ (0, ∞): Gauss-Legendre in t ∈ (0, 1) mapped by
/// κ = κ₀ t / (1 - t).
struct KappaGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double kappa0 = 0.0;

  static KappaGrid gauss_legendre(int count, double kappa0);
  std::size_t size() const { return nodes.size(); }
};

/// The five stress-tensor sources at r + ε n̂ for a surface frame (n, u, v):
///   1: (n, -)   2: (v, ∂n)   3: (n, ∂v)   4: (n, ∂u)   5: (u, ∂n)
/// written as (orientation, derivative direction).
std::array<SourceSpec, 5> stress_sources(const Vec3& point, const Frame& frame, double eps);

/// Scattered-field values at the source point for one (point, κ), per unit
/// source: E_n from source 1, H_u from sources 2, 3 (and 5), H_v from 4, 5.
struct SpectralSample {
  int point = 0;
  double kappa = 0.0;
  double E_n_s1 = 0.0;
  double H_u_s2 = 0.0;
  double H_u_s3 = 0.0;
  double H_v_s4 = 0.0;
  double H_v_s5 = 0.0;
  double H_u_s5 = 0.0;  // only used by the literal reading of the last term
  double t_nn = 0.0;
};

/// Rotated-axis integrand of T_nn:
///   t_nn = (1/2π) [ κ E_n(s1) + (-H_u(s2) + H_u(s3)) + (-H_v(s4) + H_v(s5)) ].
/// With `literal_last_term` the final H_v(s5) is replaced by H_u(s5).
double stress_integrand(const SpectralSample& s, bool literal_last_term = false);

/// Normal stress per evaluation point after κ integration.
struct PressurePoint {
  SurfacePoint point;
  double eps = 0.0;         // source offset used at this point
  double T_nn = 0.0;
  double T_isolated = 0.0;  // stress of the object alone, already removed from T_nn
  double tail_fraction = 0.0;  // |last κ node contribution| / |T_nn|
};

struct PressureField {
  std::vector<PressurePoint> points;
};

/// F = Σ w T_nn n̂ over the points belonging to `object_id`.
Vec3 surface_force(const PressureField& pressure, int object_id);

struct CasimirOptions {
  QuadratureConfig quad;
  SurfaceRule surface_rule = SurfaceRule::centroid;
  int kappa_points = 32;
  std::optional<double> kappa0;  // default: 1 / (smallest gap), single body 1 / diameter
  double eps_factor = 0.05;      // ε = eps_factor × mean edge length of the point's triangle
  bool literal_last_term = false;
  std::vector<int> measured_objects;  // empty: every object
  bool convergence_study = false;     // rerun with ε/2 and with 2M
  // In multi-object scenes, remove each measured object's own stress computed
  // with the object alone (same mesh, points, ε and κ grid).
  bool subtract_isolated = true;
  bool record_spectrum = true;
  double max_condition = 1e12;
  int block_size = 64;  // evaluation points per multi-RHS solve
  std::function<void(const std::string&)> log;  // progress messages (optional)
};

struct KappaDiagnostics {
  double kappa = 0.0;
  double weight = 0.0;
  double rcond = 0.0;
  double sum_abs_t = 0.0;         // Σ_points w |t_nn|
  Vec3 force_integrand = Vec3::Zero();  // per measured object summed in object order
  double seconds = 0.0;
};

struct ObjectForce {
  int object_id = 0;
  Vec3 force = Vec3::Zero();
  double area = 0.0;
  double mean_abs_T = 0.0;
};

struct ConvergenceReport {
  std::vector<ObjectForce> half_eps;
  std::vector<ObjectForce> double_m;
  double rel_change_eps = 0.0;  // max over objects |ΔF| / |F|
  double rel_change_m = 0.0;
};

struct CasimirResult {
  std::vector<ObjectForce> forces;
  PressureField pressure;
  std::vector<SpectralSample> spectrum;  // κ-major
  std::vector<KappaDiagnostics> kappa_trace;
  KappaGrid grid;
  double gap = 0.0;
  double max_tail_fraction = 0.0;
  bool decay_ok = true;
  std::vector<std::string> warnings;
  std::optional<ConvergenceReport> convergence;
  double seconds = 0.0;
  std::size_t unknowns = 0;
};

/// Smallest vertex-to-vertex distance between different objects; 0 for a
/// single object.
double minimum_gap(const Mesh& mesh);

/// Full pipeline: for every κ node assemble Z, factorize once, solve the
/// five-source problems for all evaluation points, integrate over κ and over
/// the surface. Spectrum and κ trace hold the interaction part when isolated
/// subtraction is active.
CasimirResult casimir_force(const Mesh& scene, const CasimirOptions& options);

}  // namespace casimir
