#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir/bem.hpp"
#include "casimir/fluct.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

enum class RunMode { force, sweep, verify_scattering };
enum class ShapeKind { sphere, capsule, mesh };
enum class CapsuleArrangement { parallel, perpendicular };

std::string to_string(RunMode mode);
std::string to_string(ShapeKind kind);
std::string to_string(CapsuleArrangement arrangement);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::sphere;
  double radius = 1.0;
  double length = 6.0;  // capsule only
  int refinement = 2;   // icosphere subdivisions, or capsule azimuthal segments
  SphereFit fit = SphereFit::volume;
  std::string mesh_path;  // kind == mesh; relative paths resolve against the config file
};

struct ObjectSpec {
  int id = 0;
  ShapeSpec shape;
  Vec3 translation = Vec3::Zero();
  Vec3 rotation_axis = Vec3::UnitZ();
  double rotation_deg = 0.0;
};

struct SweepSpec {
  ShapeSpec shape;
  CapsuleArrangement arrangement = CapsuleArrangement::parallel;
  std::vector<double> separations;  // surface gap over radius
};

struct ScatteringSpec {
  double radius = 1.0;
  std::vector<int> refinements{1, 2};
  std::vector<double> ka{0.5, 1.0};
  double step_deg = 10.0;
  double tolerance = 0.03;
  SphereFit fit = SphereFit::volume;
};

/// Everything that determines a run. JSON schema:
///
///   {
///     "mode": "force" | "sweep" | "verify-scattering",
///     "objects": [{"id": 0, "shape": "sphere", "radius": 1, "refinement": 2,
///                  "fit": "volume", "translation": [0, 0, 0],
///                  "rotation": {"axis": [0, 0, 1], "angle_deg": 0}},
///                 {"id": 1, "shape": "capsule", "radius": 1, "length": 6, "refinement": 12},
///                 {"id": 2, "shape": "mesh", "path": "body.obj"}],
///     "measured": [0],
///     "eps_factor": 0.05,
///     "kappa": {"points": 32, "kappa0": "auto"},
///     "surface_rule": "centroid",
///     "quadrature": {"far_degree": 2, "near_degree": 4, "near_distance": 2,
///                    "singular_static_order": 12, "singular_remainder_order": 6,
///                    "rhs_direct": false},
///     "literal_last_term": false,
///     "subtract_isolated": true,
///     "convergence_study": false,
///     "output": "out",
///     "seed": 1,
///     "sweep": {"shape": {...}, "arrangement": "parallel", "separations": [0.5, 1, 2]},
///     "scattering": {"radius": 1, "refinements": [1, 2], "ka": [0.5, 1],
///                    "step_deg": 10, "tolerance": 0.03, "fit": "volume"}
///   }
///
/// Only "mode" is required; every other key has the default shown.
struct SceneConfig {
  RunMode mode = RunMode::force;
  std::vector<ObjectSpec> objects;
  std::vector<int> measured;
  double eps_factor = 0.05;
  int kappa_points = 32;
  std::optional<double> kappa0;
  SurfaceRule surface_rule = SurfaceRule::centroid;
  QuadratureConfig quad;
  bool literal_last_term = false;
  bool subtract_isolated = true;
  bool convergence_study = false;
  std::string output = "out";
  std::uint64_t seed = 1;
  SweepSpec sweep;
  ScatteringSpec scattering;
  std::filesystem::path base_dir;  // not serialized
};

/// Throws ConfigError with the offending key on any schema or range problem.
SceneConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
SceneConfig load_config(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, every field present).
std::string serialize_config(const SceneConfig& config);
void validate_config(const SceneConfig& config);

/// FNV-1a of the canonical serialization, as 16 hex digits.
std::string config_hash(const SceneConfig& config);

Mesh build_shape(const ShapeSpec& shape, const std::filesystem::path& base_dir);
Mesh build_scene(const SceneConfig& config);
/// Two identical bodies with surface gap `z_over_r * R` along x; capsules in
/// the perpendicular arrangement have the second axis along y.
Mesh build_pair(const SweepSpec& sweep, double z_over_r, const std::filesystem::path& base_dir);

CasimirOptions casimir_options(const SceneConfig& config);

}  // namespace casimir
