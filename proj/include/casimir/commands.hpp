#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "casimir/config.hpp"
#include "casimir/fluct.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

/// Maps the library's exception hierarchy onto exit codes.
int exit_code_for(const std::exception& e);

struct CommandOptions {
  std::optional<std::filesystem::path> output;     // overrides config.output
  std::optional<std::filesystem::path> reference;  // sweep comparison curve
  std::function<void(const std::string&)> log;
};

/// First line of every output file: "# casimir <version> config <hash>".
std::string file_header(const SceneConfig& config);

struct ForceReport {
  CasimirResult result;
  std::vector<std::filesystem::path> files;
};

/// force.json, pressure.csv, spectrum.csv, kappa_trace.csv. Nothing is written
/// on a config error; a numerical failure leaves failure.json.
ForceReport cmd_force(const SceneConfig& config, const CommandOptions& options);

struct SweepRow {
  double z_over_r = 0.0;
  double f_r2 = 0.0;  // F·R² along the line between the bodies, negative = attractive
  Vec3 force_a = Vec3::Zero();
  Vec3 force_b = Vec3::Zero();
  double newton_residual = 0.0;  // |F_A + F_B| / |F_A|
  double pfa_ratio = 0.0;        // spheres only
  std::optional<double> reference;
  double max_tail_fraction = 0.0;
  double gap = 0.0;
  std::size_t unknowns = 0;
  std::vector<std::string> warnings;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::filesystem::path> files;
};

/// sweep.csv and sweep.json. A numerical failure writes the rows finished so
/// far together with failure.json.
SweepReport cmd_sweep(const SceneConfig& config, const CommandOptions& options);

struct ScatteringCase {
  int refinement = 0;
  double ka = 0.0;
  ScatteringPlane plane = ScatteringPlane::e_plane;
  std::size_t unknowns = 0;
  std::vector<RcsSample> samples;
  double max_rel_err = 0.0;
};

struct ScatteringReport {
  std::vector<ScatteringCase> cases;
  bool within_tolerance = true;
  bool converging = true;  // max error non-increasing with refinement for each (ka, plane)
  bool passed() const { return within_tolerance && converging; }
  std::vector<std::filesystem::path> files;
};

/// rcs.csv and scattering.json. The tolerance applies to the finest refinement.
ScatteringReport cmd_verify_scattering(const SceneConfig& config, const CommandOptions& options);

}  // namespace casimir
