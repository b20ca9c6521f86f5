#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "casimir/commands.hpp"
#include "casimir/error.hpp"

namespace {

void log_line(const std::string& s) { std::cerr << s << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir forces between perfect conductors by surface integral equations"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  std::string output;
  std::string reference;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON scene configuration")->required();
    sub->add_option("--threads", threads, "Worker thread cap (0 = runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--output", output, "Output directory (overrides the config)");
    sub->add_flag("--quiet", quiet, "Suppress progress messages");
  };
  CLI::App* verify = app.add_subcommand("verify-scattering", "Compare BEM plane-wave scattering with Mie series");
  CLI::App* force = app.add_subcommand("force", "Casimir force on every object of a scene");
  CLI::App* sweep = app.add_subcommand("sweep", "Force between two identical bodies versus separation");
  for (CLI::App* s : {verify, force, sweep}) add_common(s);
  sweep->add_option("--reference", reference, "CSV with z_over_r,f_r2 columns for comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? casimir::exit_ok : casimir::exit_config;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  casimir::CommandOptions options;
  if (!output.empty()) options.output = output;
  if (!reference.empty()) options.reference = reference;
  if (!quiet) options.log = log_line;

  try {
    casimir::SceneConfig config = casimir::load_config(config_path);
    const std::string want = verify->parsed() ? "verify-scattering" : force->parsed() ? "force" : "sweep";
    if (casimir::to_string(config.mode) != want)
      throw casimir::ConfigError("config mode is \"" + casimir::to_string(config.mode) + "\" but the command is " + want);

    if (verify->parsed()) {
      const auto rep = casimir::cmd_verify_scattering(config, options);
      for (const auto& c : rep.cases)
        std::cout << "s=" << c.refinement << " ka=" << c.ka
                  << (c.plane == casimir::ScatteringPlane::e_plane ? " E-plane" : " H-plane")
                  << " max_rel_err=" << c.max_rel_err << '\n';
      std::cout << (rep.passed() ? "PASS" : "FAIL") << " (tolerance " << config.scattering.tolerance
                << (rep.converging ? ", converging" : ", not converging") << ")\n";
      return rep.passed() ? casimir::exit_ok : casimir::exit_numerical;
    }
    if (force->parsed()) {
      const auto rep = casimir::cmd_force(config, options);
      for (const auto& f : rep.result.forces)
        std::cout << "object " << f.object_id << "  F = (" << f.force.x() << ", " << f.force.y() << ", "
                  << f.force.z() << ")\n";
      for (const auto& p : rep.files) std::cout << "wrote " << p.string() << '\n';
      return casimir::exit_ok;
    }
    const auto rep = casimir::cmd_sweep(config, options);
    for (const auto& r : rep.rows) std::cout << "Z/R = " << r.z_over_r << "  F*R^2 = " << r.f_r2 << '\n';
    for (const auto& p : rep.files) std::cout << "wrote " << p.string() << '\n';
    return casimir::exit_ok;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return casimir::exit_code_for(e);
  }
}
