#include "casimir/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "casimir/error.hpp"
#include "casimir/oracles.hpp"

namespace casimir {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return exit_config;
  if (dynamic_cast<const IoError*>(&e)) return exit_io;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return exit_io;
  return exit_numerical;
}

std::string file_header(const SceneConfig& config) {
  return std::string("# casimir ") + kVersion + " config " + config_hash(config);
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// Files are staged in memory and written together at the end of a run.
class OutputSet {
 public:
  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> out;
    for (const auto& [name, content] : files_) {
      const std::filesystem::path path = dir / name;
      const std::filesystem::path tmp = dir / (name + ".tmp");
      {
        std::ofstream f(tmp, std::ios::binary);
        f << content;
        if (!f) throw IoError("cannot write " + tmp.string());
      }
      std::filesystem::rename(tmp, path, ec);
      if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
      out.push_back(path);
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::filesystem::path output_dir(const SceneConfig& config, const CommandOptions& options) {
  if (options.output) return *options.output;
  std::filesystem::path p = config.output;
  if (p.is_relative() && !config.base_dir.empty()) p = config.base_dir / p;
  return p;
}

json header_json(const SceneConfig& config) {
  return {{"tool", "casimir"}, {"version", kVersion}, {"config_hash", config_hash(config)},
          {"mode", to_string(config.mode)}};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json result_json(const CasimirResult& r) {
  json j;
  j["unknowns"] = r.unknowns;
  j["gap"] = r.gap;
  j["kappa0"] = r.grid.kappa0;
  j["kappa_points"] = r.grid.size();
  j["forces"] = json::array();
  for (const ObjectForce& f : r.forces)
    j["forces"].push_back({{"object_id", f.object_id},
                           {"force", vec_json(f.force)},
                           {"area", f.area},
                           {"mean_abs_T", f.mean_abs_T}});
  double min_rcond = 1.0;
  for (const KappaDiagnostics& d : r.kappa_trace) min_rcond = std::min(min_rcond, d.rcond);
  j["diagnostics"] = {{"min_rcond", min_rcond},
                      {"max_tail_fraction", r.max_tail_fraction},
                      {"decay_monotonic", r.decay_ok},
                      {"warnings", r.warnings}};
  if (r.forces.size() == 2) {
    const double fa = r.forces[0].force.norm();
    j["diagnostics"]["newton_residual"] = fa > 0.0 ? (r.forces[0].force + r.forces[1].force).norm() / fa : 0.0;
  }
  if (r.convergence) {
    const ConvergenceReport& c = *r.convergence;
    j["convergence"] = {{"rel_change_half_eps", c.rel_change_eps}, {"rel_change_double_m", c.rel_change_m}};
  }
  return j;
}

void log_timing(const CommandOptions& options, const std::string& what, const CasimirResult& r) {
  if (!options.log) return;
  std::ostringstream os;
  os << what << ": " << r.unknowns << " unknowns, " << r.grid.size() << " kappa nodes, " << std::fixed
     << std::setprecision(2) << r.seconds << " s";
  options.log(os.str());
  double min_rcond = 1.0;
  for (const KappaDiagnostics& d : r.kappa_trace) min_rcond = std::min(min_rcond, d.rcond);
  os.str("");
  os << "smallest reciprocal condition estimate " << std::scientific << std::setprecision(3) << min_rcond;
  options.log(os.str());
  for (const std::string& w : r.warnings) options.log("warning: " + w);
}

// On a numerical failure, writes whatever finished plus failure.json.
void flush_failure(OutputSet out, const std::filesystem::path& dir, const SceneConfig& config,
                   const std::string& stage, const std::exception& e) {
  json j = header_json(config);
  j["status"] = "failed";
  j["stage"] = stage;
  j["error"] = e.what();
  out.add("failure.json", dump(j));
  try {
    out.commit(dir);
  } catch (const std::exception&) {
  }
}

}  // namespace

ForceReport cmd_force(const SceneConfig& config, const CommandOptions& options) {
  validate_config(config);
  const std::filesystem::path dir = output_dir(config, options);
  const Mesh scene = build_scene(config);
  CasimirOptions opt = casimir_options(config);
  opt.log = options.log;

  ForceReport rep;
  try {
    rep.result = casimir_force(scene, opt);
  } catch (const NumericalError& e) {
    flush_failure({}, dir, config, "force", e);
    throw;
  }
  const CasimirResult& r = rep.result;
  log_timing(options, "force", r);

  const std::string head = file_header(config) + "\n";
  OutputSet out;
  json summary = header_json(config);
  summary["result"] = result_json(r);
  out.add("force.json", dump(summary));

  std::ostringstream p;
  p << head << "object_id,triangle,x,y,z,nx,ny,nz,weight,eps,T_nn,T_isolated,tail_fraction\n";
  for (const PressurePoint& q : r.pressure.points) {
    const SurfacePoint& s = q.point;
    p << s.object_id << ',' << s.triangle << ',' << num(s.position.x()) << ',' << num(s.position.y()) << ','
      << num(s.position.z()) << ',' << num(s.frame.n.x()) << ',' << num(s.frame.n.y()) << ',' << num(s.frame.n.z())
      << ',' << num(s.weight) << ',' << num(q.eps) << ',' << num(q.T_nn) << ',' << num(q.T_isolated) << ','
      << num(q.tail_fraction) << '\n';
  }
  out.add("pressure.csv", p.str());

  std::ostringstream s;
  s << head << "kappa,point,E_n_s1,H_u_s2,H_u_s3,H_v_s4,H_v_s5,H_u_s5,t_nn\n";
  for (const SpectralSample& x : r.spectrum)
    s << num(x.kappa) << ',' << x.point << ',' << num(x.E_n_s1) << ',' << num(x.H_u_s2) << ',' << num(x.H_u_s3)
      << ',' << num(x.H_v_s4) << ',' << num(x.H_v_s5) << ',' << num(x.H_u_s5) << ',' << num(x.t_nn) << '\n';
  out.add("spectrum.csv", s.str());

  std::ostringstream k;
  k << head << "kappa,weight,rcond,sum_abs_t,fx,fy,fz\n";
  for (const KappaDiagnostics& d : r.kappa_trace)
    k << num(d.kappa) << ',' << num(d.weight) << ',' << num(d.rcond) << ',' << num(d.sum_abs_t) << ','
      << num(d.force_integrand.x()) << ',' << num(d.force_integrand.y()) << ',' << num(d.force_integrand.z()) << '\n';
  out.add("kappa_trace.csv", k.str());

  rep.files = out.commit(dir);
  return rep;
}

namespace {

OutputSet sweep_outputs(const SceneConfig& config, const SweepReport& rep, bool with_reference) {
  const ShapeSpec& shape = config.sweep.shape;
  OutputSet out;
  std::ostringstream c;
  c << file_header(config) << "\n";
  c << "z_over_r,f_r2,fa_x,fa_y,fa_z,fb_x,fb_y,fb_z,newton_residual,pfa_ratio,max_tail_fraction,gap,unknowns";
  if (with_reference) c << ",reference_f_r2,rel_diff";
  c << '\n';
  json rows = json::array();
  for (const SweepRow& r : rep.rows) {
    c << num(r.z_over_r) << ',' << num(r.f_r2) << ',' << num(r.force_a.x()) << ',' << num(r.force_a.y()) << ','
      << num(r.force_a.z()) << ',' << num(r.force_b.x()) << ',' << num(r.force_b.y()) << ',' << num(r.force_b.z())
      << ',' << num(r.newton_residual) << ',' << num(r.pfa_ratio) << ',' << num(r.max_tail_fraction) << ','
      << num(r.gap) << ',' << r.unknowns;
    json jr = {{"z_over_r", r.z_over_r},
               {"f_r2", r.f_r2},
               {"force_a", vec_json(r.force_a)},
               {"force_b", vec_json(r.force_b)},
               {"newton_residual", r.newton_residual},
               {"max_tail_fraction", r.max_tail_fraction},
               {"gap", r.gap},
               {"unknowns", r.unknowns},
               {"warnings", r.warnings}};
    if (shape.kind == ShapeKind::sphere) jr["pfa_ratio"] = r.pfa_ratio;
    if (r.reference) {
      const double rel = (r.f_r2 - *r.reference) / std::abs(*r.reference);
      c << ',' << num(*r.reference) << ',' << num(rel);
      jr["reference_f_r2"] = *r.reference;
      jr["rel_diff"] = rel;
    }
    c << '\n';
    rows.push_back(jr);
  }
  out.add("sweep.csv", c.str());
  json summary = header_json(config);
  summary["shape"] = to_string(shape.kind);
  if (shape.kind == ShapeKind::capsule) summary["arrangement"] = to_string(config.sweep.arrangement);
  summary["rows"] = rows;
  out.add("sweep.json", dump(summary));
  return out;
}

}  // namespace

SweepReport cmd_sweep(const SceneConfig& config, const CommandOptions& options) {
  validate_config(config);
  const std::filesystem::path dir = output_dir(config, options);
  std::optional<std::vector<ReferencePoint>> reference;
  if (options.reference) reference = read_reference_csv(*options.reference);

  const ShapeSpec& shape = config.sweep.shape;
  const double R = shape.radius;
  CasimirOptions opt = casimir_options(config);
  opt.log = options.log;
  opt.measured_objects.clear();
  opt.record_spectrum = false;

  SweepReport rep;
  for (double z : config.sweep.separations) {
    if (options.log) options.log("separation Z/R = " + num(z));
    const Mesh scene = build_pair(config.sweep, z, config.base_dir);
    CasimirResult r;
    try {
      r = casimir_force(scene, opt);
    } catch (const NumericalError& e) {
      flush_failure(sweep_outputs(config, rep, reference.has_value()), dir, config, "Z/R = " + num(z), e);
      throw;
    }
    log_timing(options, "Z/R = " + num(z), r);
    SweepRow row;
    row.z_over_r = z;
    row.force_a = r.forces[0].force;
    row.force_b = r.forces[1].force;
    row.f_r2 = -row.force_a.x() * R * R;
    const double fa = row.force_a.norm();
    row.newton_residual = fa > 0.0 ? (row.force_a + row.force_b).norm() / fa : 0.0;
    if (shape.kind == ShapeKind::sphere) row.pfa_ratio = row.f_r2 / (pfa_sphere_sphere(R, z * R) * R * R);
    if (reference) row.reference = interpolate_reference(*reference, z);
    row.max_tail_fraction = r.max_tail_fraction;
    row.gap = r.gap;
    row.unknowns = r.unknowns;
    row.warnings = r.warnings;
    rep.rows.push_back(row);
  }

  OutputSet out = sweep_outputs(config, rep, reference.has_value());
  rep.files = out.commit(dir);
  return rep;
}

ScatteringReport cmd_verify_scattering(const SceneConfig& config, const CommandOptions& options) {
  validate_config(config);
  const std::filesystem::path dir = output_dir(config, options);
  const ScatteringSpec& spec = config.scattering;
  std::vector<int> levels = spec.refinements;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  ScatteringReport rep;
  for (int s : levels) {
    auto mesh = std::make_shared<const Mesh>(generate_sphere(spec.radius, s, spec.fit));
    const BasisSet basis = build_rwg(mesh);
    const SingularCache cache(*mesh, config.quad.singular_static_order, config.quad.singular_remainder_order);
    for (double ka : spec.ka) {
      for (ScatteringPlane plane : {ScatteringPlane::e_plane, ScatteringPlane::h_plane}) {
        ScatteringCase sc;
        sc.refinement = s;
        sc.ka = ka;
        sc.plane = plane;
        sc.unknowns = basis.size();
        sc.samples = compare_sphere_rcs(basis, spec.radius, ka, plane, spec.step_deg, config.quad, cache);
        for (const RcsSample& x : sc.samples) sc.max_rel_err = std::max(sc.max_rel_err, x.rel_err);
        if (options.log) {
          std::ostringstream os;
          os << "s=" << s << " ka=" << ka << (plane == ScatteringPlane::e_plane ? " E-plane" : " H-plane")
             << ": max relative RCS error " << sc.max_rel_err;
          options.log(os.str());
        }
        rep.cases.push_back(sc);
      }
    }
  }
  const int finest = levels.back();
  for (const ScatteringCase& c : rep.cases) {
    if (c.refinement == finest && c.max_rel_err > spec.tolerance) rep.within_tolerance = false;
    for (const ScatteringCase& d : rep.cases)
      if (d.ka == c.ka && d.plane == c.plane && d.refinement > c.refinement && !(d.max_rel_err < c.max_rel_err))
        rep.converging = false;
  }

  OutputSet out;
  std::ostringstream c;
  c << file_header(config) << "\n";
  c << "refinement,unknowns,ka,plane,theta,rcs_bem,rcs_mie,rel_err\n";
  json cases = json::array();
  for (const ScatteringCase& sc : rep.cases) {
    const char* plane = sc.plane == ScatteringPlane::e_plane ? "E" : "H";
    for (const RcsSample& x : sc.samples)
      c << sc.refinement << ',' << sc.unknowns << ',' << num(sc.ka) << ',' << plane << ',' << num(x.theta_deg) << ','
        << num(x.rcs_bem) << ',' << num(x.rcs_mie) << ',' << num(x.rel_err) << '\n';
    cases.push_back({{"refinement", sc.refinement},
                     {"unknowns", sc.unknowns},
                     {"ka", sc.ka},
                     {"plane", plane},
                     {"max_rel_err", sc.max_rel_err}});
  }
  out.add("rcs.csv", c.str());
  json summary = header_json(config);
  summary["tolerance"] = spec.tolerance;
  summary["cases"] = cases;
  summary["within_tolerance"] = rep.within_tolerance;
  summary["converging"] = rep.converging;
  summary["passed"] = rep.passed();
  out.add("scattering.json", dump(summary));
  rep.files = out.commit(dir);
  return rep;
}

}  // namespace casimir
