#include "casimir/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "casimir/error.hpp"

namespace casimir {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::force: return "force";
    case RunMode::sweep: return "sweep";
    case RunMode::verify_scattering: return "verify-scattering";
  }
  return "force";
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::capsule: return "capsule";
    case ShapeKind::mesh: return "mesh";
  }
  return "sphere";
}

std::string to_string(CapsuleArrangement arrangement) {
  return arrangement == CapsuleArrangement::parallel ? "parallel" : "perpendicular";
}

namespace {

std::string fit_name(SphereFit fit) { return fit == SphereFit::volume ? "volume" : "vertices"; }

// Reader that tracks the key path for error messages and rejects unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + what);
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) Reader(j_, key(it.key())).fail("unknown key");
  }

  bool has(const char* k) const { return j_.contains(k); }
  const json& raw(const char* k) const { return j_.at(k); }
  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  Reader child(const char* k) const { return Reader(j_.at(k), key(k)); }

  double number(const char* k, double def) const {
    if (!has(k)) return def;
    if (!j_.at(k).is_number()) Reader(j_, key(k)).fail("expected a number");
    return j_.at(k).get<double>();
  }
  int integer(const char* k, int def) const {
    if (!has(k)) return def;
    if (!j_.at(k).is_number_integer()) Reader(j_, key(k)).fail("expected an integer");
    return j_.at(k).get<int>();
  }
  bool boolean(const char* k, bool def) const {
    if (!has(k)) return def;
    if (!j_.at(k).is_boolean()) Reader(j_, key(k)).fail("expected true or false");
    return j_.at(k).get<bool>();
  }
  std::string string(const char* k, const std::string& def) const {
    if (!has(k)) return def;
    if (!j_.at(k).is_string()) Reader(j_, key(k)).fail("expected a string");
    return j_.at(k).get<std::string>();
  }
  Vec3 vec3(const char* k, const Vec3& def) const {
    if (!has(k)) return def;
    const json& a = j_.at(k);
    if (!a.is_array() || a.size() != 3 || !std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_number(); }))
      Reader(j_, key(k)).fail("expected [x, y, z]");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  }
  template <class T>
  std::vector<T> list(const char* k, const std::vector<T>& def) const {
    if (!has(k)) return def;
    const json& a = j_.at(k);
    if (!a.is_array()) Reader(j_, key(k)).fail("expected a list");
    std::vector<T> out;
    for (const json& x : a) {
      if constexpr (std::is_integral_v<T>) {
        if (!x.is_number_integer()) Reader(j_, key(k)).fail("expected a list of integers");
      } else {
        if (!x.is_number()) Reader(j_, key(k)).fail("expected a list of numbers");
      }
      out.push_back(x.get<T>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

SphereFit parse_fit(const Reader& r, const char* k) {
  const std::string s = r.string(k, "volume");
  if (s == "volume") return SphereFit::volume;
  if (s == "vertices") return SphereFit::vertices;
  Reader(json::object(), r.key(k)).fail("expected \"volume\" or \"vertices\"");
}

ShapeSpec parse_shape(const Reader& r, bool allow_placement) {
  if (allow_placement)
    r.allow({"id", "shape", "radius", "length", "refinement", "fit", "path", "translation", "rotation"});
  else
    r.allow({"shape", "radius", "length", "refinement", "fit", "path"});
  ShapeSpec s;
  const std::string kind = r.string("shape", "sphere");
  if (kind == "sphere") s.kind = ShapeKind::sphere;
  else if (kind == "capsule") s.kind = ShapeKind::capsule;
  else if (kind == "mesh") s.kind = ShapeKind::mesh;
  else Reader(json::object(), r.key("shape")).fail("unknown shape \"" + kind + "\"");
  s.radius = r.number("radius", s.radius);
  s.length = r.number("length", s.length);
  s.refinement = r.integer("refinement", s.kind == ShapeKind::capsule ? 12 : s.refinement);
  s.fit = parse_fit(r, "fit");
  s.mesh_path = r.string("path", "");
  if (s.kind == ShapeKind::mesh && s.mesh_path.empty()) Reader(json::object(), r.key("path")).fail("mesh shape needs a path");
  return s;
}

json shape_json(const ShapeSpec& s) {
  return json{{"shape", to_string(s.kind)}, {"radius", s.radius}, {"length", s.length},
              {"refinement", s.refinement}, {"fit", fit_name(s.fit)}, {"path", s.mesh_path}};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void validate_shape(const ShapeSpec& s, const std::string& where) {
  if (s.kind == ShapeKind::mesh) return;
  if (!(s.radius > 0.0)) throw ConfigError(where + ".radius: must be positive");
  if (s.kind == ShapeKind::sphere && (s.refinement < 0 || s.refinement > 6))
    throw ConfigError(where + ".refinement: icosphere subdivisions must be in [0, 6]");
  if (s.kind == ShapeKind::capsule) {
    if (!(s.length >= 2.0 * s.radius)) throw ConfigError(where + ".length: must be >= 2 * radius");
    if (s.refinement < 4 || s.refinement % 2 != 0) throw ConfigError(where + ".refinement: capsule segments must be even and >= 4");
  }
}

}  // namespace

SceneConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Reader r(j, "");
  r.allow({"mode", "objects", "measured", "eps_factor", "kappa", "surface_rule", "quadrature", "literal_last_term",
           "subtract_isolated", "convergence_study", "output", "seed", "sweep", "scattering"});
  SceneConfig c;
  c.base_dir = base_dir;
  if (!r.has("mode")) r.fail("missing \"mode\"");
  const std::string mode = r.string("mode", "");
  if (mode == "force") c.mode = RunMode::force;
  else if (mode == "sweep") c.mode = RunMode::sweep;
  else if (mode == "verify-scattering") c.mode = RunMode::verify_scattering;
  else Reader(json::object(), "mode").fail("expected force, sweep or verify-scattering");

  if (r.has("objects")) {
    const json& arr = r.raw("objects");
    if (!arr.is_array()) Reader(json::object(), "objects").fail("expected a list");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader o(arr[i], "objects[" + std::to_string(i) + "]");
      ObjectSpec spec;
      spec.shape = parse_shape(o, true);
      spec.id = o.integer("id", static_cast<int>(i));
      spec.translation = o.vec3("translation", spec.translation);
      if (o.has("rotation")) {
        const Reader rot = o.child("rotation");
        rot.allow({"axis", "angle_deg"});
        spec.rotation_axis = rot.vec3("axis", spec.rotation_axis);
        spec.rotation_deg = rot.number("angle_deg", 0.0);
      }
      c.objects.push_back(spec);
    }
  }
  c.measured = r.list<int>("measured", {});
  c.eps_factor = r.number("eps_factor", c.eps_factor);
  if (r.has("kappa")) {
    const Reader k = r.child("kappa");
    k.allow({"points", "kappa0"});
    c.kappa_points = k.integer("points", c.kappa_points);
    if (k.has("kappa0")) {
      const json& v = k.raw("kappa0");
      if (v.is_string() && v.get<std::string>() == "auto") c.kappa0.reset();
      else if (v.is_number()) c.kappa0 = v.get<double>();
      else Reader(json::object(), "kappa.kappa0").fail("expected a number or \"auto\"");
    }
  }
  try {
    c.surface_rule = parse_surface_rule(r.string("surface_rule", "centroid"));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("surface_rule: ") + e.what());
  }
  if (r.has("quadrature")) {
    const Reader q = r.child("quadrature");
    q.allow({"far_degree", "near_degree", "near_distance", "singular_static_order", "singular_remainder_order",
             "rhs_direct", "near_point"});
    c.quad.far_degree = q.integer("far_degree", c.quad.far_degree);
    c.quad.near_degree = q.integer("near_degree", c.quad.near_degree);
    c.quad.near_distance = q.number("near_distance", c.quad.near_distance);
    c.quad.singular_static_order = q.integer("singular_static_order", c.quad.singular_static_order);
    c.quad.singular_remainder_order = q.integer("singular_remainder_order", c.quad.singular_remainder_order);
    c.quad.rhs_direct = q.boolean("rhs_direct", c.quad.rhs_direct);
    if (q.has("near_point")) {
      const Reader np = q.child("near_point");
      np.allow({"ratio", "max_depth"});
      c.quad.near_point.ratio = np.number("ratio", c.quad.near_point.ratio);
      c.quad.near_point.max_depth = np.integer("max_depth", c.quad.near_point.max_depth);
    }
  }
  c.literal_last_term = r.boolean("literal_last_term", c.literal_last_term);
  c.subtract_isolated = r.boolean("subtract_isolated", c.subtract_isolated);
  c.convergence_study = r.boolean("convergence_study", c.convergence_study);
  c.output = r.string("output", c.output);
  if (r.has("seed")) {
    if (!r.raw("seed").is_number_unsigned()) Reader(json::object(), "seed").fail("expected a non-negative integer");
    c.seed = r.raw("seed").get<std::uint64_t>();
  }
  if (r.has("sweep")) {
    const Reader s = r.child("sweep");
    s.allow({"shape", "arrangement", "separations"});
    if (s.has("shape")) c.sweep.shape = parse_shape(s.child("shape"), false);
    const std::string arr = s.string("arrangement", "parallel");
    if (arr == "parallel") c.sweep.arrangement = CapsuleArrangement::parallel;
    else if (arr == "perpendicular") c.sweep.arrangement = CapsuleArrangement::perpendicular;
    else Reader(json::object(), "sweep.arrangement").fail("expected parallel or perpendicular");
    c.sweep.separations = s.list<double>("separations", {});
  }
  if (r.has("scattering")) {
    const Reader s = r.child("scattering");
    s.allow({"radius", "refinements", "ka", "step_deg", "tolerance", "fit"});
    c.scattering.radius = s.number("radius", c.scattering.radius);
    c.scattering.refinements = s.list<int>("refinements", c.scattering.refinements);
    c.scattering.ka = s.list<double>("ka", c.scattering.ka);
    c.scattering.step_deg = s.number("step_deg", c.scattering.step_deg);
    c.scattering.tolerance = s.number("tolerance", c.scattering.tolerance);
    c.scattering.fit = parse_fit(s, "fit");
  }
  validate_config(c);
  return c;
}

SceneConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string serialize_config(const SceneConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["objects"] = json::array();
  for (const ObjectSpec& o : c.objects) {
    json e = shape_json(o.shape);
    e["id"] = o.id;
    e["translation"] = vec_json(o.translation);
    e["rotation"] = {{"axis", vec_json(o.rotation_axis)}, {"angle_deg", o.rotation_deg}};
    j["objects"].push_back(e);
  }
  j["measured"] = c.measured;
  j["eps_factor"] = c.eps_factor;
  j["kappa"] = {{"points", c.kappa_points}};
  if (c.kappa0) j["kappa"]["kappa0"] = *c.kappa0;
  else j["kappa"]["kappa0"] = "auto";
  j["surface_rule"] = to_string(c.surface_rule);
  j["quadrature"] = {{"far_degree", c.quad.far_degree},
                     {"near_degree", c.quad.near_degree},
                     {"near_distance", c.quad.near_distance},
                     {"singular_static_order", c.quad.singular_static_order},
                     {"singular_remainder_order", c.quad.singular_remainder_order},
                     {"rhs_direct", c.quad.rhs_direct},
                     {"near_point", {{"ratio", c.quad.near_point.ratio}, {"max_depth", c.quad.near_point.max_depth}}}};
  j["literal_last_term"] = c.literal_last_term;
  j["subtract_isolated"] = c.subtract_isolated;
  j["convergence_study"] = c.convergence_study;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["sweep"] = {{"shape", shape_json(c.sweep.shape)},
                {"arrangement", to_string(c.sweep.arrangement)},
                {"separations", c.sweep.separations}};
  j["scattering"] = {{"radius", c.scattering.radius},   {"refinements", c.scattering.refinements},
                     {"ka", c.scattering.ka},           {"step_deg", c.scattering.step_deg},
                     {"tolerance", c.scattering.tolerance}, {"fit", fit_name(c.scattering.fit)}};
  return j.dump(2);
}

void validate_config(const SceneConfig& c) {
  std::set<int> ids;
  for (std::size_t i = 0; i < c.objects.size(); ++i) {
    const std::string where = "objects[" + std::to_string(i) + "]";
    if (!ids.insert(c.objects[i].id).second)
      throw ConfigError(where + ".id: duplicate object id " + std::to_string(c.objects[i].id));
    validate_shape(c.objects[i].shape, where);
    if (c.objects[i].rotation_deg != 0.0 && !(c.objects[i].rotation_axis.norm() > 0.0))
      throw ConfigError(where + ".rotation.axis: must be non-zero");
  }
  for (int id : c.measured)
    if (!ids.count(id)) throw ConfigError("measured: object id " + std::to_string(id) + " is not defined");
  if (!(c.eps_factor > 0.0)) throw ConfigError("eps_factor: must be positive");
  if (c.kappa_points < 1) throw ConfigError("kappa.points: must be >= 1");
  if (c.kappa0 && !(*c.kappa0 > 0.0)) throw ConfigError("kappa.kappa0: must be positive");
  for (int d : {c.quad.far_degree, c.quad.near_degree})
    if (d < 1 || d > 8) throw ConfigError("quadrature: triangle rule degree must be in [1, 8]");
  if (!(c.quad.near_distance >= 0.0)) throw ConfigError("quadrature.near_distance: must be >= 0");
  if (c.quad.singular_static_order < 1 || c.quad.singular_remainder_order < 1)
    throw ConfigError("quadrature: singular orders must be >= 1");
  if (!(c.quad.near_point.ratio > 0.0) || c.quad.near_point.max_depth < 0)
    throw ConfigError("quadrature.near_point: ratio must be positive and max_depth >= 0");
  if (c.output.empty()) throw ConfigError("output: must not be empty");

  switch (c.mode) {
    case RunMode::force:
      if (c.objects.empty()) throw ConfigError("objects: force mode needs at least one object");
      break;
    case RunMode::sweep:
      validate_shape(c.sweep.shape, "sweep.shape");
      if (c.sweep.shape.kind == ShapeKind::mesh) throw ConfigError("sweep.shape: sweeps use sphere or capsule shapes");
      if (c.sweep.separations.size() < 2) throw ConfigError("sweep.separations: need at least two separations");
      for (double z : c.sweep.separations)
        if (!(z > 0.0)) throw ConfigError("sweep.separations: must be positive");
      break;
    case RunMode::verify_scattering:
      if (!(c.scattering.radius > 0.0)) throw ConfigError("scattering.radius: must be positive");
      if (c.scattering.refinements.empty() || c.scattering.ka.empty())
        throw ConfigError("scattering: refinements and ka must be non-empty");
      for (int s : c.scattering.refinements)
        if (s < 0 || s > 5) throw ConfigError("scattering.refinements: must be in [0, 5]");
      for (double ka : c.scattering.ka)
        if (!(ka > 0.0)) throw ConfigError("scattering.ka: must be positive");
      if (!(c.scattering.step_deg > 0.0)) throw ConfigError("scattering.step_deg: must be positive");
      if (!(c.scattering.tolerance > 0.0)) throw ConfigError("scattering.tolerance: must be positive");
      break;
  }
}

std::string config_hash(const SceneConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Mesh build_shape(const ShapeSpec& s, const std::filesystem::path& base_dir) {
  switch (s.kind) {
    case ShapeKind::sphere: return generate_sphere(s.radius, s.refinement, s.fit);
    case ShapeKind::capsule: return generate_capsule(s.radius, s.length, s.refinement);
    case ShapeKind::mesh: {
      std::filesystem::path p = s.mesh_path;
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return load_mesh(p).mesh;
    }
  }
  throw ConfigError("unknown shape");
}

Mesh build_scene(const SceneConfig& c) {
  std::vector<Mesh> parts;
  std::vector<int> ids;
  for (const ObjectSpec& o : c.objects) {
    const RigidTransform t =
        RigidTransform::from_axis_angle(o.rotation_axis, o.rotation_deg * std::numbers::pi / 180.0, o.translation);
    parts.push_back(transformed(build_shape(o.shape, c.base_dir), t));
    ids.push_back(o.id);
  }
  return merge_objects(parts, ids);
}

Mesh build_pair(const SweepSpec& sweep, double z_over_r, const std::filesystem::path& base_dir) {
  const Mesh body = build_shape(sweep.shape, base_dir);
  const double half = sweep.shape.radius * (1.0 + 0.5 * z_over_r);
  const RigidTransform a = RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(-half, 0.0, 0.0));
  RigidTransform b = RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(half, 0.0, 0.0));
  if (sweep.shape.kind == ShapeKind::capsule && sweep.arrangement == CapsuleArrangement::perpendicular)
    b = RigidTransform::from_axis_angle(Vec3::UnitX(), 0.5 * std::numbers::pi, Vec3(half, 0.0, 0.0));
  const std::vector<Mesh> parts{transformed(body, a), transformed(body, b)};
  const std::vector<int> ids{0, 1};
  return merge_objects(parts, ids);
}

CasimirOptions casimir_options(const SceneConfig& c) {
  CasimirOptions o;
  o.quad = c.quad;
  o.surface_rule = c.surface_rule;
  o.kappa_points = c.kappa_points;
  o.kappa0 = c.kappa0;
  o.eps_factor = c.eps_factor;
  o.literal_last_term = c.literal_last_term;
  o.measured_objects = c.measured;
  o.convergence_study = c.convergence_study;
  o.subtract_isolated = c.subtract_isolated;
  return o;
}

}  // namespace casimir
