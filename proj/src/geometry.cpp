#include "casimir/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>


#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

double Mesh::area(int t) const {
  return 0.5 * (vertex(t, 1) - vertex(t, 0)).cross(vertex(t, 2) - vertex(t, 0)).norm();
}

Vec3 Mesh::unit_normal(int t) const {
  return (vertex(t, 1) - vertex(t, 0)).cross(vertex(t, 2) - vertex(t, 0)).normalized();
}

Vec3 Mesh::centroid(int t) const { return (vertex(t, 0) + vertex(t, 1) + vertex(t, 2)) / 3.0; }

double Mesh::mean_edge_length(int t) const {
  const Vec3 &a = vertex(t, 0), &b = vertex(t, 1), &c = vertex(t, 2);
  return ((b - a).norm() + (c - b).norm() + (a - c).norm()) / 3.0;
}

double Mesh::max_edge_length(int t) const {
  const Vec3 &a = vertex(t, 0), &b = vertex(t, 1), &c = vertex(t, 2);
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

double Mesh::total_area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += area(static_cast<int>(t));
  return s;
}

std::vector<int> Mesh::objects() const {
  std::set<int> ids(object_ids.begin(), object_ids.end());
  return {ids.begin(), ids.end()};
}

double Mesh::signed_volume(int object_id) const {
  double v = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    if (object_ids[t] != object_id) continue;
    const int ti = static_cast<int>(t);
    v += vertex(ti, 0).dot(vertex(ti, 1).cross(vertex(ti, 2)));
  }
  return v / 6.0;
}

double Mesh::bounding_box_diagonal() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation) {
  RigidTransform t;
  if (axis.norm() > 0.0) t.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  t.translation = translation;
  return t;
}

namespace {

std::string edge_name(int a, int b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

void validate_mesh(const Mesh& mesh) {
  if (mesh.triangles.empty()) throw MeshError("mesh has no triangles");
  if (mesh.object_ids.size() != mesh.triangles.size())
    throw MeshError("mesh needs one object id per triangle");
  const int nv = static_cast<int>(mesh.vertices.size());
  const double diag = mesh.bounding_box_diagonal();
  const double min_area = 1e-12 * diag * diag;

  // directed edge -> triangle
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv)
        throw MeshError("triangle " + std::to_string(t) + " references missing vertex " + std::to_string(tri[k]));
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0])
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    if (mesh.area(static_cast<int>(t)) <= min_area)
      throw MeshError("triangle " + std::to_string(t) + " is degenerate");
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (!directed.emplace(std::make_pair(a, b), static_cast<int>(t)).second)
        throw MeshError("edge " + edge_name(a, b) +
                        " is non-manifold or inconsistently oriented (same direction used twice)");
    }
  }
  for (const auto& [e, t] : directed) {
    auto it = directed.find({e.second, e.first});
    if (it == directed.end()) throw MeshError("edge " + edge_name(e.first, e.second) + " is a boundary edge");
    if (mesh.object_ids[it->second] != mesh.object_ids[t])
      throw MeshError("edge " + edge_name(e.first, e.second) + " is shared by two objects");
  }
  for (int id : mesh.objects()) {
    if (mesh.signed_volume(id) <= 0.0)
      throw MeshError("object " + std::to_string(id) + " is oriented inward (non-positive signed volume)");
  }
}

Mesh transformed(const Mesh& mesh, const RigidTransform& transform) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = transform.apply(v);
  return out;
}

Mesh scaled(const Mesh& mesh, double factor) {
  if (!(factor > 0.0)) throw ConfigError("scale factor must be positive");
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v *= factor;
  return out;
}

Mesh extract_object(const Mesh& mesh, int object_id) {
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (mesh.object_ids[t] == object_id)
      for (int v : mesh.triangles[t]) remap[v] = 0;
  Mesh out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.object_ids[t] != object_id) continue;
    const auto& tri = mesh.triangles[t];
    out.triangles.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
    out.object_ids.push_back(object_id);
  }
  if (out.triangles.empty()) throw ConfigError("object " + std::to_string(object_id) + " is not in the mesh");
  return out;
}

Mesh merge_objects(std::span<const Mesh> parts, std::span<const int> ids) {
  if (parts.size() != ids.size()) throw ConfigError("merge_objects: one id per part required");
  Mesh out;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const int offset = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), parts[p].vertices.begin(), parts[p].vertices.end());
    for (const auto& tri : parts[p].triangles) {
      out.triangles.push_back({tri[0] + offset, tri[1] + offset, tri[2] + offset});
      out.object_ids.push_back(ids[p]);
    }
  }
  return out;
}

BasisSet::BasisSet(std::shared_ptr<const Mesh> mesh, std::vector<RwgFunction> functions)
    : mesh_(std::move(mesh)), functions_(std::move(functions)) {
  by_triangle_.assign(mesh_->triangles.size(), {});
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    const RwgFunction& f = functions_[i];
    for (int side = 0; side < 2; ++side) {
      const int t = side == 0 ? f.plus_triangle : f.minus_triangle;
      const int free_v = side == 0 ? f.plus_free_vertex : f.minus_free_vertex;
      const auto& tri = mesh_->triangles[t];
      const int local = static_cast<int>(std::find(tri.begin(), tri.end(), free_v) - tri.begin());
      by_triangle_[t][local] = {static_cast<int>(i), side == 0 ? 1.0 : -1.0};
    }
  }
}

int BasisSet::object_of(std::size_t i) const { return mesh_->object_ids[functions_[i].plus_triangle]; }

BasisSet build_rwg(std::shared_ptr<const Mesh> mesh) {
  // undirected edge -> (triangle, free vertex) list
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    const auto& tri = mesh->triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back({static_cast<int>(t), tri[k]});
    }
  }
  std::vector<RwgFunction> functions;
  functions.reserve(edges.size());
  for (auto& [e, owners] : edges) {
    if (owners.size() == 1) throw MeshError("edge " + edge_name(e.first, e.second) + " is a boundary edge");
    if (owners.size() > 2) throw MeshError("edge " + edge_name(e.first, e.second) + " is non-manifold");
    std::sort(owners.begin(), owners.end());
    if (mesh->object_ids[owners[0].first] != mesh->object_ids[owners[1].first])
      throw MeshError("edge " + edge_name(e.first, e.second) + " is shared by two objects");
    RwgFunction f;
    f.edge = {e.first, e.second};
    f.plus_triangle = owners[0].first;
    f.plus_free_vertex = owners[0].second;
    f.minus_triangle = owners[1].first;
    f.minus_free_vertex = owners[1].second;
    f.edge_length = (mesh->vertices[e.first] - mesh->vertices[e.second]).norm();
    functions.push_back(f);
  }
  return BasisSet(std::move(mesh), std::move(functions));
}

BasisSet build_rwg(const Mesh& mesh) { return build_rwg(std::make_shared<const Mesh>(mesh)); }

Frame Frame::from_normal(const Vec3& origin, const Vec3& normal) {
  Frame f;
  f.origin = origin;
  f.n = normal.normalized();
  int axis = 0;
  Vec3 a = f.n.cwiseAbs();
  if (a[1] < a[axis]) axis = 1;
  if (a[2] < a[axis]) axis = 2;
  f.u = f.n.cross(Vec3::Unit(axis)).normalized();
  f.v = f.n.cross(f.u);
  return f;
}

Frame Frame::rotated(double angle_rad) const {
  Frame f = *this;
  const double c = std::cos(angle_rad), s = std::sin(angle_rad);
  f.u = c * u + s * v;
  f.v = n.cross(f.u);
  return f;
}

SurfaceRule parse_surface_rule(const std::string& name) {
  if (name == "centroid") return SurfaceRule::centroid;
  if (name == "gauss1" || name == "gauss-1") return SurfaceRule::gauss1;
  if (name == "gauss2" || name == "gauss-2") return SurfaceRule::gauss2;
  if (name == "gauss3" || name == "gauss-3") return SurfaceRule::gauss3;
  if (name == "gauss4" || name == "gauss-4") return SurfaceRule::gauss4;
  if (name == "gauss5" || name == "gauss-5") return SurfaceRule::gauss5;
  throw ConfigError("unknown surface rule '" + name + "'");
}

std::string to_string(SurfaceRule rule) {
  switch (rule) {
    case SurfaceRule::centroid: return "centroid";
    case SurfaceRule::gauss1: return "gauss1";
    case SurfaceRule::gauss2: return "gauss2";
    case SurfaceRule::gauss3: return "gauss3";
    case SurfaceRule::gauss4: return "gauss4";
    case SurfaceRule::gauss5: return "gauss5";
  }
  return "centroid";
}

std::vector<SurfacePoint> quadrature_points(const Mesh& mesh, SurfaceRule rule) {
  const int degree = rule == SurfaceRule::centroid ? 1 : static_cast<int>(rule);
  const TriangleRule& q = triangle_rule(degree);
  std::vector<SurfacePoint> out;
  out.reserve(mesh.triangles.size() * q.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int ti = static_cast<int>(t);
    const double area = mesh.area(ti);
    const Vec3 n = mesh.unit_normal(ti);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto& l = q.barycentric[k];
      const Vec3 x = l[0] * mesh.vertex(ti, 0) + l[1] * mesh.vertex(ti, 1) + l[2] * mesh.vertex(ti, 2);
      out.push_back({x, q.weights[k] * area, Frame::from_normal(x, n), ti, mesh.object_ids[t]});
    }
  }
  return out;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point by Voronoi-region tests (Ericson, Real-Time Collision Detection).
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return (p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

}  // namespace casimir
