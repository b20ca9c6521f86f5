#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace casimir {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Closed triangle surface made of one or more disjoint objects.
///
/// Triangles are vertex-index triples ordered counter-clockwise when seen
/// from outside, so (b - a) x (c - a) is the outward normal.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> object_ids;  // one per triangle

  std::size_t triangle_count() const { return triangles.size(); }
  std::size_t vertex_count() const { return vertices.size(); }

  const Vec3& vertex(int t, int local) const { return vertices[triangles[t][local]]; }
  double area(int t) const;
  Vec3 unit_normal(int t) const;
  Vec3 centroid(int t) const;
  double mean_edge_length(int t) const;
  double max_edge_length(int t) const;
  double total_area() const;

  /// Sorted list of distinct object ids.
  std::vector<int> objects() const;
  double signed_volume(int object_id) const;
  double bounding_box_diagonal() const;
};

/// Rotation followed by translation: x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation);
  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

struct MeshLoadResult {
  Mesh mesh;
  std::vector<std::string> warnings;
};

/// Checks watertightness, consistent outward orientation and element quality.
/// Throws MeshError naming the first offending edge or triangle.
void validate_mesh(const Mesh& mesh);

/// Reads a Wavefront OBJ file (v/f records, 1-based or negative indices,
/// triangles only). Object ids are assigned per connected component in order
/// of first appearance; inward-facing components are flipped with a warning.
MeshLoadResult load_mesh(const std::filesystem::path& path);
MeshLoadResult parse_obj(const std::string& text, const std::string& source_name = "<memory>");
void write_obj(const Mesh& mesh, const std::filesystem::path& path);

/// How a faceted sphere approximates the exact one.
enum class SphereFit {
  vertices,  // vertices on the sphere (polyhedron is inscribed)
  volume,    // vertices pushed out radially until the enclosed volume matches
};

/// Icosphere of radius `radius` with 20 * 4^subdivisions triangles.
Mesh generate_sphere(double radius, int subdivisions, SphereFit fit = SphereFit::volume);

/// Cylinder of radius `radius` with hemispherical caps, total length `length`,
/// axis along z and centred at the origin. `refinement` is the number of
/// azimuthal segments (even, >= 4); the axial spacing follows the arc spacing
/// of the caps. The mesh is exactly symmetric under r -> -r.
Mesh generate_capsule(double radius, double length, int refinement);

Mesh transformed(const Mesh& mesh, const RigidTransform& transform);
Mesh scaled(const Mesh& mesh, double factor);

/// Concatenates meshes; every triangle of part i gets object id `ids[i]`.
Mesh merge_objects(std::span<const Mesh> parts, std::span<const int> ids);

/// Triangles of one object with their vertices, keeping the relative order of
/// both so that per-triangle numerics are reproduced exactly.
Mesh extract_object(const Mesh& mesh, int object_id);

/// Divergence-conforming RWG function on the two triangles sharing an edge.
///
/// On the plus triangle J = l / (2 A+) (r - free_plus); on the minus triangle
/// J = l / (2 A-) (free_minus - r).
struct RwgFunction {
  std::array<int, 2> edge;  // vertex indices, edge[0] < edge[1]
  int plus_triangle;
  int minus_triangle;
  int plus_free_vertex;   // vertex of the plus triangle opposite the edge
  int minus_free_vertex;
  double edge_length;
};

/// The RWG function attached to one edge of a triangle, seen from that
/// triangle: local index of the free vertex, function index and sign.
struct TriangleRwg {
  int function = -1;
  double sign = 0.0;  // +1 on the plus triangle, -1 on the minus triangle
};

class BasisSet {
 public:
  BasisSet(std::shared_ptr<const Mesh> mesh, std::vector<RwgFunction> functions);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  std::size_t size() const { return functions_.size(); }
  const RwgFunction& operator[](std::size_t i) const { return functions_[i]; }
  std::span<const RwgFunction> functions() const { return functions_; }

  /// RWG attached to the edge opposite local vertex `local` of triangle `t`.
  const TriangleRwg& on_triangle(int t, int local) const { return by_triangle_[t][local]; }

  int object_of(std::size_t i) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<RwgFunction> functions_;
  std::vector<std::array<TriangleRwg, 3>> by_triangle_;
};

/// One RWG per interior edge, ordered by (lower, upper) vertex index. The
/// lower triangle index is the plus side. Throws MeshError on boundary or
/// non-manifold edges.
BasisSet build_rwg(std::shared_ptr<const Mesh> mesh);
BasisSet build_rwg(const Mesh& mesh);

/// Local right-handed surface frame with u x v = n.
struct Frame {
  Vec3 origin = Vec3::Zero();
  Vec3 n = Vec3::UnitZ();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();

  /// u = normalize(n x e) with e the global axis least parallel to n, v = n x u.
  static Frame from_normal(const Vec3& origin, const Vec3& normal);
  /// Same frame with (u, v) rotated by `angle_rad` about n.
  Frame rotated(double angle_rad) const;
};

enum class SurfaceRule { centroid, gauss1, gauss2, gauss3, gauss4, gauss5 };

SurfaceRule parse_surface_rule(const std::string& name);
std::string to_string(SurfaceRule rule);

struct SurfacePoint {
  Vec3 position;
  double weight;  // area element
  Frame frame;
  int triangle;
  int object_id;
};

/// Quadrature points over every triangle of the mesh with their area weights
/// and surface frames.
std::vector<SurfacePoint> quadrature_points(const Mesh& mesh, SurfaceRule rule);

/// Shortest distance from `p` to the (closed) triangle abc.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace casimir
