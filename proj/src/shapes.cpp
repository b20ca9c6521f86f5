#include <cmath>
#include <map>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

namespace {

void orient_outward(Mesh& mesh, int t, const Vec3& inside_point) {
  if (mesh.unit_normal(t).dot(mesh.centroid(t) - inside_point) < 0.0)
    std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);
}

}  // namespace

Mesh generate_sphere(double radius, int subdivisions, SphereFit fit) {
  if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
  if (subdivisions < 0) throw ConfigError("sphere subdivisions must be >= 0");

  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  Mesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi},  {0, 1, phi},
                {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : m.vertices) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(m.vertices.size());
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * m.triangles.size());
    for (const auto& t : m.triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  m.object_ids.assign(m.triangles.size(), 0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) orient_outward(m, static_cast<int>(t), Vec3::Zero());
  double scale = radius;
  if (fit == SphereFit::volume) scale *= std::cbrt(4.0 * std::numbers::pi / (3.0 * m.signed_volume(0)));
  for (Vec3& v : m.vertices) v *= scale;
  validate_mesh(m);
  return m;
}

Mesh generate_capsule(double radius, double length, int refinement) {
  if (!(radius > 0.0)) throw ConfigError("capsule radius must be positive");
  if (length < 2.0 * radius) throw ConfigError("capsule length must be >= 2 * radius (caps would overlap)");
  if (refinement < 4 || refinement % 2 != 0) throw ConfigError("capsule refinement must be even and >= 4");

  const int n = refinement;
  const int n_cap = std::max(1, static_cast<int>(std::lround(n / 4.0)));
  const double half_cyl = 0.5 * length - radius;
  const double spacing = 0.5 * std::numbers::pi * radius / n_cap;
  const int n_cyl = half_cyl > 0.0 ? std::max(1, static_cast<int>(std::lround(half_cyl / spacing))) : 0;

  // Profile of the upper half, from just below the pole down to z = 0: (rho, z).
  std::vector<std::pair<double, double>> rings;
  for (int k = 1; k <= n_cap; ++k) {
    const double theta = 0.5 * std::numbers::pi * k / n_cap;
    rings.push_back({k == n_cap ? radius : radius * std::sin(theta),
                     half_cyl + (k == n_cap ? 0.0 : radius * std::cos(theta))});
  }
  for (int k = 1; k <= n_cyl; ++k) rings.push_back({radius, half_cyl * (1.0 - static_cast<double>(k) / n_cyl)});
  rings.back().second = 0.0;

  Mesh m;
  m.vertices.push_back({0.0, 0.0, 0.5 * length});
  std::vector<int> ring_start;
  for (const auto& [rho, z] : rings) {
    ring_start.push_back(static_cast<int>(m.vertices.size()));
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * j / n;
      m.vertices.push_back({rho * std::cos(a), rho * std::sin(a), z});
    }
  }
  // Equator ring: make vertex j + n/2 the exact negation of vertex j.
  const int eq = ring_start.back();
  for (int j = 0; j < n / 2; ++j) m.vertices[eq + j + n / 2] = -m.vertices[eq + j];

  auto ring_vertex = [&](int r, int j) { return ring_start[r] + (j % n); };
  for (int j = 0; j < n; ++j) m.triangles.push_back({0, ring_vertex(0, j), ring_vertex(0, j + 1)});
  for (std::size_t r = 0; r + 1 < rings.size(); ++r) {
    const int ri = static_cast<int>(r);
    for (int j = 0; j < n; ++j) {
      const int a = ring_vertex(ri, j), b = ring_vertex(ri, j + 1);
      const int c = ring_vertex(ri + 1, j + 1), d = ring_vertex(ri + 1, j);
      m.triangles.push_back({a, d, c});
      m.triangles.push_back({a, c, b});
    }
  }
  m.object_ids.assign(m.triangles.size(), 0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const Vec3 c = m.centroid(static_cast<int>(t));
    orient_outward(m, static_cast<int>(t), Vec3(0.0, 0.0, std::clamp(c[2], -half_cyl, half_cyl)));
  }

  // Lower half is the point reflection of the upper half.
  const int upper_vertices = static_cast<int>(m.vertices.size());
  std::vector<int> neg(upper_vertices);
  for (int v = 0; v < upper_vertices; ++v) {
    if (v >= eq) {
      neg[v] = eq + ((v - eq) + n / 2) % n;
    } else {
      neg[v] = static_cast<int>(m.vertices.size());
      m.vertices.push_back(-m.vertices[v]);
    }
  }
  const std::size_t upper_triangles = m.triangles.size();
  for (std::size_t t = 0; t < upper_triangles; ++t) {
    const auto tri = m.triangles[t];
    m.triangles.push_back({neg[tri[0]], neg[tri[2]], neg[tri[1]]});
  }
  m.object_ids.assign(m.triangles.size(), 0);
  validate_mesh(m);
  return m;
}

}  // namespace casimir
