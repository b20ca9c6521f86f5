#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>

#include "casimir/error.hpp"
#include "casimir/geometry.hpp"

using namespace casimir;

namespace {

const char* kTetra =
    "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
    "f 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n";

}  // namespace

TEST_CASE("icosphere element counts") {
  for (int s = 0; s <= 3; ++s) {
    const Mesh m = generate_sphere(1.0, s);
    const std::size_t faces = 20u << (2 * s);
    CHECK(m.triangle_count() == faces);
    CHECK(m.vertex_count() == faces / 2 + 2);
    CHECK(build_rwg(m).size() == 3 * faces / 2);
  }
  CHECK(build_rwg(generate_sphere(1.0, 2)).size() == 480);
}

TEST_CASE("icosphere fits") {
  const double R = 1.7;
  const Mesh inscribed = generate_sphere(R, 2, SphereFit::vertices);
  for (const Vec3& v : inscribed.vertices) CHECK(v.norm() == doctest::Approx(R).epsilon(1e-14));
  const Mesh vol = generate_sphere(R, 2, SphereFit::volume);
  CHECK(vol.signed_volume(0) == doctest::Approx(4.0 / 3.0 * std::numbers::pi * R * R * R).epsilon(1e-12));
  CHECK(inscribed.signed_volume(0) < vol.signed_volume(0));
}

TEST_CASE("icosphere is symmetric under inversion") {
  const Mesh m = generate_sphere(1.0, 2);
  for (const Vec3& v : m.vertices) {
    double best = 1e300;
    for (const Vec3& w : m.vertices) best = std::min(best, (v + w).norm());
    CHECK(best < 1e-14);
  }
}

TEST_CASE("capsule shape") {
  const double R = 0.5, L = 3.0;
  const Mesh m = generate_capsule(R, L, 16);
  validate_mesh(m);
  double zmin = 1e300, zmax = -1e300, rmax = 0.0;
  for (const Vec3& v : m.vertices) {
    zmin = std::min(zmin, v.z());
    zmax = std::max(zmax, v.z());
    rmax = std::max(rmax, std::hypot(v.x(), v.y()));
    double best = 1e300;
    for (const Vec3& w : m.vertices) best = std::min(best, (v + w).norm());
    CHECK(best < 1e-14);
  }
  CHECK(zmax == doctest::Approx(L / 2).epsilon(1e-14));
  CHECK(zmin == doctest::Approx(-L / 2).epsilon(1e-14));
  CHECK(rmax == doctest::Approx(R).epsilon(1e-12));
  const double exact = 2 * std::numbers::pi * R * (L - 2 * R) + 4 * std::numbers::pi * R * R;
  CHECK(m.total_area() < exact);
  CHECK(m.total_area() > 0.95 * exact);
  CHECK_THROWS_AS(generate_capsule(R, 0.5, 8), ConfigError);
  CHECK_THROWS_AS(generate_capsule(R, L, 7), ConfigError);
}

TEST_CASE("OBJ parsing") {
  const MeshLoadResult r = parse_obj(kTetra);
  CHECK(r.mesh.triangle_count() == 4);
  CHECK(r.warnings.empty());
  CHECK(r.mesh.signed_volume(0) == doctest::Approx(1.0 / 6.0));

  SUBCASE("slash and negative indices") {
    const MeshLoadResult s = parse_obj(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
        "f 1/1/1 3//3 2\nf -4 -3 -1\nf 1 4 3\nf 2 3 4\n");
    CHECK(s.mesh.triangle_count() == 4);
  }
  SUBCASE("inward orientation is flipped with a warning") {
    const MeshLoadResult s = parse_obj(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
        "f 1 2 3\nf 1 4 2\nf 1 3 4\nf 2 4 3\n");
    CHECK(s.warnings.size() == 1);
    CHECK(s.mesh.signed_volume(0) > 0.0);
  }
  SUBCASE("two components become two objects") {
    const MeshLoadResult s = parse_obj(std::string(kTetra) +
                                       "v 5 0 0\nv 6 0 0\nv 5 1 0\nv 5 0 1\n"
                                       "f 5 7 6\nf 5 6 8\nf 5 8 7\nf 6 7 8\n");
    CHECK(s.mesh.objects() == std::vector<int>{0, 1});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_obj("v 0 0 0\nf 1 2 3\n"), ConfigError);
    try {
      parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 1 4 3\n");
      FAIL("open mesh accepted");
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find("edge") != std::string::npos);
    }
  }
}

TEST_CASE("OBJ round trip") {
  const Mesh m = generate_sphere(1.3, 1);
  const auto path = std::filesystem::temp_directory_path() / "casimir_roundtrip.obj";
  write_obj(m, path);
  const Mesh r = load_mesh(path).mesh;
  std::filesystem::remove(path);
  REQUIRE(r.vertex_count() == m.vertex_count());
  REQUIRE(r.triangle_count() == m.triangle_count());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) CHECK((r.vertices[i] - m.vertices[i]).norm() == 0.0);
  CHECK(r.triangles == m.triangles);
  CHECK_THROWS_AS(load_mesh("/nonexistent/none.obj"), IoError);
}

TEST_CASE("validation rejects broken meshes") {
  Mesh m = generate_sphere(1.0, 0);
  SUBCASE("inward object") {
    for (auto& t : m.triangles) std::swap(t[1], t[2]);
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("degenerate triangle") {
    m.vertices[m.triangles[0][1]] = m.vertices[m.triangles[0][0]];
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
  SUBCASE("open surface") {
    m.triangles.pop_back();
    m.object_ids.pop_back();
    CHECK_THROWS_AS(validate_mesh(m), MeshError);
  }
}

TEST_CASE("RWG functions") {
  const Mesh m = generate_sphere(1.0, 1);
  const BasisSet b = build_rwg(m);
  std::set<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const RwgFunction& f = b[i];
    CHECK(f.plus_triangle < f.minus_triangle);
    CHECK(f.edge[0] < f.edge[1]);
    CHECK(f.edge_length == doctest::Approx((m.vertices[f.edge[0]] - m.vertices[f.edge[1]]).norm()));
    edges.insert({f.edge[0], f.edge[1]});
    // Normal component continuity: J·m̂ equals on both sides of the edge.
    const Vec3 mid = 0.5 * (m.vertices[f.edge[0]] + m.vertices[f.edge[1]]);
    const Vec3 jp = f.edge_length / (2 * m.area(f.plus_triangle)) * (mid - m.vertices[f.plus_free_vertex]);
    const Vec3 jm = f.edge_length / (2 * m.area(f.minus_triangle)) * (m.vertices[f.minus_free_vertex] - mid);
    const Vec3 e = (m.vertices[f.edge[1]] - m.vertices[f.edge[0]]).normalized();
    const Vec3 np = m.unit_normal(f.plus_triangle).cross(e).normalized();
    const Vec3 nm = m.unit_normal(f.minus_triangle).cross(e).normalized();
    CHECK(std::abs(jp.dot(np)) == doctest::Approx(std::abs(jm.dot(nm))).epsilon(1e-12));
  }
  CHECK(edges.size() == b.size());
  for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const TriangleRwg& r = b.on_triangle(t, k);
      REQUIRE(r.function >= 0);
      const RwgFunction& f = b[r.function];
      CHECK((r.sign > 0 ? f.plus_triangle : f.minus_triangle) == t);
      CHECK(m.triangles[t][k] == (r.sign > 0 ? f.plus_free_vertex : f.minus_free_vertex));
    }
  }
}

TEST_CASE("merge and extract") {
  const Mesh a = generate_sphere(1.0, 1);
  const Mesh c = transformed(generate_capsule(0.5, 2.0, 8), RigidTransform::from_axis_angle(Vec3::UnitX(), 0.3, Vec3(4, 0, 0)));
  const std::vector<Mesh> parts{a, c};
  const std::vector<int> ids{7, 3};
  const Mesh m = merge_objects(parts, ids);
  CHECK(m.objects() == std::vector<int>{3, 7});
  const Mesh back = extract_object(m, 3);
  REQUIRE(back.triangle_count() == c.triangle_count());
  for (std::size_t i = 0; i < c.vertex_count(); ++i) CHECK((back.vertices[i] - c.vertices[i]).norm() == 0.0);
  CHECK(back.triangles == c.triangles);
  CHECK_THROWS_AS(extract_object(m, 5), ConfigError);
  CHECK(build_rwg(m).size() == build_rwg(a).size() + build_rwg(c).size());
}

TEST_CASE("rigid transforms") {
  const Mesh m = generate_sphere(1.0, 1);
  const RigidTransform t = RigidTransform::from_axis_angle(Vec3(1, 2, 3), 0.7, Vec3(1, -1, 2));
  const Mesh r = transformed(m, t);
  CHECK(r.total_area() == doctest::Approx(m.total_area()).epsilon(1e-13));
  CHECK(r.signed_volume(0) == doctest::Approx(m.signed_volume(0)).epsilon(1e-13));
  CHECK(scaled(m, 2.0).total_area() == doctest::Approx(4.0 * m.total_area()).epsilon(1e-13));
}

TEST_CASE("surface frames") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 100; ++i) {
    const Vec3 n = Vec3(n01(rng), n01(rng), n01(rng)).normalized();
    const Frame f = Frame::from_normal(Vec3::Zero(), n);
    CHECK((f.n - n).norm() < 1e-15);
    CHECK(std::abs(f.u.dot(f.n)) < 1e-15);
    CHECK(std::abs(f.v.dot(f.n)) < 1e-15);
    CHECK(std::abs(f.u.dot(f.v)) < 1e-15);
    CHECK((f.u.cross(f.v) - f.n).norm() < 1e-14);
    const Frame g = f.rotated(0.4);
    CHECK((g.u.cross(g.v) - g.n).norm() < 1e-14);
    CHECK(g.u.dot(f.u) == doctest::Approx(std::cos(0.4)));
  }
}

TEST_CASE("surface quadrature points") {
  const Mesh m = generate_capsule(1.0, 4.0, 8);
  for (SurfaceRule rule : {SurfaceRule::centroid, SurfaceRule::gauss2, SurfaceRule::gauss5}) {
    double w = 0.0;
    for (const SurfacePoint& p : quadrature_points(m, rule)) w += p.weight;
    CHECK(w == doctest::Approx(m.total_area()).epsilon(1e-13));
  }
  CHECK(parse_surface_rule("gauss-3") == SurfaceRule::gauss3);
  CHECK(to_string(SurfaceRule::gauss4) == "gauss4");
  CHECK_THROWS_AS(parse_surface_rule("simpson"), ConfigError);
}

TEST_CASE("point to triangle distance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
    const Vec3 p(2 * u(rng), 2 * u(rng), 2 * u(rng));
    double best = 1e300;
    const int n = 300;
    for (int i1 = 0; i1 <= n; ++i1)
      for (int i2 = 0; i1 + i2 <= n; ++i2) {
        const double s = double(i1) / n, t = double(i2) / n;
        best = std::min(best, (a + s * (b - a) + t * (c - a) - p).norm());
      }
    const double d = point_triangle_distance(p, a, b, c);
    CHECK(d <= best + 1e-14);
    CHECK(d >= best - 5e-3);
  }
}
