#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/fluct.hpp"
#include "casimir/oracles.hpp"

using namespace casimir;

namespace {

// Image of a current source in the PEC plane z = 0 followed by a shift
// of `dz` along z: location mirrored, orientation -Mê, derivative Md with
// M = diag(1, 1, -1).
SourceSpec reflected(const SourceSpec& s, double dz) {
  const Vec3 m(1, 1, -1);
  SourceSpec r = s;
  r.location = s.location.cwiseProduct(m) + Vec3(0, 0, dz);
  r.orientation = -s.orientation.cwiseProduct(m);
  if (s.derivative) r.derivative = s.derivative->cwiseProduct(m);
  return r;
}

SourceSpec shifted(const SourceSpec& s, double dz) {
  SourceSpec r = s;
  r.location += Vec3(0, 0, dz);
  return r;
}

// Scattered fields at the sources from the images in PEC plates at z = 0
// and, if `two_plates`, z = d.
SpectralSample image_sample(const Vec3& p, const Frame& f, double eps, double kappa, double d, bool two_plates) {
  const auto src = stress_sources(p, f, eps);
  auto fields = [&](const SourceSpec& s, Vec3& E, Vec3& H) {
    E.setZero();
    H.setZero();
    auto add = [&](const SourceSpec& img) {
      E += incident_E(img, s.location, kappa);
      H += incident_H(img, s.location, kappa);
    };
    if (!two_plates) {
      add(reflected(s, 0.0));
      return;
    }
    const int K = 2000;
    for (int k = -K; k <= K; ++k) {
      add(reflected(s, 2.0 * d * k));
      if (k != 0) add(shifted(s, 2.0 * d * k));
    }
  };
  SpectralSample out;
  out.kappa = kappa;
  Vec3 E, H;
  fields(src[0], E, H);
  out.E_n_s1 = f.n.dot(E);
  fields(src[1], E, H);
  out.H_u_s2 = f.u.dot(H);
  fields(src[2], E, H);
  out.H_u_s3 = f.u.dot(H);
  fields(src[3], E, H);
  out.H_v_s4 = f.v.dot(H);
  fields(src[4], E, H);
  out.H_v_s5 = f.v.dot(H);
  out.H_u_s5 = f.u.dot(H);
  return out;
}

double image_stress(const Vec3& p, const Frame& f, double eps, double d, bool two_plates, const KappaGrid& grid) {
  double T = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    T += grid.weights[i] * stress_integrand(image_sample(p, f, eps, grid.nodes[i], d, two_plates));
  return T;
}

}  // namespace

TEST_CASE("kappa grid integrates exponentials") {
  for (double d : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const KappaGrid g = KappaGrid::gauss_legendre(32, 1.0 / d);
    REQUIRE(g.size() == 32);
    double q = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.nodes[i] > 0.0);
      CHECK(g.weights[i] > 0.0);
      q += g.weights[i] * std::exp(-2.0 * g.nodes[i] * d);
    }
    CHECK(q == doctest::Approx(1.0 / (2.0 * d)).epsilon(1e-4));
  }
  CHECK_THROWS(KappaGrid::gauss_legendre(0, 1.0));
  CHECK_THROWS(KappaGrid::gauss_legendre(8, 0.0));
}

TEST_CASE("stress-tensor sources") {
  const Frame f = Frame::from_normal(Vec3(1, 2, 3), Vec3(0, 0.6, 0.8));
  const auto s = stress_sources(f.origin, f, 0.1);
  for (const auto& src : s) CHECK((src.location - (f.origin + 0.1 * f.n)).norm() < 1e-15);
  CHECK(s[0].orientation == f.n);
  CHECK(!s[0].derivative);
  CHECK(s[1].orientation == f.v);
  CHECK(*s[1].derivative == f.n);
  CHECK(s[2].orientation == f.n);
  CHECK(*s[2].derivative == f.v);
  CHECK(s[3].orientation == f.n);
  CHECK(*s[3].derivative == f.u);
  CHECK(s[4].orientation == f.u);
  CHECK(*s[4].derivative == f.n);
  for (int i = 0; i < 5; ++i) CHECK(s[i].row == i + 1);
}

TEST_CASE("stress integrand") {
  SpectralSample s;
  s.kappa = 2.0;
  s.E_n_s1 = 0.5;
  s.H_u_s2 = 0.1;
  s.H_u_s3 = 0.4;
  s.H_v_s4 = -0.2;
  s.H_v_s5 = 0.3;
  s.H_u_s5 = 7.0;
  const double expected = (2.0 * 0.5 + (0.4 - 0.1) + (0.3 + 0.2)) / (2.0 * std::numbers::pi);
  CHECK(stress_integrand(s) == doctest::Approx(expected).epsilon(1e-15));
  const double literal = (2.0 * 0.5 + (0.4 - 0.1) + (7.0 + 0.2)) / (2.0 * std::numbers::pi);
  CHECK(stress_integrand(s, true) == doctest::Approx(literal).epsilon(1e-15));
}

TEST_CASE("parallel plates from image theory") {
  // Plates at z = 0 and z = d; stress on the lower plate with n = +z. The
  // single-plate stress is removed with the same sources and κ grid.
  const double d = 1.0;
  const KappaGrid grid = KappaGrid::gauss_legendre(32, 1.0 / d);
  const double expected = std::pow(std::numbers::pi, 2) / (240.0 * std::pow(d, 4));
  for (double z0 : {0.05, 0.1}) {
    const Vec3 p(0.3, -0.2, 0.0);
    const Frame f = Frame::from_normal(p, Vec3::UnitZ());
    const double T = image_stress(p, f, z0, d, true, grid) - image_stress(p, f, z0, d, false, grid);
    CAPTURE(z0);
    CHECK(T == doctest::Approx(expected).epsilon(2e-3));
    CHECK(-T == doctest::Approx(ideal_plate_pressure(d)).epsilon(2e-3));
  }

  SUBCASE("rotating the tangent frame leaves the stress unchanged") {
    const Vec3 p(0.0, 0.0, 0.0);
    const Frame f = Frame::from_normal(p, Vec3::UnitZ());
    const double a = image_stress(p, f, 0.1, d, true, grid);
    for (double angle : {0.4, 1.3, 2.9}) {
      CHECK(image_stress(p, f.rotated(angle), 0.1, d, true, grid) == doctest::Approx(a).epsilon(1e-10));
    }
  }
}

TEST_CASE("surface force of a constant pressure vanishes on a closed surface") {
  const Mesh m = generate_sphere(1.0, 2);
  PressureField field;
  for (const SurfacePoint& p : quadrature_points(m, SurfaceRule::gauss2)) {
    PressurePoint pp;
    pp.point = p;
    pp.T_nn = 3.7;
    field.points.push_back(pp);
  }
  CHECK(surface_force(field, 0).norm() < 1e-12);
  // A pressure linear in z gives a net force along z equal to volume × gradient.
  for (auto& pp : field.points) pp.T_nn = pp.point.position.z();
  CHECK(surface_force(field, 0).z() == doctest::Approx(m.signed_volume(0)).epsilon(1e-10));
  CHECK(surface_force(field, 5).norm() == 0.0);
}

TEST_CASE("minimum gap between objects") {
  const Mesh a = generate_sphere(1.0, 1, SphereFit::vertices);
  const Mesh b = transformed(a, RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(3.0, 0, 0)));
  const std::array<Mesh, 2> parts{a, b};
  const std::array<int, 2> ids{0, 1};
  const Mesh scene = merge_objects(parts, ids);
  CHECK(minimum_gap(a) == 0.0);
  const double g = minimum_gap(scene);
  CHECK(g >= 1.0 - 1e-12);
  CHECK(g < 1.2);
}

TEST_CASE("single sphere pipeline") {
  const Mesh m = generate_sphere(1.0, 1);
  CasimirOptions opt;
  opt.kappa_points = 8;
  const CasimirResult r = casimir_force(m, opt);
  REQUIRE(r.forces.size() == 1);
  const ObjectForce& f = r.forces[0];
  CHECK(f.area == doctest::Approx(m.total_area()));
  CHECK(f.mean_abs_T > 0.0);
  CHECK(f.force.norm() <= 0.01 * f.mean_abs_T * f.area);
  CHECK(r.pressure.points.size() == m.triangle_count());
  CHECK(r.spectrum.size() == m.triangle_count() * 8);
  CHECK(r.kappa_trace.size() == 8);
  CHECK(r.grid.kappa0 == doctest::Approx(1.0 / m.bounding_box_diagonal()));
  CHECK(r.unknowns == build_rwg(m).size());
  CHECK(!r.convergence);
  for (const auto& p : r.pressure.points) {
    CHECK(p.T_isolated == 0.0);
    CHECK(p.eps == doctest::Approx(0.05 * m.mean_edge_length(p.point.triangle)));
  }

  SUBCASE("unknown measured object") {
    opt.measured_objects = {3};
    CHECK_THROWS_AS(casimir_force(m, opt), ConfigError);
  }
}

TEST_CASE("two spheres are attracted and forces balance") {
  const Mesh a = generate_sphere(1.0, 1);
  const std::array<Mesh, 2> parts{
      transformed(a, RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(-1.5, 0, 0))),
      transformed(a, RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(1.5, 0, 0)))};
  const std::array<int, 2> ids{0, 1};
  const Mesh scene = merge_objects(parts, ids);
  CasimirOptions opt;
  opt.kappa_points = 12;
  const CasimirResult r = casimir_force(scene, opt);
  REQUIRE(r.forces.size() == 2);
  const Vec3 fa = r.forces[0].force, fb = r.forces[1].force;
  CHECK(fa.x() > 0.0);
  CHECK(fb.x() < 0.0);
  CHECK((fa + fb).norm() <= 0.05 * fa.norm());
  CHECK(std::abs(fa.y()) + std::abs(fa.z()) <= 1e-3 * fa.norm());
  CHECK(r.gap == doctest::Approx(minimum_gap(scene)));
  CHECK(r.grid.kappa0 == doctest::Approx(1.0 / r.gap));
  bool any_isolated = false;
  for (const auto& p : r.pressure.points) any_isolated = any_isolated || p.T_isolated != 0.0;
  CHECK(any_isolated);
}
