#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Cholesky>

#include "casimir/bem.hpp"
#include "casimir/error.hpp"

using namespace casimir;

namespace {

struct Setup {
  std::shared_ptr<const Mesh> mesh;
  BasisSet basis;
  SingularCache cache;
  QuadratureConfig quad;

  explicit Setup(int subdivisions, double radius = 1.0)
      : mesh(std::make_shared<const Mesh>(generate_sphere(radius, subdivisions))),
        basis(build_rwg(mesh)),
        cache(*mesh) {}
};

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

// Point outside the unit sphere at radius in [1.3, 2].
Vec3 random_outside(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1.3, 2.0);
  return u(rng) * random_unit(rng);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("impedance matrix is symmetric positive definite") {
  const Setup s(1);
  for (double kappa : {0.3, 1.0, 5.0}) {
    const ImpedanceMatrix Z = assemble_z(s.basis, kappa, s.quad, s.cache);
    CHECK(Z.Z.rows() == static_cast<Eigen::Index>(s.basis.size()));
    CHECK(symmetry_residual(Z.Z) <= 1e-10);
    const Eigen::MatrixXd sym = 0.5 * (Z.Z + Z.Z.transpose());
    CHECK(Eigen::LLT<Eigen::MatrixXd>(sym).info() == Eigen::Success);
    const SolveWorkspace ws(Z);
    CHECK(ws.rcond() > 0.0);
    CHECK(ws.kappa() == kappa);
    Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(Z.Z.rows(), -1.0, 2.0);
    const Eigen::VectorXd x = ws.solve(rhs);
    CHECK((Z.Z * x - rhs).norm() <= 1e-10 * rhs.norm());
  }
}

TEST_CASE("inter-object block decays with the gap") {
  const Mesh a = generate_sphere(1.0, 1);
  const Mesh b = transformed(a, RigidTransform::from_axis_angle(Vec3::UnitZ(), 0.0, Vec3(22.0, 0, 0)));
  const std::array<Mesh, 2> parts{a, b};
  const std::array<int, 2> ids{0, 1};
  const auto mesh = std::make_shared<const Mesh>(merge_objects(parts, ids));
  const BasisSet basis = build_rwg(mesh);
  const SingularCache cache(*mesh);
  const double kappa = 0.2, gap = 20.0;
  const ImpedanceMatrix Z = assemble_z(basis, kappa, QuadratureConfig{}, cache);
  const Eigen::Index n = Z.Z.rows() / 2;
  REQUIRE(basis.object_of(0) == 0);
  REQUIRE(basis.object_of(static_cast<std::size_t>(n)) == 1);
  const double inter = Z.Z.block(0, n, n, n).norm(), intra = Z.Z.block(0, 0, n, n).norm();
  CHECK(inter / intra < std::exp(-kappa * gap) * 10.0);

  SUBCASE("quadrature order convergence on well-separated pairs") {
    QuadratureConfig lo, hi;
    lo.far_degree = 4;
    hi.far_degree = 8;
    const Eigen::MatrixXd zl = assemble_z(basis, kappa, lo, cache).Z.block(0, n, n, n);
    const Eigen::MatrixXd zh = assemble_z(basis, kappa, hi, cache).Z.block(0, n, n, n);
    CAPTURE((zl - zh).cwiseAbs().maxCoeff());
    CAPTURE(zh.cwiseAbs().maxCoeff());
    CHECK((zl - zh).cwiseAbs().maxCoeff() <= 1e-6 * zh.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("derivative source equals the difference of point sources") {
  const Setup s(1);
  std::mt19937_64 rng(3);
  const double kappa = 0.9, h = 1e-3;
  for (int trial = 0; trial < 4; ++trial) {
    SourceSpec src;
    src.location = random_outside(rng);
    src.orientation = random_unit(rng);
    src.derivative = random_unit(rng);
    const Eigen::VectorXd bd = assemble_rhs(s.basis, src, kappa, s.quad);
    auto point = [&](double t) {
      SourceSpec p = src;
      p.derivative.reset();
      p.location = src.location + t * *src.derivative;
      return assemble_rhs(s.basis, p, kappa, s.quad);
    };
    const Eigen::VectorXd fd = -(point(-2 * h) - 8.0 * point(-h) + 8.0 * point(h) - point(2 * h)) / (12.0 * h);
    CHECK((bd - fd).norm() <= 1e-6 * bd.norm());
  }
}

TEST_CASE("mixed-potential and direct excitation agree") {
  const Setup s(2);
  QuadratureConfig direct = s.quad;
  direct.rhs_direct = true;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    SourceSpec src;
    const Vec3 n = random_unit(rng);
    src.location = (1.0 + 0.1 * (trial + 1)) * n;
    src.orientation = random_unit(rng);
    if (trial > 0) src.derivative = random_unit(rng);
    const Eigen::VectorXd a = assemble_rhs(s.basis, src, 1.3, s.quad);
    const Eigen::VectorXd b = assemble_rhs(s.basis, src, 1.3, direct);
    CHECK((a - b).norm() <= 1e-6 * a.norm());
  }
}

TEST_CASE("block excitation equals single excitations") {
  const Setup s(1);
  const Frame f = Frame::from_normal(Vec3::Zero(), Vec3(0.2, 0.3, 1.0).normalized());
  std::vector<SourceSpec> sources(3);
  for (auto& src : sources) src.location = 1.4 * f.n;
  sources[0].orientation = f.n;
  sources[1].orientation = f.u;
  sources[1].derivative = f.n;
  sources[2].orientation = f.v;
  sources[2].derivative = f.u;
  const Eigen::MatrixXd B = assemble_rhs_block(s.basis, sources, 0.7, s.quad);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const Eigen::VectorXd b = assemble_rhs(s.basis, sources[k], 0.7, s.quad);
    CHECK((B.col(static_cast<Eigen::Index>(k)) - b).norm() <= 1e-13 * b.norm());
  }
}

TEST_CASE("sources on the surface are rejected") {
  const Setup s(1);
  SourceSpec src;
  src.location = s.mesh->centroid(3) + 1e-4 * s.mesh->unit_normal(3);
  CHECK(distance_to_mesh(*s.mesh, src.location) == doctest::Approx(1e-4).epsilon(1e-6));
  CHECK_THROWS_AS(assemble_rhs(s.basis, src, 1.0, s.quad, 1e-3), NumericalError);
  CHECK_NOTHROW(assemble_rhs(s.basis, src, 1.0, s.quad, 1e-5));
  CHECK_THROWS_AS(incident_E(src, src.location, 1.0), NumericalError);
}

TEST_CASE("scattered fields") {
  const Setup s(1);
  const double kappa = 1.1;
  const ImpedanceMatrix Z = assemble_z(s.basis, kappa, s.quad, s.cache);
  const SolveWorkspace ws(Z);
  std::mt19937_64 rng(5);
  auto coefficients = [&](const SourceSpec& src) {
    return Eigen::VectorXd(-ws.solve(assemble_rhs(s.basis, src, kappa, s.quad)));
  };

  SUBCASE("reciprocity") {
    for (int trial = 0; trial < 5; ++trial) {
      SourceSpec p, q;
      p.location = random_outside(rng);
      q.location = random_outside(rng);
      p.orientation = random_unit(rng);
      q.orientation = random_unit(rng);
      const double pq = q.orientation.dot(eval_E_scattered(s.basis, coefficients(p), q.location, kappa, s.quad));
      const double qp = p.orientation.dot(eval_E_scattered(s.basis, coefficients(q), p.location, kappa, s.quad));
      CHECK(rel(pq, qp) <= 1e-8);
      // ê_q · E(r_q) = κ b_qᵀ Z⁻¹ b_p
      const Eigen::VectorXd bp = assemble_rhs(s.basis, p, kappa, s.quad);
      const Eigen::VectorXd bq = assemble_rhs(s.basis, q, kappa, s.quad);
      CHECK(rel(pq, kappa * bq.dot(ws.solve(bp))) <= 1e-8);
    }
  }

  SUBCASE("magnetic field is the curl of the electric field") {
    SourceSpec p;
    p.location = Vec3(0.2, -0.1, 1.5);
    p.orientation = Vec3(0.3, 0.5, 0.8).normalized();
    p.derivative = Vec3(0, 0, 1);
    const Eigen::VectorXd a = coefficients(p);
    const Vec3 r(0.4, 0.9, 1.1);
    const double h = 1e-3;
    auto E = [&](const Vec3& x) { return eval_E_scattered(s.basis, a, x, kappa, s.quad); };
    Mat3 J;  // J(i, k) = ∂_k E_i
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = h * Vec3::Unit(k);
      J.col(k) = (E(r - 2 * e) - 8.0 * E(r - e) + 8.0 * E(r + e) - E(r + 2 * e)) / (12.0 * h);
    }
    const Vec3 curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
    const Vec3 H = eval_H_scattered(s.basis, a, r, kappa, s.quad);
    CHECK((H + curl / kappa).norm() <= 1e-6 * H.norm());
  }

  SUBCASE("incident magnetic field is the curl of the incident electric field") {
    SourceSpec p;
    p.location = Vec3(0.1, 0.2, 0.3);
    p.orientation = Vec3(1, 0, 0);
    for (int variant = 0; variant < 2; ++variant) {
      if (variant == 1) p.derivative = Vec3(0, 0.6, 0.8);
      const Vec3 r(0.9, -0.4, 1.0);
      const double h = 1e-4;
      Mat3 J;
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = h * Vec3::Unit(k);
        J.col(k) = (incident_E(p, r + e, kappa) - incident_E(p, r - e, kappa)) / (2.0 * h);
      }
      const Vec3 curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
      const Vec3 H = incident_H(p, r, kappa);
      CHECK((H + curl / kappa).norm() <= 1e-6 * H.norm());
    }
  }

  SUBCASE("perfect conductor cancels the tangential field on the surface") {
    SourceSpec p;
    p.location = Vec3(0, 0, 2.0);
    p.orientation = Vec3(1, 0, 0);
    const Eigen::VectorXd a = coefficients(p);
    // Galerkin test of the total tangential field against each RWG vanishes:
    // Z a + b = 0.
    const Eigen::VectorXd b = assemble_rhs(s.basis, p, kappa, s.quad);
    CHECK((Z.Z * a + b).norm() <= 1e-10 * b.norm());
  }
}

TEST_CASE("matrix dump") {
  Eigen::MatrixXd Z(2, 2);
  Z << 1.0, 0.5, 0.5, 1.0 / 3.0;
  const auto path = std::filesystem::temp_directory_path() / "casimir_test_dump.csv";
  dump_matrix_csv(Z, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line.find(',') != std::string::npos);
  std::getline(in, line);
  CHECK(std::stod(line.substr(line.find(',') + 1)) == 1.0 / 3.0);
  std::filesystem::remove(path);
}
