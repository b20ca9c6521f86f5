#include <fstream>
#include <iomanip>

#include "casimir/bem.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

struct TriangleData {
  std::array<Vec3, 3> v;
  std::array<Vec3, 3> vt;  // vertices relative to the centroid
  Vec3 c;
  double area;
  double h;
  std::array<int, 3> fn;       // RWG index per local free vertex
  std::array<double, 3> coef;  // sign * edge length
  std::vector<Vec3> far_rho, near_rho;
  std::vector<double> far_w, near_w;
};

std::vector<TriangleData> prepare(const BasisSet& basis, const QuadratureConfig& quad) {
  const Mesh& mesh = basis.mesh();
  const TriangleRule& far = triangle_rule(quad.far_degree);
  const TriangleRule& near = triangle_rule(quad.near_degree);
  std::vector<TriangleData> out(mesh.triangles.size());
  for (std::size_t ti = 0; ti < out.size(); ++ti) {
    const int t = static_cast<int>(ti);
    TriangleData& d = out[ti];
    for (int k = 0; k < 3; ++k) d.v[k] = mesh.vertex(t, k);
    d.c = mesh.centroid(t);
    for (int k = 0; k < 3; ++k) d.vt[k] = d.v[k] - d.c;
    d.area = mesh.area(t);
    d.h = mesh.mean_edge_length(t);
    for (int k = 0; k < 3; ++k) {
      const TriangleRwg& r = basis.on_triangle(t, k);
      d.fn[k] = r.function;
      d.coef[k] = r.function >= 0 ? r.sign * basis[r.function].edge_length : 0.0;
    }
    auto fill = [&](const TriangleRule& rule, std::vector<Vec3>& rho, std::vector<double>& w) {
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& l = rule.barycentric[q];
        rho.push_back(l[0] * d.v[0] + l[1] * d.v[1] + l[2] * d.v[2] - d.c);
        w.push_back(rule.weights[q] * d.area);
      }
    };
    fill(far, d.far_rho, d.far_w);
    fill(near, d.near_rho, d.near_w);
  }
  return out;
}

template <class T>
PairMoments<T> product_moments(const TriangleData& a, const TriangleData& b, bool near, T kappa) {
  const auto& ra = near ? a.near_rho : a.far_rho;
  const auto& wa = near ? a.near_w : a.far_w;
  const auto& rb = near ? b.near_rho : b.far_rho;
  const auto& wb = near ? b.near_w : b.far_w;
  const Vec3 dc = a.c - b.c;
  PairMoments<T> m;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    T g_sum{};
    Eigen::Matrix<T, 3, 1> y_sum = Eigen::Matrix<T, 3, 1>::Zero();
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const double R = (dc + ra[i] - rb[j]).norm();
      const T k = radial_coeffs(kappa, R, 0).g * wb[j];
      g_sum += k;
      y_sum += rb[j].template cast<T>() * k;
    }
    g_sum *= wa[i];
    y_sum *= wa[i];
    m.G += g_sum;
    m.X += ra[i].template cast<T>() * g_sum;
    m.Y += y_sum;
    m.Q += ra[i](0) * y_sum(0) + ra[i](1) * y_sum(1) + ra[i](2) * y_sum(2);
  }
  return m;
}

template <class T, class Matrix>
void scatter(const TriangleData& a, const TriangleData& b, bool mirror, const PairMoments<T>& m, T div_factor,
             Matrix& Z) {
  const double inv_aa = 1.0 / (a.area * b.area);
  for (int i = 0; i < 3; ++i) {
    if (a.fn[i] < 0) continue;
    const Vec3& vi = a.vt[i];
    const T viY = vi(0) * m.Y(0) + vi(1) * m.Y(1) + vi(2) * m.Y(2);
    for (int j = 0; j < 3; ++j) {
      if (b.fn[j] < 0) continue;
      const Vec3& vj = b.vt[j];
      const T vjX = vj(0) * m.X(0) + vj(1) * m.X(1) + vj(2) * m.X(2);
      const T P = m.Q - viY - vjX + vi.dot(vj) * m.G;
      const T val = (a.coef[i] * b.coef[j] * inv_aa) * (0.25 * P + div_factor * m.G);
      Z(a.fn[i], b.fn[j]) += val;
      if (mirror) Z(b.fn[j], a.fn[i]) += val;
    }
  }
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> assemble_impl(const BasisSet& basis, T kappa,
                                                               const QuadratureConfig& quad,
                                                               const SingularCache& cache) {
  const Mesh& mesh = basis.mesh();
  if (cache.triangle_count() != mesh.triangles.size())
    throw ConfigError("singular cache was built for a different mesh");
  const auto tri = prepare(basis, quad);
  const int nt = static_cast<int>(tri.size());
  const int n = static_cast<int>(basis.size());
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> Z =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const T div_factor = T(1.0) / (kappa * kappa);

  std::vector<int> touch_index(nt, -1);
  for (int t = 0; t < nt; ++t) {
    const auto& touching = cache.touching(t);
    for (std::size_t k = 0; k < touching.size(); ++k) touch_index[touching[k].other] = static_cast<int>(k);
    for (int o = t; o < nt; ++o) {
      PairMoments<T> m;
      if (touch_index[o] >= 0) {
        m = singular_pair(mesh, t, touching[touch_index[o]], cache, kappa);
      } else {
        const double dist = (tri[t].c - tri[o].c).norm();
        const bool near = dist < quad.near_distance * 0.5 * (tri[t].h + tri[o].h);
        m = product_moments(tri[t], tri[o], near, kappa);
      }
      scatter(tri[t], tri[o], o != t, m, div_factor, Z);
    }
    for (const auto& p : touching) touch_index[p.other] = -1;
  }
  return Z;
}

}  // namespace

ImpedanceMatrix assemble_z(const BasisSet& basis, double kappa, const QuadratureConfig& quad,
                           const SingularCache& cache) {
  if (!(kappa > 0.0)) throw NumericalError("impedance matrix needs kappa > 0");
  ImpedanceMatrix out;
  out.kappa = kappa;
  out.mesh = basis.mesh_ptr();
  out.Z = assemble_impl<double>(basis, kappa, quad, cache);
  return out;
}

Eigen::MatrixXcd assemble_z_complex(const BasisSet& basis, double k, const QuadratureConfig& quad,
                                    const SingularCache& cache) {
  if (!(k > 0.0)) throw NumericalError("real-frequency matrix needs k > 0");
  // e^{ikR} = e^{-κR} with κ = -ik
  return assemble_impl<Complex>(basis, Complex(0.0, -k), quad, cache);
}

double symmetry_residual(const Eigen::MatrixXd& Z) {
  const double scale = Z.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (Z - Z.transpose()).cwiseAbs().maxCoeff() / scale;
}

void dump_matrix_csv(const Eigen::MatrixXd& Z, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    for (Eigen::Index j = 0; j < Z.cols(); ++j) out << (j ? "," : "") << Z(i, j);
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace casimir
