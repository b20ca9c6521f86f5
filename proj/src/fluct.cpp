#include "casimir/fluct.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "casimir/error.hpp"

namespace casimir {

KappaGrid KappaGrid::gauss_legendre(int count, double kappa0) {
  if (count < 1) throw ConfigError("kappa grid needs at least one node");
  if (!(kappa0 > 0.0)) throw ConfigError("kappa grid scale must be positive");
  const GaussLegendre gl = casimir::gauss_legendre(count);
  KappaGrid grid;
  grid.kappa0 = kappa0;
  for (int j = 0; j < count; ++j) {
    const double t = gl.nodes[j];
    grid.nodes.push_back(kappa0 * t / (1.0 - t));
    grid.weights.push_back(gl.weights[j] * kappa0 / ((1.0 - t) * (1.0 - t)));
  }
  return grid;
}

std::array<SourceSpec, 5> stress_sources(const Vec3& point, const Frame& frame, double eps) {
  const Vec3 r = point + eps * frame.n;
  return {SourceSpec{r, frame.n, std::nullopt, 1}, SourceSpec{r, frame.v, frame.n, 2},
          SourceSpec{r, frame.n, frame.v, 3}, SourceSpec{r, frame.n, frame.u, 4},
          SourceSpec{r, frame.u, frame.n, 5}};
}

double stress_integrand(const SpectralSample& s, bool literal_last_term) {
  const double last = literal_last_term ? s.H_u_s5 : s.H_v_s5;
  return (s.kappa * s.E_n_s1 + (-s.H_u_s2 + s.H_u_s3) + (-s.H_v_s4 + last)) / (2.0 * std::numbers::pi);
}

Vec3 surface_force(const PressureField& pressure, int object_id) {
  Vec3 f = Vec3::Zero();
  for (const PressurePoint& p : pressure.points)
    if (p.point.object_id == object_id) f += p.point.weight * p.T_nn * p.point.frame.n;
  return f;
}

double minimum_gap(const Mesh& mesh) {
  const auto ids = mesh.objects();
  if (ids.size() < 2) return 0.0;
  std::vector<int> vertex_object(mesh.vertices.size(), -1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int v : mesh.triangles[t]) vertex_object[v] = mesh.object_ids[t];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (vertex_object[i] < 0) continue;
    for (std::size_t j = i + 1; j < mesh.vertices.size(); ++j) {
      if (vertex_object[j] < 0 || vertex_object[j] == vertex_object[i]) continue;
      best = std::min(best, (mesh.vertices[i] - mesh.vertices[j]).norm());
    }
  }
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct EvalPoint {
  SurfacePoint sp;
  double eps;
};

struct Body {
  std::shared_ptr<const Mesh> mesh;
  BasisSet basis;
  SingularCache cache;

  Body(std::shared_ptr<const Mesh> m, const QuadratureConfig& quad)
      : mesh(std::move(m)),
        basis(build_rwg(mesh)),
        cache(*mesh, quad.singular_static_order, quad.singular_remainder_order) {}
};

// κ-major samples, one per (κ node, point).
struct Sweep {
  std::vector<SpectralSample> samples;
  std::vector<double> rcond;
  std::vector<double> seconds;
};

Sweep sweep(const Body& body, const std::vector<EvalPoint>& points, const KappaGrid& grid,
            const CasimirOptions& opt, const std::string& label) {
  const std::size_t np = points.size();
  const Eigen::Index n = static_cast<Eigen::Index>(body.basis.size());
  const std::size_t block = static_cast<std::size_t>(std::max(1, opt.block_size));
  Sweep out;
  out.samples.resize(np * grid.size());

  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto t0 = Clock::now();
    const double kappa = grid.nodes[j];
    const ImpedanceMatrix Z = assemble_z(body.basis, kappa, opt.quad, body.cache);
    const SolveWorkspace ws(Z, opt.max_condition);

    for (std::size_t p0 = 0; p0 < np; p0 += block) {
      const std::size_t p1 = std::min(np, p0 + block);
      const Eigen::Index cols = static_cast<Eigen::Index>(p1 - p0);
      Eigen::MatrixXd B(n, 5 * cols), D(n, 3 * cols);
#pragma omp parallel for schedule(dynamic)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const EvalPoint& ep = points[p0 + static_cast<std::size_t>(c)];
        const auto src = stress_sources(ep.sp.position, ep.sp.frame, ep.eps);
        B.middleCols(5 * c, 5) = assemble_rhs_block(body.basis, src, kappa, opt.quad, 0.5 * ep.eps);
        D.col(3 * c) = B.col(5 * c);
        D.col(3 * c + 1) = B.col(5 * c + 2) - B.col(5 * c + 1);
        D.col(3 * c + 2) = B.col(5 * c + 4) - B.col(5 * c + 3);
      }
      const Eigen::MatrixXd X = ws.solve(D);
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto x1 = X.col(3 * c), y = X.col(3 * c + 1), z = X.col(3 * c + 2);
        SpectralSample& s = out.samples[j * np + p0 + static_cast<std::size_t>(c)];
        s.point = static_cast<int>(p0 + static_cast<std::size_t>(c));
        s.kappa = kappa;
        s.E_n_s1 = kappa * B.col(5 * c).dot(x1);
        s.H_u_s2 = y.dot(B.col(5 * c + 1));
        s.H_u_s3 = y.dot(B.col(5 * c + 2));
        s.H_v_s4 = z.dot(B.col(5 * c + 3));
        s.H_v_s5 = z.dot(B.col(5 * c + 4));
        s.H_u_s5 = y.dot(B.col(5 * c + 4));
        s.t_nn = stress_integrand(s, opt.literal_last_term);
        if (!std::isfinite(s.t_nn))
          throw NumericalError("non-finite stress integrand at kappa = " + fmt(kappa));
      }
    }
    out.rcond.push_back(ws.rcond());
    out.seconds.push_back(seconds_since(t0));
    if (opt.log) {
      std::ostringstream os;
      os << label << "kappa " << (j + 1) << "/" << grid.size() << " = " << kappa << "  rcond " << ws.rcond()
         << "  " << out.seconds.back() << " s";
      opt.log(os.str());
    }
  }
  return out;
}

struct Evaluation {
  std::vector<SpectralSample> samples;  // interaction part when subtracted
  std::vector<double> isolated;         // isolated t_nn, same layout
  std::vector<double> rcond;
  std::vector<double> seconds;
};

Evaluation evaluate(const Body& scene, const std::vector<std::pair<int, Body>>& isolated,
                    const std::vector<EvalPoint>& points, const KappaGrid& grid, const CasimirOptions& opt) {
  Sweep full = sweep(scene, points, grid, opt, "");
  Evaluation ev;
  ev.samples = std::move(full.samples);
  ev.rcond = std::move(full.rcond);
  ev.seconds = std::move(full.seconds);
  ev.isolated.assign(ev.samples.size(), 0.0);
  const std::size_t np = points.size();
  for (const auto& [id, body] : isolated) {
    std::vector<std::size_t> index;
    std::vector<EvalPoint> own;
    for (std::size_t p = 0; p < np; ++p) {
      if (points[p].sp.object_id != id) continue;
      index.push_back(p);
      own.push_back(points[p]);
    }
    const Sweep iso = sweep(body, own, grid, opt, "isolated object " + std::to_string(id) + ": ");
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (std::size_t q = 0; q < own.size(); ++q) {
        const SpectralSample& r = iso.samples[j * own.size() + q];
        SpectralSample& s = ev.samples[j * np + index[q]];
        s.E_n_s1 -= r.E_n_s1;
        s.H_u_s2 -= r.H_u_s2;
        s.H_u_s3 -= r.H_u_s3;
        s.H_v_s4 -= r.H_v_s4;
        s.H_v_s5 -= r.H_v_s5;
        s.H_u_s5 -= r.H_u_s5;
        s.t_nn -= r.t_nn;
        ev.isolated[j * np + index[q]] = r.t_nn;
      }
      ev.seconds[j] += iso.seconds[j];
    }
  }
  return ev;
}

PressureField make_pressure(const std::vector<EvalPoint>& points, const KappaGrid& grid, const Evaluation& ev) {
  const std::size_t np = points.size();
  PressureField pf;
  pf.points.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    pf.points[p].point = points[p].sp;
    pf.points[p].eps = points[p].eps;
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      pf.points[p].T_nn += grid.weights[j] * ev.samples[j * np + p].t_nn;
      pf.points[p].T_isolated += grid.weights[j] * ev.isolated[j * np + p];
    }
  }
  const std::size_t last = grid.size() - 1;
  for (std::size_t p = 0; p < np; ++p) {
    PressurePoint& pp = pf.points[p];
    const double contrib = grid.weights[last] * ev.samples[last * np + p].t_nn;
    pp.tail_fraction = pp.T_nn != 0.0 ? std::abs(contrib / pp.T_nn) : 0.0;
  }
  return pf;
}

std::vector<ObjectForce> forces_of(const PressureField& pressure, const std::vector<int>& objects) {
  std::vector<ObjectForce> out;
  for (int id : objects) {
    ObjectForce f;
    f.object_id = id;
    f.force = surface_force(pressure, id);
    double abs_sum = 0.0;
    for (const PressurePoint& p : pressure.points) {
      if (p.point.object_id != id) continue;
      f.area += p.point.weight;
      abs_sum += p.point.weight * std::abs(p.T_nn + p.T_isolated);
    }
    f.mean_abs_T = f.area > 0.0 ? abs_sum / f.area : 0.0;
    out.push_back(f);
  }
  return out;
}

double max_relative_change(const std::vector<ObjectForce>& base, const std::vector<ObjectForce>& other) {
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double ref = base[i].force.norm();
    if (ref > 0.0) worst = std::max(worst, (other[i].force - base[i].force).norm() / ref);
  }
  return worst;
}

}  // namespace

CasimirResult casimir_force(const Mesh& scene, const CasimirOptions& opt) {
  const auto t0 = Clock::now();
  validate_mesh(scene);
  if (opt.kappa_points < 1) throw ConfigError("kappa_points must be >= 1");
  if (!(opt.eps_factor > 0.0)) throw ConfigError("eps_factor must be positive");

  const Body body(std::make_shared<const Mesh>(scene), opt.quad);
  const Mesh& mesh = *body.mesh;
  const auto all = mesh.objects();
  std::vector<int> objects = opt.measured_objects.empty() ? all : opt.measured_objects;
  for (int id : objects)
    if (std::find(all.begin(), all.end(), id) == all.end())
      throw ConfigError("measured object " + std::to_string(id) + " is not in the scene");

  std::vector<EvalPoint> points;
  for (const SurfacePoint& sp : quadrature_points(mesh, opt.surface_rule)) {
    if (std::find(objects.begin(), objects.end(), sp.object_id) == objects.end()) continue;
    points.push_back({sp, opt.eps_factor * mesh.mean_edge_length(sp.triangle)});
  }

  std::vector<std::pair<int, Body>> isolated;
  if (opt.subtract_isolated && all.size() > 1)
    for (int id : objects) isolated.emplace_back(id, Body(std::make_shared<const Mesh>(extract_object(mesh, id)), opt.quad));

  CasimirResult res;
  res.unknowns = body.basis.size();
  res.gap = minimum_gap(mesh);
  const double kappa0 = opt.kappa0 ? *opt.kappa0 : (res.gap > 0.0 ? 1.0 / res.gap : 1.0 / mesh.bounding_box_diagonal());
  res.grid = KappaGrid::gauss_legendre(opt.kappa_points, kappa0);

  Evaluation ev = evaluate(body, isolated, points, res.grid, opt);
  res.pressure = make_pressure(points, res.grid, ev);
  res.forces = forces_of(res.pressure, objects);

  const std::size_t np = points.size();
  for (std::size_t j = 0; j < res.grid.size(); ++j) {
    KappaDiagnostics d;
    d.kappa = res.grid.nodes[j];
    d.weight = res.grid.weights[j];
    d.rcond = ev.rcond[j];
    d.seconds = ev.seconds[j];
    for (std::size_t p = 0; p < np; ++p) {
      const SurfacePoint& sp = points[p].sp;
      const double t = ev.samples[j * np + p].t_nn;
      d.sum_abs_t += sp.weight * std::abs(t);
      if (sp.object_id == objects.front()) d.force_integrand += sp.weight * t * sp.frame.n;
    }
    res.kappa_trace.push_back(d);
  }
  if (opt.record_spectrum) res.spectrum = std::move(ev.samples);

  for (const PressurePoint& p : res.pressure.points) res.max_tail_fraction = std::max(res.max_tail_fraction, p.tail_fraction);
  if (res.max_tail_fraction > 1e-2) {
    std::ostringstream os;
    os << "kappa grid too short: last-node contribution reaches " << res.max_tail_fraction << " of T_nn";
    res.warnings.push_back(os.str());
  }

  // decay of the aggregate integrand beyond its peak
  std::size_t peak = 0;
  for (std::size_t j = 0; j < res.kappa_trace.size(); ++j)
    if (res.kappa_trace[j].sum_abs_t > res.kappa_trace[peak].sum_abs_t) peak = j;
  for (std::size_t j = peak + 1; j < res.kappa_trace.size(); ++j) {
    if (res.kappa_trace[j].sum_abs_t > res.kappa_trace[j - 1].sum_abs_t * (1.0 + 1e-9)) {
      res.decay_ok = false;
      res.warnings.push_back("integrand does not decay monotonically beyond its peak (kappa = " +
                             fmt(res.kappa_trace[j].kappa) + ")");
      break;
    }
  }
  const double peak_value = res.kappa_trace[peak].sum_abs_t;
  for (const KappaDiagnostics& d : res.kappa_trace) {
    if (d.kappa >= 20.0 * kappa0 && d.sum_abs_t > 1e-3 * peak_value) {
      std::ostringstream os;
      os << "integrand at kappa = " << d.kappa << " is still " << d.sum_abs_t / peak_value << " of its peak";
      res.warnings.push_back(os.str());
      break;
    }
  }

  if (opt.convergence_study) {
    ConvergenceReport rep;
    std::vector<EvalPoint> half = points;
    for (EvalPoint& p : half) p.eps *= 0.5;
    if (opt.log) opt.log("convergence study: eps / 2");
    const Evaluation e_eps = evaluate(body, isolated, half, res.grid, opt);
    rep.half_eps = forces_of(make_pressure(half, res.grid, e_eps), objects);
    if (opt.log) opt.log("convergence study: 2 M");
    const KappaGrid g2 = KappaGrid::gauss_legendre(2 * opt.kappa_points, kappa0);
    const Evaluation e_m = evaluate(body, isolated, points, g2, opt);
    rep.double_m = forces_of(make_pressure(points, g2, e_m), objects);
    rep.rel_change_eps = max_relative_change(res.forces, rep.half_eps);
    rep.rel_change_m = max_relative_change(res.forces, rep.double_m);
    if (rep.rel_change_eps > 0.02)
      res.warnings.push_back("force changes by " + fmt(100.0 * rep.rel_change_eps) +
                             "% when eps is halved");
    if (rep.rel_change_m > 0.02)
      res.warnings.push_back("force changes by " + fmt(100.0 * rep.rel_change_m) +
                             "% when the kappa grid is doubled");
    res.convergence = rep;
  }
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace casimir
