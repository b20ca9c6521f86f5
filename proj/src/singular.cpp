#include "casimir/singular.hpp"

#include <algorithm>
#include <map>

#include "casimir/error.hpp"

namespace casimir {

int touching_permutation(const std::array<int, 3>& a, const std::array<int, 3>& b, std::array<int, 3>& perm_a,
                         std::array<int, 3>& perm_b) {
  int common = 0;
  std::array<bool, 3> used_a{}, used_b{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (a[i] == b[j]) {
        perm_a[common] = i;
        perm_b[common] = j;
        used_a[i] = used_b[j] = true;
        ++common;
      }
    }
  }
  int ka = common, kb = common;
  for (int i = 0; i < 3; ++i) {
    if (!used_a[i]) perm_a[ka++] = i;
    if (!used_b[i]) perm_b[kb++] = i;
  }
  if (common == 3) {
    // keep the identical pair in natural order so both sides map alike
    perm_a = {0, 1, 2};
    perm_b = {0, 1, 2};
  }
  return common;
}

namespace {

struct Local {
  Vec3 p0, e1, e2, c;
  explicit Local(const std::array<Vec3, 3>& v)
      : p0(v[0]), e1(v[1] - v[0]), e2(v[2] - v[0]), c((v[0] + v[1] + v[2]) / 3.0) {}
  Vec3 at(const std::array<double, 2>& st) const { return p0 + st[0] * e1 + st[1] * e2; }
  double jacobian() const { return e1.cross(e2).norm(); }
};

template <class T, class Kernel>
PairMoments<T> pair_rule_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                 const TrianglePairRule& rule, Kernel&& kernel) {
  const Local la(a), lb(b);
  PairMoments<T> m;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Vec3 x = la.at(rule.first[q]);
    const Vec3 y = lb.at(rule.second[q]);
    const Vec3 rho = x - la.c, rhop = y - lb.c;
    const T k = kernel((x - y).norm()) * rule.weights[q];
    m.G += k;
    m.X += rho.template cast<T>() * k;
    m.Y += rhop.template cast<T>() * k;
    m.Q += rho.dot(rhop) * k;
  }
  const double jac = la.jacobian() * lb.jacobian();
  m.G *= jac;
  m.X *= jac;
  m.Y *= jac;
  m.Q *= jac;
  return m;
}

}  // namespace

PairMoments<double> static_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                        const TrianglePairRule& rule) {
  return pair_rule_moments<double>(a, b, rule, [](double R) { return g_static(R); });
}

template <class T>
PairMoments<T> remainder_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                      const TrianglePairRule& rule, T kappa) {
  return pair_rule_moments<T>(a, b, rule, [kappa](double R) { return g_smooth(kappa, R); });
}

template <class T>
PairMoments<T> regular_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                    const TriangleRule& ra, const TriangleRule& rb, T kappa) {
  const Vec3 ca = (a[0] + a[1] + a[2]) / 3.0, cb = (b[0] + b[1] + b[2]) / 3.0;
  const double area_a = 0.5 * (a[1] - a[0]).cross(a[2] - a[0]).norm();
  const double area_b = 0.5 * (b[1] - b[0]).cross(b[2] - b[0]).norm();
  PairMoments<T> m;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const auto& l = ra.barycentric[i];
    const Vec3 rho = l[0] * a[0] + l[1] * a[1] + l[2] * a[2] - ca;
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const auto& lp = rb.barycentric[j];
      const Vec3 rhop = lp[0] * b[0] + lp[1] * b[1] + lp[2] * b[2] - cb;
      const double R = (ca + rho - cb - rhop).norm();
      const T k = radial_coeffs(kappa, R, 0).g * (ra.weights[i] * rb.weights[j]);
      m.G += k;
      m.X += rho.template cast<T>() * k;
      m.Y += rhop.template cast<T>() * k;
      m.Q += rho.dot(rhop) * k;
    }
  }
  const double jac = area_a * area_b;
  m.G *= jac;
  m.X *= jac;
  m.Y *= jac;
  m.Q *= jac;
  return m;
}

template PairMoments<double> remainder_pair_moments(const std::array<Vec3, 3>&, const std::array<Vec3, 3>&,
                                                    const TrianglePairRule&, double);
template PairMoments<Complex> remainder_pair_moments(const std::array<Vec3, 3>&, const std::array<Vec3, 3>&,
                                                     const TrianglePairRule&, Complex);
template PairMoments<double> regular_pair_moments(const std::array<Vec3, 3>&, const std::array<Vec3, 3>&,
                                                  const TriangleRule&, const TriangleRule&, double);
template PairMoments<Complex> regular_pair_moments(const std::array<Vec3, 3>&, const std::array<Vec3, 3>&,
                                                   const TriangleRule&, const TriangleRule&, Complex);

namespace {

std::array<Vec3, 3> permuted(const Mesh& mesh, int t, const std::array<int, 3>& perm) {
  return {mesh.vertex(t, perm[0]), mesh.vertex(t, perm[1]), mesh.vertex(t, perm[2])};
}

}  // namespace

SingularCache::SingularCache(const Mesh& mesh, int static_order, int remainder_order)
    : static_order_(static_order), remainder_order_(remainder_order) {
  if (static_order < 1 || remainder_order < 1) throw ConfigError("singular quadrature orders must be >= 1");
  const int nt = static_cast<int>(mesh.triangles.size());
  std::vector<std::vector<int>> by_vertex(mesh.vertices.size());
  for (int t = 0; t < nt; ++t)
    for (int v : mesh.triangles[t]) by_vertex[v].push_back(t);

  std::array<TrianglePairRule, 3> static_rules = {sauter_schwab_rule(1, static_order),
                                                  sauter_schwab_rule(2, static_order),
                                                  sauter_schwab_rule(3, static_order)};
  remainder_rules_ = {sauter_schwab_rule(1, remainder_order), sauter_schwab_rule(2, remainder_order),
                      sauter_schwab_rule(3, remainder_order)};

  touching_.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    std::vector<int> others;
    for (int v : mesh.triangles[t]) others.insert(others.end(), by_vertex[v].begin(), by_vertex[v].end());
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    for (int o : others) {
      if (o < t) continue;  // filled from the lower index
      TouchingPair p;
      p.other = o;
      p.common = touching_permutation(mesh.triangles[t], mesh.triangles[o], p.perm_self, p.perm_other);
      p.static_part = static_pair_moments(permuted(mesh, t, p.perm_self), permuted(mesh, o, p.perm_other),
                                          static_rules[p.common - 1]);
      if (o != t) {
        TouchingPair q;
        q.other = t;
        q.common = p.common;
        q.perm_self = p.perm_other;
        q.perm_other = p.perm_self;
        q.static_part = p.static_part.transposed();
        touching_[o].push_back(q);
      }
      touching_[t].push_back(p);
    }
  }
  for (auto& list : touching_)
    std::sort(list.begin(), list.end(), [](const TouchingPair& a, const TouchingPair& b) { return a.other < b.other; });
}

template <class T>
PairMoments<T> singular_pair(const Mesh& mesh, int t, const TouchingPair& pair, const SingularCache& cache,
                             T kappa) {
  // Remainder always evaluated from the lower triangle index; (t, o) and
  // (o, t) come out as exact transposes.
  const bool swap = pair.other < t;
  const int lo = swap ? pair.other : t, hi = swap ? t : pair.other;
  const auto& perm_lo = swap ? pair.perm_other : pair.perm_self;
  const auto& perm_hi = swap ? pair.perm_self : pair.perm_other;
  PairMoments<T> m = remainder_pair_moments(permuted(mesh, lo, perm_lo), permuted(mesh, hi, perm_hi),
                                            cache.remainder_rule(pair.common), kappa);
  m += (swap ? pair.static_part.transposed() : pair.static_part).template cast<T>();
  return swap ? m.transposed() : m;
}

template PairMoments<double> singular_pair(const Mesh&, int, const TouchingPair&, const SingularCache&, double);
template PairMoments<Complex> singular_pair(const Mesh&, int, const TouchingPair&, const SingularCache&, Complex);

}  // namespace casimir
