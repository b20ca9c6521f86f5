#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "casimir/geometry.hpp"

namespace casimir {

/// Symmetric rule on a triangle in barycentric coordinates; weights sum to 1.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Symmetric rules exact for polynomials of the given degree.
/// Supported degrees: 1 (1 pt), 2 (3 pt), 3 (6 pt), 4 (6 pt), 5 (7 pt), 8 (16 pt).
const TriangleRule& triangle_rule(int degree);

struct GaussLegendre {
  std::vector<double> nodes;    // on (0, 1)
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to (0, 1).
GaussLegendre gauss_legendre(int n);

/// Quadrature for a pair of triangles sharing 3 (identical), 2 (edge) or
/// 1 (vertex) vertices, after the regularizing transforms of Sauter and Schwab.
///
/// Points are (s, t) parameters of x = P0 + s (P1 - P0) + t (P2 - P0) with the
/// shared vertices listed first, in the same order, in both triangles. The
/// weights integrate over the reference triangle pair (total 1/4); multiply by
/// the two Jacobians 2A and 2A'.
struct TrianglePairRule {
  std::vector<std::array<double, 2>> first;
  std::vector<std::array<double, 2>> second;
  std::vector<double> weights;
};

TrianglePairRule sauter_schwab_rule(int common_vertices, int order);

/// Controls for the distance-adaptive near-singular rule.
struct AdaptiveOptions {
  /// A sub-triangle is accepted when diameter <= ratio * distance.
  double ratio = 0.5;
  int max_depth = 14;
};

namespace detail {

template <class Accumulate>
void apply_rule(const TriangleRule& rule, const Vec3& a, const Vec3& b, const Vec3& c, double area,
                Accumulate& acc) {
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& l = rule.barycentric[q];
    const Vec3 x = l[0] * a + l[1] * b + l[2] * c;
    acc(x, rule.weights[q] * area);
  }
}

template <class Accumulate>
void adaptive_recurse(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p, double area,
                      const AdaptiveOptions& opt, int depth, Accumulate& acc) {
  const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  const double dist = point_triangle_distance(p, a, b, c);
  if (diam <= opt.ratio * dist || depth >= opt.max_depth) {
    const double r = dist > 0.0 ? diam / dist : 1e300;
    const int degree = r < 0.03 ? 2 : (r < 0.1 ? 4 : (r < 0.25 ? 5 : 8));
    apply_rule(triangle_rule(degree), a, b, c, area, acc);
    return;
  }
  const Vec3 ab = 0.5 * (a + b);
  const Vec3 bc = 0.5 * (b + c);
  const Vec3 ca = 0.5 * (c + a);
  const double quarter = 0.25 * area;
  adaptive_recurse(a, ab, ca, p, quarter, opt, depth + 1, acc);
  adaptive_recurse(ab, b, bc, p, quarter, opt, depth + 1, acc);
  adaptive_recurse(ca, bc, c, p, quarter, opt, depth + 1, acc);
  adaptive_recurse(ab, bc, ca, p, quarter, opt, depth + 1, acc);
}

}  // namespace detail

/// Integrates over triangle abc a kernel that is singular at (or near) the
/// off-surface point p. Sub-triangles are split until they are small compared
/// with their distance to p; leaves use a rule whose degree grows as the
/// diameter/distance ratio grows. `acc(x, w)` receives the points and weights.
template <class Accumulate>
void integrate_near_point(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p,
                          const AdaptiveOptions& opt, Accumulate&& acc) {
  const double area = 0.5 * (b - a).cross(c - a).norm();
  detail::adaptive_recurse(a, b, c, p, area, opt, 0, acc);
}

}  // namespace casimir
