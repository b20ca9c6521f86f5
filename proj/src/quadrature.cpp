#include "casimir/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "casimir/error.hpp"

namespace casimir {

namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  // (a, b, b) and its two rotations, b = (1 - a) / 2
  const double b = 0.5 * (1.0 - a);
  rule.barycentric.push_back({a, b, b});
  rule.barycentric.push_back({b, a, b});
  rule.barycentric.push_back({b, b, a});
  rule.weights.insert(rule.weights.end(), 3, w);
}

void add_orbit6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.barycentric.push_back({a, b, c});
  rule.barycentric.push_back({a, c, b});
  rule.barycentric.push_back({b, a, c});
  rule.barycentric.push_back({b, c, a});
  rule.barycentric.push_back({c, a, b});
  rule.barycentric.push_back({c, b, a});
  rule.weights.insert(rule.weights.end(), 6, w);
}

TriangleRule make_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  constexpr double third = 1.0 / 3.0;
  switch (degree) {
    case 1:
      r.barycentric.push_back({third, third, third});
      r.weights.push_back(1.0);
      break;
    case 2:
      add_orbit3(r, 2.0 / 3.0, 1.0 / 3.0);
      break;
    case 3:
      // Strang-Fix six-point rule
      add_orbit6(r, 0.659027622374092, 0.231933368553031, 1.0 / 6.0);
      break;
    case 4:
      add_orbit3(r, 0.108103018168070, 0.223381589678011);
      add_orbit3(r, 0.816847572980459, 0.109951743655322);
      break;
    case 5:
      r.barycentric.push_back({third, third, third});
      r.weights.push_back(0.225);
      add_orbit3(r, 0.059715871789770, 0.132394152788506);
      add_orbit3(r, 0.797426985353087, 0.125939180544827);
      break;
    case 8:
      r.barycentric.push_back({third, third, third});
      r.weights.push_back(0.144315607677787);
      add_orbit3(r, 0.081414823414554, 0.095091634267285);
      add_orbit3(r, 0.658861384496480, 0.103217370534718);
      add_orbit3(r, 0.898905543365938, 0.032458497623198);
      add_orbit6(r, 0.008394777409958, 0.263112829634638, 0.027230314174435);
      break;
    default:
      throw ConfigError("unsupported triangle rule degree " + std::to_string(degree));
  }
  // Tabulated weights carry 15 digits; renormalize so they sum to 1 exactly.
  double sum = 0.0;
  for (double w : r.weights) sum += w;
  for (double& w : r.weights) w /= sum;
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const std::array<TriangleRule, 6> rules = {make_rule(1), make_rule(2), make_rule(3),
                                                    make_rule(4), make_rule(5), make_rule(8)};
  switch (degree) {
    case 1: return rules[0];
    case 2: return rules[1];
    case 3: return rules[2];
    case 4: return rules[3];
    case 5: return rules[4];
    case 8: return rules[5];
    default:
      throw ConfigError("unsupported triangle rule degree " + std::to_string(degree));
  }
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> (0, 1); node i is the right-most one of its pair
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[n - 1 - i] = 0.5 * w;
    rule.weights[i] = 0.5 * w;
  }
  return rule;
}

namespace {

// Each sub-rule below maps the unit cube (xi, eta1, eta2, eta3) to a pair of
// points in the reference triangle {0 <= y <= x <= 1}; the result is then
// shifted to (s, t) = (x - y, y).
struct PairBuilder {
  TrianglePairRule rule;
  void add(double x1, double y1, double x2, double y2, double w) {
    rule.first.push_back({x1 - y1, y1});
    rule.second.push_back({x2 - y2, y2});
    rule.weights.push_back(w);
  }
};

TrianglePairRule build_identical(const GaussLegendre& g) {
  PairBuilder b;
  const int n = static_cast<int>(g.nodes.size());
  for (int a = 0; a < n; ++a)
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          const double xi = g.nodes[a], e1 = g.nodes[i1], e2 = g.nodes[i2], e3 = g.nodes[i3];
          const double w =
              g.weights[a] * g.weights[i1] * g.weights[i2] * g.weights[i3] * xi * xi * xi * e1 * e1 * e2;
          b.add(xi, xi * (1.0 - e1 + e1 * e2), xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), w);
          b.add(xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1), xi, xi * (1.0 - e1 + e1 * e2), w);
          b.add(xi, xi * (e1 * (1.0 - e2 + e2 * e3)), xi * (1.0 - e1 * e2), xi * (e1 * (1.0 - e2)), w);
          b.add(xi * (1.0 - e1 * e2), xi * (e1 * (1.0 - e2)), xi, xi * (e1 * (1.0 - e2 + e2 * e3)), w);
          b.add(xi * (1.0 - e1 * e2 * e3), xi * (e1 * (1.0 - e2 * e3)), xi, xi * (e1 * (1.0 - e2)), w);
          b.add(xi, xi * (e1 * (1.0 - e2)), xi * (1.0 - e1 * e2 * e3), xi * (e1 * (1.0 - e2 * e3)), w);
        }
  return std::move(b.rule);
}

TrianglePairRule build_edge(const GaussLegendre& g) {
  PairBuilder b;
  const int n = static_cast<int>(g.nodes.size());
  for (int a = 0; a < n; ++a)
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          const double xi = g.nodes[a], e1 = g.nodes[i1], e2 = g.nodes[i2], e3 = g.nodes[i3];
          const double base = g.weights[a] * g.weights[i1] * g.weights[i2] * g.weights[i3];
          const double w0 = base * xi * xi * xi * e1 * e1;
          const double w = w0 * e2;
          b.add(xi, xi * e1 * e3, xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), w0);
          b.add(xi, xi * e1, xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), w);
          b.add(xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2), xi, xi * e1 * e2 * e3, w);
          b.add(xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3), xi, xi * e1, w);
          b.add(xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3), xi, xi * e1 * e2, w);
        }
  return std::move(b.rule);
}

TrianglePairRule build_vertex(const GaussLegendre& g) {
  PairBuilder b;
  const int n = static_cast<int>(g.nodes.size());
  for (int a = 0; a < n; ++a)
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          const double xi = g.nodes[a], e1 = g.nodes[i1], e2 = g.nodes[i2], e3 = g.nodes[i3];
          const double w = g.weights[a] * g.weights[i1] * g.weights[i2] * g.weights[i3] * xi * xi * xi * e2;
          b.add(xi, xi * e1, xi * e2, xi * e2 * e3, w);
          b.add(xi * e2, xi * e2 * e3, xi, xi * e1, w);
        }
  return std::move(b.rule);
}

}  // namespace

TrianglePairRule sauter_schwab_rule(int common_vertices, int order) {
  const GaussLegendre g = gauss_legendre(order);
  switch (common_vertices) {
    case 3: return build_identical(g);
    case 2: return build_edge(g);
    case 1: return build_vertex(g);
    default:
      throw ConfigError("Sauter-Schwab rule needs 1, 2 or 3 common vertices");
  }
}

}  // namespace casimir
