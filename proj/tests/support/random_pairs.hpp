#pragma once

// Random well-shaped triangle pairs that share three (identical), two (edge)
// or one (vertex) vertices, listed with the shared vertices first.

#include <array>
#include <cmath>
#include <random>

#include "casimir/geometry.hpp"

namespace ref {

using casimir::Vec3;

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  return Vec3(n01(rng), n01(rng), n01(rng)).normalized();
}

// Triangle with minimum angle of roughly 30 degrees or more, edge ~ size.
inline std::array<Vec3, 3> random_triangle(std::mt19937_64& rng, double size) {
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  const Vec3 e1 = random_unit(rng);
  const Vec3 e2 = e1.cross(random_unit(rng)).normalized();
  const Vec3 o = 3.0 * size * Vec3(u(rng), u(rng), u(rng));
  const Vec3 b = o + size * (1.0 + u(rng)) * e1;
  const Vec3 c = o + size * ((0.5 + u(rng)) * e1 + (0.85 + u(rng)) * e2);
  return {o, b, c};
}

struct Pair {
  std::array<Vec3, 3> a, b;
};

inline Pair random_touching_pair(std::mt19937_64& rng, int common, double size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto a = random_triangle(rng, size);
  if (common == 3) return {a, a};
  const Vec3 n = (a[1] - a[0]).cross(a[2] - a[0]).normalized();
  if (common == 2) {
    // Fold the reflected apex about the shared edge a0-a1 by 20..160 degrees.
    const Vec3 e = (a[1] - a[0]).normalized();
    const Vec3 in = n.cross(e);  // points into a from the edge
    const double along = (0.3 + 0.4 * u(rng)) * (a[1] - a[0]).norm();
    const double height = (0.7 + 0.6 * u(rng)) * std::abs((a[2] - a[0]).dot(in));
    const double fold = (20.0 + 140.0 * u(rng)) * std::numbers::pi / 180.0;
    const Vec3 apex = a[0] + along * e - height * (std::cos(fold) * in + std::sin(fold) * n);
    return {a, {a[0], a[1], apex}};
  }
  const Vec3 d1 = -(a[1] - a[0]).normalized();
  const Vec3 d2 = (d1.cross(n) * std::cos(1.0 + u(rng)) + n * std::sin(0.3 + u(rng))).normalized();
  return {a, {a[0], a[0] + size * (0.8 + 0.4 * u(rng)) * d1, a[0] + size * (0.8 + 0.4 * u(rng)) * d2}};
}

}  // namespace ref
