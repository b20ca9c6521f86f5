#pragma once

#include <array>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/kernels.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Kernel moments of a triangle pair (T, T') with centroids c, c' and local
/// coordinates ρ = r - c, ρ' = r' - c':
///
///   G = ∫∫ k,   X = ∫∫ ρ k,   Y = ∫∫ ρ' k,   Q = ∫∫ ρ·ρ' k.
///
/// Every Galerkin EFIE entry restricted to the pair follows from these eight
/// numbers.
template <class T>
struct PairMoments {
  using V = Eigen::Matrix<T, 3, 1>;
  T G{};
  V X = V::Zero();
  V Y = V::Zero();
  T Q{};

  PairMoments transposed() const { return {G, Y, X, Q}; }
  PairMoments& operator+=(const PairMoments& o) {
    G += o.G;
    X += o.X;
    Y += o.Y;
    Q += o.Q;
    return *this;
  }
  template <class U>
  PairMoments<U> cast() const {
    return {U(G), X.template cast<U>(), Y.template cast<U>(), U(Q)};
  }
};

/// Vertices of a touching pair reordered so the shared vertices come first,
/// in the same order, in both triangles.
struct TouchingPair {
  int other = -1;
  int common = 0;
  std::array<int, 3> perm_self{};
  std::array<int, 3> perm_other{};
  PairMoments<double> static_part;  // moments of 1/(4πR), oriented (self, other)
};

/// Finds the shared vertices of two triangles; returns the count (0..3) and
/// fills the permutations.
int touching_permutation(const std::array<int, 3>& a, const std::array<int, 3>& b, std::array<int, 3>& perm_a,
                         std::array<int, 3>& perm_b);

/// Moments of 1/(4πR) over a touching pair given with shared vertices first.
PairMoments<double> static_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                        const TrianglePairRule& rule);

/// Moments of the smooth remainder (e^{-κR} - 1)/(4πR) over a touching pair.
template <class T>
PairMoments<T> remainder_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                      const TrianglePairRule& rule, T kappa);

/// Moments of a smooth kernel by a product of triangle rules (no singularity).
template <class T>
PairMoments<T> regular_pair_moments(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b,
                                    const TriangleRule& ra, const TriangleRule& rb, T kappa);

/// Per-mesh table of touching triangle pairs and their κ-independent static
/// moments. Built once, then shared read-only across all frequencies.
class SingularCache {
 public:
  SingularCache(const Mesh& mesh, int static_order = 12, int remainder_order = 6);

  /// All triangles sharing at least one vertex with t (t itself included).
  const std::vector<TouchingPair>& touching(int t) const { return touching_[t]; }
  const TrianglePairRule& remainder_rule(int common) const { return remainder_rules_[common - 1]; }
  int static_order() const { return static_order_; }
  int remainder_order() const { return remainder_order_; }
  std::size_t triangle_count() const { return touching_.size(); }

 private:
  int static_order_;
  int remainder_order_;
  std::vector<std::vector<TouchingPair>> touching_;
  std::array<TrianglePairRule, 3> remainder_rules_;
};

/// Full moments of the e^{-κR}/(4πR) kernel for a touching pair (t, other):
/// cached static part plus the remainder at this κ.
template <class T>
PairMoments<T> singular_pair(const Mesh& mesh, int t, const TouchingPair& pair, const SingularCache& cache,
                             T kappa);

}  // namespace casimir
