#pragma once

// Spin-1/2 constructions: the four-outcome joint observable of smeared
// sigma_1 and sigma_2, recovery of sharp projections from binary smeared
// observables, and the sphere observable
//   M(Z) = (1/2pi) ∫_Z ½(I + n·σ) dΩ(n)
// evaluated by product quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coexkit/linalg.hpp"
#include "coexkit/povm.hpp"

namespace coexkit {

// ---- four-outcome spin joint observable ------------------------------------

/// G_jk = ¼(I + n_jk·σ), n_{±,+} = (±e1 + e2)/√2, n_{±,-} = (±e1 - e2)/√2.
inline JointPOVM build_spin_joint() {
  const double s = std::numbers::sqrt2 / 2.0;
  const std::array<double, 2> sign = {+1.0, -1.0};
  std::vector<std::vector<HermitianMatrix>> g(2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const Vec3 n{sign[j] * s, sign[k] * s, 0.0};
      g[j].push_back(bloch_to_matrix({0.25, scaled(n, 0.25)}));
    }
  return JointPOVM({"+", "-"}, {"+", "-"}, std::move(g));
}

/// Marginals E1 (row sums) and E2 (column sums) of the spin joint observable.
inline std::pair<DiscretePOVM, DiscretePOVM> spin_marginals(const JointPOVM& g) {
  if (g.dim() != 2 || g.rows() != 2 || g.cols() != 2)
    throw std::invalid_argument("spin_marginals: expected a 2x2-outcome qubit joint observable");
  return marginals(g);
}

struct SharpReconstruction {
  DiscretePOVM projections;             // {P+, P-}
  std::vector<std::vector<double>> mu;  // P_k = sum_j mu(k,j) E_j
  double contrast = 0.0;                // c in E± = ½(1±c)P+ + ½(1∓c)P-
  Vec3 axis{0.0, 0.0, 0.0};
};

/// Inverts E± = ½(1±c)P+ + ½(1∓c)P- for a binary unbiased qubit POVM.
/// c = 2|a| where E+ = ½I + a·σ.
inline SharpReconstruction reconstruct_sharp(const DiscretePOVM& e) {
  if (e.size() != 2 || e.dim() != 2) throw std::invalid_argument("reconstruct_sharp: expected a binary qubit POVM");
  const QubitBloch plus = matrix_to_bloch(e[0]);
  if (std::abs(plus.a0 - 0.5) > 1e-10)
    throw std::invalid_argument("reconstruct_sharp: effect is biased (a0 != 1/2)");
  const double c = 2.0 * norm(plus.a);
  if (c < 1e-12) throw std::domain_error("reconstruct_sharp: contrast c = 0, smearing is singular");
  const auto lambda = StochasticMatrix::binary_symmetric(c);
  auto un = unsmear(e, lambda);
  SharpReconstruction out{DiscretePOVM(e.labels(), un.operators), std::move(un.mu), c, scaled(plus.a, 1.0 / norm(plus.a))};
  return out;
}

// ---- sphere observable -------------------------------------------------------

struct Direction {
  Vec3 v{0.0, 0.0, 1.0};

  Direction() = default;
  explicit Direction(const Vec3& u) : v(u) {
    if (std::abs(norm(u) - 1.0) > 1e-12) throw std::invalid_argument("Direction: not a unit vector");
  }
  static Direction normalize(const Vec3& u) {
    const double n = norm(u);
    if (!(n > 0.0)) throw std::invalid_argument("Direction: zero vector");
    return Direction(scaled(u, 1.0 / n));
  }
};

struct QuadratureNode {
  Vec3 n;
  double weight;
};

/// Nodes on S^2 with weights summing to 4 pi.
struct SphereQuadrature {
  std::vector<QuadratureNode> nodes;
  std::size_t theta_order = 0;  // Gauss-Legendre points in cos(theta)
  std::size_t phi_order = 0;    // trapezoid points in phi
};

namespace detail {

// (P_n(z), P_n'(z)) by the Bonnet recurrence.
inline std::pair<double, double> legendre(std::size_t n, double z) {
  double p0 = 1.0, p1 = z;
  for (std::size_t k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace detail

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = detail::legendre(n, z).second;
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Product rule: Gauss-Legendre in cos(theta), applied separately on the
/// southern [-1, 0] and northern [0, 1] halves (theta_order / 2 points each),
/// times a periodic trapezoid in phi. The equator never carries a node.
inline SphereQuadrature make_sphere_quadrature(std::size_t theta_order = 64, std::size_t phi_order = 128) {
  if (theta_order < 2 || theta_order % 2 != 0) throw std::invalid_argument("sphere quadrature: theta order must be even and >= 2");
  if (phi_order < 1) throw std::invalid_argument("sphere quadrature: phi order must be positive");
  const auto [x, w] = gauss_legendre(theta_order / 2);
  SphereQuadrature q;
  q.theta_order = theta_order;
  q.phi_order = phi_order;
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(phi_order);
  for (int half = 0; half < 2; ++half) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      // map [-1, 1] to [-1, 0] or [0, 1]
      const double z = half == 0 ? 0.5 * (x[i] - 1.0) : 0.5 * (x[i] + 1.0);
      const double wz = 0.5 * w[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (std::size_t j = 0; j < phi_order; ++j) {
        const double phi = (static_cast<double>(j) + 0.5) * dphi;
        q.nodes.push_back({{s * std::cos(phi), s * std::sin(phi), z}, wz * dphi});
      }
    }
  }
  return q;
}

/// M(Z) for the region Z given by an indicator on unit vectors.
inline HermitianMatrix sphere_effect(const std::function<bool(const Vec3&)>& region, const SphereQuadrature& quad) {
  if (quad.nodes.empty()) throw std::invalid_argument("sphere_effect: empty quadrature");
  double a0 = 0.0;
  Vec3 a{0.0, 0.0, 0.0};
  for (const auto& node : quad.nodes) {
    if (!region(node.n)) continue;
    a0 += node.weight;
    for (int k = 0; k < 3; ++k) a[k] += node.weight * node.n[k];
  }
  // (1/2pi) * ½ * sum w (I + n·σ)
  const double s = 1.0 / (4.0 * std::numbers::pi);
  return bloch_to_matrix({s * a0, scaled(a, s)});
}

namespace detail {

// Orthonormal frame (u, v, n) with n as third axis.
inline std::array<Vec3, 3> frame_with_pole(const Vec3& n) {
  const Vec3 helper = std::abs(n[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 u = cross(helper, n);
  u = scaled(u, 1.0 / norm(u));
  const Vec3 v = cross(n, u);
  return {u, v, n};
}

}  // namespace detail

/// The quadrature expressed in a frame whose pole is `pole`.
inline SphereQuadrature rotate_quadrature(const SphereQuadrature& quad, const Direction& pole) {
  const auto f = detail::frame_with_pole(pole.v);
  SphereQuadrature out = quad;
  for (auto& node : out.nodes) {
    const Vec3 m = node.n;
    for (int k = 0; k < 3; ++k) node.n[k] = m[0] * f[0][k] + m[1] * f[1][k] + m[2] * f[2][k];
  }
  return out;
}

/// {M(Z+), M(Z-)} for the hemispheres n'·n > 0 and n'·n < 0. The quadrature
/// is laid out with its pole along n so the hemisphere boundary falls
/// between node rings; M- is formed as I - M+.
inline DiscretePOVM hemisphere_marginal(const Direction& n, const SphereQuadrature& quad) {
  const auto rotated = rotate_quadrature(quad, n);
  const Vec3 axis = n.v;
  const HermitianMatrix plus = sphere_effect([&](const Vec3& m) { return dot(m, axis) > 0.0; }, rotated);
  return DiscretePOVM({"+", "-"}, {plus, HermitianMatrix::identity(2) - plus});
}

}  // namespace coexkit
