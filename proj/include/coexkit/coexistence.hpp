#pragma once

// Joint measurability of two effects / binary observables.
//
// Qubits have a closed-form criterion in terms of unsharpness phi, bias beta
// and the overlap of Bloch vectors. For any small dimension the question is
// also posed directly as a feasibility problem: two binary POVMs {A, I-A},
// {B, I-B} have a joint observable iff some Hermitian G satisfies
//
//   G >= 0,  A - G >= 0,  B - G >= 0,  I - A - B + G >= 0,
//
// which is searched numerically and serves as an independent check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "coexkit/linalg.hpp"
#include "coexkit/povm.hpp"
#include "coexkit/simplex.hpp"

namespace coexkit {

namespace tol {
inline constexpr double radicand_clamp = 1e-14;
inline constexpr double coexistence_margin = 1e-12;
}  // namespace tol

namespace detail {

inline std::pair<double, double> unsharpness_roots(const QubitBloch& q) {
  const double n2 = dot(q.a, q.a);
  const double r1 = q.a0 * q.a0 - n2;
  const double r2 = (1.0 - q.a0) * (1.0 - q.a0) - n2;
  if (q.a0 < -tol::radicand_clamp || q.a0 > 1.0 + tol::radicand_clamp || r1 < -tol::radicand_clamp ||
      r2 < -tol::radicand_clamp)
    throw std::invalid_argument("not a qubit effect: a0 = " + std::to_string(q.a0) +
                                ", |a| = " + std::to_string(std::sqrt(n2)));
  return {std::sqrt(std::max(r1, 0.0)), std::sqrt(std::max(r2, 0.0))};
}

}  // namespace detail

/// Degree of unsharpness phi(A) in [0, 1]; 0 for projections.
inline double unsharpness(const QubitBloch& a) {
  const auto [s, t] = detail::unsharpness_roots(a);
  return s + t;
}

struct Bias {
  double beta = 0.0;
  double x = 0.0;  // 2 a0 - 1 = phi * beta
};

inline Bias bias(const QubitBloch& a) {
  const auto [s, t] = detail::unsharpness_roots(a);
  return {s - t, 2.0 * a.a0 - 1.0};
}

struct CoexistenceReport {
  bool coexistent = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  struct Helpers {
    double F = 0.0;  // phi(A)^2 + phi(B)^2
    double B = 0.0;  // beta(A)^2 + beta(B)^2
    double x = 0.0;
    double y = 0.0;
    double phi_a = 0.0;
    double phi_b = 0.0;
    double beta_a = 0.0;
    double beta_b = 0.0;
  } helpers;
};

namespace detail {

inline CoexistenceReport::Helpers helpers(const QubitBloch& a, const QubitBloch& b) {
  CoexistenceReport::Helpers h;
  h.phi_a = unsharpness(a);
  h.phi_b = unsharpness(b);
  const Bias ba = bias(a), bb = bias(b);
  h.beta_a = ba.beta;
  h.beta_b = bb.beta;
  h.x = ba.x;
  h.y = bb.x;
  h.F = h.phi_a * h.phi_a + h.phi_b * h.phi_b;
  h.B = h.beta_a * h.beta_a + h.beta_b * h.beta_b;
  return h;
}

}  // namespace detail

/// Qubit effects A = a0 I + a·σ and B = b0 I + b·σ are coexistent iff
///   ½[F(2 - B) + B(2 - F)] + (xy - 4 a·b)^2 >= 1.
/// `slack` widens the accepted band below the boundary.
inline CoexistenceReport coexist_qubit(const QubitBloch& a, const QubitBloch& b,
                                       double slack = tol::coexistence_margin) {
  CoexistenceReport r;
  r.helpers = detail::helpers(a, b);
  const auto& h = r.helpers;
  const double overlap = h.x * h.y - 4.0 * dot(a.a, b.a);
  r.lhs = 0.5 * (h.F * (2.0 - h.B) + h.B * (2.0 - h.F)) + overlap * overlap;
  r.rhs = 1.0;
  r.margin = r.lhs - r.rhs;
  r.coexistent = r.margin >= -slack;
  return r;
}

/// Unbiased special case (a0 = b0 = ½): 16 |a x b|^2 <= (1 - 4|a|^2)(1 - 4|b|^2).
/// lhs is the unsharpness product, rhs the noncommutativity term; the margin
/// coincides with the general criterion's margin.
inline CoexistenceReport coexist_unbiased(const Vec3& a, const Vec3& b, double slack = tol::coexistence_margin) {
  if (norm(a) > 0.5 + tol::radicand_clamp || norm(b) > 0.5 + tol::radicand_clamp)
    throw std::invalid_argument("coexist_unbiased: Bloch vector longer than 1/2 is not an unbiased effect");
  CoexistenceReport r;
  r.helpers = detail::helpers({0.5, a}, {0.5, b});
  const Vec3 c = cross(a, b);
  r.lhs = (1.0 - 4.0 * dot(a, a)) * (1.0 - 4.0 * dot(b, b));
  r.rhs = 16.0 * dot(c, c);
  r.margin = r.lhs - r.rhs;
  r.coexistent = r.margin >= -slack;
  return r;
}

// ---- numerical feasibility oracle -------------------------------------------

enum class FeasibilityStatus { feasible, boundary_uncertain, infeasible };

inline const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible: return "feasible";
    case FeasibilityStatus::boundary_uncertain: return "boundary-uncertain";
    case FeasibilityStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct FeasibilityConfig {
  std::size_t starts = 16;
  std::size_t max_iterations = 2000;  // per start
  std::uint64_t seed = 0;
  double feas_tol = 1e-7;
  double uncertain_tol = 1e-3;  // residuals in (feas_tol, uncertain_tol) are not decided
};

struct FeasibilityResult {
  bool feasible = false;
  FeasibilityStatus status = FeasibilityStatus::infeasible;
  std::optional<JointPOVM> witness;
  double residual = 0.0;   // max(0, best objective)
  double objective = 0.0;  // best max_k -lambda_min(block_k); negative means strictly feasible
  std::size_t evaluations = 0;
  std::size_t best_start = 0;
};

namespace detail {

inline std::size_t hermitian_parameter_count(std::size_t d) { return d * d; }

inline HermitianMatrix hermitian_from_parameters(const std::vector<double>& p, std::size_t d) {
  Matrix m(d);
  std::size_t k = d;
  for (std::size_t i = 0; i < d; ++i) m(i, i) = p[i];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j, k += 2) {
      m(i, j) = cplx(p[k], p[k + 1]);
      m(j, i) = cplx(p[k], -p[k + 1]);
    }
  return HermitianMatrix::hermitian_part(m);
}

inline std::vector<double> parameters_from_hermitian(const HermitianMatrix& h) {
  const std::size_t d = h.dim();
  std::vector<double> p(d * d);
  std::size_t k = d;
  for (std::size_t i = 0; i < d; ++i) p[i] = h(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j, k += 2) {
      p[k] = h(i, j).real();
      p[k + 1] = h(i, j).imag();
    }
  return p;
}

struct JointBlocks {
  HermitianMatrix pp, pm, mp, mm;
};

inline JointBlocks joint_blocks(const HermitianMatrix& g, const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto id = HermitianMatrix::identity(g.dim());
  return {g, a - g, b - g, id - a - b + g};
}

inline double joint_violation(const JointBlocks& j) {
  return std::max({-min_eigenvalue(j.pp), -min_eigenvalue(j.pm), -min_eigenvalue(j.mp), -min_eigenvalue(j.mm)});
}

}  // namespace detail

/// Searches for a joint observable of two binary POVMs by multi-start
/// simplex descent on the worst block eigenvalue. Outcome 0 of each POVM is
/// taken as its "+" effect.
inline FeasibilityResult joint_feasibility(const DiscretePOVM& e1, const DiscretePOVM& e2,
                                           const FeasibilityConfig& cfg = {}) {
  if (e1.size() != 2 || e2.size() != 2) throw std::invalid_argument("joint_feasibility: both POVMs must be binary");
  if (e1.dim() != e2.dim()) throw std::invalid_argument("joint_feasibility: dimension mismatch");
  if (e1.dim() > 8) throw std::invalid_argument("joint_feasibility: dimension above 8");
  if (cfg.starts == 0) throw std::invalid_argument("joint_feasibility: need at least one start");

  const std::size_t d = e1.dim();
  const HermitianMatrix& a = e1[0];
  const HermitianMatrix& b = e2[0];

  auto objective = [&](const std::vector<double>& p) {
    return detail::joint_violation(detail::joint_blocks(detail::hermitian_from_parameters(p, d), a, b));
  };

  std::vector<std::vector<double>> seeds = {
      detail::parameters_from_hermitian(HermitianMatrix::hermitian_part(0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix()))),
      detail::parameters_from_hermitian(0.5 * a),
      detail::parameters_from_hermitian(0.5 * b),
  };
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-0.25, 0.25);
  for (std::size_t s = seeds.size(); s < cfg.starts; ++s) {
    auto p = seeds[s % 3];
    for (auto& v : p) v += noise(rng);
    seeds.push_back(std::move(p));
  }
  seeds.resize(cfg.starts);

  SimplexOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.target = 0.0;

  FeasibilityResult out;
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const SimplexResult r = minimize_simplex(objective, seeds[s], opt);
    out.evaluations += r.evaluations;
    if (r.value < best) {
      best = r.value;
      best_x = r.x;
      out.best_start = s;
    }
    if (best <= opt.target) break;
  }

  out.objective = best;
  out.residual = std::max(best, 0.0);
  if (out.residual <= cfg.feas_tol) {
    out.status = FeasibilityStatus::feasible;
  } else if (out.residual < cfg.uncertain_tol) {
    out.status = FeasibilityStatus::boundary_uncertain;
  }
  out.feasible = out.status == FeasibilityStatus::feasible;
  if (out.feasible) {
    auto j = detail::joint_blocks(detail::hermitian_from_parameters(best_x, d), a, b);
    out.witness.emplace(e1.labels(), e2.labels(),
                        std::vector<std::vector<HermitianMatrix>>{{j.pp, j.pm}, {j.mp, j.mm}},
                        std::max(4.0 * cfg.feas_tol, tol::effect));
  }
  return out;
}

}  // namespace coexkit
