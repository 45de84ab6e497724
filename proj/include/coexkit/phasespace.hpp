#pragma once

// Cartesian marginals of a covariant phase-space observable. A generating
// operator T = sum_i t_i |eta_i><eta_i| smears position by
//   f(q) = sum_i t_i |eta_i(-q)|^2
// and momentum by
//   g(p) = sum_i t_i |eta_hat_i(-p)|^2.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coexkit/moments.hpp"

namespace coexkit {

namespace tol {
inline constexpr double generator_weights = 1e-12;
inline constexpr double uncertainty = 1e-9;
}  // namespace tol

/// Minimum of Var(f) Var(g) with hbar = 1.
inline constexpr double uncertainty_bound = 0.25;

class GeneratingOperator {
 public:
  GeneratingOperator(std::vector<double> weights, std::vector<WaveFunction> components)
      : t_(std::move(weights)), eta_(std::move(components)) {
    if (t_.empty() || t_.size() != eta_.size())
      throw std::invalid_argument("GeneratingOperator: weight/component count mismatch");
    double s = 0.0;
    for (double t : t_) {
      if (t < 0.0) throw std::invalid_argument("GeneratingOperator: negative weight");
      s += t;
    }
    if (std::abs(s - 1.0) > tol::generator_weights)
      throw std::invalid_argument("GeneratingOperator: weights sum to " + std::to_string(s));
    const Grid& g = eta_.front().grid();
    if (!g.is_symmetric()) throw std::invalid_argument("GeneratingOperator: grid must be symmetric about 0");
    for (const auto& e : eta_) {
      const Grid& h = e.grid();
      if (h.size != g.size || std::abs(h.x0 - g.x0) > 1e-12 || std::abs(h.dx - g.dx) > 1e-15)
        throw std::invalid_argument("GeneratingOperator: components live on different grids");
    }
  }

  /// Pure generator |eta><eta|.
  explicit GeneratingOperator(WaveFunction eta) : GeneratingOperator({1.0}, {std::move(eta)}) {}

  const std::vector<double>& weights() const noexcept { return t_; }
  const std::vector<WaveFunction>& components() const noexcept { return eta_; }

 private:
  std::vector<double> t_;
  std::vector<WaveFunction> eta_;
};

struct MarginalDensities {
  GridDistribution f;  // position smearing
  GridDistribution g;  // momentum smearing
};

namespace detail {

inline GridDistribution mixture(const std::vector<double>& t, const std::vector<GridDistribution>& parts) {
  const auto& first = parts.front();
  std::vector<double> w(first.size(), 0.0);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += t[i] * parts[i].weights()[k];
  double s = 0.0;
  for (double v : w) s += v;
  for (auto& v : w) v /= s;
  return {first.x0(), first.dx(), std::move(w)};
}

}  // namespace detail

inline MarginalDensities marginal_densities(const GeneratingOperator& t) {
  std::vector<GridDistribution> pos, mom;
  for (const auto& eta : t.components()) {
    pos.push_back(position_distribution(eta).reflected());
    mom.push_back(momentum_distribution(eta).reflected());
  }
  return {detail::mixture(t.weights(), pos), detail::mixture(t.weights(), mom)};
}

struct UncertaintyCheck {
  double var_f = 0.0;
  double var_g = 0.0;
  double product = 0.0;
  bool satisfied = false;
};

/// Var(f) Var(g) >= 1/4, necessary for joint measurability of the smeared
/// position and momentum.
inline UncertaintyCheck uncertainty_check(const MarginalDensities& md) {
  UncertaintyCheck u;
  u.var_f = variance(md.f);
  u.var_g = variance(md.g);
  u.product = u.var_f * u.var_g;
  u.satisfied = u.product >= uncertainty_bound - tol::uncertainty;
  return u;
}

}  // namespace coexkit
