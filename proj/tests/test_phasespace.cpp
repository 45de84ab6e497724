#include <gtest/gtest.h>

#include "coexkit/phasespace.hpp"
#include "test_support.hpp"

using namespace coexkit;
using namespace coexkit::testing;

namespace {

GeneratingOperator random_gaussian_mixture(const Grid& g, Rng& rng) {
  const std::size_t n = 1 + rng() % 4;
  std::vector<double> t(n);
  double s = 0.0;
  for (auto& v : t) s += (v = uniform(rng, 0.05, 1.0));
  for (auto& v : t) v /= s;
  std::vector<WaveFunction> eta;
  for (std::size_t i = 0; i < n; ++i)
    eta.push_back(gaussian_state(g, uniform(rng, -3, 3), uniform(rng, 0.3, 2.5), uniform(rng, -2, 2), uniform(rng, -0.5, 0.5)));
  return {t, std::move(eta)};
}

}  // namespace

TEST(MarginalDensities, GroundGaussian) {
  const auto md = marginal_densities(GeneratingOperator(hermite_state(0, default_grid())));
  EXPECT_NEAR(variance(md.f), 0.5, 1e-6);
  EXPECT_NEAR(variance(md.g), 0.5, 1e-6);
  const auto u = uncertainty_check(md);
  EXPECT_NEAR(u.product, 0.25, 1e-6);
  EXPECT_TRUE(u.satisfied);
}

TEST(MarginalDensities, SqueezedGaussian) {
  // e^{-x^2/(2 s^2)}: |eta|^2 has variance s^2/2, |eta_hat|^2 has variance 1/(2 s^2)
  const auto md = marginal_densities(GeneratingOperator(gaussian_state(default_grid(), 0.0, 2.0)));
  EXPECT_NEAR(variance(md.f), 2.0, 1e-6);
  EXPECT_NEAR(variance(md.g), 0.125, 1e-6);
  EXPECT_NEAR(uncertainty_check(md).product, 0.25, 1e-6);
}

TEST(MarginalDensities, FirstHermiteFunction) {
  const auto md = marginal_densities(GeneratingOperator(hermite_state(1, default_grid())));
  EXPECT_NEAR(variance(md.f), 1.5, 1e-6);
  EXPECT_NEAR(variance(md.g), 1.5, 1e-6);
  const auto u = uncertainty_check(md);
  EXPECT_NEAR(u.product, 2.25, 1e-5);
  EXPECT_TRUE(u.satisfied);
}

TEST(MarginalDensities, ReflectionFlipsMeans) {
  const Grid g = default_grid();
  const auto eta = gaussian_state(g, 1.25, 0.9, -0.7);
  const auto md = marginal_densities(GeneratingOperator(eta));
  EXPECT_NEAR(mean(md.f), -1.25, 1e-9);
  EXPECT_NEAR(mean(md.g), 0.7, 1e-9);
}

TEST(GeneratingOperatorType, Validation) {
  const Grid g = default_grid();
  const auto a = hermite_state(0, g);
  EXPECT_THROW(GeneratingOperator({0.5, 0.6}, {a, a}), std::invalid_argument);
  EXPECT_THROW(GeneratingOperator({1.5, -0.5}, {a, a}), std::invalid_argument);
  EXPECT_THROW(GeneratingOperator({1.0}, {a, a}), std::invalid_argument);
  const Grid shifted{0.0, g.dx, g.size};
  EXPECT_THROW(GeneratingOperator(gaussian_state(shifted, 20.0)), std::invalid_argument);
  EXPECT_THROW(GeneratingOperator({0.5, 0.5}, {a, hermite_state(0, Grid::symmetric(2048, 20.0))}), std::invalid_argument);
}

TEST(Uncertainty, RandomGaussianMixtures) {
  const Grid g = default_grid();
  Rng rng(61);
  double lowest = 1e300;
  for (int t = 0; t < 200; ++t) {
    const auto u = uncertainty_check(marginal_densities(random_gaussian_mixture(g, rng)));
    EXPECT_TRUE(u.satisfied) << u.product;
    lowest = std::min(lowest, u.product);
  }
  EXPECT_GE(lowest, 0.25 - 1e-9);
}

TEST(Uncertainty, PureUnchirpedGaussiansSaturate) {
  const Grid g = default_grid();
  Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    const auto eta = gaussian_state(g, uniform(rng, -3, 3), uniform(rng, 0.3, 2.5), uniform(rng, -2, 2));
    EXPECT_NEAR(uncertainty_check(marginal_densities(GeneratingOperator(eta))).product, 0.25, 1e-6);
  }
}

TEST(MarginalDensities, LawOfTotalVariance) {
  const Grid g = default_grid();
  Rng rng(63);
  for (int t = 0; t < 20; ++t) {
    const auto op = random_gaussian_mixture(g, rng);
    const auto md = marginal_densities(op);
    double within = 0.0, m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < op.weights().size(); ++i) {
      const auto p = position_distribution(op.components()[i]).reflected();
      within += op.weights()[i] * variance(p);
      m += op.weights()[i] * mean(p);
      m2 += op.weights()[i] * mean(p) * mean(p);
    }
    EXPECT_NEAR(variance(md.f), within + (m2 - m * m), 1e-8);
  }
}

TEST(MarginalDensities, MomentumDensityMatchesDirectTransform) {
  const Grid g = Grid::symmetric(512, 16.0);
  const Grid pg = momentum_grid(g);
  Rng rng(64);
  for (int t = 0; t < 3; ++t) {
    const auto op = random_gaussian_mixture(g, rng);
    const auto md = marginal_densities(op);
    std::vector<double> w(g.size, 0.0);
    for (std::size_t i = 0; i < op.weights().size(); ++i) {
      const auto amp = direct_momentum_amplitudes(op.components()[i]);
      double s = 0.0;
      for (const auto& z : amp) s += std::norm(z) * pg.dx;
      for (std::size_t k = 0; k < g.size; ++k) w[g.size - 1 - k] += op.weights()[i] * std::norm(amp[k]) * pg.dx / s;
    }
    for (std::size_t k = 0; k < g.size; ++k) EXPECT_NEAR(md.g.weights()[k], w[k], 1e-8);
  }
}
