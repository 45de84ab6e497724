#include <gtest/gtest.h>

#include <numbers>

#include "coexkit/moments.hpp"
#include "test_support.hpp"

using namespace coexkit;
using namespace coexkit::testing;

namespace {

// Standard Gaussian on x_i = i dx, |x| <= 10.
GridDistribution standard_gaussian(double dx) {
  const auto m = static_cast<int>(std::lround(10.0 / dx));
  std::vector<double> w;
  for (int i = -m; i <= m; ++i) w.push_back(std::exp(-0.5 * (i * dx) * (i * dx)));
  double s = 0.0;
  for (double v : w) s += v;
  for (auto& v : w) v /= s;
  return {-m * dx, dx, w};
}

double relative_error(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// (2j-1)!! for even k, 0 for odd k.
double gaussian_moment(unsigned k) {
  if (k % 2) return 0.0;
  double r = 1.0;
  for (unsigned j = 1; j < k; j += 2) r *= j;
  return r;
}

GridDistribution random_bounded(Rng& rng, std::size_t n, double dx) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& v : w) s += (v = uniform(rng));
  for (auto& v : w) v /= s;
  return {uniform(rng, -2, 1), dx, w};
}

}  // namespace

TEST(Moment, PointMass) {
  const auto p = GridDistribution::point_mass(2.0);
  const std::vector<double> want = {1, 2, 4, 8, 16};
  for (unsigned k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(moment(p, k), want[k]);
}

TEST(Moment, SymmetricHasVanishingOddMoments) {
  const auto p = gaussian_kernel(0.7, 0.01);
  for (unsigned k = 1; k <= 11; k += 2) EXPECT_NEAR(moment(p, k), 0.0, 1e-12) << k;
  const GridDistribution tri(-1.0, 0.5, {0.1, 0.2, 0.4, 0.2, 0.1});
  for (unsigned k = 1; k <= 9; k += 2) EXPECT_NEAR(moment(tri, k), 0.0, 1e-12);
}

TEST(Moment, DiscretizedStandardGaussian) {
  const auto p = standard_gaussian(0.01);
  EXPECT_NEAR(moment(p, 2), 1.0, 1e-6);
  EXPECT_NEAR(moment(p, 4), 3.0, 1e-5);
  EXPECT_NEAR(variance(p), 1.0, 1e-6);
}

TEST(Moment, HighOrdersMatchAnalyticGaussian) {
  const auto p = gaussian_kernel(1.0, 0.005);
  for (unsigned k = 0; k <= 16; k += 2) EXPECT_LT(relative_error(moment(p, k), gaussian_moment(k)), 1e-9) << k;
}

TEST(Variance, Examples) {
  EXPECT_DOUBLE_EQ(variance(GridDistribution::point_mass(3.5)), 0.0);
  const GridDistribution p(-1.0, 0.25, {0.1, 0.3, 0.2, 0.4});
  const GridDistribution shifted(6.0, 0.25, p.weights());
  EXPECT_NEAR(variance(p), variance(shifted), 1e-12);
}

TEST(Convolve, Examples) {
  const GridDistribution p(-0.5, 0.25, {0.1, 0.3, 0.2, 0.4});
  const auto same = convolve(GridDistribution::point_mass(0.0, 0.25), p);
  EXPECT_DOUBLE_EQ(same.x0(), p.x0());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(same.weights()[i], p.weights()[i], 1e-16);

  const auto ab = convolve(GridDistribution::point_mass(1.5), GridDistribution::point_mass(-4.0));
  ASSERT_EQ(ab.size(), 1u);
  EXPECT_DOUBLE_EQ(ab.x0(), -2.5);

  const double dx = 0.01;
  const auto g = convolve(gaussian_kernel(0.5, dx), gaussian_kernel(0.8, dx));
  EXPECT_NEAR(moment(g, 2), 0.25 + 0.64, 1e-6);
  EXPECT_NEAR(moment(g, 1), 0.0, 1e-12);

  EXPECT_THROW(convolve(gaussian_kernel(1, 0.01), gaussian_kernel(1, 0.02)), std::invalid_argument);
}

TEST(ForwardMoments, Examples) {
  const MomentSequence delta({1, 0, 0, 0, 0});
  const MomentSequence p({1, 2, 4, 8, 16});
  const MomentSequence gauss({1, 0, 1, 0, 3});
  auto f = forward_moments(delta, p, 4);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(f[k], p[k]);

  f = forward_moments(gauss, p, 4);
  const std::vector<double> want = {1, 2, 5, 14, 43};
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(f[k], want[k]);

  const auto g = forward_moments(p, gauss, 4);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(f[k], g[k]);

  EXPECT_THROW(forward_moments(gauss, p, 5), std::invalid_argument);
}

TEST(ForwardMoments, ConsistentWithGridConvolution) {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const double dx = 0.05;
    const auto mu = random_bounded(rng, 30, dx), p = random_bounded(rng, 40, dx);
    const auto direct = moments(convolve(mu, p), 8);
    const auto formula = forward_moments(moments(mu, 8), moments(p, 8), 8);
    for (std::size_t k = 0; k <= 8; ++k) EXPECT_LT(std::abs(direct[k] - formula[k]), 1e-6 * std::max(1.0, std::abs(direct[k])));
  }
}

TEST(ReconstructMoments, Examples) {
  const MomentSequence gauss({1, 0, 1, 0, 3});
  const auto r = reconstruct_moments(MomentSequence({1, 2, 5, 14, 43}), gauss, 4);
  const std::vector<double> want = {1, 2, 4, 8, 16};
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(r[k], want[k]);

  const MomentSequence c({1, 0.3, 2.0, -1.0});
  const auto same = reconstruct_moments(c, MomentSequence({1, 0, 0, 0}), 3);
  for (std::size_t k = 0; k <= 3; ++k) EXPECT_DOUBLE_EQ(same[k], c[k]);
}

TEST(ReconstructMoments, RoundTripOnBoundedDistributions) {
  Rng rng(52);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto mu = moments(random_bounded(rng, 20, 0.1), 8);
    const auto p = moments(random_bounded(rng, 20, 0.1), 8);
    const auto back = reconstruct_moments(forward_moments(mu, p, 8), mu, 8);
    for (std::size_t k = 0; k <= 8; ++k) worst = std::max(worst, relative_error(back[k], p[k]));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(ReconstructMoments, RoundTripToOrderTwelve) {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    const auto mu = moments(random_bounded(rng, 20, 0.1), 12);
    const auto p = moments(random_bounded(rng, 20, 0.1), 12);
    const auto c = forward_moments(mu, p, 12);
    const auto back = reconstruct_moments(c, mu, 12);
    // scale includes |c_k|: when c_k >> p_k the input's own rounding dominates
    for (std::size_t k = 0; k <= 12; ++k)
      EXPECT_LT(std::abs(back[k] - p[k]), 1e-10 * std::max({1.0, std::abs(p[k]), std::abs(c[k])}));
  }
}

TEST(MomentSequenceType, RequiresUnitZerothMoment) {
  EXPECT_THROW(MomentSequence({0.9, 1.0}), std::invalid_argument);
  EXPECT_THROW(MomentSequence(std::vector<double>{}), std::invalid_argument);
}

TEST(GrowthCheck, Examples) {
  std::vector<double> pm(13), gm(13), fast(13);
  double f = 1.0;
  for (unsigned k = 0; k <= 12; ++k) {
    pm[k] = std::pow(2.0, k);
    gm[k] = gaussian_moment(k);
    if (k > 0) f *= k;
    fast[k] = f * std::pow(3.0, k);
  }
  EXPECT_TRUE(growth_check(MomentSequence(pm), 1, 2).passed);
  EXPECT_TRUE(growth_check(MomentSequence(gm), 1, 1).passed);
  const auto g = growth_check(MomentSequence(fast), 1, 2);
  EXPECT_FALSE(g.passed);
  ASSERT_TRUE(g.first_violation);
  EXPECT_EQ(*g.first_violation, 1u);
  EXPECT_THROW(growth_check(MomentSequence(pm), 0, 2), std::invalid_argument);
}

TEST(GaussianKernel, ZeroWidthIsPointMass) {
  const auto k = gaussian_kernel(0.0, 0.01);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_DOUBLE_EQ(k.x0(), 0.0);
}

TEST(HermiteState, GroundStateAndParity) {
  const Grid g = default_grid();
  const auto h0 = hermite_state(0, g);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < g.size; ++i)
    if (std::abs(h0.amplitudes()[i]) > std::abs(h0.amplitudes()[peak])) peak = i;
  EXPECT_NEAR(g.at(peak), 0.0, g.dx);
  for (std::size_t i = 0; i < g.size; i += 97)
    EXPECT_NEAR(h0.amplitudes()[i].real(), std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * g.at(i) * g.at(i)), 1e-9);

  const auto p1 = position_distribution(hermite_state(1, g));
  EXPECT_NEAR(moment(p1, 1), 0.0, 1e-12);
}

TEST(HermiteState, Orthonormality) {
  const Grid g = default_grid();
  std::vector<WaveFunction> h;
  for (unsigned n = 0; n <= 10; ++n) h.push_back(hermite_state(n, g));
  for (unsigned m = 0; m <= 10; ++m)
    for (unsigned n = 0; n <= 10; ++n) {
      std::complex<double> ip = 0.0;
      for (std::size_t i = 0; i < g.size; ++i) ip += std::conj(h[m].amplitudes()[i]) * h[n].amplitudes()[i];
      ip *= g.dx;
      EXPECT_NEAR(std::abs(ip - (m == n ? 1.0 : 0.0)), 0.0, 1e-8) << m << "," << n;
    }
}

TEST(HermiteState, RejectsSmallGridAndHighOrder) {
  EXPECT_THROW(hermite_state(3, Grid::symmetric(512, 5.0)), std::invalid_argument);
  EXPECT_THROW(hermite_state(21, default_grid()), std::invalid_argument);
}

TEST(PositionMomentum, GroundStateVariances) {
  const auto psi = hermite_state(0, default_grid());
  EXPECT_NEAR(variance(position_distribution(psi)), 0.5, 1e-6);
  EXPECT_NEAR(variance(momentum_distribution(psi)), 0.5, 1e-6);
}

TEST(PositionMomentum, HermiteSecondMoment) {
  const Grid g = default_grid();
  for (unsigned n = 0; n <= 6; ++n) {
    const auto psi = hermite_state(n, g);
    EXPECT_NEAR(moment(position_distribution(psi), 2), n + 0.5, 1e-6) << n;
    EXPECT_NEAR(moment(momentum_distribution(psi), 2), n + 0.5, 1e-6) << n;
  }
}

TEST(PositionMomentum, TranslationCovariance) {
  const Grid g = default_grid();
  const double a = 1.75;
  const auto psi = gaussian_state(g, 0.0, 1.3, 0.8);
  const auto moved = gaussian_state(g, a, 1.3, 0.8);
  const auto p0 = position_distribution(psi), p1 = position_distribution(moved);
  EXPECT_NEAR(moment(p1, 1), moment(p0, 1) + a, 1e-10);
  EXPECT_NEAR(variance(p1), variance(p0), 1e-10);
  const auto q0 = momentum_distribution(psi), q1 = momentum_distribution(moved);
  for (std::size_t k = 0; k < g.size; ++k) EXPECT_NEAR(q0.weights()[k], q1.weights()[k], 1e-12);
  EXPECT_NEAR(moment(q0, 1), 0.8, 1e-8);
}

TEST(PositionMomentum, FftMatchesDirectTransform) {
  const Grid g = Grid::symmetric(512, 15.0);
  Rng rng(54);
  for (int t = 0; t < 3; ++t) {
    const auto psi = gaussian_state(g, uniform(rng, -2, 2), uniform(rng, 0.5, 2), uniform(rng, -2, 2), uniform(rng, -0.3, 0.3));
    const auto fast = momentum_amplitudes(psi);
    const auto slow = direct_momentum_amplitudes(psi);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(PositionMomentum, AnalyticGaussianTransform) {
  // psi = pi^{-1/4} e^{-x^2/2}  ->  psi_hat = pi^{-1/4} e^{-p^2/2}
  const Grid g = default_grid();
  const auto amp = momentum_amplitudes(hermite_state(0, g));
  const Grid pg = momentum_grid(g);
  for (std::size_t k = 0; k < g.size; ++k) {
    const double p = pg.at(k);
    if (std::abs(p) > 8) continue;
    EXPECT_NEAR(std::abs(amp[k] - std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * p * p)), 0.0, 1e-10);
  }
}

TEST(IndirectMeasurement, RecoversSharpMomentsFromSmearedStatistics) {
  const Grid g = default_grid();
  for (unsigned n : {0u, 3u}) {
    const auto sharp = position_distribution(hermite_state(n, g));
    const auto mu = gaussian_kernel(0.5, g.dx);
    const auto rec = reconstruct_moments(moments(convolve(mu, sharp), 8), moments(mu, 8), 8);
    const auto want = moments(sharp, 8);
    for (std::size_t k = 0; k <= 8; ++k) EXPECT_LT(std::abs(rec[k] - want[k]), 1e-4 * std::max(1.0, std::abs(want[k])));
  }
}
