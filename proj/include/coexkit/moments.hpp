#pragma once

// Grid-sampled probability distributions and their moments, convolution
// smearing, the binomial moment relation between a convolution and its
// factors together with its inversion, and the position / momentum
// statistics of wave functions on a uniform grid (hbar = 1).

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coexkit {

namespace tol {
inline constexpr double normalization = 1e-10;
inline constexpr double moment_zero = 1e-12;
inline constexpr double hermite_norm_deficit = 1e-8;
}  // namespace tol

/// Uniform grid x_i = x0 + i dx, i < size.
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t size = 0;

  double at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double back() const { return at(size - 1); }

  /// N points spanning [-half_width, half_width], symmetric about 0.
  static Grid symmetric(std::size_t n, double half_width) {
    if (n < 2 || !(half_width > 0.0)) throw std::invalid_argument("Grid: need n >= 2 and positive half-width");
    return {-half_width, 2.0 * half_width / static_cast<double>(n - 1), n};
  }

  bool is_symmetric() const { return std::abs(x0 + back()) <= 1e-9 * std::max(1.0, std::abs(x0)); }
};

inline constexpr std::size_t default_grid_points = 4096;
inline constexpr double default_grid_half_width = 20.0;
inline Grid default_grid() { return Grid::symmetric(default_grid_points, default_grid_half_width); }

/// Probability weights on a uniform grid.
class GridDistribution {
 public:
  GridDistribution(double x0, double dx, std::vector<double> weights) : x0_(x0), dx_(dx), w_(std::move(weights)) {
    if (!(dx_ > 0.0)) throw std::invalid_argument("GridDistribution: spacing must be positive");
    if (w_.empty()) throw std::invalid_argument("GridDistribution: no weights");
    double s = 0.0;
    for (double w : w_) {
      if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("GridDistribution: negative or non-finite weight");
      s += w;
    }
    if (std::abs(s - 1.0) > tol::normalization)
      throw std::invalid_argument("GridDistribution: weights sum to " + std::to_string(s));
  }

  static GridDistribution point_mass(double x, double dx = 1.0) { return {x, dx, {1.0}}; }

  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return dx_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double x(std::size_t i) const { return x0_ + static_cast<double>(i) * dx_; }
  Grid grid() const { return {x0_, dx_, w_.size()}; }

  /// Mirror image q -> -q (index reversal); requires a grid symmetric about 0.
  GridDistribution reflected() const {
    if (!grid().is_symmetric()) throw std::invalid_argument("GridDistribution: reflection needs a grid symmetric about 0");
    return {x0_, dx_, std::vector<double>(w_.rbegin(), w_.rend())};
  }

 private:
  double x0_, dx_;
  std::vector<double> w_;
};

/// Raw moments m[0..K] with m[0] = 1.
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<double> values) : m_(std::move(values)) {
    if (m_.empty()) throw std::invalid_argument("MomentSequence: empty");
    if (std::abs(m_[0] - 1.0) > tol::moment_zero)
      throw std::invalid_argument("MomentSequence: zeroth moment " + std::to_string(m_[0]) + " != 1");
  }

  std::size_t max_order() const noexcept { return m_.size() - 1; }
  double operator[](std::size_t k) const { return m_.at(k); }
  const std::vector<double>& values() const noexcept { return m_; }

 private:
  std::vector<double> m_;
};

/// Complex amplitudes on a uniform grid with sum |psi|^2 dx = 1.
class WaveFunction {
 public:
  WaveFunction(Grid grid, std::vector<std::complex<double>> amplitudes) : g_(grid), psi_(std::move(amplitudes)) {
    if (psi_.size() != g_.size || psi_.empty()) throw std::invalid_argument("WaveFunction: amplitude count mismatch");
    if (!(g_.dx > 0.0)) throw std::invalid_argument("WaveFunction: spacing must be positive");
    const double n = squared_norm(g_, psi_);
    if (std::abs(n - 1.0) > tol::normalization)
      throw std::invalid_argument("WaveFunction: squared norm " + std::to_string(n) + " != 1");
  }

  /// Rescales to unit norm.
  static WaveFunction normalized(Grid grid, std::vector<std::complex<double>> amplitudes) {
    const double n = squared_norm(grid, amplitudes);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("WaveFunction: zero or non-finite norm");
    const double s = 1.0 / std::sqrt(n);
    for (auto& a : amplitudes) a *= s;
    return {grid, std::move(amplitudes)};
  }

  static double squared_norm(const Grid& g, const std::vector<std::complex<double>>& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s * g.dx;
  }

  const Grid& grid() const noexcept { return g_; }
  const std::vector<std::complex<double>>& amplitudes() const noexcept { return psi_; }

 private:
  Grid g_;
  std::vector<std::complex<double>> psi_;
};

// ---- moments ----------------------------------------------------------------

namespace detail {

// Indices sorted by |x_i| ascending.
inline std::vector<std::size_t> order_by_magnitude(const GridDistribution& p) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(p.x(a)) < std::abs(p.x(b)); });
  return idx;
}

inline double moment_in_order(const GridDistribution& p, unsigned k, const std::vector<std::size_t>& order) {
  if (k == 0) return 1.0;
  const auto& w = p.weights();
  if (k < 8) {
    double s = 0.0;
    for (std::size_t i : order) s += w[i] * std::pow(p.x(i), static_cast<int>(k));
    return s;
  }
  // Neumaier summation.
  double s = 0.0, c = 0.0;
  for (std::size_t i : order) {
    const double term = w[i] * std::pow(p.x(i), static_cast<int>(k));
    const double t = s + term;
    c += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
    s = t;
  }
  return s + c;
}

inline std::vector<double> binomial_row(std::size_t k) {
  std::vector<double> row(k + 1, 1.0);
  for (std::size_t i = 1; i < k; ++i) row[i] = row[i - 1] * static_cast<double>(k - i + 1) / static_cast<double>(i);
  return row;
}

}  // namespace detail

/// sum_i w_i x_i^k, accumulated from small |x| outward.
inline double moment(const GridDistribution& p, unsigned k) {
  return detail::moment_in_order(p, k, detail::order_by_magnitude(p));
}

inline MomentSequence moments(const GridDistribution& p, std::size_t max_order) {
  const auto order = detail::order_by_magnitude(p);
  std::vector<double> m(max_order + 1);
  for (std::size_t k = 0; k <= max_order; ++k) m[k] = detail::moment_in_order(p, static_cast<unsigned>(k), order);
  return MomentSequence(std::move(m));
}

inline double mean(const GridDistribution& p) { return moment(p, 1); }

/// m2 - m1^2
inline double variance(const GridDistribution& p) {
  const double m1 = moment(p, 1);
  return moment(p, 2) - m1 * m1;
}

/// Discrete convolution of two distributions on grids with equal spacing.
/// The result lives on x0_mu + x0_p + i dx.
inline GridDistribution convolve(const GridDistribution& mu, const GridDistribution& p) {
  if (std::abs(mu.dx() - p.dx()) > 1e-12 * std::max(mu.dx(), p.dx()) && mu.size() > 1 && p.size() > 1)
    throw std::invalid_argument("convolve: grid spacings differ");
  const double dx = p.size() > 1 ? p.dx() : mu.dx();
  const auto& a = mu.weights();
  const auto& b = p.weights();
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  const double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& w : out) w /= s;
  return {mu.x0() + p.x0(), dx, std::move(out)};
}

/// Moments of mu * p from those of the factors:
///   c[k] = sum_{n<=k} C(k,n) mu[k-n] p[n].
inline MomentSequence forward_moments(const MomentSequence& mu, const MomentSequence& p, std::size_t max_order) {
  if (mu.max_order() < max_order || p.max_order() < max_order)
    throw std::invalid_argument("forward_moments: sequences shorter than requested order");
  std::vector<double> c(max_order + 1);
  for (std::size_t k = 0; k <= max_order; ++k) {
    const auto binom = detail::binomial_row(k);
    double s = 0.0;
    for (std::size_t n = 0; n <= k; ++n) s += binom[n] * mu[k - n] * p[n];
    c[k] = s;
  }
  return MomentSequence(std::move(c));
}

/// Inverts forward_moments: given moments of mu * p and of mu, recovers
///   p[k] = c[k] - sum_{n<k} C(k,n) mu[k-n] p[n].
inline MomentSequence reconstruct_moments(const MomentSequence& convolved, const MomentSequence& mu,
                                          std::size_t max_order) {
  if (mu.max_order() < max_order || convolved.max_order() < max_order)
    throw std::invalid_argument("reconstruct_moments: sequences shorter than requested order");
  std::vector<double> p(max_order + 1);
  for (std::size_t k = 0; k <= max_order; ++k) {
    const auto binom = detail::binomial_row(k);
    double s = convolved[k];
    for (std::size_t n = 0; n < k; ++n) s -= binom[n] * mu[k - n] * p[n];
    p[k] = s;
  }
  return MomentSequence(std::move(p));
}

struct GrowthCheck {
  bool passed = true;
  std::optional<std::size_t> first_violation;
};

/// |m[k]| <= C R^k k! for k = 1..K (exponential boundedness).
inline GrowthCheck growth_check(const MomentSequence& m, double c, double r) {
  if (!(c > 0.0) || !(r > 0.0)) throw std::invalid_argument("growth_check: C and R must be positive");
  GrowthCheck out;
  double bound = c;  // C R^k k! at k = 0
  for (std::size_t k = 1; k <= m.max_order(); ++k) {
    bound *= r * static_cast<double>(k);
    if (std::abs(m[k]) > bound) {
      out.passed = false;
      out.first_violation = k;
      return out;
    }
  }
  return out;
}

// ---- kernels and states ------------------------------------------------------

/// Centered Gaussian N(0, sigma^2) sampled at k dx, |k dx| <= 12 sigma.
/// sigma = 0 gives the point mass at 0.
inline GridDistribution gaussian_kernel(double sigma, double dx) {
  if (sigma < 0.0 || !(dx > 0.0)) throw std::invalid_argument("gaussian_kernel: need sigma >= 0 and dx > 0");
  const auto m = static_cast<std::size_t>(std::ceil(12.0 * sigma / dx));
  std::vector<double> w(2 * m + 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(m)) * dx;
    w[i] = sigma == 0.0 ? 1.0 : std::exp(-x * x / (2.0 * sigma * sigma));
  }
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return {-static_cast<double>(m) * dx, dx, std::move(w)};
}

/// Normalized Gaussian wave packet
///   exp(-(x - center)^2 / (2 width^2) + i kick x + i chirp x^2).
inline WaveFunction gaussian_state(const Grid& g, double center = 0.0, double width = 1.0, double kick = 0.0,
                                   double chirp = 0.0) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_state: width must be positive");
  std::vector<std::complex<double>> a(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    const double x = g.at(i);
    const double u = (x - center) / width;
    a[i] = std::exp(-0.5 * u * u) * std::polar(1.0, kick * x + chirp * x * x);
  }
  return WaveFunction::normalized(g, std::move(a));
}

/// n-th normalized Hermite function via the three-term recurrence
///   h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}.
inline WaveFunction hermite_state(unsigned n, const Grid& g) {
  if (n > 20) throw std::invalid_argument("hermite_state: order above 20");
  const double reach = std::sqrt(2.0 * n + 1.0) + 8.0;
  if (g.x0 > -reach || g.back() < reach)
    throw std::invalid_argument("hermite_state: grid does not cover +-" + std::to_string(reach));
  const double h0 = std::pow(std::numbers::pi, -0.25);
  std::vector<std::complex<double>> a(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    const double x = g.at(i);
    double prev = 0.0, cur = h0 * std::exp(-0.5 * x * x);
    for (unsigned k = 0; k < n; ++k) {
      const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    a[i] = cur;
  }
  const double norm2 = WaveFunction::squared_norm(g, a);
  if (std::abs(norm2 - 1.0) > tol::hermite_norm_deficit)
    throw std::invalid_argument("hermite_state: grid too coarse or small (norm " + std::to_string(norm2) + ")");
  return WaveFunction::normalized(g, std::move(a));
}

// ---- position / momentum statistics ---------------------------------------

/// Weights |psi(x_i)|^2 dx.
inline GridDistribution position_distribution(const WaveFunction& psi) {
  const auto& g = psi.grid();
  std::vector<double> w(g.size);
  for (std::size_t i = 0; i < g.size; ++i) w[i] = std::norm(psi.amplitudes()[i]) * g.dx;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return {g.x0, g.dx, std::move(w)};
}

/// Momentum grid conjugate to a position grid: dp = 2 pi / (N dx),
/// p_k = (k - (N-1)/2) dp, symmetric about 0.
inline Grid momentum_grid(const Grid& g) {
  const double dp = 2.0 * std::numbers::pi / (static_cast<double>(g.size) * g.dx);
  return {-0.5 * static_cast<double>(g.size - 1) * dp, dp, g.size};
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// out_k = sum_n in_n exp(-2 pi i k n / N)
inline std::vector<std::complex<double>> dft(std::vector<std::complex<double>> in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, pin, pout, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace detail

/// Samples of psi_hat(p) = (2 pi)^{-1/2} ∫ psi(x) e^{-ipx} dx on momentum_grid.
inline std::vector<std::complex<double>> momentum_amplitudes(const WaveFunction& psi) {
  const auto& g = psi.grid();
  const std::size_t n = g.size;
  const Grid pg = momentum_grid(g);
  // e^{-i p_k n dx} = e^{-2 pi i k n / N} e^{i pi n (N-1) / N}
  std::vector<std::complex<double>> in(n);
  for (std::size_t j = 0; j < n; ++j)
    in[j] = psi.amplitudes()[j] *
            std::polar(1.0, std::numbers::pi * static_cast<double>(j) * static_cast<double>(n - 1) / static_cast<double>(n));
  auto out = detail::dft(std::move(in));
  const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n; ++k) out[k] *= scale * std::polar(1.0, -pg.at(k) * g.x0);
  return out;
}

/// Weights |psi_hat(p_k)|^2 dp.
inline GridDistribution momentum_distribution(const WaveFunction& psi) {
  const Grid pg = momentum_grid(psi.grid());
  const auto amp = momentum_amplitudes(psi);
  std::vector<double> w(amp.size());
  for (std::size_t k = 0; k < amp.size(); ++k) w[k] = std::norm(amp[k]) * pg.dx;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return {pg.x0, pg.dx, std::move(w)};
}

}  // namespace coexkit
