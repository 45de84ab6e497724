#pragma once

// Nelder-Mead downhill simplex minimization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace coexkit {

struct SimplexOptions {
  std::size_t max_iterations = 2000;
  double initial_step = 0.1;
  double x_tolerance = 1e-13;   // simplex diameter
  double f_tolerance = 1e-15;   // spread of vertex values
  double target = -1e300;       // stop as soon as f <= target
  int restarts = 3;             // fresh simplex around the incumbent after convergence
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Minimizes f from x0. Restarting around the incumbent helps with the
/// nonsmooth objectives this is used on (maxima of eigenvalues).
inline SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x0, const SimplexOptions& opt = {}) {
  const std::size_t n = x0.size();
  SimplexResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;

  double step = opt.initial_step;
  for (int round = 0; round <= opt.restarts; ++round) {
    if (res.iterations >= opt.max_iterations || res.value <= opt.target) break;

    std::vector<std::vector<double>> pts(n + 1, res.x);
    std::vector<double> vals(n + 1, res.value);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1][i] += step;
      vals[i + 1] = f(pts[i + 1]);
      ++res.evaluations;
    }
    std::vector<std::size_t> idx(n + 1);

    while (res.iterations < opt.max_iterations) {
      ++res.iterations;
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];
      if (vals[best] <= opt.target) break;

      double diam = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[best][k]));
      if (diam < opt.x_tolerance || vals[worst] - vals[best] < opt.f_tolerance) break;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst)
          for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
        return p;
      };

      auto xr = along(-1.0);
      const double fr = f(xr);
      ++res.evaluations;
      if (fr < vals[best]) {
        auto xe = along(-2.0);
        const double fe = f(xe);
        ++res.evaluations;
        if (fe < fr) {
          pts[worst] = std::move(xe);
          vals[worst] = fe;
        } else {
          pts[worst] = std::move(xr);
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++res.evaluations;
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = std::move(xc);
        vals[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
        vals[i] = f(pts[i]);
        ++res.evaluations;
      }
    }

    const auto b = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    if (vals[b] < res.value) {
      res.value = vals[b];
      res.x = pts[b];
    }
    step *= 0.1;
  }
  return res;
}

}  // namespace coexkit
