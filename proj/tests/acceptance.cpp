// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "coexkit/coexkit.hpp"
#include "test_support.hpp"

using namespace coexkit;
using namespace coexkit::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class... T>
std::string fmt(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Unbiased boundary: orthogonal |a| = |b| = √2/4 sits on the boundary,
//    a slightly longer pair falls outside.
Verdict boundary() {
  const auto t0 = Clock::now();
  const double q = std::numbers::sqrt2 / 4;
  const auto on = coexist_unbiased({q, 0, 0}, {0, q, 0});
  const auto off = coexist_unbiased({q + 0.01, 0, 0}, {0, q + 0.01, 0});
  const double dt = seconds_since(t0);
  const bool ok = std::abs(on.margin) <= 1e-12 && on.coexistent && !off.coexistent && dt < 1e-3;
  return {ok, fmt("margin %.3e, off-boundary margin %.3e, %.1f us", on.margin, off.margin, dt * 1e6)};
}

// half the draws are pushed close to sharp so both verdicts show up
QubitBloch draw_effect(Rng& rng, bool near_sharp) {
  auto q = random_qubit_effect(rng);
  if (near_sharp) {
    const double a0 = uniform(rng, 0.3, 0.7);
    q = {a0, scaled(random_direction(rng), std::min(a0, 1 - a0) * uniform(rng, 0.8, 1.0))};
  }
  return q;
}

// 2. Closed form vs numerical feasibility on 500 random pairs away from the boundary.
Verdict oracle_agreement() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  int compared = 0, agree = 0, feasible = 0;
  while (compared < 500) {
    const bool sharp = compared % 2 == 0;
    const auto a = draw_effect(rng, sharp), b = draw_effect(rng, sharp);
    const auto rep = coexist_qubit(a, b);
    if (std::abs(rep.margin) <= 1e-3) continue;
    ++compared;
    const auto r = joint_feasibility(binary_povm(bloch_to_matrix(a)), binary_povm(bloch_to_matrix(b)));
    if (r.feasible == rep.coexistent) ++agree;
    if (r.feasible) ++feasible;
  }
  const double dt = seconds_since(t0);
  return {agree == compared && dt < 120.0,
          fmt("%d/%d agree (%d coexistent), %.1f s", agree, compared, feasible, dt)};
}

// 3. Sharp spin projections recovered from the smeared marginals.
Verdict spin_reconstruction() {
  const auto [e1, e2] = spin_marginals(build_spin_joint());
  double proj_err = 0.0, stat_err = 0.0;
  Rng rng(3);
  const Vec3 axes[2] = {{1, 0, 0}, {0, 1, 0}};
  int idx = 0;
  for (const auto* e : {&e1, &e2}) {
    const Vec3 n = axes[idx++];
    const auto r = reconstruct_sharp(*e);
    proj_err = std::max({proj_err, frobenius_distance(r.projections[0], spin_projection(n, 1)),
                         frobenius_distance(r.projections[1], spin_projection(n, -1))});
    const auto sharp = sharp_spin(n);
    for (int t = 0; t < 50; ++t) {
      const auto rho = random_qubit_state(rng);
      const auto pe = born(rho, *e), pp = born(rho, sharp);
      for (std::size_t k = 0; k < 2; ++k)
        stat_err = std::max(stat_err, std::abs(r.mu[k][0] * pe[0] + r.mu[k][1] * pe[1] - pp[k]));
    }
  }
  return {proj_err < 1e-12 && stat_err <= 1e-12, fmt("projection error %.2e, statistics error %.2e", proj_err, stat_err)};
}

// 4. Sharp position moments recovered from Gaussian-smeared statistics.
Verdict moment_recursion() {
  const auto t0 = Clock::now();
  const Grid g = default_grid();
  double worst = 0.0;
  for (unsigned n = 0; n <= 6; ++n) {
    const auto sharp_p = position_distribution(hermite_state(n, g));
    const auto sharp = moments(sharp_p, 8);
    for (double sigma : {0.25, 0.5, 1.0}) {
      const auto mu = gaussian_kernel(sigma, g.dx);
      const auto rec = reconstruct_moments(moments(convolve(mu, sharp_p), 8), moments(mu, 8), 8);
      for (std::size_t k = 0; k <= 8; ++k) worst = std::max(worst, std::abs(rec[k] - sharp[k]) / std::max(1.0, std::abs(sharp[k])));
    }
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-4 && dt < 10.0, fmt("max relative error %.2e, %.2f s", worst, dt)};
}

// 5. Exponential boundedness of the sharp moment sequences.
Verdict growth() {
  const Grid g = default_grid();
  int passed = 0;
  double tightest = 0.0;
  for (unsigned n = 0; n <= 6; ++n) {
    const auto m = moments(position_distribution(hermite_state(n, g)), 12);
    if (growth_check(m, 2.0, 2.0).passed) ++passed;
    double bound = 2.0;
    for (std::size_t k = 1; k <= 12; ++k) {
      bound *= 2.0 * static_cast<double>(k);
      tightest = std::max(tightest, std::abs(m[k]) / bound);
    }
  }
  return {passed == 7, fmt("%d/7 sequences bounded, max |m_k|/(C R^k k!) = %.3f", passed, tightest)};
}

// 6. Sphere observable: hemisphere marginal and normalization.
Verdict sphere() {
  const auto quad = make_sphere_quadrature();
  const auto m = hemisphere_marginal(Direction({0, 0, 1}), quad);
  const double e_plus = max_abs_diff(m[0], bloch_to_matrix({0.5, {0, 0, 0.25}}));
  const double e_minus = max_abs_diff(m[1], bloch_to_matrix({0.5, {0, 0, -0.25}}));
  const double e_full = max_abs_diff(sphere_effect([](const Vec3&) { return true; }, quad), Matrix::identity(2));
  const double worst = std::max({e_plus, e_minus, e_full});
  return {worst < 1e-8, fmt("hemisphere error %.2e, full-sphere error %.2e", std::max(e_plus, e_minus), e_full)};
}

// 7. Uncertainty product of the phase-space marginals.
Verdict uncertainty() {
  const Grid g = default_grid();
  Rng rng(7);
  double lowest = 1e300, worst_pure = 0.0;
  int satisfied = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& v : w) s += (v = uniform(rng, 0.05, 1.0));
    for (auto& v : w) v /= s;
    std::vector<WaveFunction> eta;
    for (std::size_t i = 0; i < n; ++i)
      eta.push_back(gaussian_state(g, uniform(rng, -3, 3), uniform(rng, 0.3, 2.5), uniform(rng, -2, 2), uniform(rng, -0.5, 0.5)));
    const auto u = uncertainty_check(marginal_densities(GeneratingOperator(w, std::move(eta))));
    if (u.satisfied) ++satisfied;
    lowest = std::min(lowest, u.product);
  }
  for (int t = 0; t < 20; ++t) {
    const auto eta = gaussian_state(g, uniform(rng, -3, 3), uniform(rng, 0.3, 2.5), uniform(rng, -2, 2));
    worst_pure = std::max(worst_pure, std::abs(uncertainty_check(marginal_densities(GeneratingOperator(eta))).product - 0.25));
  }
  return {satisfied == 200 && lowest >= 0.25 - 1e-9 && worst_pure <= 1e-6,
          fmt("%d/200 satisfied, min product %.12f, pure-Gaussian deviation %.2e", satisfied, lowest, worst_pure)};
}

// 8. A sharp observable is jointly measurable only with observables it commutes with.
Verdict rigidity() {
  Rng rng(8);
  int feasible = 0, feasible_ok = 0, noncomm = 0, noncomm_ok = 0;
  for (int t = 0; t < 200; ++t) {
    const Vec3 n = random_direction(rng);
    const auto e1 = sharp_spin(n);
    QubitBloch b = random_qubit_effect(rng);
    // every fourth E2 is a function of E1's spectral projections
    if (t % 4 == 0) b.a = scaled(n, uniform(rng, -1, 1) * std::min(b.a0, 1 - b.a0));
    const auto e2 = binary_povm(bloch_to_matrix(b));
    const auto r = joint_feasibility(e1, e2);
    const double c = max_commutator_norm(e1, e2);
    if (r.feasible) {
      ++feasible;
      if (c < 1e-6) ++feasible_ok;
    }
    if (c > 0.05) {
      ++noncomm;
      if (!r.feasible) ++noncomm_ok;
    }
  }
  return {feasible == feasible_ok && noncomm == noncomm_ok && feasible > 0 && noncomm > 0,
          fmt("feasible pairs commuting %d/%d, noncommuting pairs infeasible %d/%d", feasible_ok, feasible, noncomm_ok,
              noncomm)};
}

// 9. Product joint observable of commuting pairs.
Verdict product_joint_criterion() {
  Rng rng(9);
  double worst = 0.0;
  int valid = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + rng() % 3;
    const auto p = random_sharp_povm(d, rng);
    std::map<std::string, std::string> f, g;
    for (const auto& l : p.labels()) {
      f[l] = "x" + std::to_string(rng() % 3);
      g[l] = "y" + std::to_string(rng() % 2);
    }
    const auto a = image(p, OutcomeMap(f)), b = image(p, OutcomeMap(g));
    try {
      const auto joint = product_joint(a, b);
      if (!povm_violation(joint.flatten().effects())) ++valid;
      const auto [m1, m2] = marginals(joint);
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs_diff(m1[i], a[i]));
      for (std::size_t i = 0; i < b.size(); ++i) worst = std::max(worst, max_abs_diff(m2[i], b[i]));
    } catch (const std::exception&) {
    }
  }
  return {valid == 100 && worst < 1e-10, fmt("%d/100 valid joints, marginal error %.2e", valid, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"unbiased coexistence boundary", boundary},
      {"closed form agrees with feasibility search", oracle_agreement},
      {"sharp spin reconstruction", spin_reconstruction},
      {"moment recursion on smeared position statistics", moment_recursion},
      {"moment growth bound", growth},
      {"sphere observable hemisphere marginal", sphere},
      {"phase-space uncertainty product", uncertainty},
      {"sharp observables force commutation", rigidity},
      {"product joint observable marginals", product_joint_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
