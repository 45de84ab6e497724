// Joint spin observable, its smeared marginals, and the sharp spin recovered from them.

#include <cstdio>

#include "coexkit/coexkit.hpp"

using namespace coexkit;

int main() {
  const auto [ex, ey] = spin_marginals(build_spin_joint());
  for (const auto* e : {&ex, &ey}) {
    const auto b = matrix_to_bloch((*e)[0]);
    const auto r = reconstruct_sharp(*e);
    std::printf("E+ = %.4f I + (%.4f, %.4f, %.4f).sigma   contrast %.6f\n", b.a0, b.a[0], b.a[1], b.a[2], r.contrast);
    std::printf("  P+ = %+.4f E+ %+.4f E-\n", r.mu[0][0], r.mu[0][1]);
  }

  const auto m = hemisphere_marginal(Direction::normalize({1, 1, 1}), make_sphere_quadrature());
  const auto b = matrix_to_bloch(m[0]);
  std::printf("hemisphere (1,1,1)/sqrt3: E+ = %.6f I + (%.6f, %.6f, %.6f).sigma\n", b.a0, b.a[0], b.a[1], b.a[2]);
}
