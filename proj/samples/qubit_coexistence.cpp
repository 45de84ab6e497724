// Scan the length of two orthogonal unbiased spin effects across the
// coexistence boundary and compare the closed form with the numerical search.

#include <cstdio>

#include "coexkit/coexkit.hpp"

using namespace coexkit;

int main() {
  std::printf("%8s %12s %10s %10s\n", "|a|", "margin", "closed", "search");
  for (double r = 0.30; r <= 0.40 + 1e-12; r += 0.01) {
    const QubitBloch a{0.5, {r, 0, 0}}, b{0.5, {0, r, 0}};
    const auto rep = coexist_qubit(a, b);
    const auto num = joint_feasibility(binary_povm(bloch_to_matrix(a)), binary_povm(bloch_to_matrix(b)));
    std::printf("%8.3f %12.3e %10s %10s\n", r, rep.margin, rep.coexistent ? "yes" : "no", num.feasible ? "yes" : "no");
  }
}
