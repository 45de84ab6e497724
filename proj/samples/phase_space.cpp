// Marginal spreads of a covariant phase-space observable for a few generators.

#include <cstdio>

#include "coexkit/coexkit.hpp"

using namespace coexkit;

namespace {

void report(const char* name, const GeneratingOperator& t) {
  const auto u = uncertainty_check(marginal_densities(t));
  std::printf("%-28s Var f %.6f  Var g %.6f  product %.6f\n", name, u.var_f, u.var_g, u.product);
}

}  // namespace

int main() {
  const Grid g = default_grid();
  report("ground state", GeneratingOperator(hermite_state(0, g)));
  report("squeezed Gaussian (s = 2)", GeneratingOperator(gaussian_state(g, 0.0, 2.0)));
  report("chirped Gaussian", GeneratingOperator(gaussian_state(g, 0.0, 1.0, 0.0, 0.4)));
  report("first Hermite function", GeneratingOperator(hermite_state(1, g)));
  report("two-component mixture", GeneratingOperator({0.5, 0.5}, {gaussian_state(g, -1.0), gaussian_state(g, 1.0)}));
}
