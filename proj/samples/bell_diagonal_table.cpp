// Prints the Bell-diagonal family along the symmetric line c1 = c2 = c3,
// next to the optimizer values for both one- and two-sided measurements.

#include <cstdio>

#include "minq/nonlocality.hpp"

int main() {
  minq::OptimizerConfig cfg;
  cfg.starts = 16;
  std::printf("%8s %12s %12s %12s %12s\n", "c", "HS_MIN", "FMIN_A", "FMIN_AB", "closed");
  for (int k = 0; k <= 6; ++k) {
    const double c = k / 18.0;
    const minq::BellDiagonalParams p{c, c, c};
    const auto rho = minq::bell_diagonal(p);
    const double hs = minq::hs_min(rho, cfg).value;
    const double fa = minq::fmin_one_sided(rho, minq::Side::A, cfg).value;
    const double fab = minq::fmin_two_sided(rho, cfg).value;
    std::printf("%8.5f %12.9f %12.9f %12.9f %12.9f\n", c, hs, fa, fab, minq::closed_bell_diagonal(p).fmin);
  }
}
