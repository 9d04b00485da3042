// Computes the (3,6) LDPC/BEC thresholds three ways and prints the ordering.

#include <cstdio>

#include "scdyn/scdyn.hpp"

int main() {
  using namespace scdyn;
  auto model = make_ldpc_regular(3, 6);

  auto mr = single_threshold_minratio(model);
  std::printf("min-ratio threshold   : %.7f  (argmin x0 = %.5f)\n", mr.value, *mr.witness_x);

  auto de = single_threshold_de(model, 1e-6);
  std::printf("DE bisection threshold: %.7f  (bracket %.7f..%.7f)\n", de.value, de.lo, de.hi);

  auto pot = potential_threshold(model, 2000, 1e-7);
  std::printf("potential threshold   : %.7f  (argmin x = %.5f)\n", pot.value, *pot.witness_x);

  CoupledConfig cfg{33, 3};
  auto cth = coupled_threshold_de(model, cfg, 1e-4);
  std::printf("coupled DE (L=33, w=3): %.5f\n", cth.value);
  return 0;
}
