#pragma once

#include <cstddef>

#include "depkern/coeff_tables.hpp"
#include "depkern/sample.hpp"

namespace depkern {

// tau2 = int_0^1 int_0^1 tauhat(u, v)^2 du dv through the pair-sum identity
//   tau2 = (1/(n^2 h1)) sum_{k,l} a_kl B_{pi_k pi_l}
// iterating only the nonzero a band; O(n * w_a) lookups.
double tau2_pairsum(const RankedSample& ranked, const CoefficientTables& tables);

// Same integral evaluated from the definition of tauhat on a tensor
// Gauss-Legendre grid aligned with the kernel knots (exact for the piecewise
// polynomial integrand). Independent of the pair-sum algebra; small n only,
// cost O(grid^2 * n). grid is the minimum node count per axis, >= 64.
double tau2_quadrature(const RankedSample& ranked, KernelId kernel, double h1, double h2,
                       std::size_t grid);

inline double r_hat(double tau2) { return 6.0 * tau2 - 2.0; }

// Rank autocorrelation along increasing x: 1 - 3 sum |pi_{k+1} - pi_k| / (n^2 - 1).
double xi_hat(const RankedSample& ranked);

}  // namespace depkern
