#pragma once

#include <cstdint>
#include <memory>

#include "depkern/coeff_tables.hpp"

namespace depkern {

// Permutation-moment machinery for the off-diagonal part of the pair-sum
// statistic, built on top of a CoefficientTables.
//
// Two centerings of B appear, and they are not interchangeable:
//   plain    B_ij - b_bar_i - b_bar_j + b_bar   (b_bar_i = row mean)
//   adjusted B_ij - u_i - u_j + b_bar,  u_i = ((n-1) b_bar_i - b_bar)/(n-2)
// The adjusted array has exactly zero row sums, which is what the closed
// variance formula for D_n needs; the plain array is the one whose second
// moment has the simple closed form checked by mu2_two_ways. b_centered and
// everything derived from it (D_n, T_n, var_d_formula) use the adjusted
// centering; mu2_two_ways uses the plain one.
struct DecompositionTables {
  std::shared_ptr<const CoefficientTables> base;
  std::vector<double> b_bar;   // plain row means, diagonal excluded
  std::vector<double> center;  // adjusted centering weights u_i
  double b_bar_all = 0.0;
  double mu2 = 0.0;  // E[b_centered^2] over off-diagonal pairs, closed form
  double c_n = 0.0;  // E[T_n]

  double B(std::size_t i, std::size_t j) const { return base->b_lookup(i, j); }
  double b_centered(std::size_t i, std::size_t j) const {
    return B(i, j) - center[i - 1] - center[j - 1] + b_bar_all;
  }
};

DecompositionTables build_decomposition(std::shared_ptr<const CoefficientTables> tables);

// Exact moments of the pair-sum pieces under the uniform permutation null,
// by visiting all n! permutations (n <= 8):
//   S_n = off-diagonal part of tau2,   T_n = (1/(n^2 h1)) sum_k u_{pi_k} L_k,
//   D_n = (1/(n^2 h1)) sum_{k != l} a_kl b_centered(pi_k, pi_l).
// Per permutation the identity S_n = D_n + 2 T_n - c_n is checked and the
// worst residual reported.
struct EnumerationResult {
  std::size_t n = 0;
  std::uint64_t permutations = 0;
  double mean_tau2 = 0.0;
  double mean_s = 0.0;
  double mean_t = 0.0;
  double mean_d = 0.0;
  double var_d = 0.0;
  double var_s = 0.0;
  double c_n = 0.0;
  double max_identity_residual = 0.0;
};

EnumerationResult enumerate_null(const DecompositionTables& dt);

// Closed-form Var(D_n): with S = (n^2 h1) D_n,
//   Var(S) = mu2 { 2 S1 - 4 (S2 - S1)/(n-2) + 2 (S3^2 + 2 S1 - 4 S2)/((n-2)(n-3)) }
// and Var(D_n) = Var(S) / (n^2 h1)^2. Exact for the adjusted centering; needs
// n >= 4.
double var_d_formula(const DecompositionTables& dt);

// Second moment of the plain double-centering, two ways: the closed form
//   (1/(n(n-1))) [ sum_{i != j} B_ij^2 - 2n sum_i b_bar_i^2 + n(n+1) b_bar^2 ]
// and the direct average of the centered squares. They agree identically.
struct Mu2Pair {
  double closed = 0.0;
  double direct = 0.0;
};
Mu2Pair mu2_two_ways(const DecompositionTables& dt);

// Monte Carlo bridges over uniform random permutations (seeded, deterministic).
double var_d_empirical(const DecompositionTables& dt, std::size_t num_perms, std::uint64_t seed);

// Exact Var(2 sqrt(n/h1) (T_n - c_n)) from the variance of a linear rank
// statistic under uniform permutation, and its empirical counterpart. Both
// approach 4 sigma0^2 as n grows.
double var_2t_scaled_exact(const DecompositionTables& dt);
double var_2t_scaled_empirical(const DecompositionTables& dt, std::size_t num_perms,
                               std::uint64_t seed);

}  // namespace depkern
