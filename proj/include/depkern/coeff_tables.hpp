#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depkern/kernels.hpp"

namespace depkern {

// h1 smooths the first rank coordinate, h2 the second. Unset fields resolve
// to n^-0.3 and n^-0.8.
struct BandwidthConfig {
  std::optional<double> h1;
  std::optional<double> h2;
  double resolve_h1(std::size_t n) const;
  double resolve_h2(std::size_t n) const;
};

// Advisory only; callers surface these next to results, nothing is rejected.
std::vector<std::string> bandwidth_warnings(std::size_t n, double h1, double h2);

// Precomputed pair integrals for a sample size n:
//   a_ij = (1/h1) int_0^1 K((u - i/n)/h1) K((u - j/n)/h1) du
//   B_ij =        int_0^1 Kbar((v - i/n)/h2) Kbar((v - j/n)/h2) dv
// a is banded (a_ij = 0 past half-bandwidth w_a). B is dense, but outside the
// band |i-j| > w_b the lower cdf factor is identically 1 on the region where
// the upper one varies, so B_ij equals a tail value depending on max(i,j)
// alone; the table stores band + tail instead of n^2 entries.
struct CoefficientTables {
  std::size_t n = 0;
  KernelId kernel = KernelId::epanechnikov;
  double h1 = 0.0, h2 = 0.0;
  std::size_t w_a = 0, w_b = 0;

  std::vector<double> a_diag;  // a_ii
  std::vector<double> a_band;  // a_band[(i-1)*w_a + d-1] = a_{i,i+d}, 1 <= d <= w_a
  std::vector<double> B_diag;  // B_ii
  std::vector<double> B_band;  // same layout with w_b
  std::vector<double> B_tail;  // B_tail[m-1], valid when |i-j| > w_b, m = max(i,j)
  std::vector<double> L;       // L_i = sum_{j != i} a_ij
  double S1 = 0.0;             // sum_{i != j} a_ij^2
  double S2 = 0.0;             // sum_i L_i^2
  double S3 = 0.0;             // sum_i L_i

  double a(std::size_t i, std::size_t j) const;         // 1-based
  double b_lookup(std::size_t i, std::size_t j) const;  // 1-based

  static CoefficientTables build(std::size_t n, KernelId kernel, double h1, double h2);
  // Process-lifetime cache keyed by (n, kernel, h1, h2); insertion is atomic,
  // concurrent callers may build duplicates but never observe a torn table.
  static std::shared_ptr<const CoefficientTables> get(std::size_t n, KernelId kernel, double h1,
                                                      double h2);
};

double a_coeff(std::size_t i, std::size_t j, std::size_t n, double h1, const Kernel& kernel);
double b_coeff(std::size_t i, std::size_t j, std::size_t n, double h2, const Kernel& kernel);

// Exact null mean of the pair-sum statistic, and its affine transforms.
double centering_bhat(const CoefficientTables& t);
double centering_bn(const CoefficientTables& t);

// Cheap stand-in for b_n that drops the cdf-side average (keeps the [0, 1]
// truncation of the kernel integrals; replacing them by full-line
// convolutions would be wrong near the boundary).
double centering_surrogate(std::size_t n, double h1, KernelId kernel);

// psi(t) = int_{-t}^1 K(v) Kbar(v+t) dv for t in [0, 1]; psi(0) = 3/8 for any
// symmetric kernel pair.
double kernel_overlap_psi(KernelId kernel, double t);

// sigma0^2 = (2/45) int_0^1 (1 - psi(t))^2 dt, in (0, 2/45). Composite
// Gauss-Legendre with dyadic refinement down to tol; cached per kernel.
double sigma0_sq(KernelId kernel, double tol = 1e-10);

}  // namespace depkern
