#include "depkern/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "depkern/error.hpp"
#include "depkern/kahan.hpp"
#include "depkern/piecewise_poly.hpp"

namespace depkern {

namespace {

void check_ranked(const RankedSample& ranked) {
  require(ranked.n >= 1 && ranked.r.size() == ranked.n && ranked.s.size() == ranked.n,
          ErrorKind::invalid_argument, "malformed ranked sample");
}

}  // namespace

double tau2_pairsum(const RankedSample& ranked, const CoefficientTables& tables) {
  check_ranked(ranked);
  require(ranked.n == tables.n, ErrorKind::invalid_argument,
          "ranked sample and tables disagree on n");
  const std::size_t n = ranked.n;
  const std::vector<std::int32_t> pi = rank_permutation(ranked);
  Kahan acc;
  for (std::size_t k = 1; k <= n; ++k)
    acc.add(tables.a_diag[k - 1] * tables.B_diag[pi[k - 1] - 1]);
  for (std::size_t d = 1; d <= tables.w_a; ++d)
    for (std::size_t k = 1; k + d <= n; ++k) {
      const double a = tables.a_band[(k - 1) * tables.w_a + (d - 1)];
      if (a == 0.0) continue;
      acc.add(2.0 * a *
              tables.b_lookup(static_cast<std::size_t>(pi[k - 1]),
                              static_cast<std::size_t>(pi[k + d - 1])));
    }
  return acc.value() / (static_cast<double>(n) * static_cast<double>(n) * tables.h1);
}

namespace {

// Gauss-Legendre order 8 on [-1, 1]
constexpr double kGl8X[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168,
};
constexpr double kGl8W[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915,
};

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Panels split at every kernel knot so the integrand is a polynomial on each
// panel and order-8 Gauss is exact; extra dyadic splits only to honor the
// requested minimum node count.
Axis build_axis(const std::vector<double>& centers, const std::vector<double>& knots, double h,
                std::size_t grid) {
  std::vector<double> cuts{0.0, 1.0};
  for (double c : centers)
    for (double k : knots) {
      const double p = c + h * k;
      if (p > 0.0 && p < 1.0) cuts.push_back(p);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t splits = 1;
  while (8 * splits * (cuts.size() - 1) < grid) splits *= 2;
  Axis axis;
  axis.nodes.reserve(8 * splits * (cuts.size() - 1));
  axis.weights.reserve(axis.nodes.capacity());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double width = (cuts[c + 1] - cuts[c]) / static_cast<double>(splits);
    for (std::size_t s = 0; s < splits; ++s) {
      const double mid = cuts[c] + width * (static_cast<double>(s) + 0.5);
      const double hw = width / 2.0;
      for (int g = 0; g < 4; ++g) {
        axis.nodes.push_back(mid - hw * kGl8X[g]);
        axis.weights.push_back(hw * kGl8W[g]);
        axis.nodes.push_back(mid + hw * kGl8X[g]);
        axis.weights.push_back(hw * kGl8W[g]);
      }
    }
  }
  return axis;
}

}  // namespace

double tau2_quadrature(const RankedSample& ranked, KernelId kernel_id, double h1, double h2,
                       std::size_t grid) {
  check_ranked(ranked);
  require(grid >= 64, ErrorKind::invalid_argument, "grid must be >= 64");
  require(h1 > 0.0 && h1 < 1.0 && h2 > 0.0 && h2 < 1.0, ErrorKind::invalid_argument,
          "bandwidths must lie in (0, 1)");
  const Kernel& kernel = kernel_catalog(kernel_id);
  const std::size_t n = ranked.n;
  const double nd = static_cast<double>(n);

  std::vector<double> r_centers(n), s_centers(n);
  for (std::size_t i = 0; i < n; ++i) {
    r_centers[i] = static_cast<double>(ranked.r[i]) / nd;
    s_centers[i] = static_cast<double>(ranked.s[i]) / nd;
  }
  const Axis ax_u = build_axis(r_centers, kernel.density.breakpoints(), h1, grid);
  const Axis ax_v = build_axis(s_centers, kernel.cdf.breakpoints(), h2, grid);
  const std::size_t P = ax_u.nodes.size(), Q = ax_v.nodes.size();

  // factor matrices: Ku[p*n + i] = K((u_p - r_i/n)/h1), Kv[q*n + i] likewise with Kbar
  std::vector<double> Ku(P * n), Kv(Q * n);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t i = 0; i < n; ++i)
      Ku[p * n + i] = kernel.density((ax_u.nodes[p] - r_centers[i]) / h1);
  for (std::size_t q = 0; q < Q; ++q)
    for (std::size_t i = 0; i < n; ++i)
      Kv[q * n + i] = kernel.cdf((ax_v.nodes[q] - s_centers[i]) / h2);

  const double scale = 1.0 / (nd * h1);
  Kahan acc;
  for (std::size_t p = 0; p < P; ++p) {
    const double* ku = &Ku[p * n];
    for (std::size_t q = 0; q < Q; ++q) {
      const double* kv = &Kv[q * n];
      double t = 0.0;
      for (std::size_t i = 0; i < n; ++i) t += ku[i] * kv[i];
      t *= scale;
      acc.add(ax_u.weights[p] * ax_v.weights[q] * t * t);
    }
  }
  return acc.value();
}

double xi_hat(const RankedSample& ranked) {
  check_ranked(ranked);
  require(ranked.n >= 2, ErrorKind::sample_too_small, "xi needs n >= 2");
  const std::vector<std::int32_t> pi = rank_permutation(ranked);
  std::int64_t gaps = 0;
  for (std::size_t k = 0; k + 1 < pi.size(); ++k)
    gaps += std::abs(static_cast<std::int64_t>(pi[k + 1]) - static_cast<std::int64_t>(pi[k]));
  // single integer-ratio division: the value is the correctly rounded
  // rational, e.g. exactly 8/11 for the identity at n = 10
  const std::int64_t n64 = static_cast<std::int64_t>(ranked.n);
  const std::int64_t denom = n64 * n64 - 1;
  return static_cast<double>(denom - 3 * gaps) / static_cast<double>(denom);
}

}  // namespace depkern
