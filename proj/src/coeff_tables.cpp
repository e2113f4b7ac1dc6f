#include "depkern/coeff_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <mutex>

#include "depkern/error.hpp"
#include "depkern/kahan.hpp"
#include "depkern/piecewise_poly.hpp"

namespace depkern {

double BandwidthConfig::resolve_h1(std::size_t n) const {
  return h1 ? *h1 : std::pow(static_cast<double>(n), -0.3);
}

double BandwidthConfig::resolve_h2(std::size_t n) const {
  return h2 ? *h2 : std::pow(static_cast<double>(n), -0.8);
}

namespace {

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::vector<std::string> bandwidth_warnings(std::size_t n, double h1, double h2) {
  std::vector<std::string> w;
  const double nd = static_cast<double>(n);
  const double lo = std::pow(nd, -0.49), hi = std::pow(nd, -0.26);
  if (h1 < lo || h1 > hi)
    w.push_back("h1=" + short_num(h1) + " outside the n^-0.49..n^-0.26 range [" + short_num(lo) +
                ", " + short_num(hi) + "] where the null approximation is reliable");
  if (h2 >= h1)
    w.push_back("h2=" + short_num(h2) + " >= h1=" + short_num(h1) +
                "; the second coordinate should be smoothed much less than the first");
  if (nd * h2 < 2.0)
    w.push_back("n*h2=" + short_num(nd * h2) +
                " < 2; cdf-side smoothing is below one rank spacing and the "
                "finite-sample centering may drift");
  return w;
}

namespace {

void validate_inputs(std::size_t n, double h1, double h2) {
  require(n >= 4, ErrorKind::sample_too_small, "need n >= 4, got n=" + std::to_string(n));
  require(h1 > 0.0 && h1 < 1.0, ErrorKind::invalid_argument, "h1 must lie in (0, 1)");
  require(h2 > 0.0 && h2 < 1.0, ErrorKind::invalid_argument, "h2 must lie in (0, 1)");
}

std::size_t half_bandwidth(std::size_t n, double h) {
  const double w = std::ceil(2.0 * static_cast<double>(n) * h);
  std::size_t out = w < 1.0 ? 1 : static_cast<std::size_t>(w);
  return std::min(out, n - 1);
}

struct APart {
  std::size_t w_a = 0;
  std::vector<double> a_diag, a_band, L;
  double S1 = 0.0, S2 = 0.0, S3 = 0.0;
};

// Both factors vanish off their supports, so the [0,1] truncation can be
// applied up front; pairs whose support intersection clears the boundary are
// translation invariant in i and get computed once per offset d.
APart build_a_part(std::size_t n, double h1, const Kernel& kernel) {
  APart out;
  out.w_a = half_bandwidth(n, h1);
  const double nd = static_cast<double>(n);
  std::vector<PiecewisePoly> shifted;
  shifted.reserve(n);
  for (std::size_t i = 1; i <= n; ++i)
    shifted.push_back(kernel.density.affine_compose(static_cast<double>(i) / nd, h1));

  auto pair_value = [&](std::size_t i, std::size_t j) {
    const auto& pi = shifted[i - 1];
    const auto& pj = shifted[j - 1];
    const double lo = std::max({0.0, pi.breakpoints().front(), pj.breakpoints().front()});
    const double hi = std::min({1.0, pi.breakpoints().back(), pj.breakpoints().back()});
    if (lo >= hi) return 0.0;
    return integrate_product(pi, pj, lo, hi) / h1;
  };
  auto interior = [&](std::size_t i, std::size_t j) {
    return static_cast<double>(std::min(i, j)) / nd - h1 >= 0.0 &&
           static_cast<double>(std::max(i, j)) / nd + h1 <= 1.0;
  };

  out.a_diag.resize(n);
  {
    bool have = false;
    double memo = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (interior(i, i)) {
        if (!have) {
          memo = pair_value(i, i);
          have = true;
        }
        out.a_diag[i - 1] = memo;
      } else {
        out.a_diag[i - 1] = pair_value(i, i);
      }
    }
  }

  out.a_band.assign(n * out.w_a, 0.0);
  for (std::size_t d = 1; d <= out.w_a; ++d) {
    bool have = false;
    double memo = 0.0;
    for (std::size_t i = 1; i + d <= n; ++i) {
      double v;
      if (interior(i, i + d)) {
        if (!have) {
          memo = pair_value(i, i + d);
          have = true;
        }
        v = memo;
      } else {
        v = pair_value(i, i + d);
      }
      out.a_band[(i - 1) * out.w_a + (d - 1)] = v;
    }
  }

  out.L.assign(n, 0.0);
  Kahan s1;
  for (std::size_t d = 1; d <= out.w_a; ++d)
    for (std::size_t i = 1; i + d <= n; ++i) {
      const double v = out.a_band[(i - 1) * out.w_a + (d - 1)];
      out.L[i - 1] += v;
      out.L[i + d - 1] += v;
      s1.add(2.0 * v * v);
    }
  out.S1 = s1.value();
  Kahan s2, s3;
  for (std::size_t i = 0; i < n; ++i) {
    s2.add(out.L[i] * out.L[i]);
    s3.add(out.L[i]);
  }
  out.S2 = s2.value();
  out.S3 = s3.value();
  return out;
}

}  // namespace

double a_coeff(std::size_t i, std::size_t j, std::size_t n, double h1, const Kernel& kernel) {
  require(i >= 1 && i <= n && j >= 1 && j <= n, ErrorKind::invalid_argument,
          "indices must lie in 1..n");
  require(h1 > 0.0 && h1 < 1.0, ErrorKind::invalid_argument, "h1 must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  const PiecewisePoly pi = kernel.density.affine_compose(static_cast<double>(i) / nd, h1);
  const PiecewisePoly pj = kernel.density.affine_compose(static_cast<double>(j) / nd, h1);
  const double lo = std::max({0.0, pi.breakpoints().front(), pj.breakpoints().front()});
  const double hi = std::min({1.0, pi.breakpoints().back(), pj.breakpoints().back()});
  if (lo >= hi) return 0.0;
  return integrate_product(pi, pj, lo, hi) / h1;
}

double b_coeff(std::size_t i, std::size_t j, std::size_t n, double h2, const Kernel& kernel) {
  require(i >= 1 && i <= n && j >= 1 && j <= n, ErrorKind::invalid_argument,
          "indices must lie in 1..n");
  require(h2 > 0.0 && h2 < 1.0, ErrorKind::invalid_argument, "h2 must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  const PiecewisePoly ci = kernel.cdf.affine_compose(static_cast<double>(i) / nd, h2);
  const PiecewisePoly cj = kernel.cdf.affine_compose(static_cast<double>(j) / nd, h2);
  return integrate_product(ci, cj, 0.0, 1.0);
}

CoefficientTables CoefficientTables::build(std::size_t n, KernelId kernel_id, double h1, double h2) {
  validate_inputs(n, h1, h2);
  const Kernel& kernel = kernel_catalog(kernel_id);
  CoefficientTables t;
  t.n = n;
  t.kernel = kernel_id;
  t.h1 = h1;
  t.h2 = h2;

  APart a = build_a_part(n, h1, kernel);
  t.w_a = a.w_a;
  t.a_diag = std::move(a.a_diag);
  t.a_band = std::move(a.a_band);
  t.L = std::move(a.L);
  t.S1 = a.S1;
  t.S2 = a.S2;
  t.S3 = a.S3;

  t.w_b = half_bandwidth(n, h2);
  const double nd = static_cast<double>(n);
  std::vector<PiecewisePoly> shifted;
  shifted.reserve(n);
  for (std::size_t i = 1; i <= n; ++i)
    shifted.push_back(kernel.cdf.affine_compose(static_cast<double>(i) / nd, h2));
  t.B_diag.resize(n);
  for (std::size_t i = 1; i <= n; ++i)
    t.B_diag[i - 1] = integrate_product(shifted[i - 1], shifted[i - 1], 0.0, 1.0);
  t.B_band.assign(n * t.w_b, 0.0);
  for (std::size_t d = 1; d <= t.w_b; ++d)
    for (std::size_t i = 1; i + d <= n; ++i)
      t.B_band[(i - 1) * t.w_b + (d - 1)] =
          integrate_product(shifted[i - 1], shifted[i + d - 1], 0.0, 1.0);
  t.B_tail.resize(n);
  for (std::size_t m = 1; m <= n; ++m) t.B_tail[m - 1] = shifted[m - 1].integrate(0.0, 1.0);
  return t;
}

double CoefficientTables::a(std::size_t i, std::size_t j) const {
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  if (lo == hi) return a_diag[lo - 1];
  const std::size_t d = hi - lo;
  if (d > w_a) return 0.0;
  return a_band[(lo - 1) * w_a + (d - 1)];
}

double CoefficientTables::b_lookup(std::size_t i, std::size_t j) const {
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  if (lo == hi) return B_diag[lo - 1];
  const std::size_t d = hi - lo;
  if (d <= w_b) return B_band[(lo - 1) * w_b + (d - 1)];
  return B_tail[hi - 1];
}

namespace {

struct CacheKey {
  std::size_t n;
  KernelId kernel;
  std::uint64_t h1_bits, h2_bits;
  bool operator<(const CacheKey& o) const {
    if (n != o.n) return n < o.n;
    if (kernel != o.kernel) return kernel < o.kernel;
    if (h1_bits != o.h1_bits) return h1_bits < o.h1_bits;
    return h2_bits < o.h2_bits;
  }
};

std::uint64_t bits_of(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

std::mutex g_tables_mutex;
std::map<CacheKey, std::shared_ptr<const CoefficientTables>> g_tables;

}  // namespace

std::shared_ptr<const CoefficientTables> CoefficientTables::get(std::size_t n, KernelId kernel,
                                                                double h1, double h2) {
  const CacheKey key{n, kernel, bits_of(h1), bits_of(h2)};
  {
    std::lock_guard<std::mutex> lock(g_tables_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return it->second;
  }
  auto built = std::make_shared<const CoefficientTables>(build(n, kernel, h1, h2));
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  return g_tables.emplace(key, built).first->second;
}

double centering_bhat(const CoefficientTables& t) {
  const double nd = static_cast<double>(t.n);
  // off-diagonal B sum through band + tail
  Kahan bsum;
  for (std::size_t d = 1; d <= t.w_b; ++d)
    for (std::size_t i = 1; i + d <= t.n; ++i) bsum.add(t.B_band[(i - 1) * t.w_b + (d - 1)]);
  for (std::size_t m = 1; m <= t.n; ++m) {
    const double cnt = (m > t.w_b + 1) ? static_cast<double>(m - t.w_b - 1) : 0.0;
    if (cnt > 0.0) bsum.add(cnt * t.B_tail[m - 1]);
  }
  const double off_B_mean = 2.0 * bsum.value() / (nd * (nd - 1.0));

  Kahan adiag, bdiag;
  for (double v : t.a_diag) adiag.add(v);
  for (double v : t.B_diag) bdiag.add(v);

  const double off_term = t.S3 / (nd * nd * t.h1) * off_B_mean;
  const double diag_term = adiag.value() * bdiag.value() / (nd * nd * nd * t.h1);
  return off_term + diag_term;
}

double centering_bn(const CoefficientTables& t) { return 6.0 * centering_bhat(t) - 2.0; }

double centering_surrogate(std::size_t n, double h1, KernelId kernel_id) {
  require(n >= 3, ErrorKind::sample_too_small, "need n >= 3, got n=" + std::to_string(n));
  require(h1 > 0.0 && h1 < 1.0, ErrorKind::invalid_argument, "h1 must lie in (0, 1)");
  const APart a = build_a_part(n, h1, kernel_catalog(kernel_id));
  const double nd = static_cast<double>(n);
  return 2.0 * (nd - 2.0) * a.S3 / (nd * nd * nd * h1) - 2.0;
}

double kernel_overlap_psi(KernelId kernel_id, double t) {
  require(t >= 0.0 && t <= 1.0, ErrorKind::invalid_argument, "psi needs t in [0, 1]");
  const Kernel& kernel = kernel_catalog(kernel_id);
  const PiecewisePoly shifted_cdf = kernel.cdf.affine_compose(-t, 1.0);
  return integrate_product(kernel.density, shifted_cdf, -t, 1.0);
}

namespace {

// Gauss-Legendre order 16 on [-1, 1]
constexpr double kGlX[8] = {
    0.09501250983763744018531934, 0.28160355077925891323046050,
    0.45801677765722738634241944, 0.61787624440264374844667176,
    0.75540440835500303389510119, 0.86563120238783174388046789,
    0.94457502307323257607798842, 0.98940093499164993259615417,
};
constexpr double kGlW[8] = {
    0.18945061045506849628539672, 0.18260341504492358886676366,
    0.16915651939500253818931208, 0.14959598881657673208150173,
    0.12462897125553387205247628, 0.09515851168249278480992511,
    0.06225352393864789286284384, 0.02715245941175409485178057,
};

std::mutex g_sigma0_mutex;
std::map<std::pair<KernelId, std::uint64_t>, double> g_sigma0;

}  // namespace

double sigma0_sq(KernelId kernel_id, double tol) {
  require(tol > 0.0, ErrorKind::invalid_argument, "tol must be positive");
  {
    std::lock_guard<std::mutex> lock(g_sigma0_mutex);
    auto it = g_sigma0.find({kernel_id, bits_of(tol)});
    if (it != g_sigma0.end()) return it->second;
  }
  const Kernel& kernel = kernel_catalog(kernel_id);

  // split [0, 1] where the knot alignment of K(v) and Kbar(v + t) changes
  std::vector<double> cuts{0.0, 1.0};
  for (double kd : kernel.density.breakpoints())
    for (double kc : kernel.cdf.breakpoints()) {
      const double diff = std::fabs(kd - kc);
      if (diff > 0.0 && diff < 1.0) cuts.push_back(diff);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double t) {
    const double psi = kernel_overlap_psi(kernel_id, t);
    return (1.0 - psi) * (1.0 - psi);
  };
  auto level_value = [&](int level) {
    Kahan acc;
    const std::size_t splits = std::size_t{1} << level;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double width = (cuts[c + 1] - cuts[c]) / static_cast<double>(splits);
      for (std::size_t s = 0; s < splits; ++s) {
        const double mid = cuts[c] + width * (static_cast<double>(s) + 0.5);
        const double hw = width / 2.0;
        for (int g = 0; g < 8; ++g) {
          acc.add(kGlW[g] * hw * integrand(mid - hw * kGlX[g]));
          acc.add(kGlW[g] * hw * integrand(mid + hw * kGlX[g]));
        }
      }
    }
    return acc.value();
  };

  double prev = level_value(0);
  double value = prev;
  bool converged = false;
  for (int level = 1; level <= 10; ++level) {
    value = level_value(level);
    if (std::fabs(value - prev) < tol) {
      converged = true;
      break;
    }
    prev = value;
  }
  require(converged, ErrorKind::quadrature, "sigma0 refinement did not reach tol");
  const double out = 2.0 / 45.0 * value;

  std::lock_guard<std::mutex> lock(g_sigma0_mutex);
  g_sigma0.emplace(std::make_pair(kernel_id, bits_of(tol)), out);
  return out;
}

}  // namespace depkern
