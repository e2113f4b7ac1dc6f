#include "depkern/perm_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "depkern/error.hpp"
#include "depkern/estimators.hpp"
#include "depkern/kahan.hpp"

namespace depkern {

namespace {

// Row sums of B with the diagonal excluded, using band + tail structure:
// entries past the band depend on max(i, j) alone.
std::vector<double> row_sums_off_diag(const CoefficientTables& t) {
  const std::size_t n = t.n;
  const std::size_t w = t.w_b;
  std::vector<double> tail_suffix(n + 2, 0.0);
  for (std::size_t m = n; m >= 1; --m) {
    tail_suffix[m] = tail_suffix[m + 1] + t.B_tail[m - 1];
  }
  std::vector<double> rows(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    Kahan acc;
    const std::size_t lo = (i > w) ? i - w : 1;
    const std::size_t hi = std::min(n, i + w);
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k != i) acc.add(t.b_lookup(i, k));
    }
    if (i > w + 1) acc.add(static_cast<double>(i - w - 1) * t.B_tail[i - 1]);
    if (i + w + 1 <= n) acc.add(tail_suffix[i + w + 1]);
    rows[i - 1] = acc.value();
  }
  return rows;
}

double sum_b_squared_off_diag(const CoefficientTables& t) {
  const std::size_t n = t.n;
  const std::size_t w = t.w_b;
  std::vector<double> sq_suffix(n + 2, 0.0);
  for (std::size_t m = n; m >= 1; --m) {
    sq_suffix[m] = sq_suffix[m + 1] + t.B_tail[m - 1] * t.B_tail[m - 1];
  }
  Kahan acc;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = (i > w) ? i - w : 1;
    const std::size_t hi = std::min(n, i + w);
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k != i) {
        const double b = t.b_lookup(i, k);
        acc.add(b * b);
      }
    }
    if (i > w + 1) acc.add(static_cast<double>(i - w - 1) * t.B_tail[i - 1] * t.B_tail[i - 1]);
    if (i + w + 1 <= n) acc.add(sq_suffix[i + w + 1]);
  }
  return acc.value();
}

void fisher_yates(std::vector<std::int32_t>& p, std::mt19937_64& eng) {
  for (std::size_t i = p.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(eng() % (i + 1));
    std::swap(p[i], p[j]);
  }
}

// D_n for one permutation, iterating the nonzero a band only.
double d_statistic(const DecompositionTables& dt, const std::vector<std::int32_t>& pi) {
  const CoefficientTables& t = *dt.base;
  const std::size_t n = t.n;
  Kahan acc;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t dmax = std::min(t.w_a, n - k);
    const std::size_t pk = static_cast<std::size_t>(pi[k - 1]);
    for (std::size_t d = 1; d <= dmax; ++d) {
      const double a = t.a_band[(k - 1) * t.w_a + d - 1];
      if (a == 0.0) continue;
      acc.add(2.0 * a * dt.b_centered(pk, static_cast<std::size_t>(pi[k + d - 1])));
    }
  }
  const double nd = static_cast<double>(n);
  return acc.value() / (nd * nd * t.h1);
}

double t_statistic(const DecompositionTables& dt, const std::vector<std::int32_t>& pi) {
  const CoefficientTables& t = *dt.base;
  const std::size_t n = t.n;
  Kahan acc;
  for (std::size_t k = 0; k < n; ++k) {
    acc.add(dt.center[static_cast<std::size_t>(pi[k]) - 1] * t.L[k]);
  }
  const double nd = static_cast<double>(n);
  return acc.value() / (nd * nd * t.h1);
}

// Closed form of the plain double-centering's second moment.
double mu2_plain_closed(const DecompositionTables& dt) {
  const CoefficientTables& t = *dt.base;
  const double nd = static_cast<double>(t.n);
  Kahan sq;
  for (double b : dt.b_bar) sq.add(b * b);
  const double sum_b2 = sum_b_squared_off_diag(t);
  return (sum_b2 - 2.0 * nd * sq.value() + nd * (nd + 1.0) * dt.b_bar_all * dt.b_bar_all) /
         (nd * (nd - 1.0));
}

}  // namespace

DecompositionTables build_decomposition(std::shared_ptr<const CoefficientTables> tables) {
  require(tables != nullptr, ErrorKind::invalid_argument, "decomposition: null tables");
  const CoefficientTables& t = *tables;
  const std::size_t n = t.n;
  DecompositionTables dt;
  dt.base = std::move(tables);

  const std::vector<double> rows = row_sums_off_diag(t);
  dt.b_bar.resize(n);
  Kahan total;
  for (std::size_t i = 0; i < n; ++i) {
    dt.b_bar[i] = rows[i] / static_cast<double>(n - 1);
    total.add(rows[i]);
  }
  const double nd = static_cast<double>(n);
  dt.b_bar_all = total.value() / (nd * (nd - 1.0));

  dt.center.resize(n);
  Kahan rho2;
  for (std::size_t i = 0; i < n; ++i) {
    dt.center[i] = (rows[i] - dt.b_bar_all) / (nd - 2.0);
    const double rho = dt.b_bar[i] - dt.b_bar_all;
    rho2.add(rho * rho);
  }
  // E[b_centered^2] from the plain-centering closed form and the exact shift
  // between the two centerings.
  dt.mu2 = mu2_plain_closed(dt) - 2.0 * rho2.value() / (nd * (nd - 1.0) * (nd - 2.0));
  dt.c_n = dt.b_bar_all * t.S3 / (nd * nd * t.h1);
  return dt;
}

EnumerationResult enumerate_null(const DecompositionTables& dt) {
  const CoefficientTables& t = *dt.base;
  const std::size_t n = t.n;
  require(n >= 4, ErrorKind::invalid_argument, "enumeration needs n >= 4");
  require(n <= 8, ErrorKind::too_large, "enumeration is factorial in n; n <= 8 only");

  const double nd = static_cast<double>(n);
  const double inv = 1.0 / (nd * nd * t.h1);

  std::vector<std::int32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 1);

  EnumerationResult out;
  out.n = n;
  out.c_n = dt.c_n;

  RankedSample rk;
  rk.n = n;
  rk.r = identity;

  // Pass 1: means. Pass 2: central second moments of D and S.
  Kahan m_tau2, m_s, m_t, m_d;
  std::uint64_t count = 0;
  std::vector<std::int32_t> pi = identity;
  do {
    rk.s = pi;
    const double tau2 = tau2_pairsum(rk, t);
    Kahan diag;
    for (std::size_t k = 0; k < n; ++k) {
      diag.add(t.a_diag[k] * t.B_diag[static_cast<std::size_t>(pi[k]) - 1]);
    }
    const double s = tau2 - diag.value() * inv;
    const double tt = t_statistic(dt, pi);
    const double dd = d_statistic(dt, pi);
    const double residual = std::fabs(s - (dd + 2.0 * tt - dt.c_n));
    out.max_identity_residual = std::max(out.max_identity_residual, residual);
    m_tau2.add(tau2);
    m_s.add(s);
    m_t.add(tt);
    m_d.add(dd);
    ++count;
  } while (std::next_permutation(pi.begin(), pi.end()));

  const double cnt = static_cast<double>(count);
  out.permutations = count;
  out.mean_tau2 = m_tau2.value() / cnt;
  out.mean_s = m_s.value() / cnt;
  out.mean_t = m_t.value() / cnt;
  out.mean_d = m_d.value() / cnt;

  Kahan v_d, v_s;
  pi = identity;
  do {
    rk.s = pi;
    const double tau2 = tau2_pairsum(rk, t);
    Kahan diag;
    for (std::size_t k = 0; k < n; ++k) {
      diag.add(t.a_diag[k] * t.B_diag[static_cast<std::size_t>(pi[k]) - 1]);
    }
    const double s = tau2 - diag.value() * inv;
    const double dd = d_statistic(dt, pi);
    v_d.add((dd - out.mean_d) * (dd - out.mean_d));
    v_s.add((s - out.mean_s) * (s - out.mean_s));
  } while (std::next_permutation(pi.begin(), pi.end()));
  out.var_d = v_d.value() / cnt;
  out.var_s = v_s.value() / cnt;
  return out;
}

double var_d_formula(const DecompositionTables& dt) {
  const CoefficientTables& t = *dt.base;
  const double nd = static_cast<double>(t.n);
  require(t.n >= 4, ErrorKind::invalid_argument, "variance formula needs n >= 4");
  const double bracket = 2.0 * t.S1 - 4.0 / (nd - 2.0) * (t.S2 - t.S1) +
                         2.0 / ((nd - 2.0) * (nd - 3.0)) * (t.S3 * t.S3 + 2.0 * t.S1 - 4.0 * t.S2);
  const double scale = nd * nd * t.h1;
  return dt.mu2 * bracket / (scale * scale);
}

Mu2Pair mu2_two_ways(const DecompositionTables& dt) {
  const std::size_t n = dt.base->n;
  Mu2Pair out;
  out.closed = mu2_plain_closed(dt);
  Kahan acc;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (i == j) continue;
      const double b = dt.B(i, j) - dt.b_bar[i - 1] - dt.b_bar[j - 1] + dt.b_bar_all;
      acc.add(b * b);
    }
  }
  const double nd = static_cast<double>(n);
  out.direct = acc.value() / (nd * (nd - 1.0));
  return out;
}

double var_d_empirical(const DecompositionTables& dt, std::size_t num_perms, std::uint64_t seed) {
  require(num_perms >= 2, ErrorKind::invalid_argument, "need at least 2 permutations");
  const std::size_t n = dt.base->n;
  std::mt19937_64 eng(seed);
  std::vector<std::int32_t> pi(n);
  std::iota(pi.begin(), pi.end(), 1);
  std::vector<double> vals(num_perms);
  for (std::size_t rep = 0; rep < num_perms; ++rep) {
    fisher_yates(pi, eng);
    vals[rep] = d_statistic(dt, pi);
  }
  Kahan mean;
  for (double v : vals) mean.add(v);
  const double mu = mean.value() / static_cast<double>(num_perms);
  Kahan ss;
  for (double v : vals) ss.add((v - mu) * (v - mu));
  return ss.value() / static_cast<double>(num_perms - 1);
}

double var_2t_scaled_exact(const DecompositionTables& dt) {
  const CoefficientTables& t = *dt.base;
  const std::size_t n = t.n;
  const double nd = static_cast<double>(n);
  Kahan lsum;
  for (double l : t.L) lsum.add(l);
  const double l_mean = lsum.value() / nd;
  // sum_i center_i = n * b_bar_all, so the mean of the centering weights is
  // b_bar_all itself.
  Kahan c_dev, l_dev;
  for (std::size_t i = 0; i < n; ++i) {
    const double dc = dt.center[i] - dt.b_bar_all;
    c_dev.add(dc * dc);
    const double dl = t.L[i] - l_mean;
    l_dev.add(dl * dl);
  }
  const double scale = nd * nd * t.h1;
  const double var_t = c_dev.value() * l_dev.value() / ((nd - 1.0) * scale * scale);
  return 4.0 * (nd / t.h1) * var_t;
}

double var_2t_scaled_empirical(const DecompositionTables& dt, std::size_t num_perms,
                               std::uint64_t seed) {
  require(num_perms >= 2, ErrorKind::invalid_argument, "need at least 2 permutations");
  const CoefficientTables& t = *dt.base;
  const std::size_t n = t.n;
  std::mt19937_64 eng(seed);
  std::vector<std::int32_t> pi(n);
  std::iota(pi.begin(), pi.end(), 1);
  const double factor = 2.0 * std::sqrt(static_cast<double>(n) / t.h1);
  std::vector<double> vals(num_perms);
  for (std::size_t rep = 0; rep < num_perms; ++rep) {
    fisher_yates(pi, eng);
    vals[rep] = factor * (t_statistic(dt, pi) - dt.c_n);
  }
  Kahan mean;
  for (double v : vals) mean.add(v);
  const double mu = mean.value() / static_cast<double>(num_perms);
  Kahan ss;
  for (double v : vals) ss.add((v - mu) * (v - mu));
  return ss.value() / static_cast<double>(num_perms - 1);
}

}  // namespace depkern
