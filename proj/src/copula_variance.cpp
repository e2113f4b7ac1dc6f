#include "depkern/copula_variance.hpp"

#include <cmath>

#include "depkern/error.hpp"
#include "depkern/kahan.hpp"
#include "depkern/normal.hpp"

namespace depkern {

CopulaModel independence_model() {
  CopulaModel m;
  m.name = "independence";
  m.rho = 0.0;
  m.tau = [](double, double v) { return v; };
  m.d2tau = [](double, double) { return 1.0; };
  return m;
}

CopulaModel gaussian_copula_model(double rho) {
  require(std::isfinite(rho) && std::fabs(rho) < 1.0, ErrorKind::invalid_argument,
          "gaussian copula needs |rho| < 1");
  CopulaModel m;
  m.name = "gaussian";
  m.rho = rho;
  const double s = std::sqrt(1.0 - rho * rho);
  m.tau = [rho, s](double u, double v) {
    return std_normal_cdf((std_normal_quantile(v) - rho * std_normal_quantile(u)) / s);
  };
  m.d2tau = [rho, s](double u, double v) {
    const double zv = std_normal_quantile(v);
    const double arg = (zv - rho * std_normal_quantile(u)) / s;
    // phi(arg) / (s phi(zv)), folded into one exp to avoid 0/0 at the tails
    return std::exp(0.5 * (zv * zv - arg * arg)) / s;
  };
  return m;
}

void gauss_legendre_01(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 2 && n <= 4096, ErrorKind::invalid_argument, "node count out of range");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Chebyshev initial guess for the i-th positive root of P_n
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      pp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // map from [-1, 1] to [0, 1]
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

namespace {

double integral_tail(const CopulaModel& model, double u, double v,
                     const std::vector<double>& t, const std::vector<double>& wt) {
  // int_v^1 tau(u, w) dw on Gauss-Legendre nodes mapped into (v, 1)
  const double len = 1.0 - v;
  Kahan acc;
  for (std::size_t k = 0; k < t.size(); ++k) {
    acc.add(wt[k] * model.tau(u, v + len * t[k]));
  }
  return len * acc.value();
}

}  // namespace

VarianceBreakdown variance_terms(const CopulaModel& model, std::size_t nodes) {
  require(static_cast<bool>(model.tau) && static_cast<bool>(model.d2tau),
          ErrorKind::invalid_argument, "model is missing tau or d2tau");
  std::vector<double> t, wt;
  gauss_legendre_01(nodes, t, wt);
  const std::size_t n = nodes;

  std::vector<double> tau(n * n), d2(n * n), tail(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      tau[i * n + j] = model.tau(t[i], t[j]);
      d2[i * n + j] = model.d2tau(t[i], t[j]);
      tail[i * n + j] = integral_tail(model, t[i], t[j], t, wt);
    }
  }

  // profiles q(u) = int tau^2 dv, g(v) = int tau^2 du
  std::vector<double> q(n), g(n, 0.0);
  {
    std::vector<Kahan> gacc(n);
    for (std::size_t i = 0; i < n; ++i) {
      Kahan qi;
      for (std::size_t j = 0; j < n; ++j) {
        const double t2 = tau[i * n + j] * tau[i * n + j];
        qi.add(wt[j] * t2);
        gacc[j].add(wt[i] * t2);
      }
      q[i] = qi.value();
    }
    for (std::size_t j = 0; j < n; ++j) g[j] = gacc[j].value();
  }

  Kahan m_acc, a_acc, b_acc, w1_acc, g_acc, h_acc;
  for (std::size_t i = 0; i < n; ++i) {
    m_acc.add(wt[i] * q[i]);
    a_acc.add(wt[i] * q[i] * q[i]);
    b_acc.add(wt[i] * g[i] * g[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const double wij = wt[i] * wt[j];
      const double tv = tau[i * n + j];
      w1_acc.add(wij * tv * tv * tail[i * n + j]);
      g_acc.add(wij * d2[i * n + j] * g[j] * tail[i * n + j]);
      h_acc.add(wij * d2[i * n + j] * q[i] * g[j]);
    }
  }

  const double m = m_acc.value();
  const double big_a = a_acc.value();
  const double big_b = b_acc.value();
  const double w1 = 2.0 * w1_acc.value();
  const double big_g = g_acc.value();
  const double big_h = h_acc.value();

  VarianceBreakdown out;
  out.m = m;
  out.var_z1 = w1 - m * m;
  out.var_z2 = 0.25 * (big_a - m * m);
  out.var_z3 = 0.25 * (big_b - m * m);
  out.cov12_x2 = -(big_a - m * m);
  out.cov13_x2 = m * m - big_g;
  out.cov23_x2 = 0.5 * (big_h - m * m);
  out.sigma_sq = out.var_z1 + out.var_z2 + out.var_z3 - out.cov12_x2 - out.cov13_x2 +
                 out.cov23_x2;
  return out;
}

ordered_json VarianceBreakdown::to_json() const {
  ordered_json j;
  j["m"] = m;
  j["var_z1"] = var_z1;
  j["var_z2"] = var_z2;
  j["var_z3"] = var_z3;
  j["cov12_x2"] = cov12_x2;
  j["cov13_x2"] = cov13_x2;
  j["cov23_x2"] = cov23_x2;
  j["sigma_sq"] = sigma_sq;
  return j;
}

}  // namespace depkern
