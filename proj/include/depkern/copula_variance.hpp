#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "depkern/json_io.hpp"

namespace depkern {

// A copula given through tau(u, v) = d/du C(u, v) (a conditional cdf in v)
// and its v-derivative, the conditional density. That is all the limit
// variance of the estimator depends on.
struct CopulaModel {
  std::string name;
  double rho = 0.0;
  std::function<double(double, double)> tau;
  std::function<double(double, double)> d2tau;
};

CopulaModel independence_model();
CopulaModel gaussian_copula_model(double rho);  // |rho| < 1

// sigma^2 = Var(Z1) + Var(Z2) + Var(Z3) - 2 Cov(Z1,Z2) - 2 Cov(Z1,Z3)
//         + 2 Cov(Z2,Z3)
// for the three-term Hajek projection of the smoothed statistic. Every term
// reduces to one- and two-dimensional integrals of tau, tau^2 and d2tau
// against the profiles q(u) = int tau^2 dv and g(v) = int tau^2 du; the only
// genuinely nested piece is the partial integral int_v^1 tau(u, w) dw.
struct VarianceBreakdown {
  double m = 0.0;  // int int tau^2
  double var_z1 = 0.0;
  double var_z2 = 0.0;
  double var_z3 = 0.0;
  double cov12_x2 = 0.0;  // 2 Cov(Z1, Z2), sign as it enters sigma^2 below
  double cov13_x2 = 0.0;
  double cov23_x2 = 0.0;
  double sigma_sq = 0.0;

  ordered_json to_json() const;
};

// Tensor Gauss-Legendre with `nodes` points per axis. Doubling `nodes` and
// comparing is the intended accuracy check; 64 is plenty for smooth models.
VarianceBreakdown variance_terms(const CopulaModel& model, std::size_t nodes = 64);

// Gauss-Legendre nodes/weights on [0, 1], Newton on the Legendre recurrence.
void gauss_legendre_01(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace depkern
