#include "depkern/inference.hpp"

#include <cmath>

#include "depkern/error.hpp"
#include "depkern/estimators.hpp"
#include "depkern/normal.hpp"

namespace depkern {

namespace {

void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
}

ordered_json warnings_json(const std::vector<std::string>& warnings) {
  ordered_json arr = ordered_json::array();
  for (const auto& w : warnings) arr.push_back(w);
  return arr;
}

}  // namespace

ordered_json TestReport::to_json() const {
  ordered_json j;
  j["method"] = method;
  if (method == "kernel") {
    j["kernel"] = kernel;
    j["n"] = n;
    j["h1"] = h1;
    j["h2"] = h2;
    j["alpha"] = alpha;
    j["statistic"] = statistic;
    j["p_value"] = p_value;
    j["critical"] = critical;
    j["reject"] = reject;
    j["tau2"] = tau2;
    j["r"] = r;
    j["b_hat"] = b_hat;
    j["b_n"] = b_n;
    j["sigma0_sq"] = sigma0_sq_value;
  } else {
    j["n"] = n;
    j["alpha"] = alpha;
    j["statistic"] = statistic;
    j["p_value"] = p_value;
    j["critical"] = critical;
    j["reject"] = reject;
    j["xi"] = xi;
  }
  j["warnings"] = warnings_json(warnings);
  return j;
}

ordered_json EstimateReport::to_json() const {
  ordered_json j;
  j["n"] = n;
  j["kernel"] = kernel;
  j["h1"] = h1;
  j["h2"] = h2;
  j["tau2"] = tau2;
  j["r"] = r;
  j["xi"] = xi;
  j["warnings"] = warnings_json(warnings);
  return j;
}

TestReport kernel_test(const RankedSample& ranked, KernelId kernel, const BandwidthConfig& bw,
                       double alpha) {
  check_alpha(alpha);
  const std::size_t n = ranked.n;
  const double h1 = bw.resolve_h1(n), h2 = bw.resolve_h2(n);
  auto tables = CoefficientTables::get(n, kernel, h1, h2);

  TestReport rep;
  rep.method = "kernel";
  rep.kernel = kernel_name(kernel);
  rep.n = n;
  rep.h1 = h1;
  rep.h2 = h2;
  rep.alpha = alpha;
  rep.warnings = bandwidth_warnings(n, h1, h2);

  rep.tau2 = tau2_pairsum(ranked, *tables);
  rep.r = r_hat(rep.tau2);
  rep.b_hat = centering_bhat(*tables);
  rep.b_n = 6.0 * rep.b_hat - 2.0;
  rep.sigma0_sq_value = sigma0_sq(kernel);
  const double sigma0 = std::sqrt(rep.sigma0_sq_value);
  const double root = std::sqrt(static_cast<double>(n) / h1);

  const double z_r = root * (rep.r - rep.b_n) / (12.0 * sigma0);
  const double z_tau = root * (rep.tau2 - rep.b_hat) / (2.0 * sigma0);
  require(std::fabs(z_r - z_tau) <= 1e-12 * std::max(1.0, std::fabs(z_tau)), ErrorKind::internal,
          "statistic paths disagree");

  rep.statistic = z_r;
  rep.p_value = std_normal_sf(z_r);
  rep.critical = std_normal_quantile(1.0 - alpha);
  rep.reject = z_r > rep.critical;
  return rep;
}

TestReport kernel_test(const PairedSample& sample, KernelId kernel, const BandwidthConfig& bw,
                       double alpha, TiesPolicy ties, std::uint64_t seed) {
  return kernel_test(rank_sample(sample, ties, seed), kernel, bw, alpha);
}

TestReport chatterjee_test(const RankedSample& ranked, double alpha) {
  check_alpha(alpha);
  TestReport rep;
  rep.method = "chatterjee";
  rep.n = ranked.n;
  rep.alpha = alpha;
  rep.xi = xi_hat(ranked);
  rep.statistic = std::sqrt(static_cast<double>(ranked.n)) * rep.xi / std::sqrt(0.4);
  rep.p_value = std_normal_sf(rep.statistic);
  rep.critical = std_normal_quantile(1.0 - alpha);
  rep.reject = rep.statistic > rep.critical;
  return rep;
}

TestReport chatterjee_test(const PairedSample& sample, double alpha, TiesPolicy ties,
                           std::uint64_t seed) {
  return chatterjee_test(rank_sample(sample, ties, seed), alpha);
}

EstimateReport estimate(const PairedSample& sample, KernelId kernel, const BandwidthConfig& bw,
                        TiesPolicy ties, std::uint64_t seed) {
  const RankedSample ranked = rank_sample(sample, ties, seed);
  const std::size_t n = ranked.n;
  const double h1 = bw.resolve_h1(n), h2 = bw.resolve_h2(n);
  auto tables = CoefficientTables::get(n, kernel, h1, h2);
  EstimateReport rep;
  rep.n = n;
  rep.kernel = kernel_name(kernel);
  rep.h1 = h1;
  rep.h2 = h2;
  rep.warnings = bandwidth_warnings(n, h1, h2);
  rep.tau2 = tau2_pairsum(ranked, *tables);
  rep.r = r_hat(rep.tau2);
  rep.xi = xi_hat(ranked);
  return rep;
}

}  // namespace depkern
