#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depkern/coeff_tables.hpp"
#include "depkern/json_io.hpp"
#include "depkern/sample.hpp"

namespace depkern {

// One-sided test against the independence null; large positive statistics
// reject. method is "kernel" or "chatterjee"; kernel-specific fields are only
// meaningful for the kernel method.
struct TestReport {
  std::string method;
  std::string kernel;
  std::size_t n = 0;
  double h1 = 0.0, h2 = 0.0;
  double alpha = 0.0;
  double statistic = 0.0;
  double p_value = 0.0;
  double critical = 0.0;
  bool reject = false;
  double tau2 = 0.0;
  double r = 0.0;
  double b_hat = 0.0;
  double b_n = 0.0;
  double sigma0_sq_value = 0.0;
  double xi = 0.0;
  std::vector<std::string> warnings;

  ordered_json to_json() const;
};

struct EstimateReport {
  std::size_t n = 0;
  std::string kernel;
  double h1 = 0.0, h2 = 0.0;
  double tau2 = 0.0;
  double r = 0.0;
  double xi = 0.0;
  std::vector<std::string> warnings;

  ordered_json to_json() const;
};

// Z = sqrt(n/h1) (r_hat - b_n) / (12 sigma0); identical, up to rounding, to
// sqrt(n/h1) (tau2 - b_hat) / (2 sigma0). Both are computed and must agree to
// 1e-12 (scaled); a mismatch aborts as an internal error.
TestReport kernel_test(const RankedSample& ranked, KernelId kernel, const BandwidthConfig& bw,
                       double alpha);
TestReport kernel_test(const PairedSample& sample, KernelId kernel, const BandwidthConfig& bw,
                       double alpha, TiesPolicy ties, std::uint64_t seed = 0);

// Z = sqrt(n) xi_hat / sqrt(2/5).
TestReport chatterjee_test(const RankedSample& ranked, double alpha);
TestReport chatterjee_test(const PairedSample& sample, double alpha, TiesPolicy ties,
                           std::uint64_t seed = 0);

EstimateReport estimate(const PairedSample& sample, KernelId kernel, const BandwidthConfig& bw,
                        TiesPolicy ties, std::uint64_t seed = 0);

}  // namespace depkern
