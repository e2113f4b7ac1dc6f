#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depkern/coeff_tables.hpp"
#include "depkern/json_io.hpp"
#include "depkern/rng.hpp"
#include "depkern/sample.hpp"

namespace depkern {

enum class Method { kernel, chatterjee };

struct MethodSpec {
  Method method = Method::kernel;
  KernelId kernel = KernelId::epanechnikov;  // ignored for chatterjee
};

// "chatterjee", "kernel-epanechnikov", "kernel-triangular"
MethodSpec parse_method_spec(const std::string& text);
std::string method_label(const MethodSpec& spec);  // "kernel" or "chatterjee"
std::string method_kernel_label(const MethodSpec& spec);

// Correlation of the sampled bivariate normal per cell: fixed, a power of n,
// or a power of n/h1 (local alternatives shrink with the sample size; n/h1 is
// the effective rate of the kernel statistic).
struct RhoRule {
  enum class Kind { zero, fixed, n_pow, nh1_pow };
  Kind kind = Kind::zero;
  double value = 0.0;  // the fixed value, or the exponent

  double rho(std::size_t n, double h1) const;
  std::string label() const;
  // "zero" | "fixed=0.3" | "n^-0.25" | "nh1^-0.25" (nh1 reads (n/h1)^E)
  static RhoRule parse(const std::string& text);
};

struct StudyConfig {
  std::vector<std::size_t> ns;
  std::vector<RhoRule> rho_rules;
  std::vector<MethodSpec> methods;
  BandwidthConfig bandwidths;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct PowerRow {
  std::size_t n = 0;
  std::string rho_rule;
  double rho = 0.0;
  std::string method;
  std::string kernel;
  double h1 = 0.0, h2 = 0.0;
  double alpha = 0.0;
  std::size_t reps = 0;
  double reject_rate = 0.0;
  std::uint64_t seed = 0;
};

struct PowerTable {
  std::vector<PowerRow> rows;
  std::string to_csv() const;
  ordered_json to_json() const;
};

// Draws X, then the residual, for each point in turn; Y = rho X + sqrt(1 -
// rho^2) residual. The draw order is part of the deterministic contract.
void sample_bivariate_normal(Rng& rng, std::size_t n, double rho, PairedSample& out);

// One dataset per (cell, rep), reused by every method in the cell. Rep
// streams are seeded by (seed, cell, rep) alone, so results are identical for
// any thread count.
PowerTable run_power_study(const StudyConfig& config);

struct NullDistConfig {
  std::size_t n = 0;
  KernelId kernel = KernelId::epanechnikov;
  BandwidthConfig bandwidths;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::size_t bins = 64;
  std::size_t threads = 0;
};

// Histogram of the studentized statistic over [-4, 4] under independence,
// with moment and Kolmogorov-Smirnov summaries against the standard normal.
struct NullDistResult {
  std::size_t n = 0;
  std::string kernel;
  double h1 = 0.0, h2 = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double lo = -4.0, hi = 4.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0, overflow = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance, reps - 1 denominator
  double skewness = 0.0;  // m3 / m2^1.5 with population moments
  double ks_normal = 0.0;

  std::string to_csv() const;  // bin_lo,bin_hi,count,normal_density_mid
  ordered_json to_json() const;
};

NullDistResult run_null_histogram(const NullDistConfig& config);

}  // namespace depkern
