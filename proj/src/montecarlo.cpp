#include "depkern/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <thread>

#include "depkern/error.hpp"
#include "depkern/estimators.hpp"
#include "depkern/kahan.hpp"
#include "depkern/normal.hpp"

namespace depkern {

namespace {

double parse_number(const std::string& text, const char* what) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  require(ec == std::errc() && p == e && std::isfinite(v), ErrorKind::parse,
          std::string("bad number in ") + what + ": '" + text + "'");
  return v;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::size_t effective_threads(std::size_t requested, std::size_t work_items) {
  std::size_t t = requested;
  if (t == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    t = (hc == 0) ? 1 : hc;
  }
  return std::max<std::size_t>(1, std::min(t, work_items));
}

// Runs body(rep) for rep in [0, reps) on a small pool. Work must depend on
// the rep index only: output slots are preallocated by the caller and the
// schedule never leaks into the results.
template <typename Body>
void parallel_reps(std::size_t reps, std::size_t threads, const Body& body) {
  const std::size_t t = effective_threads(threads, reps);
  if (t <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) body(rep);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t rep = next.fetch_add(1, std::memory_order_relaxed);
      if (rep >= reps) return;
      try {
        body(rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

constexpr std::uint64_t kRankSeedSalt = 0x5851f42d4c957f2dULL;

}  // namespace

MethodSpec parse_method_spec(const std::string& text) {
  MethodSpec spec;
  if (text == "chatterjee") {
    spec.method = Method::chatterjee;
    return spec;
  }
  const std::string prefix = "kernel-";
  if (text.rfind(prefix, 0) == 0) {
    spec.method = Method::kernel;
    spec.kernel = kernel_from_name(text.substr(prefix.size()));
    return spec;
  }
  fail(ErrorKind::invalid_argument,
       "unknown method '" + text + "' (chatterjee, kernel-epanechnikov, kernel-triangular)");
}

std::string method_label(const MethodSpec& spec) {
  return spec.method == Method::kernel ? "kernel" : "chatterjee";
}

std::string method_kernel_label(const MethodSpec& spec) {
  return spec.method == Method::kernel ? kernel_name(spec.kernel) : "none";
}

double RhoRule::rho(std::size_t n, double h1) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::fixed:
      return value;
    case Kind::n_pow:
      return std::pow(static_cast<double>(n), value);
    case Kind::nh1_pow:
      return std::pow(static_cast<double>(n) / h1, value);
  }
  fail(ErrorKind::internal, "unhandled rho rule");
}

std::string RhoRule::label() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::fixed:
      return "fixed=" + short_num(value);
    case Kind::n_pow:
      return "n^" + short_num(value);
    case Kind::nh1_pow:
      return "nh1^" + short_num(value);
  }
  fail(ErrorKind::internal, "unhandled rho rule");
}

RhoRule RhoRule::parse(const std::string& text) {
  RhoRule rule;
  if (text == "zero") {
    rule.kind = Kind::zero;
    return rule;
  }
  if (text.rfind("fixed=", 0) == 0) {
    rule.kind = Kind::fixed;
    rule.value = parse_number(text.substr(6), "rho rule");
    // +-1 are legal degenerate cases (y = +-x exactly)
    require(std::fabs(rule.value) <= 1.0, ErrorKind::invalid_argument, "|rho| must be <= 1");
    return rule;
  }
  if (text.rfind("n^", 0) == 0) {
    rule.kind = Kind::n_pow;
    rule.value = parse_number(text.substr(2), "rho rule");
    require(rule.value < 0.0, ErrorKind::invalid_argument, "rho exponent must be negative");
    return rule;
  }
  if (text.rfind("nh1^", 0) == 0) {
    rule.kind = Kind::nh1_pow;
    rule.value = parse_number(text.substr(4), "rho rule");
    require(rule.value < 0.0, ErrorKind::invalid_argument, "rho exponent must be negative");
    return rule;
  }
  fail(ErrorKind::invalid_argument,
       "unknown rho rule '" + text + "' (zero, fixed=V, n^E, nh1^E)");
}

void sample_bivariate_normal(Rng& rng, std::size_t n, double rho, PairedSample& out) {
  require(std::fabs(rho) <= 1.0, ErrorKind::invalid_argument, "|rho| must be <= 1");
  out.x.resize(n);
  out.y.resize(n);
  const double comp = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.normal();
    const double e = rng.normal();
    out.x[i] = x;
    out.y[i] = rho * x + comp * e;
  }
}

std::string PowerTable::to_csv() const {
  std::string out = "n,rho_rule,method,kernel,h1,h2,alpha,reps,reject_rate,seed\n";
  for (const PowerRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += r.rho_rule;
    out += ',';
    out += r.method;
    out += ',';
    out += r.kernel;
    out += ',';
    out += fmt_double(r.h1);
    out += ',';
    out += fmt_double(r.h2);
    out += ',';
    out += fmt_double(r.alpha);
    out += ',';
    out += std::to_string(r.reps);
    out += ',';
    out += fmt_double(r.reject_rate);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

ordered_json PowerTable::to_json() const {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const PowerRow& r : rows) {
    ordered_json row;
    row["n"] = r.n;
    row["rho_rule"] = r.rho_rule;
    row["rho"] = r.rho;
    row["method"] = r.method;
    row["kernel"] = r.kernel;
    row["h1"] = r.h1;
    row["h2"] = r.h2;
    row["alpha"] = r.alpha;
    row["reps"] = r.reps;
    row["reject_rate"] = r.reject_rate;
    row["seed"] = r.seed;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

PowerTable run_power_study(const StudyConfig& config) {
  require(!config.ns.empty(), ErrorKind::invalid_argument, "no sample sizes given");
  require(!config.rho_rules.empty(), ErrorKind::invalid_argument, "no rho rules given");
  require(!config.methods.empty(), ErrorKind::invalid_argument, "no methods given");
  require(config.reps >= 1, ErrorKind::invalid_argument, "reps must be >= 1");
  require(config.alpha > 0.0 && config.alpha < 1.0, ErrorKind::invalid_argument,
          "alpha must be in (0, 1)");

  const double crit = std_normal_quantile(1.0 - config.alpha);
  PowerTable table;
  for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
    const std::size_t n = config.ns[ni];
    const double h1 = config.bandwidths.resolve_h1(n);
    const double h2 = config.bandwidths.resolve_h2(n);

    // Per-kernel constants of the studentized statistic, shared by every rho
    // cell at this n.
    struct KernelCell {
      std::shared_ptr<const CoefficientTables> tables;
      double b_n = 0.0;
      double sigma0 = 0.0;
    };
    std::vector<KernelCell> cells(config.methods.size());
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      if (config.methods[m].method != Method::kernel) continue;
      KernelCell kc;
      kc.tables = CoefficientTables::get(n, config.methods[m].kernel, h1, h2);
      kc.b_n = centering_bn(*kc.tables);
      kc.sigma0 = std::sqrt(sigma0_sq(config.methods[m].kernel));
      cells[m] = std::move(kc);
    }

    const double scale = std::sqrt(static_cast<double>(n) / h1);
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t ri = 0; ri < config.rho_rules.size(); ++ri) {
      const RhoRule& rule = config.rho_rules[ri];
      const double rho = rule.rho(n, h1);
      require(std::fabs(rho) <= 1.0, ErrorKind::invalid_argument, "|rho| must stay <= 1");
      const std::uint64_t cell_id =
          static_cast<std::uint64_t>(ni * config.rho_rules.size() + ri) << 32;

      std::vector<std::vector<std::uint8_t>> rejects(config.methods.size());
      for (auto& r : rejects) r.assign(config.reps, 0);

      parallel_reps(config.reps, config.threads, [&](std::size_t rep) {
        const std::uint64_t rep_seed = mix_seed(config.seed, cell_id, rep);
        Rng rng(rep_seed);
        PairedSample ps;
        sample_bivariate_normal(rng, n, rho, ps);
        const RankedSample ranked =
            rank_sample(ps, TiesPolicy::jitter, rep_seed ^ kRankSeedSalt);
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
          double z = 0.0;
          if (config.methods[m].method == Method::kernel) {
            const double tau2 = tau2_pairsum(ranked, *cells[m].tables);
            z = scale * (r_hat(tau2) - cells[m].b_n) / (12.0 * cells[m].sigma0);
          } else {
            z = root_n * xi_hat(ranked) / std::sqrt(0.4);
          }
          rejects[m][rep] = (z > crit) ? 1 : 0;
        }
      });

      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        std::uint64_t hits = 0;
        for (std::uint8_t r : rejects[m]) hits += r;
        PowerRow row;
        row.n = n;
        row.rho_rule = rule.label();
        row.rho = rho;
        row.method = method_label(config.methods[m]);
        row.kernel = method_kernel_label(config.methods[m]);
        row.h1 = h1;
        row.h2 = h2;
        row.alpha = config.alpha;
        row.reps = config.reps;
        row.reject_rate = static_cast<double>(hits) / static_cast<double>(config.reps);
        row.seed = config.seed;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::string NullDistResult::to_csv() const {
  std::string out = "bin_lo,bin_hi,count,normal_density_mid\n";
  const double width = (hi - lo) / static_cast<double>(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double blo = lo + width * static_cast<double>(b);
    const double bhi = lo + width * static_cast<double>(b + 1);
    out += fmt_double(blo);
    out += ',';
    out += fmt_double(bhi);
    out += ',';
    out += std::to_string(counts[b]);
    out += ',';
    out += fmt_double(std_normal_pdf(0.5 * (blo + bhi)));
    out += '\n';
  }
  return out;
}

ordered_json NullDistResult::to_json() const {
  ordered_json j;
  j["n"] = n;
  j["kernel"] = kernel;
  j["h1"] = h1;
  j["h2"] = h2;
  j["reps"] = reps;
  j["seed"] = seed;
  j["lo"] = lo;
  j["hi"] = hi;
  j["underflow"] = underflow;
  j["overflow"] = overflow;
  j["mean"] = mean;
  j["variance"] = variance;
  j["skewness"] = skewness;
  j["ks_normal"] = ks_normal;
  j["counts"] = counts;
  return j;
}

NullDistResult run_null_histogram(const NullDistConfig& config) {
  require(config.reps >= 2, ErrorKind::invalid_argument, "reps must be >= 2");
  require(config.bins >= 1 && config.bins <= 100000, ErrorKind::invalid_argument,
          "bins out of range");
  const std::size_t n = config.n;
  const double h1 = config.bandwidths.resolve_h1(n);
  const double h2 = config.bandwidths.resolve_h2(n);
  auto tables = CoefficientTables::get(n, config.kernel, h1, h2);
  const double b_n = centering_bn(*tables);
  const double sigma0 = std::sqrt(sigma0_sq(config.kernel));
  const double scale = std::sqrt(static_cast<double>(n) / h1);

  std::vector<double> zs(config.reps, 0.0);
  parallel_reps(config.reps, config.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = mix_seed(config.seed, 0, rep);
    Rng rng(rep_seed);
    PairedSample ps;
    sample_bivariate_normal(rng, n, 0.0, ps);
    const RankedSample ranked = rank_sample(ps, TiesPolicy::jitter, rep_seed ^ kRankSeedSalt);
    const double tau2 = tau2_pairsum(ranked, *tables);
    zs[rep] = scale * (r_hat(tau2) - b_n) / (12.0 * sigma0);
  });

  NullDistResult out;
  out.n = n;
  out.kernel = kernel_name(config.kernel);
  out.h1 = h1;
  out.h2 = h2;
  out.reps = config.reps;
  out.seed = config.seed;
  out.counts.assign(config.bins, 0);

  const double width = (out.hi - out.lo) / static_cast<double>(config.bins);
  for (double z : zs) {
    if (z < out.lo) {
      ++out.underflow;
    } else {
      const std::size_t b = static_cast<std::size_t>((z - out.lo) / width);
      if (b >= config.bins) {
        ++out.overflow;
      } else {
        ++out.counts[b];
      }
    }
  }

  const double reps_d = static_cast<double>(config.reps);
  Kahan mean_acc;
  for (double z : zs) mean_acc.add(z);
  out.mean = mean_acc.value() / reps_d;
  Kahan m2_acc, m3_acc;
  for (double z : zs) {
    const double d = z - out.mean;
    m2_acc.add(d * d);
    m3_acc.add(d * d * d);
  }
  out.variance = m2_acc.value() / (reps_d - 1.0);
  const double m2 = m2_acc.value() / reps_d;
  const double m3 = m3_acc.value() / reps_d;
  out.skewness = (m2 > 0.0) ? m3 / std::pow(m2, 1.5) : 0.0;

  std::sort(zs.begin(), zs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double f = std_normal_cdf(zs[i]);
    const double lo_step = static_cast<double>(i) / reps_d;
    const double hi_step = static_cast<double>(i + 1) / reps_d;
    ks = std::max(ks, std::max(hi_step - f, f - lo_step));
  }
  out.ks_normal = ks;
  return out;
}

}  // namespace depkern
