// End-to-end acceptance gate. Each criterion prints one line:
//   ACCEPTANCE NN <name>: PASS|FAIL (<detail>)
// and the process exits nonzero if any criterion failed. Tolerances and
// budgets are fixed here, on purpose, so regressions cannot hide behind
// looser settings.
//
// usage: acceptance <cli-binary> <work-dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "depkern/coeff_tables.hpp"
#include "depkern/copula_variance.hpp"
#include "depkern/estimators.hpp"
#include "depkern/montecarlo.hpp"
#include "depkern/perm_oracle.hpp"
#include "depkern/sample.hpp"

namespace {

using depkern::BandwidthConfig;
using depkern::CoefficientTables;
using depkern::CopulaModel;
using depkern::DecompositionTables;
using depkern::KernelId;
using depkern::RankedSample;
using depkern::VarianceBreakdown;

int g_failures = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void record(int num, const char* name, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %02d %s: %s (%s)\n", num, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename F>
void criterion(int num, const char* name, F&& body) {
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = fmt("exception: %s", e.what());
  }
  record(num, name, pass, detail);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RankedSample identity_ranked(std::size_t n) {
  RankedSample rk;
  rk.n = n;
  rk.r.resize(n);
  rk.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rk.r[i] = static_cast<std::int32_t>(i + 1);
    rk.s[i] = static_cast<std::int32_t>(i + 1);
  }
  return rk;
}

DecompositionTables decomp_defaults(std::size_t n, KernelId k) {
  const BandwidthConfig bw{};
  return depkern::build_decomposition(
      CoefficientTables::get(n, k, bw.resolve_h1(n), bw.resolve_h2(n)));
}

std::array<double, 8> term_values(const VarianceBreakdown& v) {
  return {v.m,        v.var_z1,   v.var_z2,   v.var_z3,
          v.cov12_x2, v.cov13_x2, v.cov23_x2, v.sigma_sq};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return in ? buf.str() : std::string();
}

std::optional<depkern::NullDistResult> g_null_hist;

const depkern::NullDistResult& null_histogram() {
  if (!g_null_hist) {
    depkern::NullDistConfig nc;
    nc.n = 2000;
    nc.reps = 1000;
    nc.seed = 7;
    nc.bins = 64;
    nc.threads = 0;
    g_null_hist = depkern::run_null_histogram(nc);
  }
  return *g_null_hist;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <work-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const std::string work = argv[2];
  std::filesystem::create_directories(work);

  criterion(1, "pair sum matches quadrature", [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 eng(12345);
    double worst = 0.0;
    int cases = 0;
    for (std::size_t n : {5u, 10u, 30u, 50u}) {
      const BandwidthConfig bw{};
      const double h1 = bw.resolve_h1(n);
      const double h2 = bw.resolve_h2(n);
      for (int trial = 0; trial < 20; ++trial) {
        const KernelId kid =
            (trial % 2 == 0) ? KernelId::epanechnikov : KernelId::triangular;
        const auto tables = CoefficientTables::get(n, kid, h1, h2);
        RankedSample rk = identity_ranked(n);
        for (std::size_t i = n - 1; i > 0; --i) {
          const std::size_t j = static_cast<std::size_t>(eng() % (i + 1));
          std::swap(rk.s[i], rk.s[j]);
        }
        const double ps = depkern::tau2_pairsum(rk, *tables);
        const double q = depkern::tau2_quadrature(rk, kid, h1, h2, 1024);
        worst = std::max(worst, std::fabs(ps - q) / std::max(std::fabs(q), 1e-300));
        ++cases;
      }
    }
    const double secs = seconds_since(t0);
    detail = fmt("worst rel %.2e over %d cases, %.1fs", worst, cases, secs);
    return worst < 1e-6 && secs < 60.0;
  });

  criterion(2, "permutation means are exact", [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::size_t n : {6u, 7u}) {
      for (KernelId kid : {KernelId::epanechnikov, KernelId::triangular}) {
        const DecompositionTables dt = decomp_defaults(n, kid);
        const depkern::EnumerationResult res = depkern::enumerate_null(dt);
        const double bhat = depkern::centering_bhat(*dt.base);
        worst = std::max({worst, std::fabs(res.mean_d),
                          std::fabs(res.mean_t - dt.c_n),
                          std::fabs(res.mean_s - res.mean_t),
                          std::fabs(res.mean_tau2 - bhat)});
      }
    }
    const double secs = seconds_since(t0);
    detail = fmt("worst deviation %.2e, %.1fs", worst, secs);
    return worst < 1e-12 && secs < 60.0;
  });

  criterion(3, "variance formula matches enumeration", [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_enum = 0.0;
    for (std::size_t n : {6u, 7u}) {
      for (KernelId kid : {KernelId::epanechnikov, KernelId::triangular}) {
        const DecompositionTables dt = decomp_defaults(n, kid);
        const double formula = depkern::var_d_formula(dt);
        const double enu = depkern::enumerate_null(dt).var_d;
        worst_enum = std::max(worst_enum, std::fabs(enu - formula) / formula);
      }
    }
    const DecompositionTables dt300 = decomp_defaults(300, KernelId::epanechnikov);
    const double formula = depkern::var_d_formula(dt300);
    const double emp = depkern::var_d_empirical(dt300, 20000, 17);
    const double bridge = std::fabs(emp - formula) / formula;
    const double secs = seconds_since(t0);
    detail = fmt("enum rel %.2e, sampled bridge rel %.3f, %.1fs", worst_enum, bridge, secs);
    return worst_enum < 1e-10 && bridge < 0.10 && secs < 120.0;
  });

  criterion(4, "second moment two ways", [](std::string& detail) {
    double agree = 0.0;
    double lo = 1e300, hi = 0.0;
    for (std::size_t n : {50u, 500u, 5000u}) {
      const DecompositionTables dt = decomp_defaults(n, KernelId::epanechnikov);
      const depkern::Mu2Pair p = depkern::mu2_two_ways(dt);
      if (n == 50) {
        agree = std::fabs(p.closed - p.direct) / std::max(1.0, std::fabs(p.closed));
      }
      lo = std::min(lo, p.closed);
      hi = std::max(hi, p.closed);
    }
    detail = fmt("n=50 rel %.2e, closed range [%.4f, %.4f]", agree, lo, hi);
    return agree < 1e-10 && lo >= 0.005 && hi <= 16.0;
  });

  criterion(5, "limit variance constants", [](std::string& detail) {
    const double psi_e = depkern::kernel_overlap_psi(KernelId::epanechnikov, 0.0);
    const double psi_t = depkern::kernel_overlap_psi(KernelId::triangular, 0.0);
    const double s2_e = depkern::sigma0_sq(KernelId::epanechnikov);
    const double s2_t = depkern::sigma0_sq(KernelId::triangular);
    const double want_e = 17387.0 / 3225600.0;
    const double want_t = 3859.0 / 816480.0;
    const bool psi_ok =
        std::fabs(psi_e - 0.375) < 1e-12 && std::fabs(psi_t - 0.375) < 1e-12;
    const bool fix_ok =
        std::fabs(s2_e - want_e) < 1e-8 && std::fabs(s2_t - want_t) < 1e-8;
    const bool range_ok = s2_e > 0.0 && s2_e < 2.0 / 45.0 && s2_t > 0.0 && s2_t < 2.0 / 45.0;
    detail = fmt("psi(0) off by %.1e/%.1e, sigma0_sq off by %.1e/%.1e",
                 std::fabs(psi_e - 0.375), std::fabs(psi_t - 0.375),
                 std::fabs(s2_e - want_e), std::fabs(s2_t - want_t));
    return psi_ok && fix_ok && range_ok;
  });

  criterion(6, "null level and moments", [](std::string& detail) {
    depkern::StudyConfig sc;
    sc.ns = {1000};
    sc.rho_rules = {depkern::RhoRule::parse("zero")};
    sc.methods = {depkern::parse_method_spec("kernel-epanechnikov")};
    sc.reps = 500;
    sc.seed = 101;
    sc.threads = 0;
    const double rate = depkern::run_power_study(sc).rows[0].reject_rate;

    const depkern::NullDistResult& hist = null_histogram();
    detail = fmt("reject %.3f, statistic mean %.3f var %.3f", rate, hist.mean,
                 hist.variance);
    return rate >= 0.02 && rate <= 0.09 && std::fabs(hist.mean) <= 0.15 &&
           hist.variance >= 0.75 && hist.variance <= 1.3;
  });

  criterion(7, "power against shrinking alternatives", [](std::string& detail) {
    depkern::StudyConfig sc;
    sc.ns = {100, 1000};
    sc.rho_rules = {depkern::RhoRule::parse("n^-0.25")};
    sc.methods = {depkern::parse_method_spec("kernel-epanechnikov"),
                  depkern::parse_method_spec("kernel-triangular"),
                  depkern::parse_method_spec("chatterjee")};
    sc.reps = 500;
    sc.seed = 11;
    sc.threads = 0;
    const depkern::PowerTable table = depkern::run_power_study(sc);
    if (table.rows.size() != 6) {
      detail = "unexpected row count";
      return false;
    }
    const double target[6] = {0.144, 0.196, 0.182, 0.382, 0.462, 0.190};
    const double tol[6] = {0.07, 0.07, 0.06, 0.07, 0.07, 0.06};
    bool rates_ok = true;
    for (int i = 0; i < 6; ++i) {
      if (std::fabs(table.rows[i].reject_rate - target[i]) > tol[i]) rates_ok = false;
    }
    const double gap = table.rows[3].reject_rate - table.rows[5].reject_rate;
    const double ks = null_histogram().ks_normal;
    detail = fmt("rates %.3f/%.3f/%.3f at n=100, %.3f/%.3f/%.3f at n=1000, gap %.3f, ks %.3f",
                 table.rows[0].reject_rate, table.rows[1].reject_rate,
                 table.rows[2].reject_rate, table.rows[3].reject_rate,
                 table.rows[4].reject_rate, table.rows[5].reject_rate, gap, ks);
    return rates_ok && gap >= 0.1 && ks < 0.06;
  });

  criterion(8, "copula variance decomposition", [](std::string& detail) {
    const VarianceBreakdown ind = depkern::variance_terms(depkern::independence_model());
    const bool ind_ok = std::fabs(ind.var_z1 - 1.0 / 45.0) < 1e-8 &&
                        std::fabs(ind.var_z3 - 1.0 / 45.0) < 1e-8 &&
                        std::fabs(ind.sigma_sq) < 1e-6;

    const VarianceBreakdown g0 =
        depkern::variance_terms(depkern::gaussian_copula_model(0.0));
    const std::array<double, 8> a = term_values(ind);
    const std::array<double, 8> b = term_values(g0);
    double worst_g0 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst_g0 = std::max(worst_g0, std::fabs(a[i] - b[i]));
    }

    double worst_double = 0.0;
    for (int which : {0, 1}) {
      const CopulaModel model =
          which == 0 ? depkern::independence_model() : depkern::gaussian_copula_model(0.3);
      const std::array<double, 8> c = term_values(depkern::variance_terms(model, 64));
      const std::array<double, 8> d = term_values(depkern::variance_terms(model, 128));
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double scale = std::max({std::fabs(c[i]), std::fabs(d[i]), 1e-6});
        worst_double = std::max(worst_double, std::fabs(c[i] - d[i]) / scale);
      }
    }
    detail = fmt("independence off %.1e, rho=0 gap %.1e, node doubling %.1e",
                 std::fabs(ind.sigma_sq), worst_g0, worst_double);
    return ind_ok && worst_g0 < 1e-6 && worst_double < 1e-3;
  });

  criterion(9, "rank statistic exactness and level", [](std::string& detail) {
    const double xi = depkern::xi_hat(identity_ranked(10));
    const bool exact = (xi == 8.0 / 11.0);

    depkern::StudyConfig sc;
    sc.ns = {1000};
    sc.rho_rules = {depkern::RhoRule::parse("zero")};
    sc.methods = {depkern::parse_method_spec("chatterjee")};
    sc.reps = 500;
    sc.seed = 303;
    sc.threads = 0;
    const double rate = depkern::run_power_study(sc).rows[0].reject_rate;
    detail = fmt("xi %s 8/11 bitwise, null reject %.3f", exact ? "==" : "!=", rate);
    return exact && rate >= 0.02 && rate <= 0.09;
  });

  criterion(10, "identical output for any thread count", [&](std::string& detail) {
    const auto run = [&](const std::string& args) {
      const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
      return std::system(cmd.c_str());
    };
    const std::string sim =
        "simulate --ns 40 --rho-rule fixed=0.3 --rho-rule zero "
        "--methods kernel-epanechnikov --methods chatterjee --reps 6 --seed 11";
    const int rc1 = run(sim + " --threads 1 --out " + work + "/p1.csv");
    const int rc2 = run(sim + " --threads 4 --out " + work + "/p2.csv");
    const std::string nd = "nulldist --n 50 --reps 30 --bins 12 --seed 4";
    const int rc3 = run(nd + " --threads 1 --out " + work + "/d1.csv");
    const int rc4 = run(nd + " --threads 3 --out " + work + "/d2.csv");
    if (rc1 != 0 || rc2 != 0 || rc3 != 0 || rc4 != 0) {
      detail = fmt("cli exits %d/%d/%d/%d", rc1, rc2, rc3, rc4);
      return false;
    }
    const std::string p1 = read_file(work + "/p1.csv");
    const std::string d1 = read_file(work + "/d1.csv");
    const bool power_same = !p1.empty() && p1 == read_file(work + "/p2.csv") &&
                            read_file(work + "/p1.csv.json") == read_file(work + "/p2.csv.json") &&
                            !read_file(work + "/p1.csv.json").empty();
    const bool null_same = !d1.empty() && d1 == read_file(work + "/d2.csv") &&
                           read_file(work + "/d1.csv.json") == read_file(work + "/d2.csv.json") &&
                           !read_file(work + "/d1.csv.json").empty();
    detail = fmt("power files %s, nulldist files %s", power_same ? "identical" : "differ",
                 null_same ? "identical" : "differ");
    return power_same && null_same;
  });

  if (g_failures > 0) {
    std::printf("%d acceptance criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
