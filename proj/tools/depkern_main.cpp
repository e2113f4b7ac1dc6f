// Command line front end. All computation goes through the C API in
// depkern.h; this file only assembles configuration JSON, dispatches, and
// formats output and errors.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <depkern.h>

namespace {

using njson = nlohmann::json;

int exit_code_for(int rc) {
  switch (rc) {
    case DEPKERN_OK:
      return 0;
    case DEPKERN_E_IO:
    case DEPKERN_E_PARSE:
    case DEPKERN_E_FORMAT:
    case DEPKERN_E_TIES:
    case DEPKERN_E_SAMPLE_TOO_SMALL:
      return 2;
    case DEPKERN_E_QUADRATURE:
    case DEPKERN_E_INTERNAL:
      return 3;
    default:
      // invalid arguments, unknown kernel, bad config, oversized problem
      return 1;
  }
}

int report_error(int rc) {
  std::fprintf(stderr, "depkern: error: %s\n", depkern_last_error());
  return exit_code_for(rc);
}

void print_warnings(const std::string& doc) {
  const njson j = njson::parse(doc, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return;
  const auto it = j.find("warnings");
  if (it == j.end() || !it->is_array()) return;
  for (const njson& w : *it) {
    if (w.is_string()) {
      std::fprintf(stderr, "depkern: warning: %s\n", w.get<std::string>().c_str());
    }
  }
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  out.flush();
  return static_cast<bool>(out);
}

int emit_document(const std::string& doc, const std::string& out_path) {
  print_warnings(doc);
  if (out_path.empty()) {
    std::fputs(doc.c_str(), stdout);
    return 0;
  }
  if (!write_file(out_path, doc)) {
    std::fprintf(stderr, "depkern: error: cannot write '%s'\n", out_path.c_str());
    return 2;
  }
  return 0;
}

int run_json(int (*fn)(const char*, char**), const njson& cfg, const std::string& out_path) {
  char* out = nullptr;
  const int rc = fn(cfg.dump().c_str(), &out);
  if (rc != DEPKERN_OK) return report_error(rc);
  std::string doc(out);
  depkern_string_free(out);
  return emit_document(doc, out_path);
}

int run_table(int (*fn)(const char*, char**, char**), const njson& cfg,
              const std::string& out_path) {
  char* js = nullptr;
  char* cs = nullptr;
  const int rc = fn(cfg.dump().c_str(), &js, out_path.empty() ? nullptr : &cs);
  if (rc != DEPKERN_OK) return report_error(rc);
  std::string doc(js);
  depkern_string_free(js);
  std::string csv;
  if (cs != nullptr) {
    csv = cs;
    depkern_string_free(cs);
  }
  if (out_path.empty()) {
    std::fputs(doc.c_str(), stdout);
    return 0;
  }
  if (!write_file(out_path, csv)) {
    std::fprintf(stderr, "depkern: error: cannot write '%s'\n", out_path.c_str());
    return 2;
  }
  const std::string sidecar = out_path + ".json";
  if (!write_file(sidecar, doc)) {
    std::fprintf(stderr, "depkern: error: cannot write '%s'\n", sidecar.c_str());
    return 2;
  }
  return 0;
}

// --threads wins; otherwise DEPKERN_THREADS; otherwise all cores.
std::optional<std::uint64_t> env_threads() {
  const char* env = std::getenv("DEPKERN_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    std::fprintf(stderr, "depkern: error: DEPKERN_THREADS must be a nonnegative integer\n");
    std::exit(1);
  }
  return static_cast<std::uint64_t>(v);
}

struct DataOpts {
  std::string csv;
  bool header = false;
  std::string kernel = "epanechnikov";
  double h1 = 0.0;
  double h2 = 0.0;
  CLI::Option* h1_opt = nullptr;
  CLI::Option* h2_opt = nullptr;
  std::string ties = "error";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd, bool with_csv) {
    if (with_csv) {
      cmd->add_option("--csv", csv, "input file with two numeric columns")->required();
      cmd->add_flag("--header", header, "skip the first row");
      cmd->add_option("--ties", ties, "tie handling: error or jitter")
          ->check(CLI::IsMember({"error", "jitter"}));
      cmd->add_option("--seed", seed, "seed for the jitter tie breaker");
    }
    cmd->add_option("--kernel", kernel, "epanechnikov or triangular");
    h1_opt = cmd->add_option("--h1", h1, "first smoothing bandwidth (default n^-0.3)");
    h2_opt = cmd->add_option("--h2", h2, "second smoothing bandwidth (default n^-0.8)");
  }

  void fill(njson& cfg, bool with_csv) const {
    if (with_csv) {
      cfg["csv"] = csv;
      cfg["has_header"] = header;
      cfg["ties"] = ties;
      cfg["seed"] = seed;
    }
    cfg["kernel"] = kernel;
    if (h1_opt != nullptr && h1_opt->count() > 0) cfg["h1"] = h1;
    if (h2_opt != nullptr && h2_opt->count() > 0) cfg["h2"] = h2;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependence estimation and independence tests on ranked pairs"};
  app.set_version_flag("--version", std::string(depkern_version()));
  app.require_subcommand(1);

  std::string out_path;

  // estimate
  auto* estimate = app.add_subcommand("estimate", "point estimates of tau2, r and xi");
  DataOpts est_opts;
  est_opts.attach(estimate, true);
  estimate->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // test
  auto* test = app.add_subcommand("test", "one-sided asymptotic independence test");
  DataOpts test_opts;
  test_opts.attach(test, true);
  double alpha = 0.05;
  std::string method = "kernel";
  test->add_option("--alpha", alpha, "test level")->check(CLI::Range(1e-12, 0.999999));
  test->add_option("--method", method, "kernel or chatterjee")
      ->check(CLI::IsMember({"kernel", "chatterjee"}));
  test->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // sigma0
  auto* sigma0 = app.add_subcommand("sigma0", "limit variance constant of the statistic");
  std::string sigma0_kernel = "epanechnikov";
  double sigma0_tol = 1e-10;
  sigma0->add_option("--kernel", sigma0_kernel, "epanechnikov or triangular");
  sigma0->add_option("--tol", sigma0_tol, "quadrature refinement tolerance");
  sigma0->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // centering
  auto* centering = app.add_subcommand("centering", "exact and surrogate null centerings");
  DataOpts cent_opts;
  std::uint64_t cent_n = 0;
  bool cent_surrogate = false;
  centering->add_option("--n", cent_n, "sample size")->required();
  cent_opts.attach(centering, false);
  centering->add_flag("--surrogate", cent_surrogate,
                      "report only the cheap surrogate (works from n = 3)");
  centering->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // sigma2
  auto* sigma2 = app.add_subcommand("sigma2", "copula limit variance decomposition");
  std::string model = "independence";
  double rho = 0.0;
  std::uint64_t nodes = 64;
  sigma2->add_option("--model", model, "independence or gaussian")
      ->check(CLI::IsMember({"independence", "gaussian"}));
  sigma2->add_option("--rho", rho, "gaussian correlation, |rho| < 1");
  sigma2->add_option("--nodes", nodes, "quadrature nodes per axis");
  sigma2->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "cross-check permutation moments against closed forms");
  DataOpts oracle_opts;
  std::uint64_t oracle_n = 0;
  std::uint64_t num_perms = 0;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("--n", oracle_n, "sample size (n <= 8 enumerates exactly)")->required();
  oracle_opts.attach(oracle, false);
  oracle->add_option("--num-perms", num_perms, "sampled permutations for the bridge");
  oracle->add_option("--seed", oracle_seed, "seed for the sampled bridge");
  oracle->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "power study on bivariate normal data");
  std::vector<std::uint64_t> ns;
  std::vector<std::string> rho_rules;
  std::vector<std::string> methods;
  std::string scenario = "custom";
  DataOpts sim_opts;
  double sim_alpha = 0.05;
  std::uint64_t reps = 1000;
  std::uint64_t sim_seed = 1;
  std::uint64_t threads = 0;
  simulate->add_option("--scenario", scenario,
                       "custom, or table1 for the full published grid")
      ->check(CLI::IsMember({"custom", "table1"}));
  auto* ns_opt = simulate->add_option("--ns", ns, "sample sizes")->delimiter(',');
  auto* rho_opt =
      simulate->add_option("--rho-rule", rho_rules,
                           "one or more of zero, fixed=V, n^E, nh1^E (E < 0; nh1 is n/h1)")
          ->delimiter(',');
  auto* methods_opt =
      simulate
          ->add_option("--methods", methods,
                       "chatterjee, kernel-epanechnikov, kernel-triangular")
          ->delimiter(',');
  sim_opts.h1_opt = simulate->add_option("--h1", sim_opts.h1, "first bandwidth override");
  sim_opts.h2_opt = simulate->add_option("--h2", sim_opts.h2, "second bandwidth override");
  simulate->add_option("--alpha", sim_alpha, "test level");
  auto* reps_opt = simulate->add_option("--reps", reps, "Monte Carlo repetitions per cell");
  simulate->add_option("--seed", sim_seed, "master seed");
  auto* sim_threads_opt = simulate->add_option("--threads", threads, "worker threads (0: all cores)");
  simulate->add_option("--out", out_path, "write CSV here plus a .json sidecar");

  // nulldist
  auto* nulldist = app.add_subcommand(
      "nulldist", "null distribution histogram of the studentized statistic");
  DataOpts null_opts;
  std::uint64_t null_n = 0;
  std::uint64_t null_reps = 1000;
  std::uint64_t null_seed = 1;
  std::uint64_t bins = 64;
  std::uint64_t null_threads = 0;
  nulldist->add_option("--n", null_n, "sample size")->required();
  null_opts.attach(nulldist, false);
  nulldist->add_option("--reps", null_reps, "Monte Carlo repetitions");
  nulldist->add_option("--seed", null_seed, "master seed");
  nulldist->add_option("--bins", bins, "histogram bins over [-4, 4]");
  auto* null_threads_opt =
      nulldist->add_option("--threads", null_threads, "worker threads (0: all cores)");
  nulldist->add_option("--out", out_path, "write CSV here plus a .json sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (estimate->parsed()) {
    njson cfg;
    est_opts.fill(cfg, true);
    return run_json(depkern_estimate_run, cfg, out_path);
  }
  if (test->parsed()) {
    njson cfg;
    test_opts.fill(cfg, true);
    cfg["alpha"] = alpha;
    cfg["method"] = method;
    return run_json(depkern_test_run, cfg, out_path);
  }
  if (sigma0->parsed()) {
    njson cfg;
    cfg["kernel"] = sigma0_kernel;
    cfg["tol"] = sigma0_tol;
    return run_json(depkern_sigma0_run, cfg, out_path);
  }
  if (centering->parsed()) {
    njson cfg;
    cfg["n"] = cent_n;
    cent_opts.fill(cfg, false);
    if (cent_surrogate) cfg["surrogate"] = true;
    return run_json(depkern_centering_run, cfg, out_path);
  }
  if (sigma2->parsed()) {
    njson cfg;
    cfg["model"] = model;
    cfg["rho"] = rho;
    cfg["nodes"] = nodes;
    return run_json(depkern_sigma2_run, cfg, out_path);
  }
  if (oracle->parsed()) {
    njson cfg;
    cfg["n"] = oracle_n;
    oracle_opts.fill(cfg, false);
    if (num_perms > 0) cfg["num_perms"] = num_perms;
    cfg["seed"] = oracle_seed;
    return run_json(depkern_oracle_run, cfg, out_path);
  }
  if (simulate->parsed()) {
    if (scenario == "table1") {
      // The published grid: five sample sizes, three correlation paths, all
      // three statistics, 500 replications.
      if (ns_opt->count() == 0) ns = {100, 500, 1000, 5000, 10000};
      if (rho_opt->count() == 0) rho_rules = {"n^-0.25", "nh1^-0.25", "zero"};
      if (methods_opt->count() == 0)
        methods = {"kernel-epanechnikov", "kernel-triangular", "chatterjee"};
      if (reps_opt->count() == 0) reps = 500;
    } else if (ns_opt->count() == 0 || rho_opt->count() == 0 || methods_opt->count() == 0) {
      std::fprintf(stderr,
                   "depkern: error: custom scenario needs --ns, --rho-rule and --methods\n");
      return 1;
    }
    njson cfg;
    cfg["ns"] = ns;
    cfg["rho_rules"] = rho_rules;
    cfg["methods"] = methods;
    sim_opts.fill(cfg, false);
    cfg.erase("kernel");  // per-method kernels; the shared key does not apply
    cfg["alpha"] = sim_alpha;
    cfg["reps"] = reps;
    cfg["seed"] = sim_seed;
    if (sim_threads_opt->count() > 0) {
      cfg["threads"] = threads;
    } else if (auto env = env_threads()) {
      cfg["threads"] = *env;
    }
    return run_table(depkern_power_study_run, cfg, out_path);
  }
  if (nulldist->parsed()) {
    njson cfg;
    cfg["n"] = null_n;
    null_opts.fill(cfg, false);
    cfg["reps"] = null_reps;
    cfg["seed"] = null_seed;
    cfg["bins"] = bins;
    if (null_threads_opt->count() > 0) {
      cfg["threads"] = null_threads;
    } else if (auto env = env_threads()) {
      cfg["threads"] = *env;
    }
    return run_table(depkern_nulldist_run, cfg, out_path);
  }
  return 1;
}
