#include "depkern.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "depkern/coeff_tables.hpp"
#include "depkern/copula_variance.hpp"
#include "depkern/error.hpp"
#include "depkern/estimators.hpp"
#include "depkern/inference.hpp"
#include "depkern/json_io.hpp"
#include "depkern/montecarlo.hpp"
#include "depkern/perm_oracle.hpp"
#include "depkern/sample.hpp"

struct depkern_sample {
  depkern::PairedSample data;
};

struct depkern_tables {
  std::shared_ptr<const depkern::CoefficientTables> tables;
};

namespace {

using depkern::Error;
using depkern::ErrorKind;
using njson = nlohmann::json;

thread_local std::string g_last_error;

int code_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return DEPKERN_E_INVALID_ARGUMENT;
    case ErrorKind::unknown_kernel:
      return DEPKERN_E_UNKNOWN_KERNEL;
    case ErrorKind::io:
      return DEPKERN_E_IO;
    case ErrorKind::parse:
      return DEPKERN_E_PARSE;
    case ErrorKind::format:
      return DEPKERN_E_FORMAT;
    case ErrorKind::ties:
      return DEPKERN_E_TIES;
    case ErrorKind::sample_too_small:
      return DEPKERN_E_SAMPLE_TOO_SMALL;
    case ErrorKind::too_large:
      return DEPKERN_E_TOO_LARGE;
    case ErrorKind::quadrature:
      return DEPKERN_E_QUADRATURE;
    case ErrorKind::config:
      return DEPKERN_E_CONFIG;
    case ErrorKind::internal:
      return DEPKERN_E_INTERNAL;
  }
  return DEPKERN_E_INTERNAL;
}

template <typename F>
int guarded(F&& f) noexcept {
  try {
    f();
    return DEPKERN_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e.kind());
  } catch (const njson::exception& e) {
    g_last_error = e.what();
    return DEPKERN_E_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DEPKERN_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DEPKERN_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DEPKERN_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

njson parse_config(const char* text) {
  depkern::require(text != nullptr, ErrorKind::config, "config is null");
  njson j = njson::parse(text, nullptr, false);
  depkern::require(!j.is_discarded(), ErrorKind::config, "config is not valid JSON");
  depkern::require(j.is_object(), ErrorKind::config, "config must be a JSON object");
  return j;
}

void check_keys(const njson& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    depkern::require(known, ErrorKind::config, "unknown config key '" + it.key() + "'");
  }
}

const njson* find_key(const njson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

double get_num(const njson& j, const char* key, double def) {
  const njson* v = find_key(j, key);
  if (v == nullptr) return def;
  depkern::require(v->is_number(), ErrorKind::config, std::string(key) + " must be a number");
  return v->get<double>();
}

std::uint64_t get_uint(const njson& j, const char* key, std::uint64_t def) {
  const njson* v = find_key(j, key);
  if (v == nullptr) return def;
  depkern::require(v->is_number_integer() || v->is_number_unsigned(), ErrorKind::config,
                   std::string(key) + " must be a nonnegative integer");
  if (v->is_number_integer()) {
    depkern::require(v->get<std::int64_t>() >= 0, ErrorKind::config,
                     std::string(key) + " must be a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

std::uint64_t req_uint(const njson& j, const char* key) {
  depkern::require(find_key(j, key) != nullptr, ErrorKind::config,
                   std::string("missing config key '") + key + "'");
  return get_uint(j, key, 0);
}

std::string get_str(const njson& j, const char* key, const std::string& def) {
  const njson* v = find_key(j, key);
  if (v == nullptr) return def;
  depkern::require(v->is_string(), ErrorKind::config, std::string(key) + " must be a string");
  return v->get<std::string>();
}

std::string req_str(const njson& j, const char* key) {
  const njson* v = find_key(j, key);
  depkern::require(v != nullptr, ErrorKind::config,
                   std::string("missing config key '") + key + "'");
  depkern::require(v->is_string(), ErrorKind::config, std::string(key) + " must be a string");
  return v->get<std::string>();
}

bool get_bool(const njson& j, const char* key, bool def) {
  const njson* v = find_key(j, key);
  if (v == nullptr) return def;
  depkern::require(v->is_boolean(), ErrorKind::config, std::string(key) + " must be a boolean");
  return v->get<bool>();
}

bool req_bool(const njson& j, const char* key) {
  const njson* v = find_key(j, key);
  depkern::require(v != nullptr, ErrorKind::config,
                   std::string("missing config key '") + key + "'");
  depkern::require(v->is_boolean(), ErrorKind::config, std::string(key) + " must be a boolean");
  return v->get<bool>();
}

depkern::BandwidthConfig bandwidths_from(const njson& j) {
  depkern::BandwidthConfig bw;
  if (find_key(j, "h1") != nullptr) bw.h1 = get_num(j, "h1", 0.0);
  if (find_key(j, "h2") != nullptr) bw.h2 = get_num(j, "h2", 0.0);
  return bw;
}

depkern::TiesPolicy ties_from(const njson& j) {
  const std::string t = get_str(j, "ties", "error");
  if (t == "error") return depkern::TiesPolicy::error;
  if (t == "jitter") return depkern::TiesPolicy::jitter;
  depkern::fail(ErrorKind::config, "ties must be 'error' or 'jitter'");
}

depkern::TiesPolicy ties_from_int(int policy) {
  if (policy == DEPKERN_TIES_ERROR) return depkern::TiesPolicy::error;
  if (policy == DEPKERN_TIES_JITTER) return depkern::TiesPolicy::jitter;
  depkern::fail(ErrorKind::invalid_argument, "ties_policy must be 0 (error) or 1 (jitter)");
}

depkern::PairedSample load_csv(const njson& j, std::vector<std::string>* warnings) {
  return depkern::read_csv(req_str(j, "csv"), req_bool(j, "has_header"), warnings);
}

void emit(const depkern::ordered_json& doc, char** out_json) {
  depkern::require(out_json != nullptr, ErrorKind::invalid_argument, "output pointer is null");
  *out_json = dup_string(depkern::dump_json(doc));
}

}  // namespace

extern "C" {

const char* depkern_version(void) { return "0.1.0"; }

const char* depkern_last_error(void) { return g_last_error.c_str(); }

void depkern_string_free(char* s) { std::free(s); }

int depkern_sample_create(const double* x, const double* y, size_t n, depkern_sample** out) {
  return guarded([&] {
    depkern::require(x != nullptr && y != nullptr && out != nullptr,
                     ErrorKind::invalid_argument, "null pointer argument");
    depkern::require(n >= 1, ErrorKind::invalid_argument, "n must be >= 1");
    for (size_t i = 0; i < n; ++i) {
      depkern::require(std::isfinite(x[i]) && std::isfinite(y[i]), ErrorKind::invalid_argument,
                       "sample values must be finite (index " + std::to_string(i) + ")");
    }
    auto s = std::make_unique<depkern_sample>();
    s->data.x.assign(x, x + n);
    s->data.y.assign(y, y + n);
    *out = s.release();
  });
}

int depkern_sample_from_csv(const char* path, int has_header, depkern_sample** out) {
  return guarded([&] {
    depkern::require(path != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    auto s = std::make_unique<depkern_sample>();
    s->data = depkern::read_csv(path, has_header != 0, nullptr);
    *out = s.release();
  });
}

void depkern_sample_free(depkern_sample* s) { delete s; }

int depkern_sample_size(const depkern_sample* s, size_t* out) {
  return guarded([&] {
    depkern::require(s != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    *out = s->data.size();
  });
}

int depkern_tables_build(size_t n, const char* kernel, double h1, double h2,
                         depkern_tables** out) {
  return guarded([&] {
    depkern::require(kernel != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    const depkern::KernelId kid = depkern::kernel_from_name(kernel);
    depkern::BandwidthConfig bw;
    if (h1 > 0.0) bw.h1 = h1;
    if (h2 > 0.0) bw.h2 = h2;
    auto t = std::make_unique<depkern_tables>();
    t->tables = depkern::CoefficientTables::get(n, kid, bw.resolve_h1(n), bw.resolve_h2(n));
    *out = t.release();
  });
}

void depkern_tables_free(depkern_tables* t) { delete t; }

int depkern_tables_info(const depkern_tables* t, size_t* n, double* h1, double* h2) {
  return guarded([&] {
    depkern::require(t != nullptr, ErrorKind::invalid_argument, "null pointer argument");
    if (n != nullptr) *n = t->tables->n;
    if (h1 != nullptr) *h1 = t->tables->h1;
    if (h2 != nullptr) *h2 = t->tables->h2;
  });
}

int depkern_tau2(const depkern_sample* s, const depkern_tables* t, int ties_policy,
                 uint64_t seed, double* out) {
  return guarded([&] {
    depkern::require(s != nullptr && t != nullptr && out != nullptr,
                     ErrorKind::invalid_argument, "null pointer argument");
    const depkern::RankedSample ranked =
        depkern::rank_sample(s->data, ties_from_int(ties_policy), seed);
    *out = depkern::tau2_pairsum(ranked, *t->tables);
  });
}

int depkern_xi(const depkern_sample* s, int ties_policy, uint64_t seed, double* out) {
  return guarded([&] {
    depkern::require(s != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    const depkern::RankedSample ranked =
        depkern::rank_sample(s->data, ties_from_int(ties_policy), seed);
    *out = depkern::xi_hat(ranked);
  });
}

int depkern_sigma0_sq(const char* kernel, double* out) {
  return guarded([&] {
    depkern::require(kernel != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    *out = depkern::sigma0_sq(depkern::kernel_from_name(kernel));
  });
}

int depkern_centering_bhat(const depkern_tables* t, double* out) {
  return guarded([&] {
    depkern::require(t != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    *out = depkern::centering_bhat(*t->tables);
  });
}

int depkern_centering_bn(const depkern_tables* t, double* out) {
  return guarded([&] {
    depkern::require(t != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    *out = depkern::centering_bn(*t->tables);
  });
}

int depkern_centering_surrogate(size_t n, const char* kernel, double h1, double* out) {
  return guarded([&] {
    depkern::require(kernel != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    const depkern::KernelId kid = depkern::kernel_from_name(kernel);
    depkern::BandwidthConfig bw;
    if (h1 > 0.0) bw.h1 = h1;
    *out = depkern::centering_surrogate(n, bw.resolve_h1(n), kid);
  });
}

int depkern_psi(const char* kernel, double t, double* out) {
  return guarded([&] {
    depkern::require(kernel != nullptr && out != nullptr, ErrorKind::invalid_argument,
                     "null pointer argument");
    *out = depkern::kernel_overlap_psi(depkern::kernel_from_name(kernel), t);
  });
}

int depkern_estimate_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"csv", "has_header", "kernel", "h1", "h2", "ties", "seed"});
    std::vector<std::string> csv_warnings;
    const depkern::PairedSample sample = load_csv(cfg, &csv_warnings);
    const depkern::KernelId kid =
        depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
    depkern::EstimateReport report = depkern::estimate(
        sample, kid, bandwidths_from(cfg), ties_from(cfg), get_uint(cfg, "seed", 0));
    report.warnings.insert(report.warnings.begin(), csv_warnings.begin(), csv_warnings.end());
    emit(report.to_json(), out_json);
  });
}

int depkern_test_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"csv", "has_header", "kernel", "h1", "h2", "ties", "seed", "alpha",
                     "method"});
    std::vector<std::string> csv_warnings;
    const depkern::PairedSample sample = load_csv(cfg, &csv_warnings);
    const double alpha = get_num(cfg, "alpha", 0.05);
    const std::string method = get_str(cfg, "method", "kernel");
    const depkern::TiesPolicy ties = ties_from(cfg);
    const std::uint64_t seed = get_uint(cfg, "seed", 0);
    depkern::TestReport report;
    if (method == "kernel") {
      const depkern::KernelId kid =
          depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
      report = depkern::kernel_test(sample, kid, bandwidths_from(cfg), alpha, ties, seed);
    } else if (method == "chatterjee") {
      report = depkern::chatterjee_test(sample, alpha, ties, seed);
    } else {
      depkern::fail(ErrorKind::config, "method must be 'kernel' or 'chatterjee'");
    }
    report.warnings.insert(report.warnings.begin(), csv_warnings.begin(), csv_warnings.end());
    emit(report.to_json(), out_json);
  });
}

int depkern_sigma0_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"kernel", "tol"});
    const depkern::KernelId kid =
        depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
    const double tol = get_num(cfg, "tol", 1e-10);
    depkern::ordered_json doc;
    doc["kernel"] = depkern::kernel_name(kid);
    doc["tol"] = tol;
    const double s2 = depkern::sigma0_sq(kid, tol);
    doc["sigma0_sq"] = s2;
    doc["sigma0"] = std::sqrt(s2);
    emit(doc, out_json);
  });
}

int depkern_centering_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"n", "kernel", "h1", "h2", "surrogate"});
    const std::size_t n = static_cast<std::size_t>(req_uint(cfg, "n"));
    const bool surrogate_only = get_bool(cfg, "surrogate", false);
    // n comes from configuration, not from data, so a too-small value is a
    // configuration error here; the underlying builders keep their own codes.
    depkern::require(n >= (surrogate_only ? 3u : 4u), ErrorKind::config,
                     surrogate_only ? "surrogate centering needs n >= 3"
                                    : "centering needs n >= 4");
    const depkern::KernelId kid =
        depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
    const depkern::BandwidthConfig bw = bandwidths_from(cfg);
    const double h1 = bw.resolve_h1(n);
    depkern::ordered_json doc;
    doc["n"] = n;
    doc["kernel"] = depkern::kernel_name(kid);
    doc["h1"] = h1;
    if (surrogate_only) {
      doc["b_surrogate"] = depkern::centering_surrogate(n, h1, kid);
      emit(doc, out_json);
      return;
    }
    const double h2 = bw.resolve_h2(n);
    auto tables = depkern::CoefficientTables::get(n, kid, h1, h2);
    doc["h2"] = h2;
    doc["b_hat"] = depkern::centering_bhat(*tables);
    doc["b_n"] = depkern::centering_bn(*tables);
    doc["b_surrogate"] = depkern::centering_surrogate(n, h1, kid);
    doc["warnings"] = depkern::bandwidth_warnings(n, h1, h2);
    emit(doc, out_json);
  });
}

int depkern_sigma2_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"model", "rho", "nodes"});
    const std::string model_name = get_str(cfg, "model", "independence");
    const double rho = get_num(cfg, "rho", 0.0);
    const std::size_t nodes = static_cast<std::size_t>(get_uint(cfg, "nodes", 64));
    depkern::CopulaModel model;
    if (model_name == "independence") {
      model = depkern::independence_model();
    } else if (model_name == "gaussian") {
      model = depkern::gaussian_copula_model(rho);
    } else {
      depkern::fail(ErrorKind::config, "model must be 'independence' or 'gaussian'");
    }
    const depkern::VarianceBreakdown vb = depkern::variance_terms(model, nodes);
    depkern::ordered_json doc;
    doc["model"] = model.name;
    doc["rho"] = model.rho;
    doc["nodes"] = nodes;
    const depkern::ordered_json terms = vb.to_json();
    for (const auto& item : terms.items()) {
      doc[item.key()] = item.value();
    }
    emit(doc, out_json);
  });
}

int depkern_oracle_run(const char* config_json, char** out_json) {
  return guarded([&] {
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"n", "kernel", "h1", "h2", "num_perms", "seed"});
    const std::size_t n = static_cast<std::size_t>(req_uint(cfg, "n"));
    depkern::require(n >= 4, ErrorKind::config, "oracle needs n >= 4");
    const depkern::KernelId kid =
        depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
    const depkern::BandwidthConfig bw = bandwidths_from(cfg);
    const double h1 = bw.resolve_h1(n);
    const double h2 = bw.resolve_h2(n);
    const std::size_t num_perms = static_cast<std::size_t>(get_uint(cfg, "num_perms", 0));
    const std::uint64_t seed = get_uint(cfg, "seed", 1);
    if (n > 8) {
      depkern::require(num_perms > 0, ErrorKind::too_large,
                       "exact enumeration needs n <= 8; give num_perms for a sampled bridge");
    }
    auto tables = depkern::CoefficientTables::get(n, kid, h1, h2);
    const depkern::DecompositionTables dt = depkern::build_decomposition(tables);
    const depkern::Mu2Pair mu2 = depkern::mu2_two_ways(dt);
    depkern::ordered_json doc;
    doc["n"] = n;
    doc["kernel"] = depkern::kernel_name(kid);
    doc["h1"] = h1;
    doc["h2"] = h2;
    doc["b_hat"] = depkern::centering_bhat(*tables);
    doc["c_n"] = dt.c_n;
    doc["mu2_closed"] = mu2.closed;
    doc["mu2_direct"] = mu2.direct;
    doc["var_d_formula"] = depkern::var_d_formula(dt);
    doc["var_2t_scaled"] = depkern::var_2t_scaled_exact(dt);
    if (n <= 8) {
      const depkern::EnumerationResult enu = depkern::enumerate_null(dt);
      doc["permutations"] = enu.permutations;
      doc["mean_tau2"] = enu.mean_tau2;
      doc["mean_s"] = enu.mean_s;
      doc["mean_t"] = enu.mean_t;
      doc["mean_d"] = enu.mean_d;
      doc["var_d_enum"] = enu.var_d;
      doc["var_s_enum"] = enu.var_s;
      doc["max_identity_residual"] = enu.max_identity_residual;
    }
    if (num_perms > 0) {
      doc["num_perms"] = num_perms;
      doc["seed"] = seed;
      doc["var_d_empirical"] = depkern::var_d_empirical(dt, num_perms, seed);
      doc["var_2t_scaled_empirical"] = depkern::var_2t_scaled_empirical(dt, num_perms, seed);
    }
    emit(doc, out_json);
  });
}

int depkern_power_study_run(const char* config_json, char** out_json, char** out_csv) {
  return guarded([&] {
    depkern::require(out_json != nullptr || out_csv != nullptr, ErrorKind::invalid_argument,
                     "both output pointers are null");
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"ns", "rho_rule", "rho_rules", "methods", "h1", "h2", "alpha", "reps",
                     "seed", "threads"});
    depkern::StudyConfig sc;
    const njson* ns = find_key(cfg, "ns");
    depkern::require(ns != nullptr && ns->is_array() && !ns->empty(), ErrorKind::config,
                     "ns must be a nonempty array of sample sizes");
    for (const njson& v : *ns) {
      depkern::require(v.is_number_integer() || v.is_number_unsigned(), ErrorKind::config,
                       "ns entries must be integers");
      sc.ns.push_back(v.get<std::size_t>());
    }
    const njson* rule = find_key(cfg, "rho_rule");
    const njson* rules = find_key(cfg, "rho_rules");
    depkern::require((rule != nullptr) != (rules != nullptr), ErrorKind::config,
                     "give exactly one of rho_rule (string) or rho_rules (array)");
    if (rule != nullptr) {
      sc.rho_rules.push_back(depkern::RhoRule::parse(req_str(cfg, "rho_rule")));
    } else {
      depkern::require(rules->is_array() && !rules->empty(), ErrorKind::config,
                       "rho_rules must be a nonempty array of strings");
      for (const njson& v : *rules) {
        depkern::require(v.is_string(), ErrorKind::config, "rho_rules entries must be strings");
        sc.rho_rules.push_back(depkern::RhoRule::parse(v.get<std::string>()));
      }
    }
    const njson* methods = find_key(cfg, "methods");
    depkern::require(methods != nullptr && methods->is_array() && !methods->empty(),
                     ErrorKind::config, "methods must be a nonempty array of strings");
    for (const njson& v : *methods) {
      depkern::require(v.is_string(), ErrorKind::config, "methods entries must be strings");
      sc.methods.push_back(depkern::parse_method_spec(v.get<std::string>()));
    }
    sc.bandwidths = bandwidths_from(cfg);
    sc.alpha = get_num(cfg, "alpha", 0.05);
    sc.reps = static_cast<std::size_t>(get_uint(cfg, "reps", 1000));
    sc.seed = get_uint(cfg, "seed", 1);
    sc.threads = static_cast<std::size_t>(get_uint(cfg, "threads", 0));
    const depkern::PowerTable table = depkern::run_power_study(sc);
    char* js = (out_json != nullptr) ? dup_string(depkern::dump_json(table.to_json())) : nullptr;
    char* cs = nullptr;
    if (out_csv != nullptr) {
      try {
        cs = dup_string(table.to_csv());
      } catch (...) {
        std::free(js);
        throw;
      }
    }
    if (out_json != nullptr) *out_json = js;
    if (out_csv != nullptr) *out_csv = cs;
  });
}

int depkern_nulldist_run(const char* config_json, char** out_json, char** out_csv) {
  return guarded([&] {
    depkern::require(out_json != nullptr || out_csv != nullptr, ErrorKind::invalid_argument,
                     "both output pointers are null");
    const njson cfg = parse_config(config_json);
    check_keys(cfg, {"n", "kernel", "h1", "h2", "reps", "seed", "bins", "threads"});
    depkern::NullDistConfig nc;
    nc.n = static_cast<std::size_t>(req_uint(cfg, "n"));
    nc.kernel = depkern::kernel_from_name(get_str(cfg, "kernel", "epanechnikov"));
    nc.bandwidths = bandwidths_from(cfg);
    nc.reps = static_cast<std::size_t>(get_uint(cfg, "reps", 1000));
    nc.seed = get_uint(cfg, "seed", 1);
    nc.bins = static_cast<std::size_t>(get_uint(cfg, "bins", 64));
    nc.threads = static_cast<std::size_t>(get_uint(cfg, "threads", 0));
    const depkern::NullDistResult result = depkern::run_null_histogram(nc);
    char* js = (out_json != nullptr) ? dup_string(depkern::dump_json(result.to_json())) : nullptr;
    char* cs = nullptr;
    if (out_csv != nullptr) {
      try {
        cs = dup_string(result.to_csv());
      } catch (...) {
        std::free(js);
        throw;
      }
    }
    if (out_json != nullptr) *out_json = js;
    if (out_csv != nullptr) *out_csv = cs;
  });
}

}  // extern "C"
