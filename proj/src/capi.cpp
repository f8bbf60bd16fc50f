#include "msvortex/msvortex.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <new>
#include <numbers>
#include <string>
#include <string_view>

#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"
#include "msvortex/pipeline.hpp"
#include "msvortex/report.hpp"

struct msv_config {
  msv::RunConfig cfg;
};

struct msv_run {
  msv::RunResult result;
};

namespace {

thread_local std::string last_error;

msv_status status_for(msv::ErrorKind kind) {
  switch (msv::exit_code(kind)) {
    case 0:
      return MSV_HELP;
    case 2:
      return MSV_ERR_CONFIG;
    case 3:
      return MSV_ERR_IO;
    case 4:
      return MSV_ERR_NONCONVERGENCE;
    case 5:
      return MSV_ERR_EVALUATION;
    default:
      return MSV_ERR_INTERNAL;
  }
}

msv_status fail(msv_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
msv_status guarded(const std::function<void()>& body) {
  try {
    body();
    return MSV_OK;
  } catch (const msv::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MSV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MSV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MSV_ERR_INTERNAL, "unknown exception");
  }
}

msv_status unknown_key(const char* key) {
  return fail(MSV_ERR_CONFIG, std::string("unknown key '") + (key ? key : "(null)") + "'");
}

}  // namespace

extern "C" {

const char* msv_version(void) { return "0.1.0"; }

const char* msv_last_error(void) { return last_error.c_str(); }

int msv_status_exit_code(msv_status status) {
  switch (status) {
    case MSV_OK:
    case MSV_HELP:
      return 0;
    case MSV_ERR_CONFIG:
    case MSV_ERR_IO:
    case MSV_ERR_NONCONVERGENCE:
    case MSV_ERR_EVALUATION:
      return static_cast<int>(status);
    default:
      return 1;
  }
}

msv_status msv_config_create(msv_config** out) {
  if (!out) return fail(MSV_ERR_INVALID_HANDLE, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new msv_config{}; });
}

msv_status msv_config_from_args(int argc, const char* const* argv, msv_config** out) {
  if (!out) return fail(MSV_ERR_INVALID_HANDLE, "null output pointer");
  *out = nullptr;
  if (argc < 1 || !argv) return fail(MSV_ERR_CONFIG, "argv must hold at least the program name");
  return guarded([&] { *out = new msv_config{msv::parse_args(argc, argv)}; });
}

void msv_config_free(msv_config* cfg) { delete cfg; }

msv_status msv_config_set_int(msv_config* cfg, const char* key, int value) {
  if (!cfg) return fail(MSV_ERR_INVALID_HANDLE, "null config handle");
  if (!key) return unknown_key(key);
  const std::string_view k = key;
  if (k == "k")
    cfg->cfg.k = value;
  else if (k == "n")
    cfg->cfg.n = value;
  else if (k == "path_len")
    cfg->cfg.mpa.path_len = value;
  else if (k == "max_iter")
    cfg->cfg.mpa.max_iter = value;
  else
    return unknown_key(key);
  return MSV_OK;
}

msv_status msv_config_set_double(msv_config* cfg, const char* key, double value) {
  if (!cfg) return fail(MSV_ERR_INVALID_HANDLE, "null config handle");
  if (!key) return unknown_key(key);
  const std::string_view k = key;
  msv::RunConfig& c = cfg->cfg;
  double* slot = k == "p"              ? &c.p
                 : k == "lambda"       ? &c.lambda
                 : k == "eps_start"    ? &c.eps_start
                 : k == "eps_end"      ? &c.eps_end
                 : k == "eps_factor"   ? &c.eps_factor
                 : k == "rmax"         ? &c.rmax
                 : k == "gamma"        ? &c.gamma
                 : k == "grad_tol"     ? &c.mpa.grad_tol
                 : k == "newton_tol"   ? &c.newton_tol
                 : k == "residual_tol" ? &c.residual_tol
                                       : nullptr;
  if (!slot) return unknown_key(key);
  *slot = value;
  return MSV_OK;
}

msv_status msv_config_set_string(msv_config* cfg, const char* key, const char* value) {
  if (!cfg) return fail(MSV_ERR_INVALID_HANDLE, "null config handle");
  if (!key) return unknown_key(key);
  if (!value) return fail(MSV_ERR_CONFIG, "null string value");
  const std::string_view k = key;
  return guarded([&] {
    msv::RunConfig& c = cfg->cfg;
    if (k == "method")
      c.method = msv::parse_method(value);
    else if (k == "profile_out")
      c.profile_out = value;
    else if (k == "report_out")
      c.report_out = value;
    else if (k == "seed_profile")
      c.seed_profile = value;
    else
      throw msv::Error(msv::ErrorKind::config, std::string("unknown key '") + key + "'");
  });
}

const char* msv_config_profile_out(const msv_config* cfg) {
  return cfg && !cfg->cfg.profile_out.empty() ? cfg->cfg.profile_out.c_str() : nullptr;
}

const char* msv_config_report_out(const msv_config* cfg) {
  return cfg && !cfg->cfg.report_out.empty() ? cfg->cfg.report_out.c_str() : nullptr;
}

msv_status msv_solve(const msv_config* cfg, msv_run** out) {
  if (!cfg || !out) return fail(MSV_ERR_INVALID_HANDLE, "null config handle or output pointer");
  *out = nullptr;
  return guarded([&] { *out = new msv_run{msv::run_pipeline(cfg->cfg)}; });
}

void msv_run_free(msv_run* run) { delete run; }

msv_status msv_run_get_double(const msv_run* run, const char* key, double* out) {
  if (!run || !out) return fail(MSV_ERR_INVALID_HANDLE, "null run handle or output pointer");
  if (!key) return unknown_key(key);
  const msv::RunResult& r = run->result;
  const std::string_view k = key;
  const msv::State& s = r.final_state;
  if (k == "eps") {
    *out = r.params.eps();
  } else if (k == "energy") {
    return guarded([&] { *out = msv::total_energy(s, r.params, r.grid); });
  } else if (k == "flux") {
    *out = 2.0 * std::numbers::pi * s.b.back();
  } else if (k == "min_u") {
    *out = *std::min_element(s.u.begin(), s.u.end());
  } else if (k == "seconds") {
    *out = r.total_seconds;
  } else if (r.solve && (k == "level" || k == "grad_norm" || k == "residual_sup" || k == "norm_h1")) {
    const msv::EpsRecord& rec = r.solve->records.back();
    *out = k == "level"       ? rec.level
           : k == "grad_norm" ? rec.grad_norm
           : k == "residual_sup" ? rec.residual_sup
                                 : rec.norm_h1;
  } else if (r.solve && k == "K") {
    *out = r.solve->K;
  } else if (r.solve && k == "c_bar") {
    *out = r.solve->c_bar;
  } else if (r.solve && k == "norm_bound") {
    *out = r.solve->norm_bound;
  } else if (r.solve && k == "extrapolation_gap") {
    *out = r.solve->extrapolation_gap;
  } else if (r.solve && r.solve->used_mpa && k == "mpa_level") {
    *out = r.solve->mpa.level;
  } else if (r.solve && r.solve->used_mpa && k == "mpa_iterations") {
    *out = r.solve->mpa.iterations;
  } else if (r.oracle && r.oracle->ok && k.starts_with("oracle_")) {
    const msv::OracleMetrics& m = *r.oracle;
    const std::string_view f = k.substr(7);
    if (f == "a")
      *out = m.a;
    else if (f == "beta")
      *out = m.beta;
    else if (f == "mass")
      *out = m.mass;
    else if (f == "sup_du" && r.solve)
      *out = m.sup_du;
    else if (f == "sup_db" && r.solve)
      *out = m.sup_db;
    else if (f == "energy_rel" && r.solve)
      *out = m.energy_rel;
    else
      return unknown_key(key);
  } else {
    return fail(MSV_ERR_CONFIG, std::string("key '") + key + "' is not available for this run");
  }
  return MSV_OK;
}

size_t msv_run_node_count(const msv_run* run) { return run ? run->result.grid.size() : 0; }

msv_status msv_run_copy_profile(const msv_run* run, double* r, double* u, double* b, size_t count) {
  if (!run) return fail(MSV_ERR_INVALID_HANDLE, "null run handle");
  const msv::RunResult& res = run->result;
  if (count != res.grid.size())
    return fail(MSV_ERR_CONFIG, "count must equal the node count " + std::to_string(res.grid.size()));
  const auto nodes = res.grid.r();
  if (r) std::copy(nodes.begin(), nodes.end(), r);
  if (u) std::copy(res.final_state.u.begin(), res.final_state.u.end(), u);
  if (b) std::copy(res.final_state.b.begin(), res.final_state.b.end(), b);
  return MSV_OK;
}

msv_status msv_run_write_profile(const msv_run* run, const char* path) {
  if (!run) return fail(MSV_ERR_INVALID_HANDLE, "null run handle");
  if (!path) return fail(MSV_ERR_IO, "null path");
  return guarded([&] { msv::write_profile(run->result.final_state, run->result.grid, path); });
}

msv_status msv_run_write_report(const msv_run* run, const char* path) {
  if (!run) return fail(MSV_ERR_INVALID_HANDLE, "null run handle");
  if (!path) return fail(MSV_ERR_IO, "null path");
  return guarded([&] { msv::write_report(run->result, path); });
}

}  // extern "C"
