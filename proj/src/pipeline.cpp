#include "msvortex/pipeline.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"
#include "msvortex/report.hpp"

namespace msv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::config, message);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

CLI::App& build_app(CLI::App& app, RunConfig& cfg, std::string& method) {
  app.add_option("--k", cfg.k, "vortex degree (nonzero except with --method shooting)")->capture_default_str();
  app.add_option("--p", cfg.p, "exponent of the focusing term, > 2")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "coefficient of the focusing term, > 0")->capture_default_str();
  app.add_option("--eps-start", cfg.eps_start, "first penalty parameter")->capture_default_str();
  app.add_option("--eps-end", cfg.eps_end, "last penalty parameter")->capture_default_str();
  app.add_option("--eps-factor", cfg.eps_factor, "geometric factor of the eps schedule")->capture_default_str();
  app.add_option("--rmax", cfg.rmax, "truncation radius")->capture_default_str();
  app.add_option("--n", cfg.n, "number of grid cells")->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "grid grading exponent, >= 1")->capture_default_str();
  app.add_option("--method", method, "mpa+newton | newton-only | shooting | cross-check")->capture_default_str();
  app.add_option("--profile-out", cfg.profile_out, "CSV profile of the final state");
  app.add_option("--report-out", cfg.report_out, "JSON diagnostics report");
  app.add_option("--seed-profile", cfg.seed_profile,
                 "CSV profile: initial guess for newton-only, endpoint direction for mpa+newton");
  app.add_option("--path-len", cfg.mpa.path_len, "mountain-pass path nodes")->capture_default_str();
  app.add_option("--max-iter", cfg.mpa.max_iter, "mountain-pass iteration limit")->capture_default_str();
  app.add_option("--grad-tol", cfg.mpa.grad_tol, "mountain-pass gradient tolerance")->capture_default_str();
  app.add_option("--newton-tol", cfg.newton_tol, "Newton gradient tolerance")->capture_default_str();
  app.add_option("--residual-tol", cfg.residual_tol, "strong-form residual tolerance")->capture_default_str();
  return app;
}

// Linear interpolation of a profile column onto the grid nodes.
std::vector<double> resample(const Profile& prof, std::span<const double> column, std::span<const double> r) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r[i];
    if (x >= prof.r.back()) {
      out[i] = column.back();
      continue;
    }
    const auto it = std::upper_bound(prof.r.begin(), prof.r.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - prof.r.begin());
    if (j == 0) {
      out[i] = column.front();
      continue;
    }
    const double t = (x - prof.r[j - 1]) / (prof.r[j] - prof.r[j - 1]);
    out[i] = (1.0 - t) * column[j - 1] + t * column[j];
  }
  return out;
}

State load_seed(const std::string& path, const RadialGrid& grid, int k) {
  const Profile prof = read_profile(path);
  if (prof.r.size() < 2 || prof.r.front() != 0.0)
    throw Error(ErrorKind::config, "--seed-profile: profile must start at r = 0 and have at least two rows");
  for (std::size_t i = 1; i < prof.r.size(); ++i)
    if (!(prof.r[i] > prof.r[i - 1]))
      throw Error(ErrorKind::config, "--seed-profile: radii must be strictly increasing");
  State s;
  s.u = resample(prof, prof.u, grid.r());
  s.b = resample(prof, prof.b, grid.r());
  project_constraints(s, k);
  project_nonnegative(s);
  return s;
}

// Solves by shooting on [0, Rmax]; compares with `variational` when given.
OracleMetrics shooting_metrics(const ModelParams& params, const RadialGrid& grid, const State* variational,
                               State* profile = nullptr) {
  OracleMetrics m;
  m.eps = params.eps();
  const auto t0 = Clock::now();
  try {
    const ShootSolution sol = shoot_solve(params, grid.rmax());
    m.a = sol.a();
    m.beta = sol.beta();
    m.u_end = sol.u_end();
    m.tail_mismatch = sol.tail_mismatch();
    m.mass = sol.mass();
    const State on_grid = sol.on_grid(grid);
    m.energy_oracle = total_energy(on_grid, params, grid);
    if (profile) *profile = on_grid;
    if (variational) {
      m.compare_radius = std::min(20.0, 0.5 * grid.rmax());
      const auto r = grid.r();
      for (std::size_t i = 0; i < r.size() && r[i] <= m.compare_radius; ++i) {
        m.sup_du = std::max(m.sup_du, std::abs(variational->u[i] - on_grid.u[i]));
        m.sup_db = std::max(m.sup_db, std::abs(variational->b[i] - on_grid.b[i]));
      }
      m.energy_variational = total_energy(*variational, params, grid);
      m.energy_rel = std::abs(m.energy_oracle - m.energy_variational) / std::abs(m.energy_variational);
    }
    m.ok = true;
  } catch (const Error& e) {
    m.ok = false;
    m.failure = e.what();
  }
  m.seconds = seconds_since(t0);
  return m;
}

}  // namespace

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::mpa_newton:
      return "mpa+newton";
    case Method::newton_only:
      return "newton-only";
    case Method::shooting:
      return "shooting";
    case Method::cross_check:
      return "cross-check";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::mpa_newton, Method::newton_only, Method::shooting, Method::cross_check})
    if (name == method_name(m)) return m;
  throw Error(ErrorKind::config,
              "--method: unknown method '" + name + "' (mpa+newton, newton-only, shooting, cross-check)");
}

void validate(const RunConfig& cfg) {
  require(cfg.k != 0 || cfg.method == Method::shooting, "--k: k = 0 is only accepted with --method shooting");
  require(std::abs(cfg.k) <= 100, "--k: |k| must not exceed 100");
  require(std::isfinite(cfg.p) && cfg.p > 2.0, "--p: p must exceed 2");
  require(finite_positive(cfg.lambda), "--lambda: lambda must be positive");
  require(cfg.eps_start > 0.0 && cfg.eps_start < 1.0, "--eps-start: eps-start must lie in (0, 1)");
  require(cfg.eps_end > 0.0 && cfg.eps_end <= cfg.eps_start, "--eps-end: eps-end must lie in (0, eps-start]");
  require(cfg.eps_factor > 0.0 && cfg.eps_factor < 1.0, "--eps-factor: eps-factor must lie in (0, 1)");
  require(finite_positive(cfg.rmax), "--rmax: rmax must be positive");
  require(cfg.n >= 16, "--n: n must be at least 16");
  require(std::isfinite(cfg.gamma) && cfg.gamma >= 1.0, "--gamma: gamma must be at least 1");
  require(cfg.mpa.path_len >= 5, "--path-len: path-len must be at least 5");
  require(cfg.mpa.max_iter >= 1, "--max-iter: max-iter must be at least 1");
  require(finite_positive(cfg.mpa.grad_tol), "--grad-tol: grad-tol must be positive");
  require(finite_positive(cfg.newton_tol), "--newton-tol: newton-tol must be positive");
  require(finite_positive(cfg.residual_tol), "--residual-tol: residual-tol must be positive");
  require(cfg.method != Method::newton_only || !cfg.seed_profile.empty(),
          "--seed-profile: newton-only needs a seed profile");
  require(cfg.method != Method::shooting || cfg.rmax > 4.0, "--rmax: shooting needs rmax > 4");
  validate(cfg.mpa);
}

std::string usage() {
  RunConfig cfg;
  std::string method = method_name(cfg.method);
  CLI::App app{"Radial vortex profiles by mountain pass, Newton continuation and shooting", "msvortex"};
  return build_app(app, cfg, method).help();
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string method = method_name(cfg.method);
  CLI::App app{"Radial vortex profiles by mountain pass, Newton continuation and shooting", "msvortex"};
  build_app(app, cfg, method);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw Error(ErrorKind::help_requested, app.help());
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::config, e.what());
  }
  cfg.method = parse_method(method);
  validate(cfg);
  return cfg;
}

RunResult run_pipeline(const RunConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  RunResult result{cfg, make_graded_grid(cfg.rmax, cfg.n, cfg.gamma), {}, {}, {}, {}, 0.0};
  const VorticityMode mode = cfg.k == 0 ? VorticityMode::oracle : VorticityMode::vortex;
  result.params = ModelParams(cfg.k, cfg.p, cfg.lambda, cfg.eps_end, mode);

  if (cfg.method == Method::shooting) {
    OracleMetrics m = shooting_metrics(result.params, result.grid, nullptr, &result.final_state);
    if (!m.ok) throw Error(ErrorKind::oracle, m.failure);
    result.oracle = std::move(m);
    result.total_seconds = seconds_since(t0);
    return result;
  }

  EpsSchedule schedule = geometric_schedule(cfg.eps_start, cfg.eps_end, cfg.eps_factor);
  schedule.newton_tol = cfg.newton_tol;
  schedule.residual_tol = cfg.residual_tol;
  ContinuationOptions options;
  if (cfg.method == Method::newton_only) {
    options.initial_guess = load_seed(cfg.seed_profile, result.grid, cfg.k);
  } else if (!cfg.seed_profile.empty()) {
    options.seed_profile = load_seed(cfg.seed_profile, result.grid, cfg.k).u;
  }
  const ModelParams start = ModelParams(cfg.k, cfg.p, cfg.lambda, cfg.eps_start, mode);
  result.solve = run_continuation(schedule, start, result.grid, cfg.mpa, options);
  result.final_state = result.solve->records.back().state;

  if (cfg.method == Method::cross_check)
    result.oracle = shooting_metrics(result.params, result.grid, &result.final_state);
  result.total_seconds = seconds_since(t0);
  return result;
}

}  // namespace msv
