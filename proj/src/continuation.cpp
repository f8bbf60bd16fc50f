#include "msvortex/continuation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "msvortex/errors.hpp"

namespace msv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string eps_label(double eps) {
  std::ostringstream os;
  os << "eps = " << eps << ": ";
  return os.str();
}

}  // namespace

void validate(const EpsSchedule& schedule) {
  if (schedule.eps_values.empty()) throw Error(ErrorKind::config, "eps schedule is empty");
  for (std::size_t i = 0; i < schedule.eps_values.size(); ++i) {
    const double e = schedule.eps_values[i];
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorKind::config, "eps values must lie in (0, 1)");
    if (i > 0 && !(e < schedule.eps_values[i - 1]))
      throw Error(ErrorKind::config, "eps schedule must be strictly decreasing");
  }
  if (!(schedule.newton_tol > 0.0)) throw Error(ErrorKind::config, "Newton tolerance must be positive");
  if (schedule.newton_max_iter < 1) throw Error(ErrorKind::config, "Newton iteration limit must be positive");
  if (!(schedule.residual_tol > 0.0)) throw Error(ErrorKind::config, "residual tolerance must be positive");
}

EpsSchedule geometric_schedule(double start, double end, double factor) {
  if (!(start > 0.0 && start < 1.0)) throw Error(ErrorKind::config, "eps-start must lie in (0, 1)");
  if (!(end > 0.0 && end <= start)) throw Error(ErrorKind::config, "eps-end must lie in (0, eps-start]");
  if (!(factor > 0.0 && factor < 1.0)) throw Error(ErrorKind::config, "eps-factor must lie in (0, 1)");
  EpsSchedule s;
  // Relative slack so that e.g. 0.1 * 0.25^j lands on `end` instead of just above it.
  for (double e = start; e > end * (1.0 + 1e-9); e *= factor) s.eps_values.push_back(e);
  s.eps_values.push_back(end);
  return s;
}

NewtonResult newton_refine(const State& seed, const ModelParams& params, const RadialGrid& grid, double tol,
                           int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorKind::config, "Newton tolerance must be positive");
  State s = seed;
  project_constraints(s, params.k());
  project_nonnegative(s);
  check_state(s, grid.size(), params.k());

  State g = gradient(s, params, grid);
  double gn = norm2(g);
  int it = 0;
  while (gn > tol) {
    if (it == max_iter)
      throw SolveError(ErrorKind::non_convergence,
                       "Newton stopped after " + std::to_string(it) + " iterations with gradient norm " +
                           std::to_string(gn),
                       s);
    const BandMatrix H = assemble_hessian(s, params, grid, true);
    std::vector<double> rhs = interleave(g);
    for (double& v : rhs) v = -v;
    const State step = deinterleave(H.solve(rhs));

    double alpha = 1.0;
    for (;;) {
      State trial = linear_combination(1.0, s, alpha, step);
      project_nonnegative(trial);
      project_constraints(trial, params.k());
      State gt = gradient(trial, params, grid);
      const double gtn = norm2(gt);
      if (gtn <= (1.0 - 1e-4 * alpha) * gn) {
        s = std::move(trial);
        g = std::move(gt);
        gn = gtn;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-12)
        throw SolveError(ErrorKind::stagnation,
                         "Newton line search stalled at gradient norm " + std::to_string(gn), s);
    }
    ++it;
  }
  return {std::move(s), it, gn};
}

EpsRecord make_record(const State& s, const ModelParams& params, const RadialGrid& grid) {
  EpsRecord rec;
  rec.eps = params.eps();
  rec.state = s;
  rec.energy = energy(s, params, grid);
  rec.level = rec.energy.total;
  rec.grad_norm = norm2(gradient(s, params, grid));
  const StrongResidual res = el_residual(s, params, grid);
  rec.residual_sup = res.sup;
  rec.residual_l2 = res.weighted_l2;
  rec.norm_h1 = norm_h1(s.u, grid);
  rec.norm_h1r = norm_h1r(s.u, grid);
  rec.norm_star_b = norm_star(s.b, grid);
  rec.flux = 2.0 * std::numbers::pi * s.b.back();
  rec.min_u = *std::min_element(s.u.begin(), s.u.end());

  // Cauchy-Schwarz on b(r) = int_0^r b': |b(r)|^2 <= (r^2 / 2) int_0^r (b')^2/t dt,
  // exact on the grid because the midpoint rule integrates t exactly.
  const auto r = grid.r();
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  double curl = 0.0;
  rec.b_local_bound = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double db = s.b[i] - s.b[i - 1];
    curl += db * db / (h[i - 1] * rm[i - 1]);
    const double bound = r[i] * std::sqrt(0.5 * curl);
    if (std::abs(s.b[i]) > bound * (1.0 + 1e-12) + 1e-300) rec.b_local_bound = false;
  }
  return rec;
}

SolveReport run_continuation(const EpsSchedule& schedule, const ModelParams& params, const RadialGrid& grid,
                             const MpaConfig& cfg, const ContinuationOptions& options) {
  validate(schedule);
  validate(cfg);
  SolveReport report;

  const auto t_endpoint = Clock::now();
  const std::vector<double> seed = options.seed_profile ? *options.seed_profile : default_seed(grid, params.k());
  report.endpoint = find_endpoint(params, grid, seed);
  report.K = ray_max_energy(report.endpoint, params, grid);
  report.norm_bound = 2.0 * params.p() / (params.p() - 2.0) * report.K;
  report.seconds["endpoint"] = seconds_since(t_endpoint);

  State current;
  double newton_seconds = 0.0;
  for (std::size_t j = 0; j < schedule.eps_values.size(); ++j) {
    const double eps = schedule.eps_values[j];
    const ModelParams pe = params.with_eps(eps);
    try {
      const auto t0 = Clock::now();
      State start;
      if (j == 0 && options.initial_guess) {
        start = *options.initial_guess;
      } else if (j == 0) {
        const auto t_mpa = Clock::now();
        report.mpa = mpa_iterate(initial_path(report.endpoint, cfg.path_len), pe, grid, cfg);
        if (!options.keep_path) report.mpa.path.nodes.clear();
        report.used_mpa = true;
        report.seconds["mpa"] = seconds_since(t_mpa);
        start = report.mpa.candidate;
      } else {
        start = current;
      }
      const auto t_newton = Clock::now();
      NewtonResult nr = newton_refine(start, pe, grid, schedule.newton_tol, schedule.newton_max_iter);
      newton_seconds += seconds_since(t_newton);
      EpsRecord rec = make_record(nr.state, pe, grid);
      rec.newton_iterations = nr.iterations;
      rec.seconds = seconds_since(t0);
      if (rec.residual_sup > schedule.residual_tol)
        throw SolveError(ErrorKind::non_convergence,
                         "strong residual " + std::to_string(rec.residual_sup) + " exceeds tolerance " +
                             std::to_string(schedule.residual_tol),
                         nr.state);
      current = std::move(nr.state);
      report.records.push_back(std::move(rec));
    } catch (const SolveError& e) {
      throw SolveError(e.kind(), eps_label(eps) + e.what(), e.best());
    } catch (const Error& e) {
      throw Error(e.kind(), eps_label(eps) + e.what());
    }
  }
  report.seconds["newton"] = newton_seconds;
  report.c_bar = 0.5 * report.records.front().norm_h1;

  // Linear extrapolation of the last two profiles to eps = 0, refined at the
  // last eps (eps = 0 itself leaves b determined only up to large-r shifts).
  const auto t_extra = Clock::now();
  const EpsRecord& last = report.records.back();
  if (report.records.size() >= 2) {
    const EpsRecord& prev = report.records[report.records.size() - 2];
    const double w = last.eps / (last.eps - prev.eps);  // weight of prev in s(0)
    report.extrapolated = linear_combination(1.0 - w, last.state, w, prev.state);
  } else {
    report.extrapolated = last.state;
  }
  project_constraints(report.extrapolated, params.k());
  project_nonnegative(report.extrapolated);
  report.extrapolation_gap = sup_norm(linear_combination(1.0, report.extrapolated, -1.0, last.state));
  try {
    NewtonResult nr = newton_refine(report.extrapolated, params.with_eps(last.eps), grid, schedule.newton_tol,
                                    schedule.newton_max_iter);
    report.limit = std::move(nr.state);
    report.limit_newton_iterations = nr.iterations;
  } catch (const SolveError& e) {
    throw SolveError(e.kind(), std::string("eps -> 0 refinement: ") + e.what(), e.best());
  }
  report.seconds["extrapolation"] = seconds_since(t_extra);
  return report;
}

}  // namespace msv
