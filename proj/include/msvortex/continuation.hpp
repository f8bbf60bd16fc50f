#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msvortex/functional.hpp"
#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/mountain_pass.hpp"
#include "msvortex/state.hpp"

namespace msv {

struct EpsSchedule {
  std::vector<double> eps_values;  // strictly decreasing, in (0, 1)
  double newton_tol = 1e-10;       // discrete gradient norm
  int newton_max_iter = 50;
  double residual_tol = 1e-6;      // strong-form sup residual
};

/// start, start*factor, ... while above `end`, then `end` itself.
/// Throws Error(config) unless 0 < end <= start < 1 and 0 < factor < 1.
EpsSchedule geometric_schedule(double start, double end, double factor);
void validate(const EpsSchedule& schedule);

struct NewtonResult {
  State state;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// Damped Newton on the discrete gradient with the banded Hessian. Armijo
/// backtracking on the gradient norm; u is re-projected onto u >= 0 after
/// every step. Throws SolveError(stagnation) when the step falls below
/// 1e-12, SolveError(non_convergence) after max_iter iterations, and
/// Error(singular_system) if the Hessian solve fails.
NewtonResult newton_refine(const State& seed, const ModelParams& params, const RadialGrid& grid, double tol,
                           int max_iter);

struct EpsRecord {
  double eps = 0.0;
  State state;
  EnergyBreakdown energy;
  double level = 0.0;
  double grad_norm = 0.0;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double norm_h1 = 0.0;      // ||u||_{H^1_r}
  double norm_h1r = 0.0;     // with the u^2/r term
  double norm_star_b = 0.0;  // ||b||_*
  double flux = 0.0;         // 2 pi b(Rmax)
  double min_u = 0.0;
  int newton_iterations = 0;
  bool b_local_bound = false;  // |b(r)| <= r sqrt(int_0^r (b')^2/t dt / 2) at every node
  double seconds = 0.0;
};

struct SolveReport {
  std::vector<EpsRecord> records;
  State endpoint;
  double K = 0.0;               // max_t J_0(t u_end, 0)
  double c_bar = 0.0;           // half the H^1_r norm of the first solution
  double norm_bound = 0.0;      // 2p/(p-2) K
  bool used_mpa = false;
  MpaResult mpa;                // path omitted unless keep_path
  State extrapolated;           // linear extrapolation of the last two profiles to eps = 0
  State limit;                  // Newton refinement of `extrapolated` at the last eps
  double extrapolation_gap = 0.0;  // sup |extrapolated - last solution|
  int limit_newton_iterations = 0;
  std::map<std::string, double> seconds;  // wall clock per stage
};

struct ContinuationOptions {
  std::optional<State> initial_guess;  // skip the mountain-pass stage when set
  std::optional<std::vector<double>> seed_profile;  // endpoint seed; default_seed otherwise
  bool keep_path = false;
};

/// First eps: endpoint, initial path, mountain-pass deformation, Newton.
/// Later eps: Newton warm-started from the previous solution. Errors from a
/// stage are rethrown with the failing eps in the message.
SolveReport run_continuation(const EpsSchedule& schedule, const ModelParams& params, const RadialGrid& grid,
                             const MpaConfig& cfg, const ContinuationOptions& options = {});

/// Builds the diagnostics of one converged state.
EpsRecord make_record(const State& s, const ModelParams& params, const RadialGrid& grid);

}  // namespace msv
