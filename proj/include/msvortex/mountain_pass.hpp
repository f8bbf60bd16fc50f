#pragma once

#include <span>
#include <vector>

#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/state.hpp"

namespace msv {

struct MpaConfig {
  int path_len = 31;
  int max_iter = 20000;
  double grad_tol = 1e-6;       // Euclidean norm of the discrete gradient at the max node
  double backtrack = 0.5;       // step reduction factor
  double initial_step = 1.0;    // first trial step along the preconditioned direction
  double armijo = 1e-4;
  int respace_every = 20;
};

/// Throws Error(config) unless path_len >= 5, max_iter >= 1, grad_tol > 0,
/// 0 < backtrack < 1 and initial_step > 0.
void validate(const MpaConfig& cfg);

/// Discrete path from the zero state to the endpoint. Only interior nodes move.
struct Path {
  std::vector<State> nodes;
};

/// r^|k| exp(-r^2/2) with the constrained slots zeroed.
std::vector<double> default_seed(const RadialGrid& grid, int k);

/// (t seed, 0) with J_0 <= -1, by doubling t from 1. The seed is projected
/// onto the constraints first. Throws Error(config) for a zero seed and
/// Error(geometry) once t exceeds 2^60.
State find_endpoint(const ModelParams& params, const RadialGrid& grid, std::span<const double> seed);

/// K = max over t in [0, 1] of J_0(t u_end, 0).
double ray_max_energy(const State& endpoint, const ModelParams& params, const RadialGrid& grid);

/// Nodes (j / (P-1)) * endpoint. Throws Error(config) if P < 5.
Path initial_path(const State& endpoint, int path_len);

struct MpaResult {
  Path path;
  State candidate;
  double level = 0.0;            // J_eps(candidate)
  double initial_barrier = 0.0;  // level of the starting path
  double grad_norm = 0.0;
  int iterations = 0;
  int respacings = 0;
  std::vector<double> level_history;  // path level at the start of every iteration
};

/// Deforms the path until the gradient at its peak is below cfg.grad_tol.
/// The path level is the maximum of J over the polyline, tracked per
/// segment. Each iteration takes the peak of the highest segment, steps from
/// it along the preconditioned descent direction with backtracking, and
/// replaces the adjacent pivot node by the result. The other nodes with
/// positive energy relax along the same direction minus its component along
/// the path tangent. Every move, and the periodic arclength respacing, is
/// accepted only if no segment rises above the current level, so
/// level_history is non-increasing. u is projected onto u >= 0 after every
/// step. Throws SolveError(non_convergence) with the best candidate if
/// max_iter is reached with gradient norm > 10 grad_tol.
MpaResult mpa_iterate(Path path, const ModelParams& params, const RadialGrid& grid, const MpaConfig& cfg);

/// Applies the inverse of the block-tridiagonal metric used for descent:
/// the Hessian without the focusing part of W'' (SPD on the free slots).
State precondition(const State& s, const State& g, const ModelParams& params, const RadialGrid& grid);

}  // namespace msv
