#pragma once

// Shared solutions for the unit tests, computed once per test binary.

#include <cmath>
#include <random>

#include "msvortex/continuation.hpp"
#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/state.hpp"

namespace fixtures {

inline const msv::RadialGrid& default_grid() {
  static const msv::RadialGrid g = msv::make_graded_grid(40.0, 2000, 2.0);
  return g;
}

inline msv::ModelParams default_params(double eps = 0.1, int k = 1) { return msv::ModelParams(k, 4.0, 1.0, eps); }

/// Default schedule 1e-1 .. 1e-6 for k = 1 on the default grid.
inline const msv::SolveReport& schedule_run() {
  static const msv::SolveReport rep =
      msv::run_continuation(msv::geometric_schedule(0.1, 1e-6, 0.25), default_params(), default_grid(), {});
  return rep;
}

/// Single-eps mountain-pass + Newton solve at eps = 1e-4.
inline const msv::SolveReport& eps4_run() {
  static const msv::SolveReport rep =
      msv::run_continuation(msv::geometric_schedule(1e-4, 1e-4, 0.25), default_params(1e-4), default_grid(), {});
  return rep;
}

/// Smooth vortex-like state plus small node noise.
inline msv::State random_state(const msv::RadialGrid& grid, int k, std::mt19937_64& rng, double noise = 0.05) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double amp = 1.5 + unit(rng);
  const double width = 2.0 + 1.5 * unit(rng);
  const double beta = unit(rng);
  const auto r = grid.r();
  msv::State s = msv::State::zeros(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = r[i] / width;
    s.u[i] = amp * std::pow(x, std::abs(k)) * std::exp(-x * x) + noise * unit(rng);
    s.b[i] = beta * x * x / (1.0 + x * x) + noise * unit(rng);
  }
  msv::project_constraints(s, k);
  return s;
}

inline msv::State random_direction(std::size_t nodes, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  msv::State d = msv::State::zeros(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    d.u[i] = unit(rng);
    d.b[i] = unit(rng);
  }
  msv::project_constraints(d, k);
  return d;
}

}  // namespace fixtures
