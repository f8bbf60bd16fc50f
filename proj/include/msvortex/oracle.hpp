#pragma once

// Shooting solver for the radial system
//   u'' = -u'/r + (k - b)^2 u / r^2 + W'(u)
//   b'' =  b'/r + eps b - (k - b) u^2
// started from the series u ~ a r^m (1 + c r^2), b ~ beta r^2 + ..., m = |k|,
// at a small radius r0. Used as an independent check of the variational
// solver.

#include <array>
#include <span>
#include <vector>

#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/state.hpp"

namespace msv {

struct ShootParams {
  double a = 1.0;     // u ~ a r^|k| near 0
  double beta = 0.0;  // b ~ beta r^2 near 0
  double r0 = 1e-4;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

struct ShootOutcome {
  double r_end = 0.0;  // Rend, or the blow-up radius when diverged
  double u = 0.0;
  double du = 0.0;
  double b = 0.0;
  double db = 0.0;
  bool diverged = false;        // |u| exceeded 1e6
  double blowup_radius = 0.0;
  double zero_radius = -1.0;    // first radius with u < 0, -1 if none
  double upturn_radius = -1.0;  // first radius where a decreasing positive u turns up, -1 if none
};

/// Series values (u, u', b, b') at r for the given shooting parameters.
std::array<double, 4> series_start(const ShootParams& sp, const ModelParams& params, double r);

/// Integrates from sp.r0 to Rend (adaptive Dormand-Prince with dense
/// output). Divergence is reported, not thrown. Throws Error(config) for
/// Rend <= r0 or non-positive tolerances.
ShootOutcome shoot_once(const ShootParams& sp, const ModelParams& params, double Rend);

/// Far-field condition imposed on b at Rend.
enum class TailCondition {
  natural,   // b'(Rend) = 0, the truncated variational problem
  decaying,  // b' + sqrt(eps) K0/K1 b = 0, the eps > 0 decaying mode of the free tail
};

struct OracleOptions {
  TailCondition tail = TailCondition::natural;
  double r0 = 1e-4;
  double tol = 1e-12;
  double match_radius = 10.0;  // capped at Rend / 2
  int max_outer_iter = 50;
};

/// Converged shooting profile. Up to the matching radius the profile is the
/// shot trajectory; beyond it u is continued by the linearized decaying
/// tail u(Rm) K_nu(r) / K_nu(Rm), nu = |k - b(Rm)|, and b is integrated
/// against that tail.
class ShootSolution {
 public:
  ShootSolution(ModelParams params, OracleOptions options, double a, double beta, double rend,
                double matching_radius, std::array<double, 4> at_matching);

  double a() const noexcept { return a_; }
  double beta() const noexcept { return params_.k() < 0 ? -beta_ : beta_; }
  double rend() const noexcept { return rend_; }
  double matching_radius() const noexcept { return rm_; }
  const ModelParams& params() const noexcept { return params_; }

  /// (u, u', b, b') at increasing radii in [0, Rend]; b is sign-flipped for k < 0.
  std::vector<std::array<double, 4>> evaluate(std::span<const double> radii) const;
  /// Node values on a grid with Rmax <= Rend, constrained slots zeroed.
  State on_grid(const RadialGrid& grid) const;

  double u_end() const;                 // u(Rend)
  double tail_mismatch() const;         // residual of the b condition at Rend
  double mass() const;                  // 2 pi int u^2 r dr over [0, Rend]

 private:
  ModelParams params_;
  OracleOptions options_;
  double a_;
  double beta_;
  double rend_;
  double rm_;
  std::array<double, 4> at_rm_;
};

/// Newton on (a, beta) with a finite-difference Jacobian. Targets: u' matches
/// the decaying tail slope at the matching radius, and b satisfies the tail
/// condition at Rend. The matching radius is continued from 2 up to
/// options.match_radius; beyond about 11 the growing mode amplifies roundoff
/// past the attainable accuracy. k = 0 shoots on a alone with b = 0.
/// Throws Error(oracle) when a Newton stage fails or exceeds max_outer_iter.
ShootSolution shoot_solve(const ModelParams& params, double Rend, const OracleOptions& options = {});

}  // namespace msv
