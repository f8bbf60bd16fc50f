#pragma once

// Discrete penalized energy J_eps on the radial constraint manifold:
//
//   J = 1/2 int (u')^2 r dr + 1/2 int (b')^2 / r dr + 1/2 int (k - b)^2 u^2 / r dr
//     + eps/2 int b^2 / r dr + int W(u) r dr
//
// (2*pi dropped). Cell terms use cell differences and cell-average values on
// the dr/r midpoint rule; the potential uses the nodal r dr weights.

#include <span>
#include <vector>

#include "msvortex/banded.hpp"
#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/state.hpp"

namespace msv {

struct EnergyBreakdown {
  double dirichlet_u = 0.0;
  double curl_b = 0.0;
  double coupling = 0.0;
  double penalty = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const State& s, const ModelParams& params, const RadialGrid& grid);
inline double total_energy(const State& s, const ModelParams& params, const RadialGrid& grid) {
  return energy(s, params, grid).total;
}

/// Partial derivatives of the discrete energy; constrained slots are zero.
State gradient(const State& s, const ModelParams& params, const RadialGrid& grid);

/// Hessian of the discrete energy in interleaved ordering (u_i -> 2i,
/// b_i -> 2i+1), bandwidth 3. Rows and columns of constrained slots are zero
/// unless `identity_on_constrained` is set, in which case they carry a unit
/// diagonal (the Newton system).
BandMatrix assemble_hessian(const State& s, const ModelParams& params, const RadialGrid& grid,
                            bool identity_on_constrained = false);

/// Directional derivative of the gradient at s along dir. The constrained
/// components of dir are ignored.
State hessian_vec(const State& s, const State& dir, const ModelParams& params, const RadialGrid& grid);

std::vector<double> interleave(const State& s);
State deinterleave(std::span<const double> x);

/// Strong-form residuals
///   ru = -u'' - u'/r + (k-b)^2 u / r^2 + W'(u)
///   rb = -b'' + b'/r + eps b - (k-b) u^2
/// at interior nodes 1..n-1, by conservative central differences on the
/// graded mesh (flux differences over the dual cell of each node). Boundary
/// slots are zero.
struct StrongResidual {
  std::vector<double> ru;
  std::vector<double> rb;
  double sup = 0.0;          // max over interior nodes of |ru|, |rb|
  double weighted_l2 = 0.0;  // sqrt( sum w_rdr (ru^2 + rb^2) )
};
StrongResidual el_residual(const State& s, const ModelParams& params, const RadialGrid& grid);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Interpolates (u, b) radially and evaluates
///   -Laplace(u) + |k grad(theta) - A|^2 u + W'(u)
/// at planar points with a fourth-order Cartesian finite-difference
/// Laplacian of step `fd_step`. Returns max |residual|. Points must satisfy
/// 2*fd_step <= |x| <= Rmax - 2*fd_step (Error(range) otherwise).
double residual_2d_spotcheck(const State& s, const ModelParams& params, const RadialGrid& grid,
                             std::span<const Point2> points, double fd_step = 1e-3);

/// int |curl(b grad(theta))|^2 dx over the square [-half_width, half_width]^2,
/// by central differences of the Cartesian components of A on a
/// cells x cells lattice (midpoint rule on cell centres).
double curl_energy_cartesian(std::span<const double> b, const RadialGrid& grid, double half_width, int cells);

}  // namespace msv
