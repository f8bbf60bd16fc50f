#include "msvortex/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msvortex/errors.hpp"
#include "msvortex/interpolation.hpp"

namespace msv {

// ---- State helpers -------------------------------------------------------

void project_constraints(State& s, int k) {
  const std::size_t n = s.size();
  if (n == 0) return;
  s.b[0] = 0.0;
  s.u[n - 1] = 0.0;
  if (k != 0) s.u[0] = 0.0;
}

void project_nonnegative(State& s) {
  for (double& v : s.u) v = std::max(v, 0.0);
}

void check_state(const State& s, std::size_t nodes, int k) {
  if (s.u.size() != nodes || s.b.size() != nodes)
    throw Error(ErrorKind::shape, "state has " + std::to_string(s.u.size()) + "/" + std::to_string(s.b.size()) +
                                      " node values, grid has " + std::to_string(nodes));
  for (std::size_t i = 0; i < nodes; ++i)
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.b[i]))
      throw Error(ErrorKind::evaluation, "state has a non-finite entry at node " + std::to_string(i));
  if (s.b[0] != 0.0) throw Error(ErrorKind::constraint, "b(0) must vanish");
  if (s.u[nodes - 1] != 0.0) throw Error(ErrorKind::constraint, "u(Rmax) must vanish");
  if (k != 0 && s.u[0] != 0.0) throw Error(ErrorKind::constraint, "u(0) must vanish for k != 0");
}

double dot(const State& x, const State& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x.u[i] * y.u[i] + x.b[i] * y.b[i];
  return acc;
}

double norm2(const State& x) { return std::sqrt(dot(x, x)); }

double sup_norm(const State& x) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max({m, std::abs(x.u[i]), std::abs(x.b[i])});
  return m;
}

void axpy(State& x, double a, const State& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.u[i] += a * y.u[i];
    x.b[i] += a * y.b[i];
  }
}

State linear_combination(double a, const State& x, double b, const State& y) {
  State z = State::zeros(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    z.u[i] = a * x.u[i] + b * y.u[i];
    z.b[i] = a * x.b[i] + b * y.b[i];
  }
  return z;
}

State negated_b(const State& s) {
  State t = s;
  for (double& v : t.b) v = -v;
  return t;
}

std::vector<double> interleave(const State& s) {
  std::vector<double> x(2 * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    x[2 * i] = s.u[i];
    x[2 * i + 1] = s.b[i];
  }
  return x;
}

State deinterleave(std::span<const double> x) {
  State s = State::zeros(x.size() / 2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.u[i] = x[2 * i];
    s.b[i] = x[2 * i + 1];
  }
  return s;
}

// ---- Energy, gradient, Hessian -------------------------------------------

namespace {

void require_grid(const State& s, const RadialGrid& grid) {
  if (s.u.size() != grid.size() || s.b.size() != grid.size())
    throw Error(ErrorKind::shape, "state length does not match grid (" + std::to_string(s.u.size()) + " vs " +
                                      std::to_string(grid.size()) + ")");
}

// Scalar potential terms that pass non-finite fields through, so the term
// checks below report them as evaluation errors.
template <double (*F)(double, const ModelParams&)>
double field_term(double u, const ModelParams& params) {
  return std::isfinite(u) ? F(u, params) : std::numeric_limits<double>::quiet_NaN();
}

void require_finite_term(double v, const char* term) {
  if (!std::isfinite(v)) throw Error(ErrorKind::evaluation, std::string("energy term '") + term + "' is not finite");
}

}  // namespace

EnergyBreakdown energy(const State& s, const ModelParams& params, const RadialGrid& grid) {
  require_grid(s, grid);
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  const auto q = grid.w_drr();
  const auto w = grid.w_rdr();
  const double k = params.k();
  const double eps = params.eps();

  EnergyBreakdown e;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double du = s.u[i + 1] - s.u[i];
    const double db = s.b[i + 1] - s.b[i];
    const double ub = 0.5 * (s.u[i] + s.u[i + 1]);
    const double bb = 0.5 * (s.b[i] + s.b[i + 1]);
    const double d = k - bb;
    e.dirichlet_u += du * du * rm[i] / h[i];
    e.curl_b += db * db / (h[i] * rm[i]);
    e.coupling += q[i] * d * d * ub * ub;
    e.penalty += q[i] * bb * bb;
  }
  e.dirichlet_u *= 0.5;
  e.curl_b *= 0.5;
  e.coupling *= 0.5;
  e.penalty *= 0.5 * eps;
  for (std::size_t i = 0; i < s.size(); ++i) e.potential += w[i] * field_term<potential_W>(s.u[i], params);

  require_finite_term(e.dirichlet_u, "dirichlet_u");
  require_finite_term(e.curl_b, "curl_b");
  require_finite_term(e.coupling, "coupling");
  require_finite_term(e.penalty, "penalty");
  require_finite_term(e.potential, "potential");
  e.total = e.dirichlet_u + e.curl_b + e.coupling + e.penalty + e.potential;
  return e;
}

State gradient(const State& s, const ModelParams& params, const RadialGrid& grid) {
  require_grid(s, grid);
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  const auto q = grid.w_drr();
  const auto w = grid.w_rdr();
  const double k = params.k();
  const double eps = params.eps();
  const std::size_t n = s.size();

  State g = State::zeros(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double rho = rm[i] / h[i];
    const double sigma = 1.0 / (h[i] * rm[i]);
    const double du = s.u[i + 1] - s.u[i];
    const double db = s.b[i + 1] - s.b[i];
    const double ub = 0.5 * (s.u[i] + s.u[i + 1]);
    const double bb = 0.5 * (s.b[i] + s.b[i + 1]);
    const double d = k - bb;
    const double cu = 0.5 * q[i] * d * d * ub;
    const double cb = 0.5 * q[i] * (eps * bb - d * ub * ub);
    g.u[i] += -rho * du + cu;
    g.u[i + 1] += rho * du + cu;
    g.b[i] += -sigma * db + cb;
    g.b[i + 1] += sigma * db + cb;
  }
  for (std::size_t i = 0; i < n; ++i) g.u[i] += w[i] * field_term<potential_Wprime>(s.u[i], params);

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(g.u[i]) || !std::isfinite(g.b[i]))
      throw Error(ErrorKind::evaluation, "gradient is not finite at node " + std::to_string(i));
    if (!u_is_free(i, n, params.k())) g.u[i] = 0.0;
    if (!b_is_free(i)) g.b[i] = 0.0;
  }
  return g;
}

BandMatrix assemble_hessian(const State& s, const ModelParams& params, const RadialGrid& grid,
                            bool identity_on_constrained) {
  require_grid(s, grid);
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  const auto q = grid.w_drr();
  const auto w = grid.w_rdr();
  const double k = params.k();
  const double eps = params.eps();
  const int n = static_cast<int>(s.size());

  BandMatrix H(2 * n, 3, 3);
  for (int i = 0; i + 1 < n; ++i) {
    const double rho = rm[i] / h[i];
    const double sigma = 1.0 / (h[i] * rm[i]);
    const double ub = 0.5 * (s.u[i] + s.u[i + 1]);
    const double bb = 0.5 * (s.b[i] + s.b[i + 1]);
    const double d = k - bb;
    // Second derivatives of the cell integrand in (u_avg, b_avg); each maps
    // to the four node pairs with weight 1/4.
    const double fuu = 0.25 * q[i] * d * d;
    const double fbb = 0.25 * q[i] * (ub * ub + eps);
    const double fub = 0.25 * (-2.0 * q[i] * d * ub);
    const int iu = 2 * i, ib = 2 * i + 1, ju = 2 * i + 2, jb = 2 * i + 3;

    H.add(iu, iu, rho + fuu);
    H.add(ju, ju, rho + fuu);
    H.add(iu, ju, -rho + fuu);
    H.add(ju, iu, -rho + fuu);

    H.add(ib, ib, sigma + fbb);
    H.add(jb, jb, sigma + fbb);
    H.add(ib, jb, -sigma + fbb);
    H.add(jb, ib, -sigma + fbb);

    for (int a : {iu, ju})
      for (int c : {ib, jb}) {
        H.add(a, c, fub);
        H.add(c, a, fub);
      }
  }
  for (int i = 0; i < n; ++i) H.add(2 * i, 2 * i, w[i] * field_term<potential_Wsecond>(s.u[i], params));

  for (int i = 0; i < n; ++i) {
    if (!u_is_free(static_cast<std::size_t>(i), s.size(), params.k())) {
      H.zero_row_col(2 * i);
      if (identity_on_constrained) H.set(2 * i, 2 * i, 1.0);
    }
    if (!b_is_free(static_cast<std::size_t>(i))) {
      H.zero_row_col(2 * i + 1);
      if (identity_on_constrained) H.set(2 * i + 1, 2 * i + 1, 1.0);
    }
  }
  return H;
}

State hessian_vec(const State& s, const State& dir, const ModelParams& params, const RadialGrid& grid) {
  require_grid(dir, grid);
  const BandMatrix H = assemble_hessian(s, params, grid);
  return deinterleave(H.multiply(interleave(dir)));
}

// ---- Residual diagnostics -------------------------------------------------

StrongResidual el_residual(const State& s, const ModelParams& params, const RadialGrid& grid) {
  require_grid(s, grid);
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  const auto q = grid.w_drr();
  const auto w = grid.w_rdr();
  const double k = params.k();
  const double eps = params.eps();
  const int n = grid.n();

  StrongResidual res;
  res.ru.assign(s.size(), 0.0);
  res.rb.assign(s.size(), 0.0);
  double l2 = 0.0;
  for (int i = 1; i < n; ++i) {
    // u: -(1/r)(r u')' via fluxes through the dual-cell faces, divided by the
    // dual-cell r dr measure; zero-order terms averaged over the same cell.
    const double flux_u_right = rm[i] * (s.u[i + 1] - s.u[i]) / h[i];
    const double flux_u_left = rm[i - 1] * (s.u[i] - s.u[i - 1]) / h[i - 1];
    double couple_u = 0.0;
    double couple_b = 0.0;
    for (int c : {i - 1, i}) {
      const double ub = 0.5 * (s.u[c] + s.u[c + 1]);
      const double bb = 0.5 * (s.b[c] + s.b[c + 1]);
      const double d = k - bb;
      couple_u += 0.5 * q[c] * d * d * ub;
      couple_b += 0.5 * q[c] * (eps * bb - d * ub * ub);
    }
    res.ru[i] = (flux_u_left - flux_u_right + couple_u) / w[i] + field_term<potential_Wprime>(s.u[i], params);

    // b: -r (b'/r)' over the dual cell with the dr/r measure.
    const double flux_b_right = (s.b[i + 1] - s.b[i]) / (h[i] * rm[i]);
    const double flux_b_left = (s.b[i] - s.b[i - 1]) / (h[i - 1] * rm[i - 1]);
    res.rb[i] = (flux_b_left - flux_b_right + couple_b) / grid.node_weight_drr(i);

    if (!std::isfinite(res.ru[i]) || !std::isfinite(res.rb[i]))
      throw Error(ErrorKind::evaluation, "strong residual is not finite at node " + std::to_string(i));
    res.sup = std::max({res.sup, std::abs(res.ru[i]), std::abs(res.rb[i])});
    l2 += w[i] * (res.ru[i] * res.ru[i] + res.rb[i] * res.rb[i]);
  }
  res.weighted_l2 = std::sqrt(l2);
  return res;
}

double residual_2d_spotcheck(const State& s, const ModelParams& params, const RadialGrid& grid,
                             std::span<const Point2> points, double fd_step) {
  require_grid(s, grid);
  const RadialInterpolant u(grid, s.u);
  const RadialInterpolant b(grid, s.b);
  const double k = params.k();
  const double d = fd_step;
  const auto U = [&](double x, double y) { return u(std::hypot(x, y)); };

  double worst = 0.0;
  for (const Point2& p : points) {
    const double r = std::hypot(p.x, p.y);
    if (r < 2.0 * d || r > grid.rmax() - 2.0 * d)
      throw Error(ErrorKind::range, "spot-check point at r = " + std::to_string(r) + " outside (0, Rmax)");
    const double c = U(p.x, p.y);
    const double uxx = (-U(p.x + 2 * d, p.y) + 16 * U(p.x + d, p.y) - 30 * c + 16 * U(p.x - d, p.y) -
                        U(p.x - 2 * d, p.y)) /
                       (12 * d * d);
    const double uyy = (-U(p.x, p.y + 2 * d) + 16 * U(p.x, p.y + d) - 30 * c + 16 * U(p.x, p.y - d) -
                        U(p.x, p.y - 2 * d)) /
                       (12 * d * d);
    // grad(theta) = (x2, -x1) / r^2, A = b(r) grad(theta)
    const double r2 = r * r;
    const double g1 = p.y / r2;
    const double g2 = -p.x / r2;
    const double bv = b(r);
    const double v1 = k * g1 - bv * g1;
    const double v2 = k * g2 - bv * g2;
    const double residual = -(uxx + uyy) + (v1 * v1 + v2 * v2) * c + field_term<potential_Wprime>(c, params);
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

double curl_energy_cartesian(std::span<const double> b, const RadialGrid& grid, double half_width, int cells) {
  if (!(half_width > 0.0) || half_width * std::sqrt(2.0) > grid.rmax())
    throw Error(ErrorKind::range, "Cartesian patch must fit inside the radial domain");
  if (cells < 2) throw Error(ErrorKind::config, "Cartesian patch needs at least 2 cells per side");
  const RadialInterpolant bi(grid, b);
  const int m = cells + 1;
  const double dx = 2.0 * half_width / cells;
  std::vector<double> a1(static_cast<std::size_t>(m) * m), a2(a1.size());
  for (int j = 0; j < m; ++j) {
    const double y = -half_width + j * dx;
    for (int i = 0; i < m; ++i) {
      const double x = -half_width + i * dx;
      const double r2 = x * x + y * y;
      double f = 0.0;  // b / r^2, finite at the origin since b ~ r^2
      if (r2 > 0.0) f = bi(std::sqrt(r2)) / r2;
      a1[static_cast<std::size_t>(j) * m + i] = f * y;
      a2[static_cast<std::size_t>(j) * m + i] = -f * x;
    }
  }
  const auto at = [m](const std::vector<double>& a, int i, int j) { return a[static_cast<std::size_t>(j) * m + i]; };
  double acc = 0.0;
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      const double d2dx = (at(a2, i + 1, j) + at(a2, i + 1, j + 1) - at(a2, i, j) - at(a2, i, j + 1)) / (2 * dx);
      const double d1dy = (at(a1, i, j + 1) + at(a1, i + 1, j + 1) - at(a1, i, j) - at(a1, i + 1, j)) / (2 * dx);
      const double curl = d2dx - d1dy;
      acc += curl * curl;
    }
  return acc * dx * dx;
}

}  // namespace msv
