#include "msvortex/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "msvortex/errors.hpp"

namespace msv {

namespace {

void require_size(std::span<const double> f, const RadialGrid& grid, const char* what) {
  if (f.size() != grid.size())
    throw Error(ErrorKind::shape, std::string(what) + ": expected " + std::to_string(grid.size()) +
                                      " node values, got " + std::to_string(f.size()));
}

double dirichlet_rdr(std::span<const double> u, const RadialGrid& grid) {
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double du = u[i + 1] - u[i];
    acc += du * du * rm[i] / h[i];
  }
  return acc;
}

double curl_drr(std::span<const double> b, const RadialGrid& grid) {
  const auto h = grid.h();
  const auto rm = grid.r_mid();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double db = b[i + 1] - b[i];
    acc += db * db / (h[i] * rm[i]);
  }
  return acc;
}

double square_drr(std::span<const double> f, const RadialGrid& grid) {
  const auto w = grid.w_drr();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double m = 0.5 * (f[i] + f[i + 1]);
    acc += m * m * w[i];
  }
  return acc;
}

}  // namespace

RadialGrid RadialGrid::graded(double rmax, int n, double gamma) {
  RadialGrid g;
  g.gamma_ = gamma;
  g.r_.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g.r_[i] = rmax * std::pow(static_cast<double>(i) / n, gamma);
  g.r_[n] = rmax;
  g.build_weights();
  return g;
}

RadialGrid RadialGrid::from_nodes(std::vector<double> r) {
  if (r.size() < 2) throw Error(ErrorKind::config, "radial grid needs at least two nodes");
  if (r.front() != 0.0) throw Error(ErrorKind::config, "radial grid must start at r = 0");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw Error(ErrorKind::config, "radial grid nodes must be strictly increasing");
  RadialGrid g;
  g.gamma_ = std::numeric_limits<double>::quiet_NaN();
  g.r_ = std::move(r);
  g.build_weights();
  return g;
}

void RadialGrid::build_weights() {
  const std::size_t cells = r_.size() - 1;
  h_.resize(cells);
  r_mid_.resize(cells);
  w_drr_.resize(cells);
  w_rdr_.assign(r_.size(), 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = r_[i];
    const double b = r_[i + 1];
    h_[i] = b - a;
    r_mid_[i] = 0.5 * (a + b);
    w_drr_[i] = h_[i] / r_mid_[i];
    // int phi_a r dr and int phi_b r dr for the hat functions of the cell
    w_rdr_[i] += h_[i] * (2.0 * a + b) / 6.0;
    w_rdr_[i + 1] += h_[i] * (a + 2.0 * b) / 6.0;
  }
}

double RadialGrid::node_weight_drr(int i) const {
  double w = 0.0;
  if (i > 0) w += 0.5 * w_drr_[i - 1];
  if (i < n()) w += 0.5 * w_drr_[i];
  return w;
}

RadialGrid make_graded_grid(double rmax, int n, double gamma) {
  if (!(std::isfinite(rmax) && rmax > 0.0))
    throw Error(ErrorKind::config, "rmax must be positive (got " + std::to_string(rmax) + ")");
  if (n < 16) throw Error(ErrorKind::config, "n must be at least 16 (got " + std::to_string(n) + ")");
  if (!(std::isfinite(gamma) && gamma >= 1.0))
    throw Error(ErrorKind::config, "gamma must be at least 1 (got " + std::to_string(gamma) + ")");
  return RadialGrid::graded(rmax, n, gamma);
}

double integrate_rdr(std::span<const double> f, const RadialGrid& grid) {
  require_size(f, grid, "integrate_rdr");
  const auto w = grid.w_rdr();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
  return acc;
}

double integrate_drr(std::span<const double> f, const RadialGrid& grid) {
  require_size(f, grid, "integrate_drr");
  const auto w = grid.w_drr();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) acc += 0.5 * (f[i] + f[i + 1]) * w[i];
  return acc;
}

double norm_h1(std::span<const double> u, const RadialGrid& grid) {
  require_size(u, grid, "norm_h1");
  const auto w = grid.w_rdr();
  double mass = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) mass += w[i] * u[i] * u[i];
  return std::sqrt(dirichlet_rdr(u, grid) + mass);
}

double norm_h1r(std::span<const double> u, const RadialGrid& grid) {
  require_size(u, grid, "norm_h1r");
  const double h1 = norm_h1(u, grid);
  return std::sqrt(h1 * h1 + square_drr(u, grid));
}

double lp_norm_pow(std::span<const double> u, const RadialGrid& grid, double q) {
  require_size(u, grid, "lp_norm_pow");
  const auto w = grid.w_rdr();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * std::pow(std::abs(u[i]), q);
  return acc;
}

double norm_star(std::span<const double> b, const RadialGrid& grid) {
  require_size(b, grid, "norm_star");
  if (b[0] != 0.0) throw Error(ErrorKind::constraint, "norm_star: b(0) must vanish");
  return std::sqrt(square_drr(b, grid) + curl_drr(b, grid));
}

StarNormReport star_norm_report(std::span<const double> b, const RadialGrid& grid) {
  StarNormReport rep;
  rep.value = norm_star(b, grid);
  const auto r = grid.r();
  if (b.size() > 2 && b[1] != 0.0 && b[2] != 0.0 && (b[1] > 0.0) == (b[2] > 0.0)) {
    rep.origin_exponent = std::log(b[2] / b[1]) / std::log(r[2] / r[1]);
    rep.near_singular = rep.origin_exponent <= 1.5;
  }
  return rep;
}

}  // namespace msv
