#pragma once

#include <span>
#include <vector>

namespace msv {

/// Truncated radial mesh on [0, Rmax] with quadratures for the measures
/// r dr (nodal, exact for piecewise-affine f) and dr/r (cell midpoints).
/// The angular factor 2*pi is dropped everywhere.
class RadialGrid {
 public:
  /// Nodes r_i = rmax (i/n)^gamma.
  static RadialGrid graded(double rmax, int n, double gamma);
  /// Arbitrary strictly increasing nodes with r[0] = 0.
  static RadialGrid from_nodes(std::vector<double> r);

  int n() const noexcept { return static_cast<int>(r_.size()) - 1; }
  std::size_t size() const noexcept { return r_.size(); }
  double rmax() const noexcept { return r_.back(); }
  /// Grading exponent; NaN for grids built from explicit nodes.
  double gamma() const noexcept { return gamma_; }
  bool is_graded() const noexcept { return gamma_ == gamma_; }

  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> w_rdr() const noexcept { return w_rdr_; }
  /// Per-cell weights h_i / r_mid_i.
  std::span<const double> w_drr() const noexcept { return w_drr_; }
  std::span<const double> h() const noexcept { return h_; }
  std::span<const double> r_mid() const noexcept { return r_mid_; }

  /// Dual-cell dr/r weight of node i: half of each adjacent cell's w_drr.
  double node_weight_drr(int i) const;

 private:
  RadialGrid() = default;
  void build_weights();

  std::vector<double> r_;
  std::vector<double> h_;
  std::vector<double> r_mid_;
  std::vector<double> w_rdr_;
  std::vector<double> w_drr_;
  double gamma_ = 0.0;
};

/// Throws Error(config) if n < 16, rmax <= 0 or gamma < 1.
RadialGrid make_graded_grid(double rmax, int n, double gamma);

/// Nodal integral of f(r) r dr.
double integrate_rdr(std::span<const double> f, const RadialGrid& grid);
/// Midpoint integral of f(r)/r dr, f evaluated as the cell average of nodal values.
double integrate_drr(std::span<const double> f, const RadialGrid& grid);

/// sqrt( int (u')^2 r dr + int u^2 r dr ).
double norm_h1(std::span<const double> u, const RadialGrid& grid);
/// sqrt( int (u')^2 r dr + int u^2 r dr + int u^2 / r dr ).
double norm_h1r(std::span<const double> u, const RadialGrid& grid);
/// int |u|^q r dr.
double lp_norm_pow(std::span<const double> u, const RadialGrid& grid, double q);

/// sqrt( int b^2 / r dr + int (b')^2 / r dr ); requires b[0] == 0.
double norm_star(std::span<const double> b, const RadialGrid& grid);

struct StarNormReport {
  double value = 0.0;
  /// Leading behaviour at the origin is b ~ r^s with s <= 1.5, so the
  /// continuum (b')^2/r integral is (close to) log-divergent.
  bool near_singular = false;
  double origin_exponent = 0.0;
};
StarNormReport star_norm_report(std::span<const double> b, const RadialGrid& grid);

}  // namespace msv
