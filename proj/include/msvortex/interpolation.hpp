#pragma once

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <span>

#include "msvortex/grid.hpp"

namespace msv {

/// C^4 interpolant of node values on a graded grid. The grid is uniform in
/// s = (r / Rmax)^(1/gamma), so a cardinal quintic B-spline in s is used and
/// derivatives are mapped back to r.
class RadialInterpolant {
 public:
  RadialInterpolant(const RadialGrid& grid, std::span<const double> values);

  double operator()(double r) const;
  double prime(double r) const;
  double double_prime(double r) const;
  double rmax() const noexcept { return rmax_; }

 private:
  double to_s(double r) const;
  double rmax_;
  double inv_gamma_;
  boost::math::interpolators::cardinal_quintic_b_spline<double> spline_;
};

}  // namespace msv
