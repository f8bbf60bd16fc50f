#include "msvortex/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "msvortex/errors.hpp"

namespace msv {

namespace {

boost::math::interpolators::cardinal_quintic_b_spline<double> make_spline(const RadialGrid& grid,
                                                                          std::span<const double> values) {
  if (!grid.is_graded()) throw Error(ErrorKind::config, "radial interpolation needs a graded grid");
  if (values.size() != grid.size()) throw Error(ErrorKind::shape, "radial interpolation: length mismatch");
  std::vector<double> y(values.begin(), values.end());
  return {y, 0.0, 1.0 / grid.n()};
}

}  // namespace

RadialInterpolant::RadialInterpolant(const RadialGrid& grid, std::span<const double> values)
    : rmax_(grid.rmax()), inv_gamma_(1.0 / grid.gamma()), spline_(make_spline(grid, values)) {}

double RadialInterpolant::to_s(double r) const {
  if (r < 0.0 || r > rmax_ * (1.0 + 1e-14))
    throw Error(ErrorKind::range, "radius " + std::to_string(r) + " outside [0, Rmax]");
  return std::min(1.0, std::pow(r / rmax_, inv_gamma_));
}

double RadialInterpolant::operator()(double r) const { return spline_(to_s(r)); }

double RadialInterpolant::prime(double r) const {
  const double s = to_s(r);
  return spline_.prime(s) * inv_gamma_ * s / r;
}

double RadialInterpolant::double_prime(double r) const {
  const double s = to_s(r);
  const double ds = inv_gamma_ * s / r;
  const double d2s = inv_gamma_ * (inv_gamma_ - 1.0) * s / (r * r);
  return spline_.double_prime(s) * ds * ds + spline_.prime(s) * d2s;
}

}  // namespace msv
