#include "msvortex/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msvortex/errors.hpp"

namespace msv {

namespace {

void require_finite(double s, const char* what) {
  if (!std::isfinite(s)) throw Error(ErrorKind::domain, std::string(what) + ": argument is not finite");
}

}  // namespace

ModelParams::ModelParams(int k, double p, double lambda, double eps, VorticityMode mode)
    : k_(k), p_(p), lambda_(lambda), eps_(eps), mode_(mode) {
  if (!(std::isfinite(p) && p > 2.0))
    throw Error(ErrorKind::config, "p must exceed 2 (got " + std::to_string(p) + ")");
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw Error(ErrorKind::config, "lambda must be positive (got " + std::to_string(lambda) + ")");
  if (!(std::isfinite(eps) && eps >= 0.0 && eps < 1.0))
    throw Error(ErrorKind::config, "eps must lie in [0, 1) (got " + std::to_string(eps) + ")");
  if (k == 0 && mode == VorticityMode::vortex)
    throw Error(ErrorKind::config, "vorticity k must be nonzero (k = 0 is reserved for oracle mode)");
}

ModelParams ModelParams::with_eps(double eps) const { return ModelParams(k_, p_, lambda_, eps, mode_); }

ModelParams ModelParams::with_k(int k) const { return ModelParams(k, p_, lambda_, eps_, mode_); }

double nonlinearity_R(double s, const ModelParams& params) {
  if (s <= 0.0) return 0.0;
  return params.lambda() * std::pow(s, params.p()) / params.p();
}

double nonlinearity_Rprime(double s, const ModelParams& params) {
  if (s <= 0.0) return 0.0;
  return params.lambda() * std::pow(s, params.p() - 1.0);
}

double potential_W(double s, const ModelParams& params) {
  require_finite(s, "potential_W");
  return 0.5 * s * s - nonlinearity_R(s, params);
}

double potential_Wprime(double s, const ModelParams& params) {
  require_finite(s, "potential_Wprime");
  return s - nonlinearity_Rprime(s, params);
}

double potential_Wsecond(double s, const ModelParams& params) {
  require_finite(s, "potential_Wsecond");
  if (s <= 0.0) return 1.0;
  return 1.0 - params.lambda() * (params.p() - 1.0) * std::pow(s, params.p() - 2.0);
}

AssumptionReport check_assumptions(const ModelParams& params, int sample_count) {
  if (sample_count < 1) throw Error(ErrorKind::config, "check_assumptions: sample_count must be positive");
  AssumptionReport rep;
  const double p = params.p();
  rep.growth_constant = params.lambda() / p;
  rep.vanishes_at_zero = nonlinearity_R(0.0, params) == 0.0 && nonlinearity_Rprime(0.0, params) == 0.0;

  bool growth = true;
  bool superq = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= sample_count; ++i) {
    const double s = 10.0 * static_cast<double>(i) / sample_count;
    const double R = nonlinearity_R(s, params);
    const double Rp = nonlinearity_Rprime(s, params);
    const double sp = std::pow(s, p);
    const double scale = std::max(1.0, sp);
    // Equality holds for the monomial family, so allow rounding.
    if (std::abs(R) > rep.growth_constant * sp * (1.0 + 1e-14)) growth = false;
    const double margin = (s * Rp - p * R) / scale;
    worst = std::min(worst, margin);
    if (margin < -1e-12 || !(R > 0.0)) superq = false;
  }
  rep.growth_bound = growth;
  rep.superquadratic = superq;
  rep.worst_superquadratic_margin = worst;
  return rep;
}

}  // namespace msv
