#pragma once

// Nonlinear potential W(s) = s^2/2 - R(s), with R(s) = lambda s^p / p for
// s >= 0 and R(s) = 0 for s < 0.

namespace msv {

enum class VorticityMode {
  vortex,  // k != 0 required
  oracle,  // k = 0 admitted (scalar ground-state tests)
};

class ModelParams {
 public:
  ModelParams() = default;
  /// Throws Error(config) unless p > 2, lambda > 0, 0 <= eps < 1, and
  /// k != 0 in vortex mode.
  ModelParams(int k, double p, double lambda, double eps,
              VorticityMode mode = VorticityMode::vortex);

  int k() const noexcept { return k_; }
  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double eps() const noexcept { return eps_; }
  VorticityMode mode() const noexcept { return mode_; }

  ModelParams with_eps(double eps) const;
  ModelParams with_k(int k) const;

 private:
  int k_ = 1;
  double p_ = 4.0;
  double lambda_ = 1.0;
  double eps_ = 1e-4;
  VorticityMode mode_ = VorticityMode::vortex;
};

double nonlinearity_R(double s, const ModelParams& params);
double nonlinearity_Rprime(double s, const ModelParams& params);

double potential_W(double s, const ModelParams& params);
double potential_Wprime(double s, const ModelParams& params);
double potential_Wsecond(double s, const ModelParams& params);

struct AssumptionReport {
  bool vanishes_at_zero = false;  // R(0) = R'(0) = 0
  bool growth_bound = false;      // |R(s)| <= c s^p, c = lambda/p
  bool superquadratic = false;    // s R'(s) >= p R(s) > 0
  double growth_constant = 0.0;
  double worst_superquadratic_margin = 0.0;  // min over samples of s R' - p R, scaled

  bool all() const noexcept { return vanishes_at_zero && growth_bound && superquadratic; }
};

/// Samples s uniformly in (0, 10] and checks the structural assumptions on R.
AssumptionReport check_assumptions(const ModelParams& params, int sample_count);

}  // namespace msv
