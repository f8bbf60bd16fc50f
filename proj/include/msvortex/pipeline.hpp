#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msvortex/continuation.hpp"
#include "msvortex/grid.hpp"
#include "msvortex/model.hpp"
#include "msvortex/mountain_pass.hpp"
#include "msvortex/oracle.hpp"
#include "msvortex/state.hpp"

namespace msv {

enum class Method { mpa_newton, newton_only, shooting, cross_check };

const char* method_name(Method m) noexcept;
/// Throws Error(config) for an unknown name.
Method parse_method(const std::string& name);

struct RunConfig {
  int k = 1;
  double p = 4.0;
  double lambda = 1.0;
  double eps_start = 0.1;
  double eps_end = 1e-6;
  double eps_factor = 0.25;
  double rmax = 40.0;
  int n = 2000;
  double gamma = 2.0;
  MpaConfig mpa;
  double newton_tol = 1e-10;
  double residual_tol = 1e-6;
  Method method = Method::mpa_newton;
  std::string profile_out;
  std::string report_out;
  std::string seed_profile;
};

/// Checks every field against the constructors of the modules it feeds.
/// Throws Error(config) naming the offending flag.
void validate(const RunConfig& cfg);

/// Parses command-line flags (argv[0] is the program name). Unknown flags
/// and invalid values throw Error(config); --help throws
/// Error(help_requested) with the usage text as message.
RunConfig parse_args(int argc, const char* const* argv);
std::string usage();

struct OracleMetrics {
  bool ok = false;
  std::string failure;  // set when the shooting solver failed
  double a = 0.0;
  double beta = 0.0;
  double eps = 0.0;
  double compare_radius = 0.0;
  double sup_du = 0.0;
  double sup_db = 0.0;
  double energy_variational = 0.0;
  double energy_oracle = 0.0;
  double energy_rel = 0.0;
  double u_end = 0.0;
  double tail_mismatch = 0.0;
  double mass = 0.0;  // 2 pi int u^2 r dr
  double seconds = 0.0;
};

struct RunResult {
  RunConfig config;
  RadialGrid grid;
  ModelParams params;  // at eps_end
  State final_state;
  std::optional<SolveReport> solve;  // mpa+newton, newton-only, cross-check
  std::optional<OracleMetrics> oracle;  // shooting, cross-check
  double total_seconds = 0.0;
};

/// Runs the selected method. newton-only needs config.seed_profile.
RunResult run_pipeline(const RunConfig& cfg);

}  // namespace msv
