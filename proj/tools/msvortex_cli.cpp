// Command-line front end over the C API.

#include <cstdio>
#include <initializer_list>

#include "msvortex/msvortex.h"

namespace {

int report_failure(msv_status st) {
  std::fprintf(stderr, "msvortex: %s\n", msv_last_error());
  return msv_status_exit_code(st);
}

void print_value(const msv_run* run, const char* key) {
  double v = 0.0;
  if (msv_run_get_double(run, key, &v) == MSV_OK) std::printf("%-18s %.12g\n", key, v);
}

}  // namespace

int main(int argc, char** argv) {
  msv_config* cfg = nullptr;
  msv_status st = msv_config_from_args(argc, argv, &cfg);
  if (st == MSV_HELP) {
    std::fputs(msv_last_error(), stdout);
    return 0;
  }
  if (st != MSV_OK) return report_failure(st);

  msv_run* run = nullptr;
  st = msv_solve(cfg, &run);
  if (st != MSV_OK) {
    msv_config_free(cfg);
    return report_failure(st);
  }

  if (const char* path = msv_config_profile_out(cfg)) st = msv_run_write_profile(run, path);
  if (st == MSV_OK)
    if (const char* path = msv_config_report_out(cfg)) st = msv_run_write_report(run, path);
  if (st != MSV_OK) {
    const int code = report_failure(st);
    msv_run_free(run);
    msv_config_free(cfg);
    return code;
  }

  for (const char* key : {"eps", "energy", "level", "K", "grad_norm", "residual_sup", "norm_h1", "flux", "min_u",
                          "extrapolation_gap", "oracle_a", "oracle_beta", "oracle_mass", "oracle_sup_du",
                          "oracle_sup_db", "seconds"})
    print_value(run, key);
  msv_run_free(run);
  msv_config_free(cfg);
  return 0;
}
