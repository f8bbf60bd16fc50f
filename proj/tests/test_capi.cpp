#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "msvortex/msvortex.h"

namespace {

struct Config {
  msv_config* h = nullptr;
  Config() { REQUIRE(msv_config_create(&h) == MSV_OK); }
  ~Config() { msv_config_free(h); }
};

struct Run {
  msv_run* h = nullptr;
  ~Run() { msv_run_free(h); }
};

double get(const msv_run* run, const char* key) {
  double v = NAN;
  REQUIRE(msv_run_get_double(run, key, &v) == MSV_OK);
  return v;
}

void small(msv_config* c) {
  REQUIRE(msv_config_set_int(c, "n", 500) == MSV_OK);
  REQUIRE(msv_config_set_double(c, "eps_end", 1e-3) == MSV_OK);
}

}  // namespace

TEST_CASE("version and exit codes") {
  CHECK(std::string(msv_version()).size() > 0);
  CHECK(msv_status_exit_code(MSV_OK) == 0);
  CHECK(msv_status_exit_code(MSV_HELP) == 0);
  CHECK(msv_status_exit_code(MSV_ERR_CONFIG) == 2);
  CHECK(msv_status_exit_code(MSV_ERR_IO) == 3);
  CHECK(msv_status_exit_code(MSV_ERR_NONCONVERGENCE) == 4);
  CHECK(msv_status_exit_code(MSV_ERR_EVALUATION) == 5);
  CHECK(msv_status_exit_code(MSV_ERR_INTERNAL) == 1);
  CHECK(msv_status_exit_code(MSV_ERR_INVALID_HANDLE) == 1);
}

TEST_CASE("null handles") {
  CHECK(msv_config_create(nullptr) == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_config_set_int(nullptr, "k", 1) == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_config_set_double(nullptr, "p", 4.0) == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_config_set_string(nullptr, "method", "shooting") == MSV_ERR_INVALID_HANDLE);
  msv_run* run = nullptr;
  CHECK(msv_solve(nullptr, &run) == MSV_ERR_INVALID_HANDLE);
  CHECK(run == nullptr);
  double v = 0.0;
  CHECK(msv_run_get_double(nullptr, "energy", &v) == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_run_node_count(nullptr) == 0);
  CHECK(msv_run_copy_profile(nullptr, nullptr, nullptr, nullptr, 0) == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_run_write_profile(nullptr, "x.csv") == MSV_ERR_INVALID_HANDLE);
  CHECK(msv_run_write_report(nullptr, "x.json") == MSV_ERR_INVALID_HANDLE);
  CHECK(std::string(msv_last_error()).find("null") != std::string::npos);
  msv_config_free(nullptr);
  msv_run_free(nullptr);
}

TEST_CASE("configuration keys") {
  Config c;
  CHECK(msv_config_set_int(c.h, "k", 2) == MSV_OK);
  CHECK(msv_config_set_int(c.h, "path_len", 21) == MSV_OK);
  CHECK(msv_config_set_double(c.h, "lambda", 2.0) == MSV_OK);
  CHECK(msv_config_set_string(c.h, "method", "cross-check") == MSV_OK);
  CHECK(msv_config_profile_out(c.h) == nullptr);
  CHECK(msv_config_set_string(c.h, "profile_out", "out.csv") == MSV_OK);
  CHECK(std::string(msv_config_profile_out(c.h)) == "out.csv");
  CHECK(msv_config_report_out(c.h) == nullptr);

  CHECK(msv_config_set_int(c.h, "bogus", 1) == MSV_ERR_CONFIG);
  CHECK(std::string(msv_last_error()).find("bogus") != std::string::npos);
  CHECK(msv_config_set_double(c.h, "k", 1.0) == MSV_ERR_CONFIG);
  CHECK(msv_config_set_string(c.h, "method", "simplex") == MSV_ERR_CONFIG);
  CHECK(msv_config_set_string(c.h, "method", nullptr) == MSV_ERR_CONFIG);
  CHECK(msv_config_set_int(c.h, nullptr, 1) == MSV_ERR_CONFIG);
}

TEST_CASE("configuration from arguments") {
  msv_config* c = nullptr;
  const char* help[] = {"msvortex", "--help"};
  CHECK(msv_config_from_args(2, help, &c) == MSV_HELP);
  CHECK(c == nullptr);
  CHECK(std::string(msv_last_error()).find("--method") != std::string::npos);

  const char* bad[] = {"msvortex", "--p", "2"};
  CHECK(msv_config_from_args(3, bad, &c) == MSV_ERR_CONFIG);
  CHECK(std::string(msv_last_error()).find("--p") != std::string::npos);

  const char* unknown[] = {"msvortex", "--frobnicate"};
  CHECK(msv_config_from_args(2, unknown, &c) == MSV_ERR_CONFIG);
  CHECK(msv_config_from_args(0, nullptr, &c) == MSV_ERR_CONFIG);

  const char* ok[] = {"msvortex", "--k", "0", "--method", "shooting"};
  REQUIRE(msv_config_from_args(5, ok, &c) == MSV_OK);
  msv_config_free(c);
}

TEST_CASE("invalid configuration is rejected at solve time") {
  Config c;
  REQUIRE(msv_config_set_double(c.h, "p", 1.5) == MSV_OK);
  Run r;
  CHECK(msv_solve(c.h, &r.h) == MSV_ERR_CONFIG);
  CHECK(r.h == nullptr);
  CHECK(std::string(msv_last_error()).find("--p") != std::string::npos);
}

TEST_CASE("non-convergence is reported") {
  Config c;
  small(c.h);
  REQUIRE(msv_config_set_int(c.h, "max_iter", 1) == MSV_OK);
  Run r;
  CHECK(msv_solve(c.h, &r.h) == MSV_ERR_NONCONVERGENCE);
  CHECK(std::string(msv_last_error()).find("eps = ") != std::string::npos);
}

TEST_CASE("mountain pass and continuation run") {
  Config c;
  small(c.h);
  Run r;
  REQUIRE(msv_solve(c.h, &r.h) == MSV_OK);
  const double level = get(r.h, "level"), K = get(r.h, "K");
  CHECK(level > 0.0);
  CHECK(level <= K);
  CHECK(get(r.h, "energy") == level);
  CHECK(get(r.h, "eps") == 1e-3);
  CHECK(get(r.h, "min_u") >= 0.0);
  CHECK(get(r.h, "residual_sup") <= 1e-6);
  CHECK(get(r.h, "grad_norm") <= 1e-10);
  CHECK(get(r.h, "norm_h1") >= get(r.h, "c_bar"));
  CHECK(get(r.h, "mpa_iterations") >= 1.0);

  double v = 0.0;
  CHECK(msv_run_get_double(r.h, "oracle_a", &v) == MSV_ERR_CONFIG);
  CHECK(msv_run_get_double(r.h, "nonsense", &v) == MSV_ERR_CONFIG);

  const size_t n = msv_run_node_count(r.h);
  CHECK(n == 501);
  std::vector<double> rr(n), u(n), b(n);
  CHECK(msv_run_copy_profile(r.h, rr.data(), u.data(), b.data(), n - 1) == MSV_ERR_CONFIG);
  REQUIRE(msv_run_copy_profile(r.h, rr.data(), u.data(), b.data(), n) == MSV_OK);
  CHECK(rr.front() == 0.0);
  CHECK(rr.back() == 40.0);
  CHECK(b.front() == 0.0);
  CHECK(u.back() == 0.0);
  CHECK(get(r.h, "flux") == doctest::Approx(2.0 * M_PI * b.back()).epsilon(1e-15));
  CHECK(msv_run_copy_profile(r.h, nullptr, u.data(), nullptr, n) == MSV_OK);

  CHECK(msv_run_write_profile(r.h, "/nonexistent-dir/p.csv") == MSV_ERR_IO);
  CHECK(msv_run_write_report(r.h, "/nonexistent-dir/r.json") == MSV_ERR_IO);
  CHECK(msv_run_write_profile(r.h, nullptr) == MSV_ERR_IO);
}

TEST_CASE("shooting run") {
  Config c;
  REQUIRE(msv_config_set_int(c.h, "k", 0) == MSV_OK);
  REQUIRE(msv_config_set_string(c.h, "method", "shooting") == MSV_OK);
  Run r;
  REQUIRE(msv_solve(c.h, &r.h) == MSV_OK);
  CHECK(get(r.h, "oracle_a") == doctest::Approx(2.2062).epsilon(1e-4));
  CHECK(get(r.h, "oracle_mass") == doctest::Approx(11.7009).epsilon(1e-4));
  double v = 0.0;
  CHECK(msv_run_get_double(r.h, "level", &v) == MSV_ERR_CONFIG);
  CHECK(msv_run_get_double(r.h, "oracle_sup_du", &v) == MSV_ERR_CONFIG);
}
