#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "fixtures.hpp"
#include "msvortex/continuation.hpp"
#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"
#include "msvortex/oracle.hpp"

using namespace msv;

TEST_CASE("geometric schedule") {
  const EpsSchedule s = geometric_schedule(0.1, 1e-6, 0.25);
  REQUIRE(s.eps_values.size() == 10);
  CHECK(s.eps_values.front() == 0.1);
  CHECK(s.eps_values[1] == doctest::Approx(0.025));
  CHECK(s.eps_values.back() == 1e-6);
  for (std::size_t i = 1; i < s.eps_values.size(); ++i) CHECK(s.eps_values[i] < s.eps_values[i - 1]);
  CHECK_NOTHROW(validate(s));

  CHECK(geometric_schedule(1e-4, 1e-4, 0.25).eps_values.size() == 1);
  CHECK_THROWS_AS(geometric_schedule(1.0, 1e-6, 0.25), Error);
  CHECK_THROWS_AS(geometric_schedule(0.1, 0.2, 0.25), Error);
  CHECK_THROWS_AS(geometric_schedule(0.1, 0.0, 0.25), Error);
  CHECK_THROWS_AS(geometric_schedule(0.1, 1e-6, 1.0), Error);

  EpsSchedule bad = s;
  bad.eps_values[3] = bad.eps_values[2];
  CHECK_THROWS_AS(validate(bad), Error);
  bad = s;
  bad.newton_tol = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("Newton from an exact discrete solution does nothing") {
  const SolveReport& rep = fixtures::eps4_run();
  const EpsRecord& rec = rep.records.back();
  const NewtonResult nr = newton_refine(rec.state, fixtures::default_params(1e-4), fixtures::default_grid(), 1e-10, 50);
  CHECK(nr.iterations == 0);
  CHECK(nr.state.u == rec.state.u);
  CHECK(nr.state.b == rec.state.b);
}

TEST_CASE("Newton from the shooting solution") {
  const RadialGrid& g = fixtures::default_grid();
  const ModelParams p = fixtures::default_params(1e-4);
  const State seed = shoot_solve(p, g.rmax()).on_grid(g);
  const NewtonResult nr = newton_refine(seed, p, g, 1e-10, 50);
  CHECK(nr.iterations <= 5);
  CHECK(nr.grad_norm <= 1e-10);
  CHECK(*std::min_element(nr.state.u.begin(), nr.state.u.end()) >= 0.0);
}

TEST_CASE("Newton errors") {
  const RadialGrid& g = fixtures::default_grid();
  const ModelParams p = fixtures::default_params(1e-4);
  const State seed = shoot_solve(p, g.rmax()).on_grid(g);
  CHECK_THROWS_AS(newton_refine(seed, p, g, 0.0, 50), Error);
  try {
    newton_refine(seed, p, g, 1e-30, 2);
    FAIL("expected a solver failure");
  } catch (const SolveError& e) {
    CHECK((e.kind() == ErrorKind::non_convergence || e.kind() == ErrorKind::stagnation));
    CHECK(e.best().size() == g.size());
  }
}

TEST_CASE("continuation invariants") {
  const SolveReport& rep = fixtures::schedule_run();
  const EpsSchedule sched = geometric_schedule(0.1, 1e-6, 0.25);
  const RadialGrid& g = fixtures::default_grid();
  REQUIRE(rep.records.size() == 10);
  CHECK(rep.used_mpa);
  CHECK(rep.K > 0.0);
  CHECK(rep.c_bar > 0.0);
  CHECK(rep.norm_bound == doctest::Approx(4.0 * rep.K));

  double prev_penalty = INFINITY;
  for (std::size_t j = 0; j < rep.records.size(); ++j) {
    const EpsRecord& rec = rep.records[j];
    CAPTURE(rec.eps);
    CHECK(rec.eps == sched.eps_values[j]);
    CHECK(rec.level > 0.0);
    CHECK(rec.level <= rep.K);
    CHECK(rec.norm_h1 >= rep.c_bar);
    CHECK(rec.residual_sup <= sched.residual_tol);
    CHECK(rec.grad_norm <= sched.newton_tol);
    CHECK(rec.min_u >= 0.0);
    if (j > 0) CHECK(rec.newton_iterations <= 20);
    CHECK(rec.energy.penalty < prev_penalty);
    prev_penalty = rec.energy.penalty;
    CHECK(rec.b_local_bound);
    CHECK(rec.flux == 2.0 * std::numbers::pi * rec.state.b.back());
    CHECK(rec.level == rec.energy.total);

    // Bounds implied by the level bound.
    CHECK(rec.norm_h1 * rec.norm_h1 <= rep.norm_bound);
    CHECK(rec.norm_h1r * rec.norm_h1r <= rep.norm_bound);
    CHECK(2.0 * rec.energy.curl_b <= rep.norm_bound);
  }
  CHECK(rep.records.back().energy.penalty <= 1e-4 * rep.records.front().energy.penalty);

  CHECK(rep.extrapolation_gap >= 0.0);
  CHECK(rep.limit.size() == g.size());
  CHECK(rep.limit_newton_iterations <= 20);
  CHECK(rep.seconds.count("mpa") == 1);
  CHECK(rep.seconds.count("newton") == 1);
}

TEST_CASE("records rebuild consistently") {
  const SolveReport& rep = fixtures::schedule_run();
  const EpsRecord& rec = rep.records[4];
  const EpsRecord again = make_record(rec.state, fixtures::default_params(rec.eps), fixtures::default_grid());
  CHECK(again.level == rec.level);
  CHECK(again.residual_sup == rec.residual_sup);
  CHECK(again.norm_h1 == rec.norm_h1);
  CHECK(again.norm_h1r >= again.norm_h1);
}

TEST_CASE("initial guess skips the mountain pass") {
  const SolveReport& base = fixtures::eps4_run();
  ContinuationOptions opt;
  opt.initial_guess = base.records.back().state;
  const SolveReport rep = run_continuation(geometric_schedule(1e-4, 2.5e-5, 0.25), fixtures::default_params(1e-4),
                                           fixtures::default_grid(), {}, opt);
  CHECK_FALSE(rep.used_mpa);
  CHECK(rep.records.front().newton_iterations == 0);
  CHECK(rep.records.size() == 2);
}

TEST_CASE("errors carry the failing eps") {
  const RadialGrid g = make_graded_grid(40.0, 500, 2.0);
  EpsSchedule sched = geometric_schedule(0.1, 0.1, 0.25);
  sched.residual_tol = 1e-20;
  try {
    run_continuation(sched, fixtures::default_params(), g, {});
    FAIL("expected a residual failure");
  } catch (const SolveError& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK(std::string(e.what()).find("eps = 0.1") != std::string::npos);
  }

  MpaConfig cfg;
  cfg.max_iter = 1;
  try {
    run_continuation(geometric_schedule(0.1, 0.1, 0.25), fixtures::default_params(), g, cfg);
    FAIL("expected a mountain-pass failure");
  } catch (const SolveError& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK(std::string(e.what()).find("eps = ") != std::string::npos);
  }
}
