#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"
#include "msvortex/mountain_pass.hpp"

using namespace msv;

namespace {

const RadialGrid& mpa_grid() {
  static const RadialGrid g = make_graded_grid(40.0, 500, 2.0);
  return g;
}

std::vector<double> gaussian_seed(const RadialGrid& g, int k) {
  std::vector<double> seed(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) seed[i] = std::exp(-g.r()[i] * g.r()[i]);
  seed.back() = 0.0;
  if (k != 0) seed[0] = 0.0;
  return seed;
}

struct MpaRun {
  Path start;
  MpaResult result;
  double K = 0.0;
};

const MpaRun& mpa_run() {
  static const MpaRun run = [] {
    const ModelParams p = fixtures::default_params(0.1);
    const State end = find_endpoint(p, mpa_grid(), default_seed(mpa_grid(), 1));
    MpaRun out;
    out.start = initial_path(end, 31);
    out.result = mpa_iterate(out.start, p, mpa_grid(), MpaConfig{});
    out.K = ray_max_energy(end, p, mpa_grid());
    return out;
  }();
  return run;
}

}  // namespace

TEST_CASE("endpoint by doubling along a seed") {
  const RadialGrid& g = mpa_grid();
  for (int k : {1, 2, -1}) {
    const ModelParams p0 = fixtures::default_params(0.0, k);
    const State end = find_endpoint(p0, g, gaussian_seed(g, k));
    CHECK(total_energy(end, p0, g) <= -1.0);
    CHECK(std::all_of(end.b.begin(), end.b.end(), [](double v) { return v == 0.0; }));
    const State twice = linear_combination(2.0, end, 0.0, end);
    CHECK(total_energy(twice, p0, g) < total_energy(end, p0, g));
    // The same endpoint serves every eps since b = 0.
    CHECK(total_energy(end, p0.with_eps(0.5), g) == total_energy(end, p0, g));
  }
}

TEST_CASE("endpoint errors") {
  const RadialGrid& g = mpa_grid();
  const ModelParams p = fixtures::default_params();
  CHECK_THROWS_AS(find_endpoint(p, g, std::vector<double>(g.size(), 0.0)), Error);
  // A seed supported only on constrained slots is zero after projection.
  std::vector<double> tip(g.size(), 0.0);
  tip[0] = 1.0;
  try {
    find_endpoint(p, g, tip);
    FAIL("expected a configuration error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
  CHECK_THROWS_AS(find_endpoint(p, g, std::vector<double>(g.size() - 1, 1.0)), Error);
}

TEST_CASE("initial path") {
  const RadialGrid& g = mpa_grid();
  const ModelParams p = fixtures::default_params();
  const State end = find_endpoint(p, g, default_seed(g, 1));
  const Path path = initial_path(end, 31);
  REQUIRE(path.nodes.size() == 31);
  CHECK(total_energy(path.nodes.front(), p, g) == 0.0);
  CHECK(total_energy(path.nodes.back(), p, g) <= 0.0);
  double top = 0.0;
  for (const State& s : path.nodes) {
    top = std::max(top, total_energy(s, p, g));
    CHECK_NOTHROW(check_state(s, g.size(), 1));
  }
  CHECK(top > 0.0);
  for (std::size_t j = 0; j < path.nodes.size(); ++j)
    CHECK(path.nodes[j].u[200] == doctest::Approx(j / 30.0 * end.u[200]).epsilon(1e-14));
  CHECK_THROWS_AS(initial_path(end, 4), Error);
}

TEST_CASE("mountain-pass deformation") {
  const MpaRun& run = mpa_run();
  const MpaResult& res = run.result;
  const RadialGrid& g = mpa_grid();
  const MpaConfig cfg;

  CHECK(res.grad_norm <= cfg.grad_tol);
  CHECK(res.level > 0.0);
  CHECK(res.level <= run.K + cfg.grad_tol);
  CHECK(res.level <= res.initial_barrier);
  CHECK(lp_norm_pow(res.candidate.u, g, 4.0) > 0.1);
  CHECK(*std::min_element(res.candidate.u.begin(), res.candidate.u.end()) >= -1e-10);

  // Endpoints never move.
  CHECK(res.path.nodes.front().u == run.start.nodes.front().u);
  CHECK(res.path.nodes.front().b == run.start.nodes.front().b);
  CHECK(res.path.nodes.back().u == run.start.nodes.back().u);
  CHECK(res.path.nodes.back().b == run.start.nodes.back().b);

  REQUIRE(!res.level_history.empty());
  for (std::size_t i = 1; i < res.level_history.size(); ++i)
    CHECK(res.level_history[i] <= res.level_history[i - 1] + 1e-12 * std::abs(res.level_history[i - 1]));
}

TEST_CASE("iteration limit") {
  const RadialGrid& g = mpa_grid();
  const ModelParams p = fixtures::default_params();
  const Path path = initial_path(find_endpoint(p, g, default_seed(g, 1)), 31);
  MpaConfig cfg;
  cfg.max_iter = 1;
  try {
    mpa_iterate(path, p, g, cfg);
    FAIL("expected non-convergence");
  } catch (const SolveError& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK(e.best().size() == g.size());
    CHECK(total_energy(e.best(), p, g) > 0.0);
  }
}

TEST_CASE("configuration validation") {
  MpaConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  for (auto bad : {+[](MpaConfig& c) { c.path_len = 4; }, +[](MpaConfig& c) { c.max_iter = 0; },
                   +[](MpaConfig& c) { c.grad_tol = 0.0; }, +[](MpaConfig& c) { c.backtrack = 1.0; },
                   +[](MpaConfig& c) { c.initial_step = -1.0; }}) {
    MpaConfig c;
    bad(c);
    CHECK_THROWS_AS(validate(c), Error);
  }
}

TEST_CASE("preconditioned direction is a descent direction") {
  const RadialGrid& g = mpa_grid();
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const int k = 1 + t % 2;
    const ModelParams p = fixtures::default_params(0.1, k);
    const State s = fixtures::random_state(g, k, rng);
    const State gr = gradient(s, p, g);
    const State d = precondition(s, gr, p, g);
    CHECK(dot(gr, d) > 0.0);
    CHECK(d.b[0] == 0.0);
    CHECK(d.u[0] == 0.0);
    CHECK(d.u.back() == 0.0);
  }
}

TEST_CASE("default seed") {
  const RadialGrid& g = mpa_grid();
  const std::vector<double> s = default_seed(g, 2);
  CHECK(s.front() == 0.0);
  CHECK(s.back() == 0.0);
  CHECK(s[100] == doctest::Approx(g.r()[100] * g.r()[100] * std::exp(-0.5 * g.r()[100] * g.r()[100])));
}
