#include "msvortex/oracle.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "msvortex/errors.hpp"

namespace msv {

namespace odeint = boost::numeric::odeint;

namespace {

using Vec4 = std::array<double, 4>;
using Vec2 = std::array<double, 2>;

// Internally the vorticity is |k|; b changes sign with k.
struct Coupled {
  double k;
  double eps;
  ModelParams params;

  void operator()(const Vec4& y, Vec4& dy, double r) const {
    const double u = y[0];
    const double d = k - y[2];
    dy[0] = y[1];
    dy[1] = -y[1] / r + d * d * u / (r * r) + potential_Wprime(u, params);
    dy[2] = y[3];
    dy[3] = y[3] / r + eps * y[2] - d * u * u;
  }
};

// b against a prescribed decaying u tail.
struct MagneticTail {
  double k;
  double eps;
  double u_match;
  double nu;
  double r_match;
  double k_match;

  double u(double r) const { return u_match * std::cyl_bessel_k(nu, r) / k_match; }
  double du(double r) const {
    return -0.5 * u_match * (std::cyl_bessel_k(std::abs(nu - 1.0), r) + std::cyl_bessel_k(nu + 1.0, r)) / k_match;
  }
  void operator()(const Vec2& y, Vec2& dy, double r) const {
    const double uu = u(r);
    dy[0] = y[1];
    dy[1] = y[1] / r + eps * y[0] - (k - y[0]) * uu * uu;
  }
};

using Stepper4 = odeint::runge_kutta_dopri5<Vec4>;
using Stepper2 = odeint::runge_kutta_dopri5<Vec2>;

constexpr double kBlowUp = 1e6;

Coupled make_rhs(const ModelParams& params) {
  return Coupled{static_cast<double>(std::abs(params.k())), params.eps(), params};
}

ShootParams internal_params(double a, double beta, const OracleOptions& o) {
  ShootParams sp;
  sp.a = a;
  sp.beta = beta;
  sp.r0 = o.r0;
  sp.abs_tol = o.tol;
  sp.rel_tol = o.tol;
  return sp;
}

Vec4 series_internal(const ShootParams& sp, const ModelParams& params, double r) {
  const int m = std::abs(params.k());
  const double k = m;
  const double a = sp.a;
  const double beta = m == 0 ? 0.0 : sp.beta;
  const double eps = params.eps();
  double c = 0.0;
  if (m == 0)
    c = (1.0 - params.lambda() * std::pow(std::abs(a), params.p() - 2.0)) / 4.0;
  else
    c = (1.0 - 2.0 * k * beta) / (4.0 * (m + 1));
  const double rm = std::pow(r, m);
  const double u = a * rm * (1.0 + c * r * r);
  const double du = a * (m * (m == 0 ? 0.0 : std::pow(r, m - 1)) + c * (m + 2) * rm * r);
  double b = 0.0, db = 0.0;
  if (m > 0) {
    const double q = k * a * a / (4.0 * m * (m + 1));
    const double r2m2 = std::pow(r, 2 * m + 2);
    b = beta * r * r + eps * beta / 8.0 * r * r * r * r - q * r2m2;
    db = 2.0 * beta * r + eps * beta / 2.0 * r * r * r - q * (2 * m + 2) * r2m2 / r;
  }
  return {u, du, b, db};
}

MagneticTail make_tail(const ModelParams& params, double r_match, const Vec4& at_match) {
  const double k = std::abs(params.k());
  const double nu = std::abs(k - at_match[2]);
  return MagneticTail{k, params.eps(), at_match[0], nu, r_match, std::cyl_bessel_k(nu, r_match)};
}

Vec2 integrate_tail(const MagneticTail& tail, const Vec4& at_match, double rend, double tol) {
  Vec2 y{at_match[2], at_match[3]};
  if (rend > tail.r_match)
    odeint::integrate_adaptive(odeint::make_controlled(tol, tol, Stepper2()), tail, y, tail.r_match, rend,
                               1e-3);
  return y;
}

double tail_residual(TailCondition cond, double eps, double rend, double b, double db) {
  if (cond == TailCondition::natural || eps == 0.0) return db;
  const double alpha = std::sqrt(eps);
  return db + alpha * std::cyl_bessel_k(0.0, alpha * rend) / std::cyl_bessel_k(1.0, alpha * rend) * b;
}

struct Probe {
  bool ok = false;
  Vec4 at_match{};
  double decay = 0.0;  // u' minus the decaying-tail slope at the matching radius
  double tail = 0.0;   // magnetic condition at Rend
  double norm(bool coupled) const { return coupled ? std::hypot(decay, tail) : std::abs(decay); }
};

Probe probe(double a, double beta, double r_match, const ModelParams& params, double rend, const OracleOptions& o) {
  Probe pr;
  const Coupled rhs = make_rhs(params);
  Vec4 y = series_internal(internal_params(a, beta, o), params, o.r0);
  auto stepper = odeint::make_dense_output(o.tol, o.tol, Stepper4());
  stepper.initialize(y, o.r0, 1e-3 * o.r0);
  try {
    while (stepper.current_time() < r_match) {
      stepper.do_step(rhs);
      const Vec4& c = stepper.current_state();
      if (!(std::abs(c[0]) < kBlowUp && std::abs(c[2]) < kBlowUp)) return pr;
    }
  } catch (const Error&) {
    return pr;
  }
  stepper.calc_state(r_match, y);
  const MagneticTail tail = make_tail(params, r_match, y);
  pr.decay = y[1] - tail.du(r_match);
  const Vec2 yb = integrate_tail(tail, y, rend, o.tol);
  pr.tail = tail_residual(o.tail, params.eps(), rend, yb[0], yb[1]);
  pr.at_match = y;
  pr.ok = std::isfinite(pr.decay) && std::isfinite(pr.tail);
  return pr;
}

// Damped Newton with a forward-difference Jacobian on (a, beta), or on a
// alone when b vanishes identically.
bool newton_shoot(double& a, double& beta, double r_match, bool coupled, const ModelParams& params, double rend,
                  const OracleOptions& o, double tol, Probe& out) {
  Probe cur = probe(a, beta, r_match, params, rend, o);
  if (!cur.ok) return false;
  for (int it = 0; it < o.max_outer_iter; ++it) {
    const double norm = cur.norm(coupled);
    if (norm <= tol) {
      out = cur;
      return true;
    }
    double ha = 1e-7 * std::max(std::abs(a), 1e-3);
    Probe pa = probe(a + ha, beta, r_match, params, rend, o);
    if (!pa.ok) {
      ha = -ha;
      pa = probe(a + ha, beta, r_match, params, rend, o);
      if (!pa.ok) return false;
    }
    double da = 0.0, db = 0.0;
    if (coupled) {
      double hb = 1e-7 * std::max(std::abs(beta), 1e-2);
      Probe pb = probe(a, beta + hb, r_match, params, rend, o);
      if (!pb.ok) {
        hb = -hb;
        pb = probe(a, beta + hb, r_match, params, rend, o);
        if (!pb.ok) return false;
      }
      const double j11 = (pa.decay - cur.decay) / ha, j12 = (pb.decay - cur.decay) / hb;
      const double j21 = (pa.tail - cur.tail) / ha, j22 = (pb.tail - cur.tail) / hb;
      const double det = j11 * j22 - j12 * j21;
      if (!(std::abs(det) > 0.0)) return false;
      da = -(j22 * cur.decay - j12 * cur.tail) / det;
      db = -(-j21 * cur.decay + j11 * cur.tail) / det;
    } else {
      const double j = (pa.decay - cur.decay) / ha;
      if (!(std::abs(j) > 0.0)) return false;
      da = -cur.decay / j;
    }
    bool moved = false;
    for (double t = 1.0; t > 1e-10; t *= 0.5) {
      const Probe trial = probe(a + t * da, beta + t * db, r_match, params, rend, o);
      if (trial.ok && trial.norm(coupled) < norm) {
        a += t * da;
        beta += t * db;
        cur = trial;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // Roundoff floor: accept if within a decade of the tolerance.
      if (norm <= 10.0 * tol) {
        out = cur;
        return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

std::array<double, 4> series_start(const ShootParams& sp, const ModelParams& params, double r) {
  const double sign = params.k() < 0 ? -1.0 : 1.0;
  ShootParams internal = sp;
  internal.beta = sign * sp.beta;
  Vec4 y = series_internal(internal, params, r);
  y[2] *= sign;
  y[3] *= sign;
  return y;
}

ShootOutcome shoot_once(const ShootParams& sp, const ModelParams& params, double Rend) {
  if (!(sp.r0 > 0.0) || !(Rend > sp.r0)) throw Error(ErrorKind::config, "shooting interval must satisfy 0 < r0 < Rend");
  if (!(sp.abs_tol > 0.0 && sp.rel_tol > 0.0)) throw Error(ErrorKind::config, "integration tolerances must be positive");
  const double sign = params.k() < 0 ? -1.0 : 1.0;
  ShootParams internal = sp;
  internal.beta = sign * sp.beta;
  const Coupled rhs = make_rhs(params);
  auto stepper = odeint::make_dense_output(sp.abs_tol, sp.rel_tol, Stepper4());
  stepper.initialize(series_internal(internal, params, sp.r0), sp.r0, 1e-3 * sp.r0);

  ShootOutcome out;
  bool decreasing = false;
  Vec4 y{};
  while (stepper.current_time() < Rend) {
    stepper.do_step(rhs);
    const double r = stepper.current_time();
    const Vec4& cur = stepper.current_state();
    if (out.zero_radius < 0.0 && cur[0] < 0.0) out.zero_radius = r;
    if (cur[1] < 0.0) decreasing = true;
    if (out.upturn_radius < 0.0 && decreasing && cur[1] > 0.0 && cur[0] > 0.0) out.upturn_radius = r;
    if (!std::isfinite(cur[0]) || std::abs(cur[0]) > kBlowUp) {
      out.diverged = true;
      out.blowup_radius = r;
      out.r_end = r;
      y = cur;
      break;
    }
  }
  if (!out.diverged) {
    stepper.calc_state(Rend, y);
    out.r_end = Rend;
  }
  out.u = y[0];
  out.du = y[1];
  out.b = sign * y[2];
  out.db = sign * y[3];
  return out;
}

ShootSolution::ShootSolution(ModelParams params, OracleOptions options, double a, double beta, double rend,
                             double matching_radius, std::array<double, 4> at_matching)
    : params_(params), options_(options), a_(a), beta_(beta), rend_(rend), rm_(matching_radius),
      at_rm_(at_matching) {}

std::vector<std::array<double, 4>> ShootSolution::evaluate(std::span<const double> radii) const {
  std::vector<Vec4> out(radii.size());
  const ShootParams sp = internal_params(a_, beta_, options_);
  const Coupled rhs = make_rhs(params_);
  auto core = odeint::make_dense_output(options_.tol, options_.tol, Stepper4());
  core.initialize(series_internal(sp, params_, sp.r0), sp.r0, 1e-3 * sp.r0);

  const MagneticTail tail = make_tail(params_, rm_, at_rm_);
  auto far = odeint::make_dense_output(options_.tol, options_.tol, Stepper2());
  far.initialize(Vec2{at_rm_[2], at_rm_[3]}, rm_, 1e-3);

  double last = -1.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r >= last) || r > rend_ * (1.0 + 1e-12))
      throw Error(ErrorKind::range, "oracle evaluation radii must increase within [0, Rend]");
    last = r;
    if (r <= sp.r0) {
      out[i] = series_internal(sp, params_, r);
    } else if (r <= rm_) {
      while (core.current_time() < r) core.do_step(rhs);
      core.calc_state(r, out[i]);
    } else {
      while (far.current_time() < r) far.do_step(tail);
      Vec2 yb;
      far.calc_state(r, yb);
      out[i] = {tail.u(r), tail.du(r), yb[0], yb[1]};
    }
  }
  if (params_.k() < 0)
    for (Vec4& y : out) {
      y[2] = -y[2];
      y[3] = -y[3];
    }
  return out;
}

State ShootSolution::on_grid(const RadialGrid& grid) const {
  if (grid.rmax() > rend_ * (1.0 + 1e-12)) throw Error(ErrorKind::range, "grid extends beyond the shooting interval");
  const auto values = evaluate(grid.r());
  State s = State::zeros(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.u[i] = values[i][0];
    s.b[i] = values[i][2];
  }
  project_constraints(s, params_.k());
  return s;
}

double ShootSolution::u_end() const {
  const double r = rend_;
  return evaluate(std::span<const double>(&r, 1)).front()[0];
}

double ShootSolution::tail_mismatch() const {
  const double r = rend_;
  const Vec4 y = evaluate(std::span<const double>(&r, 1)).front();
  return tail_residual(options_.tail, params_.eps(), rend_, y[2], y[3]);
}

double ShootSolution::mass() const {
  // Simpson in s with r = Rend s^2.
  const int n = 20000;
  std::vector<double> radii(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    radii[i] = rend_ * s * s;
  }
  radii.back() = rend_;
  const auto values = evaluate(radii);
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double f = values[i][0] * values[i][0] * radii[i] * 2.0 * rend_ * s;
    acc += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return 2.0 * std::numbers::pi * acc / (3.0 * n);
}

ShootSolution shoot_solve(const ModelParams& params, double Rend, const OracleOptions& options) {
  if (!(options.r0 > 0.0) || !(Rend > 4.0)) throw Error(ErrorKind::config, "shooting interval too short");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::config, "oracle tolerance must be positive");
  if (!(options.match_radius >= 2.0)) throw Error(ErrorKind::config, "matching radius must be at least 2");

  const bool coupled = params.k() != 0;
  const double r_final = std::min(options.match_radius, 0.5 * Rend);
  double a = 1.0;
  double beta = coupled ? 0.25 : 0.0;
  Probe last;
  // Continuation in the matching radius from a short, well-conditioned interval.
  for (double r_match = 2.0;; r_match = std::min(r_final, r_match + 1.0)) {
    const bool final_stage = r_match >= r_final;
    if (!newton_shoot(a, beta, r_match, coupled, params, Rend, options, final_stage ? 1e-10 : 1e-8, last))
      throw Error(ErrorKind::oracle, "shooting Newton failed at matching radius " + std::to_string(r_match));
    if (final_stage) break;
  }
  if (!(a > 0.0)) throw Error(ErrorKind::oracle, "shooting converged to a non-positive amplitude");
  return ShootSolution(params, options, a, beta, Rend, r_final, last.at_match);
}

}  // namespace msv
