#include "msvortex/mountain_pass.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

#include "msvortex/banded.hpp"
#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"

namespace msv {

void validate(const MpaConfig& cfg) {
  if (cfg.path_len < 5) throw Error(ErrorKind::config, "path length must be at least 5");
  if (cfg.max_iter < 1) throw Error(ErrorKind::config, "max_iter must be positive");
  if (!(cfg.grad_tol > 0.0)) throw Error(ErrorKind::config, "grad_tol must be positive");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) throw Error(ErrorKind::config, "backtrack factor must lie in (0, 1)");
  if (!(cfg.initial_step > 0.0)) throw Error(ErrorKind::config, "initial step must be positive");
  if (!(cfg.armijo > 0.0 && cfg.armijo < 0.5)) throw Error(ErrorKind::config, "Armijo constant must lie in (0, 0.5)");
  if (cfg.respace_every < 1) throw Error(ErrorKind::config, "respace interval must be positive");
}

std::vector<double> default_seed(const RadialGrid& grid, int k) {
  const auto r = grid.r();
  const int m = std::abs(k);
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(r[i], m) * std::exp(-0.5 * r[i] * r[i]);
  if (k != 0) u.front() = 0.0;
  u.back() = 0.0;
  return u;
}

State find_endpoint(const ModelParams& params, const RadialGrid& grid, std::span<const double> seed) {
  if (seed.size() != grid.size())
    throw Error(ErrorKind::shape, "seed profile has " + std::to_string(seed.size()) + " values, grid has " +
                                      std::to_string(grid.size()));
  State base = State::zeros(grid.size());
  std::copy(seed.begin(), seed.end(), base.u.begin());
  project_constraints(base, params.k());
  project_nonnegative(base);
  if (sup_norm(base) == 0.0) throw Error(ErrorKind::config, "seed profile vanishes on the free nodes");

  const ModelParams p0 = params.with_eps(0.0);
  const double t_max = std::ldexp(1.0, 60);
  for (double t = 1.0; t <= t_max; t *= 2.0) {
    State s = base;
    for (double& v : s.u) v *= t;
    if (total_energy(s, p0, grid) <= -1.0) return s;
  }
  throw Error(ErrorKind::geometry, "J_0(t * seed) stays above -1 up to t = 2^60");
}

double ray_max_energy(const State& endpoint, const ModelParams& params, const RadialGrid& grid) {
  const ModelParams p0 = params.with_eps(0.0);
  State ray = State::zeros(endpoint.size());
  const auto at = [&](double t) {
    for (std::size_t i = 0; i < ray.size(); ++i) ray.u[i] = t * endpoint.u[i];
    return total_energy(ray, p0, grid);
  };
  const int samples = 200;
  int best = 0;
  double best_value = at(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double v = at(static_cast<double>(i) / samples);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = std::max(0, best - 1) / static_cast<double>(samples);
  const double hi = std::min(samples, best + 1) / static_cast<double>(samples);
  const auto res = boost::math::tools::brent_find_minima([&](double t) { return -at(t); }, lo, hi, 40);
  return std::max(best_value, -res.second);
}

Path initial_path(const State& endpoint, int path_len) {
  if (path_len < 5) throw Error(ErrorKind::config, "path length must be at least 5");
  Path path;
  path.nodes.reserve(path_len);
  for (int j = 0; j < path_len; ++j) {
    const double t = static_cast<double>(j) / (path_len - 1);
    path.nodes.push_back(linear_combination(t, endpoint, 0.0, endpoint));
  }
  path.nodes.front() = State::zeros(endpoint.size());
  path.nodes.back() = endpoint;
  return path;
}

namespace {

// Block-diagonal tridiagonal metric: the Hessian without the focusing part
// of W''. SPD on the free slots; constrained slots carry a unit diagonal.
class Metric {
 public:
  Metric(const State& s, const ModelParams& params, const RadialGrid& grid) : k_(params.k()) {
    const std::size_t nodes = grid.size();
    const auto h = grid.h();
    const auto rm = grid.r_mid();
    const auto q = grid.w_drr();
    const auto w = grid.w_rdr();
    const double k = params.k();
    const double eps = params.eps();
    du_.assign(nodes, 0.0);
    db_.assign(nodes, 0.0);
    ou_.assign(nodes - 1, 0.0);
    ob_.assign(nodes - 1, 0.0);
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
      const double rho = rm[i] / h[i];
      const double sigma = 1.0 / (h[i] * rm[i]);
      const double ub = 0.5 * (s.u[i] + s.u[i + 1]);
      const double bb = 0.5 * (s.b[i] + s.b[i + 1]);
      const double d = k - bb;
      const double cu = 0.25 * q[i] * d * d;
      const double cb = 0.25 * q[i] * (ub * ub + eps);
      du_[i] += rho + cu;
      du_[i + 1] += rho + cu;
      ou_[i] = -rho + cu;
      db_[i] += sigma + cb;
      db_[i + 1] += sigma + cb;
      ob_[i] = -sigma + cb;
    }
    for (std::size_t i = 0; i < nodes; ++i) du_[i] += w[i];
    for (std::size_t i = 0; i < nodes; ++i) {
      if (!u_is_free(i, nodes, k_)) pin(du_, ou_, i);
      if (!b_is_free(i)) pin(db_, ob_, i);
    }
  }

  State solve(const State& g) const {
    State rhs = g;
    project_constraints(rhs, k_);
    return State{solve_spd_tridiagonal(du_, ou_, std::move(rhs.u)), solve_spd_tridiagonal(db_, ob_, std::move(rhs.b))};
  }

  double inner(const State& x) const { return quad(du_, ou_, x.u) + quad(db_, ob_, x.b); }

 private:
  static void pin(std::vector<double>& d, std::vector<double>& o, std::size_t i) {
    d[i] = 1.0;
    if (i > 0) o[i - 1] = 0.0;
    if (i < o.size()) o[i] = 0.0;
  }
  static double quad(const std::vector<double>& d, const std::vector<double>& o, const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) acc += d[i] * x[i] * x[i];
    for (std::size_t i = 0; i < o.size(); ++i) acc += 2.0 * o[i] * x[i] * x[i + 1];
    return acc;
  }

  int k_;
  std::vector<double> du_, ou_, db_, ob_;
};

}  // namespace

State precondition(const State& s, const State& g, const ModelParams& params, const RadialGrid& grid) {
  return Metric(s, params, grid).solve(g);
}

namespace {

struct SegmentMax {
  double t;
  double value;
};

// Maximum of J on the segment (1 - t) a + t c, t in [0, 1].
SegmentMax segment_max(const State& a, const State& c, const ModelParams& params, const RadialGrid& grid) {
  State work = a;
  const auto value = [&](double t) {
    for (std::size_t i = 0; i < work.size(); ++i) {
      work.u[i] = (1.0 - t) * a.u[i] + t * c.u[i];
      work.b[i] = (1.0 - t) * a.b[i] + t * c.b[i];
    }
    return total_energy(work, params, grid);
  };
  const int samples = 8;
  SegmentMax best{0.0, value(0.0)};
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const double v = value(t);
    if (v > best.value) best = {t, v};
  }
  const double lo = std::max(0.0, best.t - 1.0 / samples);
  const double hi = std::min(1.0, best.t + 1.0 / samples);
  const auto res = boost::math::tools::brent_find_minima([&](double t) { return -value(t); }, lo, hi, 30);
  if (-res.second > best.value) best = {res.first, -res.second};
  return best;
}

// Path level: the maximum of J over the polyline, kept per segment.
std::vector<double> segment_levels(const Path& path, const ModelParams& params, const RadialGrid& grid) {
  std::vector<double> seg(path.nodes.size() - 1);
  for (std::size_t s = 0; s < seg.size(); ++s)
    seg[s] = segment_max(path.nodes[s], path.nodes[s + 1], params, grid).value;
  return seg;
}

double v_distance(const State& x, const State& y, const RadialGrid& grid) {
  const State d = linear_combination(1.0, x, -1.0, y);
  const double nu = norm_h1r(d.u, grid);
  const double nb = norm_star(d.b, grid);
  return std::sqrt(nu * nu + nb * nb);
}

// Redistributes the nodes on each side of `pivot` uniformly in V-norm
// arclength along the current polyline. The endpoints and the pivot are kept.
Path respace(const Path& path, int pivot, const RadialGrid& grid) {
  const int P = static_cast<int>(path.nodes.size());
  std::vector<double> S(P, 0.0);
  for (int j = 1; j < P; ++j) S[j] = S[j - 1] + v_distance(path.nodes[j], path.nodes[j - 1], grid);

  const auto sample = [&](double s) {
    int seg = static_cast<int>(std::upper_bound(S.begin(), S.end(), s) - S.begin()) - 1;
    seg = std::clamp(seg, 0, P - 2);
    const double len = S[seg + 1] - S[seg];
    const double t = len > 0.0 ? std::clamp((s - S[seg]) / len, 0.0, 1.0) : 0.0;
    return linear_combination(1.0 - t, path.nodes[seg], t, path.nodes[seg + 1]);
  };

  Path out = path;
  for (int j = 1; j < pivot; ++j) out.nodes[j] = sample(S[pivot] * j / pivot);
  for (int j = pivot + 1; j < P - 1; ++j)
    out.nodes[j] = sample(S[pivot] + (S[P - 1] - S[pivot]) * (j - pivot) / (P - 1 - pivot));
  return out;
}

// One backtracking descent step of an off-peak node, with the component
// along the local path tangent removed (M-orthogonally).
// The step is accepted only if both adjacent segments stay at or below
// `level`; their new maxima are written to seg_prev and seg_next.
double relax_node(State& node, const State& prev, const State& next, double energy, double level, double& seg_prev,
                  double& seg_next, const ModelParams& params, const RadialGrid& grid, const MpaConfig& cfg) {
  const State g = gradient(node, params, grid);
  const Metric metric(node, params, grid);
  State d = metric.solve(g);
  const State tangent = linear_combination(1.0, next, -1.0, prev);
  const double tt = metric.inner(tangent);
  if (tt > 0.0) axpy(d, -dot(tangent, g) / tt, tangent);
  const double slope = dot(g, d);
  if (!(slope > 0.0)) return energy;
  double alpha = cfg.initial_step;
  for (int tries = 0; tries < 12; ++tries, alpha *= cfg.backtrack) {
    State trial = linear_combination(1.0, node, -alpha, d);
    project_nonnegative(trial);
    project_constraints(trial, params.k());
    const double jt = total_energy(trial, params, grid);
    if (jt > energy - cfg.armijo * alpha * slope) continue;
    const double sp = segment_max(prev, trial, params, grid).value;
    const double sn = segment_max(trial, next, params, grid).value;
    if (sp > level || sn > level) continue;
    node = std::move(trial);
    seg_prev = sp;
    seg_next = sn;
    return jt;
  }
  return energy;
}

}  // namespace

MpaResult mpa_iterate(Path path, const ModelParams& params, const RadialGrid& grid, const MpaConfig& cfg) {
  validate(cfg);
  const int P = static_cast<int>(path.nodes.size());
  if (P != cfg.path_len)
    throw Error(ErrorKind::config, "path has " + std::to_string(P) + " nodes, configuration expects " +
                                       std::to_string(cfg.path_len));
  for (const State& s : path.nodes) check_state(s, grid.size(), params.k());
  if (total_energy(path.nodes.back(), params, grid) > 0.0)
    throw Error(ErrorKind::geometry, "path endpoint has positive energy");

  std::vector<double> E(P);
  for (int j = 0; j < P; ++j) E[j] = total_energy(path.nodes[j], params, grid);
  std::vector<double> seg = segment_levels(path, params, grid);

  MpaResult result;
  result.initial_barrier = *std::max_element(seg.begin(), seg.end());

  State best;
  double best_grad = INFINITY;
  int stalls = 0;
  bool converged = false;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    // Highest segment; the pivot is its interior end with the larger energy.
    const int top = static_cast<int>(std::max_element(seg.begin(), seg.end()) - seg.begin());
    const int j = top == 0 ? 1 : top == P - 2 ? P - 2 : (E[top] >= E[top + 1] ? top : top + 1);
    const double level = seg[top];
    const SegmentMax peak = segment_max(path.nodes[top], path.nodes[top + 1], params, grid);
    const State m = linear_combination(1.0 - peak.t, path.nodes[top], peak.t, path.nodes[top + 1]);
    result.level_history.push_back(level);

    const State g = gradient(m, params, grid);
    const double gn = norm2(g);
    if (gn < best_grad) {
      best_grad = gn;
      best = m;
    }
    result.candidate = m;
    result.level = total_energy(m, params, grid);
    result.grad_norm = gn;
    if (gn <= cfg.grad_tol) {
      converged = true;
      break;
    }

    // Descend from the peak; the step replaces the pivot node.
    const State d = precondition(m, g, params, grid);
    const double slope = dot(g, d);
    bool accepted = false;
    for (double alpha = cfg.initial_step; alpha > 1e-14; alpha *= cfg.backtrack) {
      State trial = linear_combination(1.0, m, -alpha, d);
      project_nonnegative(trial);
      project_constraints(trial, params.k());
      const double jt = total_energy(trial, params, grid);
      if (jt > result.level - cfg.armijo * alpha * slope) continue;
      const double sp = segment_max(path.nodes[j - 1], trial, params, grid).value;
      if (sp > level) continue;
      const double sn = segment_max(trial, path.nodes[j + 1], params, grid).value;
      if (sn > level) continue;
      path.nodes[j] = std::move(trial);
      E[j] = jt;
      seg[j - 1] = sp;
      seg[j] = sn;
      accepted = true;
      break;
    }
    for (int i = 1; i < P - 1; ++i)
      if (i != j && E[i] > 0.0)
        E[i] = relax_node(path.nodes[i], path.nodes[i - 1], path.nodes[i + 1], E[i], level, seg[i - 1], seg[i],
                          params, grid, cfg);
    stalls = accepted ? 0 : stalls + 1;
    if (stalls > 20) break;

    if (!accepted || (iter + 1) % cfg.respace_every == 0) {
      Path moved = respace(path, j, grid);
      std::vector<double> moved_seg = segment_levels(moved, params, grid);
      if (*std::max_element(moved_seg.begin(), moved_seg.end()) <= *std::max_element(seg.begin(), seg.end())) {
        path = std::move(moved);
        seg = std::move(moved_seg);
        for (int i = 0; i < P; ++i) E[i] = total_energy(path.nodes[i], params, grid);
        ++result.respacings;
      }
    }
  }
  result.iterations = iter;
  result.path = std::move(path);

  if (!converged && best_grad > 10.0 * cfg.grad_tol)
    throw SolveError(ErrorKind::non_convergence,
                     "mountain-pass iteration stopped after " + std::to_string(iter) +
                         " iterations with gradient norm " + std::to_string(best_grad),
                     best);
  if (!converged) {
    result.candidate = best;
    result.grad_norm = best_grad;
    result.level = total_energy(best, params, grid);
  }
  return result;
}

}  // namespace msv
