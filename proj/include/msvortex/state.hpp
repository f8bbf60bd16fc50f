#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "msvortex/errors.hpp"
#include "msvortex/model.hpp"

namespace msv {

/// Node samples of the matter amplitude u and of the magnetic coefficient b
/// (vector potential A = b(r) grad(theta)). Gradients and search directions
/// share this layout.
struct State {
  std::vector<double> u;
  std::vector<double> b;

  static State zeros(std::size_t nodes) { return State{std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0)}; }
  std::size_t size() const noexcept { return u.size(); }
};

// Constrained slots: b[0] always, u[n] (Dirichlet at Rmax), u[0] when k != 0.
inline bool u_is_free(std::size_t i, std::size_t nodes, int k) noexcept {
  return i + 1 < nodes && (i > 0 || k == 0);
}
inline bool b_is_free(std::size_t i) noexcept { return i > 0; }

/// Zeroes the constrained slots.
void project_constraints(State& s, int k);
/// u <- max(u, 0).
void project_nonnegative(State& s);

/// Throws Error(shape) on length mismatch, Error(constraint) if a constrained
/// slot is nonzero, Error(evaluation) on non-finite entries.
void check_state(const State& s, std::size_t nodes, int k);

double dot(const State& x, const State& y);
double norm2(const State& x);
double sup_norm(const State& x);
/// x += a * y
void axpy(State& x, double a, const State& y);
State linear_combination(double a, const State& x, double b, const State& y);
State negated_b(const State& s);

/// Solver failure that carries the best iterate reached.
class SolveError : public Error {
 public:
  SolveError(ErrorKind kind, const std::string& what, State best)
      : Error(kind, what), best_(std::move(best)) {}
  const State& best() const noexcept { return best_; }

 private:
  State best_;
};

}  // namespace msv
