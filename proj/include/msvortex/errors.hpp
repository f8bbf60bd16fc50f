#pragma once

#include <stdexcept>
#include <string>

namespace msv {

// Error classes are stable: each maps to one process exit code.
enum class ErrorKind {
  config,           // invalid parameter or flag
  shape,            // array length mismatch
  domain,           // non-finite argument
  constraint,       // manifold constraint violated (b(0) != 0, ...)
  range,            // point outside the truncated domain
  evaluation,       // NaN/Inf produced while evaluating a term
  geometry,         // mountain-pass endpoint could not be found
  non_convergence,  // iteration limit reached
  stagnation,       // line search stalled
  singular_system,  // linear solve failed
  oracle,           // shooting oracle failed
  io,               // file could not be read or written
  help_requested,   // --help; not an error for the CLI
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error class: 2 configuration, 3 I/O,
/// 4 non-convergence (any solver stage), 5 numerical evaluation failure.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::help_requested:
      return 0;
    case ErrorKind::config:
    case ErrorKind::shape:
    case ErrorKind::domain:
    case ErrorKind::constraint:
    case ErrorKind::range:
      return 2;
    case ErrorKind::io:
      return 3;
    case ErrorKind::geometry:
    case ErrorKind::non_convergence:
    case ErrorKind::stagnation:
    case ErrorKind::singular_system:
    case ErrorKind::oracle:
      return 4;
    case ErrorKind::evaluation:
      return 5;
  }
  return 1;
}

}  // namespace msv
