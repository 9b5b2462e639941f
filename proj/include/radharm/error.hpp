#pragma once

#include <stdexcept>
#include <string>

namespace radharm {

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  usage,               // precondition or argument violation
  invalid_dimension,
  profile_evaluation,  // non-finite density sample
  stiffness,           // ODE step size underflow
  propagation,         // NaN produced while integrating
  degenerate_matching,
  truncation,          // integrand not decayed at the grid end
  strip,               // spectral parameter outside the admissible strip
  tail,                // spectral cutoff too small
  pole,                // multiplier symbol has a pole where it is needed
  not_found,
  cache,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorKind::usage, what);
}

}  // namespace radharm
