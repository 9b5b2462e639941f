#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace radharm {

using Complex = std::complex<double>;

/// (u, u') or any other pair of complex unknowns of a second-order scalar ODE.
using State2 = std::array<Complex, 2>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 1e-4;
  std::size_t max_steps = 10'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integrator with local extrapolation.
///
/// Steps are clipped so the solution lands exactly on every requested output
/// abscissa; `observe(k, t, y)` is called once per output in order.
class DormandPrince45 {
 public:
  using Rhs = std::function<State2(double, const State2&)>;
  using Observer = std::function<void(std::size_t, double, const State2&)>;

  explicit DormandPrince45(OdeOptions options = {}) : options_(options) {}

  /// Integrates from (t0, y0) through all of `outputs` (increasing, > t0).
  /// Throws Error(stiffness) on step underflow, Error(propagation) on NaN.
  OdeStats integrate(const Rhs& rhs, double t0, State2 y0, std::span<const double> outputs,
                     const Observer& observe) const;

  const OdeOptions& options() const { return options_; }

 private:
  OdeOptions options_;
};

}  // namespace radharm
