#include "radharm/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radharm/error.hpp"

namespace radharm {

namespace {

// Dormand & Prince (1980) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

State2 axpy(const State2& y, double h, std::initializer_list<std::pair<double, const State2*>> terms) {
  State2 out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

bool finite(const State2& y) {
  return std::isfinite(y[0].real()) && std::isfinite(y[0].imag()) &&
         std::isfinite(y[1].real()) && std::isfinite(y[1].imag());
}

}  // namespace

OdeStats DormandPrince45::integrate(const Rhs& rhs, double t0, State2 y, std::span<const double> outputs,
                                    const Observer& observe) const {
  OdeStats stats;
  if (outputs.empty()) return stats;
  double t = t0;
  double h = options_.initial_step;
  State2 k1 = rhs(t, y);
  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] <= t) {
    observe(next, t, y);
    ++next;
  }
  while (next < outputs.size()) {
    if (stats.accepted + stats.rejected > options_.max_steps)
      fail(ErrorKind::stiffness, "ODE step budget exhausted");
    const double target = outputs[next];
    bool lands = false;
    double step = h;
    if (t + 1.01 * step >= target) {
      step = target - t;
      lands = true;
    }
    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    if (step < h_min && !lands) {
      std::ostringstream os;
      os << "ODE step size underflow at t=" << t;
      fail(ErrorKind::stiffness, os.str());
    }

    const State2 k2 = rhs(t + c2 * step, axpy(y, step, {{a21, &k1}}));
    const State2 k3 = rhs(t + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}));
    const State2 k4 = rhs(t + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State2 k5 =
        rhs(t + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State2 k6 = rhs(t + step, axpy(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3},
                                                   {a64, &k4}, {a65, &k5}}));
    const State2 y_new =
        axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    if (!finite(y_new)) {
      std::ostringstream os;
      os << "non-finite ODE state near t=" << t;
      fail(ErrorKind::propagation, os.str());
    }
    const State2 k7 = rhs(t + step, y_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Complex e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                e6 * k6[i] + e7 * k7[i]);
      const double scale =
          options_.atol + options_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) fail(ErrorKind::propagation, "non-finite ODE error estimate");

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      ++stats.accepted;
      t = lands ? target : t + step;
      y = y_new;
      k1 = k7;
      if (lands) {
        observe(next, t, y);
        ++next;
      }
      // a step shortened to hit an output says little about the natural step size
      h = (lands && step < h) ? h * std::min(1.0, factor) : step * factor;
    } else {
      ++stats.rejected;
      h = step * std::min(1.0, factor);
      if (h < h_min) {
        std::ostringstream os;
        os << "ODE step size underflow at t=" << t;
        fail(ErrorKind::stiffness, os.str());
      }
    }
  }
  return stats;
}

}  // namespace radharm
