#include "radharm/interp.hpp"

#include <algorithm>
#include <cmath>

#include "radharm/error.hpp"

namespace radharm {

namespace {

// Three-point one-sided slope, limited so the end segment stays monotone.
double end_slope(double h0, double h1, double d0, double d1) {
  if (h1 == 0.0) return d0;
  const double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (m * d0 <= 0.0) return 0.0;
  if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
  return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
  require(x.size() == y.size(), "MonotoneCubic: size mismatch");
  require(x.size() >= 2, "MonotoneCubic: need at least two points");
  const std::size_t n = x_.size();
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    require(x_[i + 1] > x_[i], "MonotoneCubic: abscissae must increase");
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  m_[0] = end_slope(x_[1] - x_[0], n > 2 ? x_[2] - x_[1] : 0.0, d[0], n > 2 ? d[1] : d[0]);
  m_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], n > 2 ? x_[n - 2] - x_[n - 3] : 0.0, d[n - 2],
                        n > 2 ? d[n - 3] : d[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m_[i] = 0.0;
      continue;
    }
    // weighted harmonic mean (Fritsch-Butland form), bounded by 3*min(|d|)
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double w0 = 2.0 * h1 + h0;
    const double w1 = h1 + 2.0 * h0;
    m_[i] = (w0 + w1) / (w0 / d[i - 1] + w1 / d[i]);
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  return std::min(static_cast<std::size_t>(it - x_.begin()) - 1, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * m_[i] + (3 * t2 - 2 * t) * m_[i + 1];
}

}  // namespace radharm
