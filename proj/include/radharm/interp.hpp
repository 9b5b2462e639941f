#pragma once

#include <span>
#include <vector>

namespace radharm {

/// Piecewise cubic Hermite interpolant with Fritsch-Butland slopes.
/// Preserves monotonicity of the data; C1 continuous.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_, y_, m_;
};

}  // namespace radharm
