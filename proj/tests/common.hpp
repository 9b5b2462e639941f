#pragma once

#include <cmath>
#include <complex>

#include "doctest.h"
#include "radharm/radial.hpp"

namespace radharm::testing {

inline BasisPtr h3_basis() { return shared_basis(make_hyperbolic(3)); }
inline BasisPtr dr21_basis() { return shared_basis(make_damek_ricci(2, 1)); }

inline RadialGridFunction gaussian(const BasisPtr& b, double scale = 1.0, double centre = 0.0) {
  return RadialGridFunction::sample(b, [=](double r) {
    const double x = (r - centre) / scale;
    return Complex(std::exp(-x * x));
  });
}

inline double sup_diff(const RadialGridFunction& a, const RadialGridFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace radharm::testing
