#include "radharm/corpus.hpp"

#include <cmath>
#include <random>

#include "radharm/error.hpp"

namespace radharm {

namespace {

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

RadialGridFunction named_function(BasisPtr basis, const std::string& name, double scale) {
  require(scale > 0.0, "named_function: scale must be positive");
  if (name == "gaussian")
    return RadialGridFunction::sample(basis, [scale](double r) {
      const double x = r / scale;
      return Complex(std::exp(-x * x));
    });
  if (name == "bump")
    return RadialGridFunction::sample(basis, [scale](double r) { return Complex(bump(r / scale)); });
  if (name == "exp")
    return RadialGridFunction::sample(basis, [scale](double r) { return Complex(std::exp(-scale * r)); });
  fail(ErrorKind::usage, "unknown function '" + name + "' (gaussian, bump, exp)");
}

std::vector<RadialGridFunction> random_gaussians(BasisPtr basis, std::size_t count,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.5, 2.0), bulge(0.0, 2.0), width(0.6, 1.5);
  std::vector<RadialGridFunction> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = amp(rng), b = bulge(rng), w = width(rng);
    out.push_back(RadialGridFunction::sample(basis, [=](double r) {
      const double x2 = (r / w) * (r / w);
      return Complex(a * (1.0 + b * x2) * std::exp(-x2));
    }));
  }
  return out;
}

std::vector<RadialGridFunction> random_bumps(BasisPtr basis, std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.5, 2.0), centre(0.0, 1.0), width(1.5, 3.0);
  std::vector<RadialGridFunction> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = amp(rng), c = centre(rng), w = width(rng);
    out.push_back(RadialGridFunction::sample(
        basis, [=](double r) { return Complex(a * bump((r - c) / w)); }));
  }
  return out;
}

}  // namespace radharm
