#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radharm/radial.hpp"

namespace radharm {

/// Named test functions: "gaussian" exp(-(r/s)^2), "bump" exp(-1/(1-(r/s)^2))
/// on [0, s), "exp" exp(-s r).
RadialGridFunction named_function(BasisPtr basis, const std::string& name, double scale = 1.0);

/// Smooth even bumps a (1 + b x^2) exp(-x^2), x = r/w, with a in [0.5, 2],
/// b in [0, 2], w in [0.6, 1.5], drawn from a seeded mt19937_64.
std::vector<RadialGridFunction> random_gaussians(BasisPtr basis, std::size_t count,
                                                 std::uint64_t seed);

/// Compact bumps a exp(-1/(1-x^2)), x = (r - c)/w, with a in [0.5, 2],
/// c in [0, 1], w in [1.5, 3].
std::vector<RadialGridFunction> random_bumps(BasisPtr basis, std::size_t count,
                                             std::uint64_t seed);

}  // namespace radharm
