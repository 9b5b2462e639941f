#include <cmath>
#include <numbers>

#include "common.hpp"
#include "radharm/corpus.hpp"
#include "radharm/error.hpp"

using namespace radharm;
using namespace radharm::testing;

TEST_CASE("L^p norms of e^{-3r} on H^3 match closed forms") {
  const BasisPtr b = h3_basis();
  const auto u = RadialGridFunction::sample(b, [](double r) { return Complex(std::exp(-3.0 * r)); });
  CHECK(lp_norm(u, 1.0) == doctest::Approx(8.0 * std::numbers::pi / 15.0).epsilon(1e-10));
  CHECK(lp_norm(u, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi / 24.0)).epsilon(1e-10));
  CHECK(lp_norm(u, INFINITY) == doctest::Approx(1.0).epsilon(1e-3));  // sup over the nodes
}

TEST_CASE("a non-integrable function is flagged instead of truncated silently") {
  // e^{-2r} sinh^2 r tends to 1/4, so the L^1 integral diverges on H^3.
  const BasisPtr b = h3_basis();
  const auto u = RadialGridFunction::sample(b, [](double r) { return Complex(std::exp(-2.0 * r)); });
  try {
    lp_norm(u, 1.0);
    FAIL("expected a truncation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::truncation);
  }
  CHECK(lp_tail_share(u, 1.0) > 1e-3);
  CHECK_NOTHROW(lp_norm(u, 2.0));
}

TEST_CASE("Plancherel identity and round trip on H^3 and DR(2,1)") {
  for (const BasisPtr& b : {h3_basis(), dr21_basis()}) {
    const auto corpus = random_gaussians(b, 6, 3);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const auto& f = corpus[k];
      const auto& g = corpus[(k + 1) % corpus.size()];
      CHECK(plancherel_check(f, f) < 1e-6);
      CHECK(plancherel_check(f, g) < 1e-6);
      CHECK(relative_l2(inverse_fourier(fourier_grid(f)), f) < 1e-6);
    }
  }
}

TEST_CASE("transform is linear (seeded property)") {
  const BasisPtr b = dr21_basis();
  const auto corpus = random_gaussians(b, 4, 99);
  const Complex a(0.7, -1.2), c(-0.4, 0.3);
  const auto sum = a * corpus[0] + c * corpus[1];
  const auto F = fourier_grid(sum).values;
  const auto F0 = fourier_grid(corpus[0]).values;
  const auto F1 = fourier_grid(corpus[1]).values;
  for (std::size_t j = 0; j < F.size(); ++j)
    CHECK(std::abs(F[j] - (a * F0[j] + c * F1[j])) < 1e-12 * (1.0 + std::abs(F[j])));
}

TEST_CASE("transform at i rho is the integral and |f^| <= ||f||_1 inside the strip") {
  const BasisPtr b = h3_basis();
  const auto f = gaussian(b, 1.2, 0.4);
  const double mass = lp_norm(f, 1.0);
  CHECK(std::abs(fourier(f, Complex(0.0, 1.0)) - mass) < 1e-9 * mass);
  const StripBoundReport rep = strip_bound_check(f, 1.0);
  CHECK(rep.halfwidth == doctest::Approx(1.0));
  CHECK(rep.max_ratio <= 1.0 + 1e-9);
  const StripBoundReport rep43 = strip_bound_check(f, 4.0 / 3.0);
  CHECK(rep43.gamma_q == doctest::Approx(0.5));
  CHECK(std::isfinite(rep43.max_ratio));
}

TEST_CASE("transform is holomorphic in the strip") {
  const BasisPtr b = dr21_basis();
  const auto f = gaussian(b);
  CHECK(holomorphy_check(f, 1.0, Rect{0.2, 3.0, -0.8, 0.8}) < 1e-9);
  CHECK(holomorphy_check(f, 1.2, Rect{-1.0, 1.0, -0.5, 0.5}) < 1e-9);
  CHECK_THROWS_AS(holomorphy_check(f, 2.0, Rect{0.0, 1.0, -0.1, 0.1}), Error);
}

TEST_CASE("inverse transforms carry their spectrum and spatial_only drops it") {
  const BasisPtr b = h3_basis();
  const auto f = gaussian(b);
  const auto F = fourier_grid(f);
  const auto u = inverse_fourier(F);
  REQUIRE(u.spectrum.has_value());
  CHECK(fourier_grid(u).values == F.values);
  CHECK_FALSE(u.spatial_only().spectrum.has_value());
  CHECK(u.spatial_only().values == u.values);
}

TEST_CASE("heat kernel: symbol, mass and semigroup") {
  for (const BasisPtr& b : {h3_basis(), dr21_basis()}) {
    const double rho = b->profile().rho();
    auto kernel = [&](double t) {
      SpectralGridFunction F{b, {}};
      for (double l : b->spectral_grid().nodes()) F.values.push_back(std::exp(-t * (l * l + rho * rho)));
      return inverse_fourier(F);
    };
    for (double t : {0.1, 1.0}) {
      const auto h = kernel(t).spatial_only();
      for (double l = 0.1; l <= 6.0; l += 0.7)
        CHECK(std::abs(fourier(h, l) - std::exp(-t * (l * l + rho * rho))) < 1e-6);
      CHECK(std::abs(lp_norm(h, 1.0) - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("heat kernel on H^3 matches its closed form") {
  const BasisPtr b = h3_basis();
  const double t = 0.5;
  SpectralGridFunction F{b, {}};
  for (double l : b->spectral_grid().nodes()) F.values.push_back(std::exp(-t * (l * l + 1.0)));
  const auto h = inverse_fourier(F);
  const auto r = h.r_grid();
  for (std::size_t i = 0; i < r.size(); i += 97) {
    if (r[i] > 8.0) break;
    const double ratio = r[i] < 1e-8 ? 1.0 : r[i] / std::sinh(r[i]);
    const double exact = std::pow(4.0 * std::numbers::pi * t, -1.5) * std::exp(-t) * ratio *
                         std::exp(-r[i] * r[i] / (4.0 * t));
    CHECK(std::abs(h.values[i].real() - exact) < 1e-8);
  }
}
