#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "radharm/corpus.hpp"
#include "radharm/dynamics.hpp"
#include "radharm/error.hpp"

using namespace radharm;
using namespace radharm::testing;

TEST_CASE("threshold arithmetic") {
  CHECK(c_threshold(1.0, 4.0).value == 0.75);
  CHECK(c_threshold(1.0, 1.0).limit);
  CHECK(c_threshold(1.0, INFINITY).limit);
  CHECK(c_threshold(2.0, 2.0).value == doctest::Approx(4.0));
  for (double p : {1.2, 1.5, 3.0, 7.0}) {
    const double q = p / (p - 1.0);
    CHECK(c_threshold(1.3, p).value == doctest::Approx(c_threshold(1.3, q).value));
    CHECK(strip_spec(1.3, p).halfwidth == doctest::Approx(strip_spec(1.3, q).halfwidth));
  }
  const OpNormBound ob = heat_opnorm_bound(1.0, 4.0, 1.0);
  CHECK(ob.bound == doctest::Approx(std::exp(-0.75)).epsilon(1e-15));
  CHECK(std::abs(ob.bound - ob.symbol_value) < 1e-14);
  CHECK_THROWS_AS(heat_opnorm_bound(1.0, 2.0, 1.0), Error);
}

TEST_CASE("shifted heat above the threshold is chaotic with a valid witness pair") {
  for (double c : {0.8, 1.0, 2.0}) {
    const ChaosVerdict v = classify_chaos(shifted_heat_symbol(1.0, c, 1.0), 4.0);
    REQUIRE(v.classification == ChaosClass::chaotic);
    REQUIRE(v.witnesses.has_value());
    CHECK(v.witnesses->m1_abs < 1.0);
    CHECK(v.witnesses->m2_abs > 1.0);
    CHECK(std::abs(v.witnesses->l1.imag()) < v.strip_halfwidth);
    CHECK(std::abs(v.witnesses->l2.imag()) < v.strip_halfwidth);
    CHECK(v.c_p == 0.75);
    const Symbol m = shifted_heat_symbol(1.0, c, 1.0);
    CHECK(std::abs(m(v.witnesses->l1)) == doctest::Approx(v.witnesses->m1_abs));
  }
}

TEST_CASE("no chaos at or below the threshold, for p <= 2, or for constants") {
  for (double c : {-1.0, 0.0, 0.5, 0.75}) {
    const ChaosVerdict v = classify_chaos(shifted_heat_symbol(1.0, c, 1.0), 4.0);
    CHECK(v.classification == ChaosClass::not_chaotic);
    CHECK(v.reason == "contraction");
  }
  for (double p : {1.0, 4.0 / 3.0, 2.0}) {
    for (const Symbol& m : {heat_symbol(1.0, 1.0), shifted_heat_symbol(1.0, 5.0, 1.0),
                            resolvent_symbol(1.0, Complex(-0.5, 1.0)),
                            constant_symbol(1.0, 2.0)}) {
      const ChaosVerdict v = classify_chaos(m, p);
      CHECK(v.classification == ChaosClass::not_chaotic);
      CHECK(v.reason == "p_leq_2");
    }
  }
  for (Complex value : {Complex(0.5), Complex(1.0), Complex(0.0, 3.0)}) {
    const ChaosVerdict v = classify_chaos(constant_symbol(1.0, value), 4.0);
    CHECK(v.classification == ChaosClass::not_chaotic);
    CHECK(v.reason == "constant_symbol");
  }
}

TEST_CASE("symbols bounded below by one are chaotic after scaling") {
  const Symbol m = custom_symbol(1.0, [](Complex l) { return 3.0 + std::exp(-(l * l + 1.0)); }, 1.0);
  const ChaosVerdict v = classify_chaos(m, 4.0);
  CHECK(v.classification == ChaosClass::chaotic_after_scaling);
  CHECK(v.holomorphy_assumed);
  REQUIRE(v.witnesses.has_value());
  CHECK(v.witnesses->m1_abs < 1.0);
  CHECK(v.witnesses->m2_abs > 1.0);
  CHECK(std::abs(v.nu) > 1.0);
}

TEST_CASE("discontinuous symbols and poles are refused where they matter") {
  CHECK_THROWS_AS(classify_chaos(step_symbol(1.0), 4.0), Error);
  CHECK(classify_chaos(step_symbol(1.0), 2.0).classification == ChaosClass::not_chaotic);
  CHECK_THROWS_AS(classify_chaos(heat_symbol(1.0, 1.0), INFINITY), Error);
  try {
    classify_chaos(resolvent_symbol(1.0, Complex(-1.25)), 4.0);
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
  }
  const BasisPtr b = h3_basis();
  try {
    apply_multiplier(resolvent_symbol(1.0, Complex(-5.0)), gaussian(b));
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
  }
}

TEST_CASE("dual symbol is conj m(conj lambda)") {
  const Complex l(0.7, 0.3);
  const Symbol m = shifted_heat_symbol(1.0, Complex(0.5, 2.0), 0.7);
  CHECK(std::abs(dual_symbol(m)(l) - std::conj(m(std::conj(l)))) < 1e-14);
  const Symbol r = resolvent_symbol(1.0, Complex(0.2, -1.0));
  CHECK(std::abs(dual_symbol(r)(l) - std::conj(r(std::conj(l)))) < 1e-14);
  const Symbol c = custom_symbol(1.0, [](Complex x) { return Complex(0, 1) * x * x; }, 1.0);
  CHECK(std::abs(dual_symbol(c)(l) - std::conj(c(std::conj(l)))) < 1e-14);
}

TEST_CASE("heat multiplier composes heat kernels") {
  const BasisPtr b = dr21_basis();
  auto kernel = [&](double t) {
    SpectralGridFunction F{b, {}};
    for (double l : b->spectral_grid().nodes()) F.values.push_back(std::exp(-t * (l * l + 1.0)));
    return inverse_fourier(F).spatial_only();
  };
  const auto moved = apply_multiplier(heat_symbol(1.0, 0.4), kernel(0.3));
  CHECK(relative_l2(moved, kernel(0.7)) < 1e-8);
}

TEST_CASE("orbits at or below the threshold never grow (seeded corpus)") {
  const BasisPtr b = h3_basis();
  const auto corpus = random_gaussians(b, 5, 17);
  for (double c : {0.5, 0.75}) {
    for (const auto& f : corpus) {
      const OrbitTrace tr = orbit_simulate(shifted_heat_symbol(1.0, c, 1.0), f, 4.0, 30);
      REQUIRE_FALSE(tr.truncated);
      REQUIRE(tr.norms.size() == 31);
      for (std::size_t n = 1; n < tr.norms.size(); ++n)
        CHECK(tr.norms[n] <= tr.norms[n - 1] * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("orbit growth respects the operator norm bound and eventually exceeds one") {
  const BasisPtr b = h3_basis();
  const auto f = gaussian(b);
  const double c = 2.5, t = 1.0;
  const OrbitTrace tr = orbit_simulate(shifted_heat_symbol(1.0, c, t), f, 4.0, 20);
  REQUIRE_FALSE(tr.truncated);
  const double bound = std::exp((c - 0.75) * t);
  for (double g : tr.growth) CHECK(g <= bound * (1.0 + 1e-6));
  CHECK(tr.growth.back() > 1.0);
  for (std::size_t n = 2; n < tr.growth.size(); ++n) CHECK(tr.growth[n] >= tr.growth[n - 1] - 1e-9);
}

TEST_CASE("step symbol squares to the identity") {
  const BasisPtr b = h3_basis();
  const auto corpus = random_gaussians(b, 3, 4);
  for (const auto& f : corpus) {
    const Symbol s = step_symbol(1.0);
    const auto once = apply_multiplier(s, f);
    CHECK(relative_l2(once, f) > 1e-2);
    CHECK(relative_l2(apply_multiplier(s, once), f) < 1e-6);
  }
}

TEST_CASE("periodic point search finds unimodular points and their periods") {
  const Symbol m = custom_symbol(
      1.0, [](Complex l) { return Complex(0, 1) * std::exp(0.1 * (1.0 - l * l)); }, 1.0);
  const auto pts = periodic_point_search(m, 8);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].lambda == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pts[0].n == 4);

  const auto step = periodic_point_search(step_symbol(1.0, 1.0), 4, 3.0, 31);
  CHECK(step.size() == 31);
  for (const auto& p : step) CHECK(p.n == (p.lambda < 1.0 ? 2 : 1));

  CHECK(periodic_point_search(heat_symbol(1.0, 1.0), 8).empty());
}

TEST_CASE("resolvent symbol algebra") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Complex z(u(rng), u(rng)), l(u(rng), 0.3 * u(rng));
    const Symbol m = resolvent_symbol(1.0, z);
    CHECK(std::abs((-(l * l + 1.0) - z) * m(l) - 1.0) < 1e-14);
  }
}

TEST_CASE("a chaotic resolvent exists for p = 4") {
  const ResolventSearch s = resolvent_chaotic_z(1.0, 4.0);
  CHECK(s.verdict.classification == ChaosClass::chaotic);
  REQUIRE(s.verdict.witnesses.has_value());
  CHECK(s.verdict.witnesses->m1_abs <= 1.0);
  CHECK(s.verdict.witnesses->m2_abs >= 1.0);
  CHECK(s.candidates_tried >= 1);
  CHECK_THROWS_AS(resolvent_chaotic_z(1.0, 2.0), Error);
}

TEST_CASE("pole region on the real axis") {
  for (double p : {1.0, 4.0 / 3.0, 1.8}) {
    const double cp = c_threshold(1.0, p).value;
    for (int k = 0; k < 50; ++k) {
      const double sigma = -3.0 + 4.0 * k / 49.0;
      const PoleRegion pr = resolvent_pole_region(1.0, p, Complex(sigma, 0.0));
      if (sigma == -cp) continue;
      CHECK(pr.bounded == (sigma > -cp));
    }
  }
  CHECK(resolvent_pole_region(1.0, 2.0, Complex(-0.5)).degenerate);
  CHECK(resolvent_pole_region(1.0, 4.0 / 3.0, Complex(-2.0, 3.0)).bounded);
}
