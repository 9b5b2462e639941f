#include <cmath>
#include <numbers>

#include "doctest.h"
#include "radharm/density.hpp"
#include "radharm/error.hpp"

using namespace radharm;

TEST_CASE("hyperbolic profile constants and density") {
  for (int n = 2; n <= 6; ++n) {
    const DensityProfile p = make_hyperbolic(n);
    CHECK(p.rho() == doctest::Approx((n - 1) / 2.0));
    CHECK(p.alpha() == doctest::Approx((n - 2) / 2.0));
    CHECK(p.kappa() == doctest::Approx(std::pow(2.0, -(n - 1))));
    CHECK(p.omega() == doctest::Approx(sphere_area(n)));
    for (double r : {0.01, 0.5, 2.0, 10.0}) {
      CHECK(p.density(r) == doctest::Approx(std::pow(std::sinh(r), n - 1)).epsilon(1e-13));
      CHECK(p.log_derivative(r) == doctest::Approx((n - 1) / std::tanh(r)).epsilon(1e-13));
    }
  }
}

TEST_CASE("Damek-Ricci profile constants and density") {
  for (auto [m, k] : {std::pair{2, 1}, std::pair{8, 4}, std::pair{4, 3}}) {
    const DensityProfile p = make_damek_ricci(m, k);
    CHECK(p.rho() == doctest::Approx((m + 2.0 * k) / 4.0));
    CHECK(p.alpha() == doctest::Approx((m + k - 1) / 2.0));
    CHECK(p.kappa() == doctest::Approx(std::pow(2.0, -k)));
    for (double r : {0.05, 1.0, 7.0}) {
      const double a = std::pow(2.0, m + k) * std::pow(std::sinh(r / 2), m + k) *
                       std::pow(std::cosh(r / 2), k);
      CHECK(p.density(r) == doctest::Approx(a).epsilon(1e-12));
      const double l = (m + k) / 2.0 / std::tanh(r / 2) + k / 2.0 * std::tanh(r / 2);
      CHECK(p.log_derivative(r) == doctest::Approx(l).epsilon(1e-12));
    }
  }
}

TEST_CASE("Damek-Ricci dimension is m + k + 1") {
  CHECK(make_damek_ricci(2, 1).dim_n() == 4);
  CHECK(make_damek_ricci(8, 4).dim_n() == 13);
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(make_hyperbolic(1), Error);
  CHECK_THROWS_AS(make_damek_ricci(0, 1), Error);
  try {
    make_hyperbolic(0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_dimension);
  }
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("tabulated profile recovers the constants of H^3") {
  std::vector<double> r, la;
  // geometric spacing near the origin, uniform beyond r = 1
  for (double x = 1e-3; x < 1.0; x *= 1.05) r.push_back(x);
  for (double x = 1.0; x <= 30.0 + 1e-9; x += 0.05) r.push_back(x);
  for (double x : r) la.push_back(2.0 * std::log(std::sinh(x)));
  const DensityProfile p = make_custom("h3-table", r, la);
  const DensityProfile h = make_hyperbolic(3);
  CHECK(p.alpha() == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(p.rho() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.kappa() == doctest::Approx(0.25).epsilon(1e-6));
  for (double x : {0.01, 0.3, 1.0, 4.0, 20.0}) {
    CHECK(p.log_density(x) == doctest::Approx(h.log_density(x)).epsilon(1e-6));
    // monotone cubic slopes are second-order accurate at a 0.05 spacing
    CHECK(p.log_derivative(x) == doctest::Approx(h.log_derivative(x)).epsilon(1e-3));
  }
  const ConditionReport rep = verify_conditions(p, 2e-3, 1.0, 30.0, 1e-4);
  CHECK(rep.c1_ok);
  CHECK(rep.c2_ok);
  CHECK(rep.c3_ok);
  CHECK(rep.c4_ok);
}

TEST_CASE("built-in profiles satisfy all four conditions") {
  for (const DensityProfile& p :
       {make_hyperbolic(2), make_hyperbolic(3), make_hyperbolic(4), make_hyperbolic(5),
        make_damek_ricci(2, 1), make_damek_ricci(8, 4)}) {
    const ConditionReport rep = verify_conditions(p, 1e-3, 1.0, 30.0, 1e-6);
    INFO(p.name());
    CHECK(rep.c1_ok);
    CHECK(rep.c2_ok);
    CHECK(rep.c3_ok);
    CHECK(rep.c4_ok);
    CHECK(rep.rho_estimate == doctest::Approx(p.rho()).epsilon(1e-6));
  }
}

TEST_CASE("a Euclidean-type profile fails the growth condition") {
  std::vector<double> r, la;
  for (int i = 0; i <= 400; ++i) {
    const double x = 0.01 * std::pow(1.02, i);
    r.push_back(x);
    la.push_back(2.0 * std::log(x));
  }
  const ConditionReport rep = verify_conditions(make_custom("euclid", r, la), 1e-3, 1.0, 30.0, 1e-6);
  CHECK(rep.c1_ok);
  CHECK_FALSE(rep.c2_ok);
  CHECK_FALSE(rep.all_ok());
}

TEST_CASE("Liouville potential of H^3 is identically zero and of H^2 is -1/(4 sinh^2)") {
  const DensityProfile h3 = make_hyperbolic(3), h2 = make_hyperbolic(2);
  for (double r : {1e-3, 0.5, 1.0, 3.0, 8.0}) {
    CHECK(std::abs(liouville_potential(h3, r)) < 1e-9 * std::max(1.0, 1.0 / (r * r)));
    const double s = std::sinh(r);
    CHECK(liouville_potential(h2, r) == doctest::Approx(-0.25 / (s * s)).epsilon(1e-9));
  }
}

TEST_CASE("second log-derivative matches a difference quotient") {
  for (const DensityProfile& p : {make_hyperbolic(4), make_damek_ricci(2, 1)}) {
    for (double r : {0.2, 1.0, 5.0}) {
      const double h = 1e-5;
      const double fd = (p.log_derivative(r + h) - p.log_derivative(r - h)) / (2.0 * h);
      CHECK(p.log_second_derivative(r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}
