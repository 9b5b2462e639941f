#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radharm/error.hpp"
#include "radharm/interp.hpp"
#include "radharm/ode.hpp"
#include "radharm/quadrature.hpp"

using namespace radharm;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {2, 5, 16, 64}) {
    const GaussLegendreRule gl = gauss_legendre(n);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += gl.weights[k] * std::pow(gl.nodes[k], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("panel grids integrate smooth functions and keep nodes ordered") {
  const PanelGrid g = graded_radial_grid(25.0, 128, 16);
  CHECK(g.lower() == 0.0);
  CHECK(g.upper() == doctest::Approx(25.0));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.nodes()[i] > g.nodes()[i - 1]);
  CHECK(g.integrate([](double r) { return std::exp(-r); }) ==
        doctest::Approx(1.0 - std::exp(-25.0)).epsilon(1e-14));
  CHECK(g.integrate([](double r) { return std::sqrt(r); }) ==
        doctest::Approx(2.0 / 3.0 * std::pow(25.0, 1.5)).epsilon(1e-7));

  const PanelGrid s = graded_spectral_grid(1e-2, 30.0, 0.4, 16);
  CHECK(s.breaks()[1] == doctest::Approx(1e-2));
  for (std::size_t k = 1; k < s.panel_count(); ++k) {
    const double w = s.breaks()[k + 1] - s.breaks()[k];
    CHECK(w <= 0.4 + 1e-12);
  }
  CHECK(s.integrate([](double l) { return l * l; }) == doctest::Approx(9000.0).epsilon(1e-13));
  CHECK(g.refined().size() == 2 * g.size());
  CHECK(g.panel_of(24.99) == g.panel_count() - 1);
}

TEST_CASE("monotone cubic preserves monotone data (seeded property)") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> step(0.01, 1.0), rise(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x{0.0}, y{0.0};
    for (int k = 0; k < 12; ++k) {
      x.push_back(x.back() + step(rng));
      y.push_back(y.back() + (k % 4 == 0 ? 0.0 : rise(rng)));
    }
    const MonotoneCubic f(x, y);
    double prev = f(x.front());
    for (int s = 1; s <= 2000; ++s) {
      const double v = f(x.front() + (x.back() - x.front()) * s / 2000.0);
      CHECK(v >= prev - 1e-13);
      prev = v;
    }
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(f(x[k]) == doctest::Approx(y[k]));
  }
}

TEST_CASE("monotone cubic reproduces linear data") {
  const std::vector<double> x{0.0, 0.5, 1.7, 3.0}, y{1.0, 2.0, 4.4, 7.0};
  const MonotoneCubic f(x, y);
  for (double t = 0.0; t <= 3.0; t += 0.1) {
    CHECK(f(t) == doctest::Approx(1.0 + 2.0 * t));
    CHECK(f.derivative(t) == doctest::Approx(2.0));
  }
}

TEST_CASE("Dormand-Prince solves the harmonic oscillator to tolerance") {
  OdeOptions o;
  o.rtol = o.atol = 1e-11;
  DormandPrince45 dp(o);
  const auto rhs = [](double, const State2& y) { return State2{y[1], -y[0]}; };
  std::vector<double> out;
  for (int k = 1; k <= 20; ++k) out.push_back(0.5 * k);
  std::vector<State2> got;
  dp.integrate(rhs, 0.0, State2{1.0, 0.0}, out, [&](std::size_t, double, const State2& y) {
    got.push_back(y);
  });
  REQUIRE(got.size() == out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    CHECK(std::abs(got[k][0] - std::cos(out[k])) < 1e-9);
    CHECK(std::abs(got[k][1] + std::sin(out[k])) < 1e-9);
  }
}

TEST_CASE("Dormand-Prince reports NaN propagation") {
  DormandPrince45 dp(OdeOptions{});
  const auto rhs = [](double t, const State2& y) {
    return State2{t > 0.5 ? Complex(std::nan("")) : y[1], -y[0]};
  };
  const std::vector<double> out{1.0};
  try {
    dp.integrate(rhs, 0.0, State2{1.0, 0.0}, out, [](std::size_t, double, const State2&) {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::propagation || e.kind() == ErrorKind::stiffness));
  }
}
