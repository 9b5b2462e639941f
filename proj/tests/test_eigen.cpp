#include <cmath>
#include <numbers>

#include "common.hpp"
#include "radharm/eigen.hpp"
#include "radharm/error.hpp"

using namespace radharm;

namespace {

std::vector<double> uniform_grid(double end, int n) {
  std::vector<double> r;
  for (int i = 0; i <= n; ++i) r.push_back(end * i / n);
  return r;
}

}  // namespace

TEST_CASE("H^3 spherical functions match sin(lambda r)/(lambda sinh r), real and complex lambda") {
  const DensityProfile p = make_hyperbolic(3);
  const auto r = uniform_grid(10.0, 400);
  for (Complex lambda : {Complex(0.5), Complex(1.0), Complex(2.0), Complex(0.7, 0.4),
                         Complex(3.0, -0.9)}) {
    const EigenTable t = solve_phi(p, lambda, r);
    double err = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Complex exact =
          r[i] == 0.0 ? Complex(1.0) : std::sin(lambda * r[i]) / (lambda * std::sinh(r[i]));
      err = std::max(err, std::abs(t.values[0][i] - exact));
    }
    INFO("lambda = " << lambda);
    CHECK(err < 1e-8);
    CHECK(t.ode_residual >= 0.0);
    CHECK(t.ode_residual < 1e-7);
  }
}

TEST_CASE("phi_0 on H^3 is r / sinh r") {
  const auto r = uniform_grid(8.0, 80);
  const EigenTable t = solve_phi(make_hyperbolic(3), Complex(0.0), r);
  for (std::size_t i = 1; i < r.size(); ++i)
    CHECK(std::abs(t.values[0][i] - r[i] / std::sinh(r[i])) < 1e-9);
}

TEST_CASE("phi at i rho is the constant function on every built-in profile") {
  const auto r = uniform_grid(15.0, 150);
  for (const DensityProfile& p :
       {make_hyperbolic(2), make_hyperbolic(3), make_hyperbolic(4), make_hyperbolic(5),
        make_damek_ricci(2, 1), make_damek_ricci(8, 4)}) {
    const EigenTable t = solve_phi(p, Complex(0.0, p.rho()), r);
    double err = 0.0;
    for (const Complex& v : t.values[0]) err = std::max(err, std::abs(v - 1.0));
    INFO(p.name());
    CHECK(err < 1e-8);
  }
}

TEST_CASE("spherical functions are even in lambda") {
  const DensityProfile p = make_damek_ricci(2, 1);
  const auto r = uniform_grid(6.0, 60);
  const Complex lams[] = {Complex(1.3, 0.2), Complex(-1.3, -0.2)};
  const EigenTable t = solve_phi(p, lams, r);
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(std::abs(t.values[0][i] - t.values[1][i]) < 1e-9);
}

TEST_CASE("lambda outside the strip is rejected") {
  const auto r = uniform_grid(1.0, 4);
  try {
    solve_phi(make_hyperbolic(3), Complex(1.0, 1.5), r);
    FAIL("expected a strip error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::strip);
  }
}

TEST_CASE("H^3 c-function equals 1/(i lambda)") {
  const DensityProfile p = make_hyperbolic(3);
  for (double lambda = 0.5; lambda <= 8.0; lambda += 0.75) {
    const CValue c = compute_c(p, lambda);
    const Complex exact = 1.0 / Complex(0.0, lambda);
    CHECK(std::abs(c.c - exact) / std::abs(exact) < 1e-6);
    CHECK(std::abs(c.c_minus - std::conj(c.c)) < 1e-6);
    CHECK_FALSE(c.ill_conditioned);
  }
}

TEST_CASE("c(-lambda) = conj c(lambda) on Damek-Ricci profiles") {
  for (const DensityProfile& p : {make_damek_ricci(2, 1), make_damek_ricci(8, 4)}) {
    for (double lambda : {0.3, 1.0, 4.0}) {
      const CValue a = compute_c(p, lambda);
      const CValue b = compute_c(p, -lambda);
      CHECK(std::abs(b.c - std::conj(a.c)) < 1e-6 * std::abs(a.c));
    }
  }
}

TEST_CASE("c-function at lambda = 0 is a degenerate matching") {
  try {
    compute_c(make_hyperbolic(3), Complex(0.0));
    FAIL("expected degenerate_matching");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_matching);
  }
}

TEST_CASE("matching pair recovers planted coefficients") {
  const Complex lambda(1.7), a(0.3, -0.8), b(0.3, 0.8);
  auto v = [&](double r) {
    return a * std::exp(Complex(0, 1) * lambda * r) + b * std::exp(-Complex(0, 1) * lambda * r);
  };
  const double r1 = 20.0, r2 = r1 + matching_offset(lambda);
  const CValue c = match_pair(lambda, r1, v(r1), r2, v(r2));
  CHECK(std::abs(c.c - a) < 1e-12);
  CHECK(std::abs(c.c_minus - b) < 1e-12);
}

TEST_CASE("H^3 Plancherel density is lambda^2 / (2 pi^2)") {
  const std::vector<double> lambdas{0.25, 1.0, 2.5, 6.0};
  const CFunctionTable t = plancherel_density(make_hyperbolic(3), lambdas);
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double exact = lambdas[j] * lambdas[j] / (2.0 * std::numbers::pi * std::numbers::pi);
    CHECK(t.plancherel[j] == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("basis identity depends on every grid parameter") {
  const DensityProfile p = make_hyperbolic(3);
  const BasisOptions base = resolve(BasisOptions{}, p);
  BasisOptions other = base;
  other.lambda_max = 20.0;
  CHECK(basis_identity(p, base) != basis_identity(p, other));
  other = base;
  other.rk_tol = 1e-9;
  CHECK(basis_identity(p, base) != basis_identity(p, other));
  CHECK(basis_identity(p, base) != basis_identity(make_hyperbolic(4), resolve({}, make_hyperbolic(4))));
  CHECK(base.r_max == doctest::Approx(25.0));
}
