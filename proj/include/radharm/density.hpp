#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radharm/interp.hpp"

namespace radharm {

enum class ProfileKind { hyperbolic, damek_ricci, custom };

const char* to_string(ProfileKind kind);

/// Volume density A(r) of a rank-one harmonic manifold in geodesic polar
/// coordinates, together with the constants the rest of the library needs.
///
/// Immutable after construction; copies share the custom table.
class DensityProfile {
 public:
  const std::string& name() const { return name_; }
  ProfileKind kind() const { return kind_; }
  int dim_n() const { return dim_n_; }
  double rho() const { return rho_; }
  double alpha() const { return alpha_; }
  /// Surface area of the unit sphere in R^{2 alpha + 2}.
  double omega() const { return omega_; }
  /// lim A(r) e^{-2 rho r}.
  double kappa() const { return kappa_; }
  /// Coefficient of r^2 in log(A(r) / r^{2 alpha + 1}).
  double b2() const { return b2_; }

  double density(double r) const;
  double log_density(double r) const;
  /// A'(r) / A(r).
  double log_derivative(double r) const;
  /// d/dr of log_derivative; a difference quotient of the smooth part for tables.
  double log_second_derivative(double r) const;

  /// Canonical textual description, stable across runs (used for cache keys).
  std::string spec_string() const;

  // Model parameters (zero when not applicable).
  int m() const { return m_; }
  int k() const { return k_; }
  /// First tabulated radius of a custom profile, 0 otherwise.
  double table_start() const { return table_ ? table_->r.front() : 0.0; }
  /// Width of the table interval containing r; 0 for analytic profiles and
  /// outside the table.
  double table_spacing(double r) const;
  /// Step of the difference quotients taken at r.
  static double fd_step(double r);

 private:
  friend DensityProfile make_hyperbolic(int n);
  friend DensityProfile make_damek_ricci(int m, int k);
  friend DensityProfile make_custom(std::string name, std::span<const double> r,
                                    std::span<const double> log_a, std::optional<double> alpha,
                                    std::optional<double> rho_hint);

  std::string name_;
  ProfileKind kind_ = ProfileKind::hyperbolic;
  int dim_n_ = 0;
  int m_ = 0, k_ = 0;
  double rho_ = 0, alpha_ = 0, omega_ = 0, kappa_ = 0, b2_ = 0;

 public:
  struct Table {
    std::vector<double> r, log_a;
    MonotoneCubic log_b;  // log A - (2 alpha + 1) log r
    double slope_front = 0, slope_back = 0;
  };
 private:
  std::shared_ptr<const Table> table_;

  double log_b(double r) const;
  double log_b_derivative(double r) const;
};

/// Hyperbolic space H^n: A = sinh^{n-1} r.
DensityProfile make_hyperbolic(int n);

/// Damek-Ricci type density A = 2^{m+k} sinh^{m+k}(r/2) cosh^k(r/2). Any
/// (m, k) is accepted even when no such space exists; the density is still a
/// valid radial model.
DensityProfile make_damek_ricci(int m, int k);

/// Tabulated profile from samples (r_i, log A(r_i)), r_i > 0 increasing.
/// alpha defaults to the small-r log-log slope; rho defaults to half the
/// log-derivative at the last node.
DensityProfile make_custom(std::string name, std::span<const double> r,
                           std::span<const double> log_a, std::optional<double> alpha = {},
                           std::optional<double> rho_hint = {});

/// 2 pi^{d/2} / Gamma(d/2): area of the unit sphere in R^d.
double sphere_area(double d);

struct ConditionReport {
  bool c1_ok = false, c2_ok = false, c3_ok = false, c4_ok = false;
  double rho_estimate = 0;
  double g_integral = 0;
  double g_sup = 0;
  std::map<std::string, double> details;

  bool all_ok() const { return c1_ok && c2_ok && c3_ok && c4_ok; }
};

/// Samples the profile on [r0, R] and checks monotonicity of A, the limit and
/// monotonicity of A'/A, the small-r normalisation of A / r^{2 alpha + 1},
/// and integrability of r |G(r)| on [r1, R] where
/// G = (A'/A)^2 / 4 + (A'/A)' / 2 - rho^2.
ConditionReport verify_conditions(const DensityProfile& p, double r0, double r1, double R,
                                  double tol);

/// The Liouville potential G(r) with a central difference for (A'/A)'.
double liouville_potential(const DensityProfile& p, double r);

}  // namespace radharm
