#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "radharm/density.hpp"
#include "radharm/ode.hpp"
#include "radharm/quadrature.hpp"

namespace radharm {

struct EigenOptions {
  double rk_tol = 1e-10;
  /// Radius where the even power series hands over to the integrator.
  double r_start = 1e-3;
  /// Largest admissible |Im lambda| as a multiple of rho.
  double strip_fraction = 1.0;
  /// Re-integrate at rk_tol / 100 to estimate the error of the table.
  bool estimate_residual = true;
  unsigned threads = 1;
};

/// Spherical functions phi_lambda and their r-derivatives on a lattice.
struct EigenTable {
  std::string profile_id;
  std::vector<Complex> lambdas;
  std::vector<double> r_grid;
  std::vector<std::vector<Complex>> values;  // [lambda][r]
  std::vector<std::vector<Complex>> derivs;  // [lambda][r]
  /// Largest scaled deviation from a tighter re-integration; negative if
  /// not estimated.
  double ode_residual = -1.0;
  double rk_tol = 0.0;
};

/// Solves u'' + (A'/A) u' + (lambda^2 + rho^2) u = 0, u(0) = 1, u'(0) = 0 on
/// an increasing grid starting at 0.
EigenTable solve_phi(const DensityProfile& p, Complex lambda, std::span<const double> r_grid,
                     const EigenOptions& options = {});

EigenTable solve_phi(const DensityProfile& p, std::span<const Complex> lambdas,
                     std::span<const double> r_grid, const EigenOptions& options = {});

/// Low-level tracer: values (u, u') of phi_lambda at increasing radii > 0.
std::vector<State2> trace_phi(const DensityProfile& p, Complex lambda,
                              std::span<const double> radii, const EigenOptions& options);

struct MatchingOptions {
  /// First matching radius; 0 selects max(15 / rho, 15).
  double r1 = 0.0;
  /// Outward pushes of the matching pair, each by `push` in r.
  int max_pushes = 6;
  double push = 2.0;
  /// Successive estimates closer than this (relative) count as converged.
  double agreement = 1e-10;
  double warn_conditioning = 1e6;
};

struct CValue {
  Complex lambda;
  Complex c;        // c(lambda)
  Complex c_minus;  // c(-lambda) from the same system
  double conditioning = 0;
  bool ill_conditioned = false;
  double r1 = 0, delta = 0;
  int pushes = 0;
  /// Relative difference between the last two matching estimates.
  double drift = 0;
};

/// Matching offset pi / (4 max(|Re lambda|, 1/2)).
double matching_offset(Complex lambda);

/// c-function by matching e^{rho r} phi_lambda(r) to c(l) e^{i l r} + c(-l) e^{-i l r}.
CValue compute_c(const DensityProfile& p, Complex lambda, const MatchingOptions& matching = {},
                 const EigenOptions& options = {});

/// Solves the 2x2 matching system from two samples of e^{rho r} phi_lambda.
CValue match_pair(Complex lambda, double r1, Complex v1, double r2, Complex v2);

struct CFunctionTable {
  std::string profile_id;
  std::vector<double> lambdas;
  std::vector<Complex> c_values;
  /// (C0 / kappa) |c(lambda)|^{-2}, the density of the Plancherel measure.
  std::vector<double> plancherel;
  std::vector<double> conditioning;
  std::vector<double> drift;
  double C0 = 0;     // 1 / (2 pi omega)
  double kappa = 0;  // lim A(r) e^{-2 rho r}
};

/// Tabulates the Plancherel density on a grid of positive lambdas.
CFunctionTable plancherel_density(const DensityProfile& p, std::span<const double> lambdas,
                                  const MatchingOptions& matching = {},
                                  const EigenOptions& options = {});

struct BasisOptions {
  double r_max = 0.0;  // 0 selects 25 / rho
  std::size_t r_panels = 128;
  double lambda_min = 1e-2;
  double lambda_max = 30.0;
  double lambda_width = 0.0;  // 0 selects min(0.5, 10 / r_max)
  int order = 16;
  double rk_tol = 1e-10;
  unsigned threads = 1;
};

/// Discretised radial Fourier transform: phi_lambda tabulated on a radial
/// Gauss-Legendre grid for every node of a spectral Gauss-Legendre grid,
/// together with both quadrature measures.
class SpectralBasis {
 public:
  SpectralBasis(DensityProfile profile, BasisOptions options = {});

  /// Reassembles a basis from previously computed parts (cache load).
  SpectralBasis(DensityProfile profile, BasisOptions options, std::vector<double> phi,
                std::vector<double> phi0, CFunctionTable c_table);

  const DensityProfile& profile() const { return profile_; }
  const BasisOptions& options() const { return options_; }
  const PanelGrid& radial_grid() const { return radial_; }
  const PanelGrid& spectral_grid() const { return spectral_; }
  const CFunctionTable& c_table() const { return c_table_; }

  std::size_t r_size() const { return radial_.size(); }
  std::size_t lambda_size() const { return spectral_.size(); }

  /// phi_{lambda_j}(r_i).
  double phi(std::size_t j, std::size_t i) const { return phi_[j * radial_.size() + i]; }
  std::span<const double> phi_row(std::size_t j) const {
    return {phi_.data() + j * radial_.size(), radial_.size()};
  }
  std::span<const double> phi_matrix() const { return phi_; }
  /// phi_0 on the radial nodes.
  std::span<const double> phi0() const { return phi0_; }

  /// omega w_i A(r_i).
  std::span<const double> r_measure() const { return r_measure_; }
  /// w_j (C0 / kappa) |c(lambda_j)|^{-2}.
  std::span<const double> lambda_measure() const { return lambda_measure_; }

  std::vector<Complex> forward(std::span<const Complex> u) const;
  std::vector<Complex> inverse(std::span<const Complex> spectrum) const;

  /// phi_lambda on the radial nodes for an arbitrary admissible lambda.
  std::vector<Complex> phi_at(Complex lambda) const;

  /// Canonical description of everything the tables depend on.
  std::string cache_identity() const;

 private:
  void assemble_measures();

  DensityProfile profile_;
  BasisOptions options_;
  PanelGrid radial_, spectral_;
  std::vector<double> phi_, phi0_;
  CFunctionTable c_table_;
  std::vector<double> r_measure_, lambda_measure_;
};

/// Resolves defaulted fields of BasisOptions for a given profile.
BasisOptions resolve(const BasisOptions& options, const DensityProfile& p);

/// Canonical text for a profile plus resolved basis options.
std::string basis_identity(const DensityProfile& p, const BasisOptions& resolved);

}  // namespace radharm
