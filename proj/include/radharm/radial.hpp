#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radharm/eigen.hpp"
#include "radharm/interp.hpp"

namespace radharm {

using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// Process-wide memo of spectral bases keyed by SpectralBasis::cache_identity.
BasisPtr shared_basis(const DensityProfile& p, const BasisOptions& options = {});

/// A radial function u(r) sampled on the radial nodes of a spectral basis.
struct RadialGridFunction {
  BasisPtr basis;
  std::vector<Complex> values;
  std::string interp = "monotone-cubic";
  /// Transform on the basis lambda-grid when the function was synthesised
  /// from one (inverse transform); reused by fourier_grid.
  std::optional<std::vector<Complex>> spectrum;

  std::span<const double> r_grid() const { return basis->radial_grid().nodes(); }
  std::size_t size() const { return values.size(); }

  static RadialGridFunction sample(BasisPtr basis, const std::function<Complex(double)>& u);

  /// Same values without the attached spectrum.
  RadialGridFunction spatial_only() const;
};

/// A spectral profile on the basis lambda-grid; the attached Plancherel
/// density is basis->c_table().
struct SpectralGridFunction {
  BasisPtr basis;
  std::vector<Complex> values;

  std::span<const double> lambda_grid() const { return basis->spectral_grid().nodes(); }
};

RadialGridFunction operator+(const RadialGridFunction& a, const RadialGridFunction& b);
RadialGridFunction operator*(Complex s, const RadialGridFunction& a);

/// Piecewise monotone-cubic interpolant of a grid function; zero beyond the grid.
class RadialInterpolant {
 public:
  explicit RadialInterpolant(const RadialGridFunction& f);
  Complex operator()(double r) const;
  double support_end() const { return support_; }

 private:
  MonotoneCubic re_, im_;
  double r_last_ = 0;
  double support_ = 0;
  bool real_only_ = true;
};

struct Tolerances {
  double tail_tol = 1e-6;  // relative share tolerated in the last panel
};

/// (omega int |u|^p A dr)^{1/p}; p = infinity gives sup |u|.
double lp_norm(const RadialGridFunction& f, double p, const Tolerances& tol = {});

/// Share of |u|^p A carried by the last radial panel.
double lp_tail_share(const RadialGridFunction& f, double p);

Complex fourier(const RadialGridFunction& f, Complex lambda, const Tolerances& tol = {});
std::vector<Complex> fourier(const RadialGridFunction& f, std::span<const Complex> lambdas,
                             const Tolerances& tol = {});

/// Transform on the basis lambda-grid.
SpectralGridFunction fourier_grid(const RadialGridFunction& f);

/// Inversion against the Plancherel measure. Values below the synthesis
/// noise level rk_tol * phi_0(r) * sum |w_j F_j| are set to zero.
RadialGridFunction inverse_fourier(const SpectralGridFunction& F, const Tolerances& tol = {});

/// ||a - b||_2 / ||b||_2.
double relative_l2(const RadialGridFunction& a, const RadialGridFunction& b);

/// |<f,g>_spatial - <f,g>_spectral| / (||f||_2 ||g||_2).
double plancherel_check(const RadialGridFunction& f, const RadialGridFunction& g);

/// 1 - 2/q for the conjugate exponent q of p in [1, 2].
double gamma_conjugate(double p);

struct StripLine {
  double im = 0;
  double sup_abs = 0;
  double ratio = 0;  // sup |f^| / ||f||_p
};

struct StripBoundReport {
  double p = 1, q = 0;  // q = 0 encodes infinity
  double gamma_q = 0;
  double halfwidth = 0;
  double lp_norm = 0;
  std::vector<StripLine> lines;
  double max_ratio = 0;
};

StripBoundReport strip_bound_check(const RadialGridFunction& f, double p, int lines = 4,
                                   int samples = 40, double lambda_max = 0.0);

struct Rect {
  double re0 = 0, re1 = 0, im0 = 0, im1 = 0;
};

/// |contour integral of f^| / (perimeter * max |f^|) around `rect`, which
/// must lie strictly inside the strip of the conjugate exponent of p.
double holomorphy_check(const RadialGridFunction& f, double p, const Rect& rect,
                        int nodes_per_side = 32);

}  // namespace radharm
