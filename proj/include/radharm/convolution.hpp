#pragma once

#include <span>
#include <string>
#include <vector>

#include "radharm/radial.hpp"

namespace radharm {

struct ConvolutionReport {
  std::string method = "spectral";
  double p = 1, q = 1, r = 1;
  double lhs_norm = 0;
  double rhs_bound = 0;
  double ratio = 0;
};

/// f * g through the product of transforms.
RadialGridFunction convolve_spectral(const RadialGridFunction& f, const RadialGridFunction& g,
                                     const Tolerances& tol = {});

struct SpatialOptions {
  int theta_nodes = 64;
  unsigned threads = 1;
};

/// f * g on H^n by direct integration over spheres, using the hyperbolic law
/// of cosines for the distance to a point at radius s. The basis profile
/// must be make_hyperbolic(n).
RadialGridFunction convolve_spatial_hyperbolic(const RadialGridFunction& f,
                                               const RadialGridFunction& g, int n,
                                               const SpatialOptions& options = {});

/// Distance between points at radii r and s separated by angle theta in H^n.
double hyperbolic_distance(double r, double s, double theta);

/// ||f * g||_r against ||f||_p ||g||_q with 1 + 1/r = 1/p + 1/q.
ConvolutionReport young_check(const RadialGridFunction& f, const RadialGridFunction& g, double p,
                              double q);

/// ||f * g||_2 / (||g||_p ||f||_2) for p in [1, 2).
ConvolutionReport kunze_stein_check(const RadialGridFunction& f, const RadialGridFunction& g,
                                    double p);

struct EigenConvolutionReport {
  double residual = 0;  // relative sup difference on [0, r_cmp]
  Complex fhat;
  double r_cmp = 0;
  bool inconclusive = false;
};

/// Compares f * phi_lambda (spatial route) with f^(lambda) phi_lambda.
EigenConvolutionReport eigenfunction_convolution_check(const RadialGridFunction& f,
                                                       Complex lambda, double r_cmp = 3.0,
                                                       const SpatialOptions& options = {});

struct OperatorNormReport {
  double sup_ghat = 0;
  std::vector<double> ratios;  // ||f * g||_2 / (sup |g^| ||f||_2)
  double max_ratio = 0;
  bool ok = true;
};

OperatorNormReport l2_operator_norm_check(const RadialGridFunction& g,
                                          std::span<const RadialGridFunction> corpus,
                                          double slack = 1e-6);

/// psi_eps(r) = c exp(-1 / (1 - (r/eps)^2)) on [0, eps), unit L^1 norm.
RadialGridFunction approximate_identity(BasisPtr basis, double eps);

}  // namespace radharm
