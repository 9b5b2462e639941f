#include "radharm/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radharm/error.hpp"
#include "radharm/parallel.hpp"

namespace radharm {

RadialGridFunction convolve_spectral(const RadialGridFunction& f, const RadialGridFunction& g,
                                     const Tolerances& tol) {
  require(f.basis == g.basis, "convolve_spectral: functions live on different grids");
  const SpectralGridFunction F = fourier_grid(f);
  const SpectralGridFunction G = fourier_grid(g);
  SpectralGridFunction H{f.basis, F.values};
  for (std::size_t j = 0; j < H.values.size(); ++j) H.values[j] *= G.values[j];
  return inverse_fourier(H, tol);
}

double hyperbolic_distance(double r, double s, double theta) {
  const double a = std::sinh(0.5 * (r - s));
  const double b = std::sin(0.5 * theta);
  const double x = 2.0 * a * a + 2.0 * std::sinh(r) * std::sinh(s) * b * b;
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

namespace {

// Last radius where |u| exceeds a tiny fraction of its maximum.
double effective_support(const RadialGridFunction& f) {
  double peak = 0.0;
  for (const Complex& v : f.values) peak = std::max(peak, std::abs(v));
  double support = 0.0;
  const auto r = f.r_grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values[i]) > 1e-15 * peak) support = r[i];
  return support;
}

// u tabulated on a uniform fine grid for O(1) evaluation at arbitrary radii.
class UniformTable {
 public:
  UniformTable(const RadialGridFunction& f, double support, double step) {
    const RadialInterpolant interp(f);
    end_ = support;
    inv_step_ = 1.0 / step;
    const auto n = static_cast<std::size_t>(std::ceil(support * inv_step_)) + 2;
    values_.resize(n);
    for (std::size_t k = 0; k < n; ++k) values_[k] = interp(std::min(k * step, support));
  }
  Complex operator()(double r) const {
    if (r > end_) return 0.0;
    const double x = r * inv_step_;
    const auto k = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(k);
    return (1.0 - t) * values_[k] + t * values_[k + 1];
  }
  double end() const { return end_; }

 private:
  std::vector<Complex> values_;
  double end_ = 0, inv_step_ = 1;
};

}  // namespace

RadialGridFunction convolve_spatial_hyperbolic(const RadialGridFunction& f,
                                               const RadialGridFunction& g, int n,
                                               const SpatialOptions& options) {
  require(f.basis == g.basis, "convolve_spatial_hyperbolic: functions live on different grids");
  if (n < 2) fail(ErrorKind::invalid_dimension, "spatial convolution needs n >= 2");
  const DensityProfile& p = f.basis->profile();
  require(p.kind() == ProfileKind::hyperbolic && p.dim_n() == n,
          "convolve_spatial_hyperbolic: profile is not H^n");

  const GaussLegendreRule gl = gauss_legendre(options.theta_nodes);
  std::vector<double> half_sin2(gl.nodes.size()), wtheta(gl.nodes.size());
  const double omega_n2 = sphere_area(n - 1);
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    const double theta = 0.5 * std::numbers::pi * (gl.nodes[k] + 1.0);
    const double sh = std::sin(0.5 * theta);
    half_sin2[k] = 2.0 * sh * sh;
    wtheta[k] = 0.5 * std::numbers::pi * gl.weights[k] * omega_n2 *
                std::pow(std::sin(theta), n - 2);
  }

  const UniformTable ug(g, effective_support(g), 1e-3);
  const double f_support = effective_support(f);
  const auto rnodes = f.r_grid();
  const auto rw = f.basis->radial_grid().weights();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < f.size() && rnodes[i] <= f_support; ++i)
    if (f.values[i] != Complex{}) active.push_back(i);
  std::vector<double> weight(rnodes.size()), sinh_r(rnodes.size());
  for (std::size_t i = 0; i < rnodes.size(); ++i) {
    weight[i] = rw[i] * p.density(rnodes[i]);
    sinh_r[i] = std::sinh(rnodes[i]);
  }

  RadialGridFunction out;
  out.basis = f.basis;
  out.values.assign(f.size(), Complex{});
  const double reach = f_support + ug.end();
  parallel_for(rnodes.size(), options.threads, [&](std::size_t si) {
    const double s = rnodes[si];
    if (s > reach) return;
    Complex sum{};
    for (std::size_t i : active) {
      const double r = rnodes[i];
      // the sphere of radius r comes no closer than |r - s| to the point at radius s
      if (std::abs(r - s) > ug.end()) continue;
      const double a = std::sinh(0.5 * (r - s));
      const double base = 2.0 * a * a;
      const double cross = sinh_r[i] * sinh_r[si];
      Complex inner{};
      for (std::size_t k = 0; k < wtheta.size(); ++k) {
        const double x = base + cross * half_sin2[k];
        inner += wtheta[k] * ug(std::log1p(x + std::sqrt(x * (x + 2.0))));
      }
      sum += f.values[i] * weight[i] * inner;
    }
    out.values[si] = sum;
  });
  return out;
}

namespace {

double young_exponent(double p, double q) {
  require(p >= 1.0 && q >= 1.0, "young_check: exponents must be at least 1");
  const double inv_r = 1.0 / p + 1.0 / q - 1.0;
  require(inv_r >= -1e-15 && inv_r <= 1.0 + 1e-15,
          "young_check: need 1 + 1/r = 1/p + 1/q with r >= 1");
  return inv_r <= 1e-15 ? INFINITY : 1.0 / inv_r;
}

}  // namespace

ConvolutionReport young_check(const RadialGridFunction& f, const RadialGridFunction& g, double p,
                              double q) {
  ConvolutionReport rep;
  rep.p = p;
  rep.q = q;
  rep.r = young_exponent(p, q);
  rep.rhs_bound = lp_norm(f, p) * lp_norm(g, q);
  if (rep.rhs_bound == 0.0) return rep;
  rep.lhs_norm = lp_norm(convolve_spectral(f, g), rep.r);
  rep.ratio = rep.lhs_norm / rep.rhs_bound;
  return rep;
}

ConvolutionReport kunze_stein_check(const RadialGridFunction& f, const RadialGridFunction& g,
                                    double p) {
  require(p >= 1.0 && p < 2.0, "kunze_stein_check: p must lie in [1, 2)");
  ConvolutionReport rep;
  rep.p = p;
  rep.q = 2.0;
  rep.r = 2.0;
  rep.rhs_bound = lp_norm(g, p) * lp_norm(f, 2.0);
  if (rep.rhs_bound == 0.0) return rep;
  rep.lhs_norm = lp_norm(convolve_spectral(f, g), 2.0);
  rep.ratio = rep.lhs_norm / rep.rhs_bound;
  return rep;
}

EigenConvolutionReport eigenfunction_convolution_check(const RadialGridFunction& f,
                                                       Complex lambda, double r_cmp,
                                                       const SpatialOptions& options) {
  const SpectralBasis& b = *f.basis;
  EigenConvolutionReport rep;
  rep.r_cmp = r_cmp;
  rep.fhat = fourier(f, lambda);

  RadialGridFunction phi;
  phi.basis = f.basis;
  phi.values = b.phi_at(lambda);

  rep.inconclusive = effective_support(f) + r_cmp > b.radial_grid().upper();

  const RadialGridFunction conv =
      convolve_spatial_hyperbolic(f, phi, b.profile().dim_n(), options);
  double diff = 0.0, scale = 0.0;
  const auto r = f.r_grid();
  for (std::size_t i = 0; i < r.size() && r[i] <= r_cmp; ++i) {
    const Complex expect = rep.fhat * phi.values[i];
    diff = std::max(diff, std::abs(conv.values[i] - expect));
    scale = std::max(scale, std::abs(expect));
  }
  rep.residual = scale > 0.0 ? diff / scale : diff;
  return rep;
}

OperatorNormReport l2_operator_norm_check(const RadialGridFunction& g,
                                          std::span<const RadialGridFunction> corpus,
                                          double slack) {
  OperatorNormReport rep;
  for (const Complex& v : fourier_grid(g).values) rep.sup_ghat = std::max(rep.sup_ghat, std::abs(v));
  for (const RadialGridFunction& f : corpus) {
    const double nf = lp_norm(f, 2.0);
    double ratio = 0.0;
    if (nf > 0.0 && rep.sup_ghat > 0.0)
      ratio = lp_norm(convolve_spectral(f, g), 2.0) / (rep.sup_ghat * nf);
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.ok = rep.max_ratio <= 1.0 + slack;
  return rep;
}

RadialGridFunction approximate_identity(BasisPtr basis, double eps) {
  require(eps > 0.0, "approximate_identity: eps must be positive");
  RadialGridFunction psi = RadialGridFunction::sample(std::move(basis), [eps](double r) {
    const double x = r / eps;
    return x < 1.0 ? Complex(std::exp(-1.0 / (1.0 - x * x))) : Complex{};
  });
  const double mass = lp_norm(psi, 1.0);
  require(mass > 0.0, "approximate_identity: eps below grid resolution");
  return Complex(1.0 / mass) * psi;
}

}  // namespace radharm
