#include "radharm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "radharm/error.hpp"

namespace radharm {

BasisPtr shared_basis(const DensityProfile& p, const BasisOptions& options) {
  static std::mutex mutex;
  static std::map<std::string, BasisPtr> memo;
  const BasisOptions resolved = resolve(options, p);
  const std::string key = basis_identity(p, resolved);
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  auto basis = std::make_shared<const SpectralBasis>(p, resolved);
  std::lock_guard lock(mutex);
  return memo.emplace(key, std::move(basis)).first->second;
}

RadialGridFunction RadialGridFunction::sample(BasisPtr basis,
                                              const std::function<Complex(double)>& u) {
  RadialGridFunction f;
  f.values.reserve(basis->r_size());
  for (double r : basis->radial_grid().nodes()) f.values.push_back(u(r));
  f.basis = std::move(basis);
  return f;
}

RadialGridFunction RadialGridFunction::spatial_only() const {
  RadialGridFunction f = *this;
  f.spectrum.reset();
  return f;
}

RadialGridFunction operator+(const RadialGridFunction& a, const RadialGridFunction& b) {
  require(a.basis == b.basis, "radial functions live on different grids");
  RadialGridFunction out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  if (a.spectrum && b.spectrum) {
    for (std::size_t j = 0; j < out.spectrum->size(); ++j) (*out.spectrum)[j] += (*b.spectrum)[j];
  } else {
    out.spectrum.reset();
  }
  return out;
}

RadialGridFunction operator*(Complex s, const RadialGridFunction& a) {
  RadialGridFunction out = a;
  for (auto& v : out.values) v *= s;
  if (out.spectrum)
    for (auto& v : *out.spectrum) v *= s;
  return out;
}

RadialInterpolant::RadialInterpolant(const RadialGridFunction& f) {
  const auto r = f.r_grid();
  std::vector<double> re(f.size()), im(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    re[i] = f.values[i].real();
    im[i] = f.values[i].imag();
    if (im[i] != 0.0) real_only_ = false;
    if (f.values[i] != Complex{}) support_ = r[i];
  }
  re_ = MonotoneCubic(r, re);
  if (!real_only_) im_ = MonotoneCubic(r, im);
  r_last_ = r.back();
  // a zero tail beyond the last nonzero node ends the support one node later
  const auto it = std::upper_bound(r.begin(), r.end(), support_);
  if (it != r.end()) support_ = *it;
}

Complex RadialInterpolant::operator()(double r) const {
  if (r > support_) return 0.0;
  const double x = std::max(r, re_.front());
  if (real_only_) return re_(x);
  return {re_(x), im_(x)};
}

namespace {

std::size_t last_panel_start(const RadialGridFunction& f) {
  const PanelGrid& g = f.basis->radial_grid();
  return g.size() - static_cast<std::size_t>(g.order());
}

}  // namespace

double lp_tail_share(const RadialGridFunction& f, double p) {
  const auto rm = f.basis->r_measure();
  double total = 0.0, tail = 0.0;
  const std::size_t start = last_panel_start(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double term = rm[i] * std::pow(std::abs(f.values[i]), p);
    total += term;
    if (i >= start) tail += term;
  }
  return total > 0.0 ? tail / total : 0.0;
}

double lp_norm(const RadialGridFunction& f, double p, const Tolerances& tol) {
  require(p >= 1.0, "lp_norm: p must be at least 1");
  for (const Complex& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::propagation, "lp_norm: non-finite function value");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const Complex& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  const auto rm = f.basis->r_measure();
  double total = 0.0, tail = 0.0;
  const std::size_t start = last_panel_start(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double term = rm[i] * std::pow(std::abs(f.values[i]), p);
    total += term;
    if (i >= start) tail += term;
  }
  if (total > 0.0 && tail > tol.tail_tol * total) {
    std::ostringstream os;
    os << "L^" << p << " norm not converged at r_max: last panel carries " << tail / total
       << " of the integral";
    fail(ErrorKind::truncation, os.str());
  }
  return std::pow(total, 1.0 / p);
}

std::vector<Complex> fourier(const RadialGridFunction& f, std::span<const Complex> lambdas,
                             const Tolerances& tol) {
  const auto rm = f.basis->r_measure();
  const std::size_t start = last_panel_start(f);
  std::vector<Complex> out;
  out.reserve(lambdas.size());
  for (const Complex lambda : lambdas) {
    const std::vector<Complex> phi = f.basis->phi_at(lambda);
    Complex sum{};
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Complex term = rm[i] * f.values[i] * phi[i];
      sum += term;
      total += std::abs(term);
      if (i >= start) tail += std::abs(term);
    }
    if (total > 0.0 && tail > tol.tail_tol * total) {
      std::ostringstream os;
      os << "transform integrand does not decay at r_max for lambda=" << lambda.real() << "+"
         << lambda.imag() << "i (tail share " << tail / total << ")";
      fail(ErrorKind::strip, os.str());
    }
    out.push_back(sum);
  }
  return out;
}

Complex fourier(const RadialGridFunction& f, Complex lambda, const Tolerances& tol) {
  const Complex one[] = {lambda};
  return fourier(f, std::span<const Complex>(one), tol).front();
}

SpectralGridFunction fourier_grid(const RadialGridFunction& f) {
  SpectralGridFunction F;
  F.basis = f.basis;
  F.values = f.spectrum ? *f.spectrum : f.basis->forward(f.values);
  return F;
}

RadialGridFunction inverse_fourier(const SpectralGridFunction& F, const Tolerances& tol) {
  const SpectralBasis& b = *F.basis;
  require(F.values.size() == b.lambda_size(), "inverse_fourier: spectrum size mismatch");
  const auto lm = b.lambda_measure();
  double total = 0.0, tail = 0.0;
  const std::size_t start = b.lambda_size() - static_cast<std::size_t>(b.spectral_grid().order());
  for (std::size_t j = 0; j < F.values.size(); ++j) {
    const double w = std::abs(lm[j] * F.values[j]);
    if (!std::isfinite(w)) fail(ErrorKind::propagation, "inverse_fourier: non-finite spectrum");
    total += w;
    if (j >= start) tail += w;
  }
  if (total > 0.0 && tail > tol.tail_tol * total) {
    std::ostringstream os;
    os << "spectral cutoff too small: the last lambda panel carries " << tail / total
       << " of the synthesis weight (estimated deficit " << tail << ")";
    fail(ErrorKind::tail, os.str());
  }
  RadialGridFunction f;
  f.basis = F.basis;
  f.values = b.inverse(F.values);
  f.spectrum = F.values;
  const double floor = b.options().rk_tol * total;
  const auto phi0 = b.phi0();
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (std::abs(f.values[i]) < floor * phi0[i]) f.values[i] = 0.0;
  return f;
}

double relative_l2(const RadialGridFunction& a, const RadialGridFunction& b) {
  require(a.basis == b.basis, "relative_l2: functions live on different grids");
  const auto w = a.basis->r_measure();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += w[i] * std::norm(a.values[i] - b.values[i]);
    den += w[i] * std::norm(b.values[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double plancherel_check(const RadialGridFunction& f, const RadialGridFunction& g) {
  require(f.basis == g.basis, "plancherel_check: functions live on different grids");
  const auto rm = f.basis->r_measure();
  Complex spatial{};
  double nf = 0.0, ng = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    spatial += rm[i] * f.values[i] * std::conj(g.values[i]);
    nf += rm[i] * std::norm(f.values[i]);
    ng += rm[i] * std::norm(g.values[i]);
  }
  if (nf == 0.0 || ng == 0.0) return 0.0;
  const SpectralGridFunction F = fourier_grid(f);
  const SpectralGridFunction G = fourier_grid(g);
  const auto lm = f.basis->lambda_measure();
  Complex spectral{};
  for (std::size_t j = 0; j < F.values.size(); ++j)
    spectral += lm[j] * F.values[j] * std::conj(G.values[j]);
  return std::abs(spatial - spectral) / std::sqrt(nf * ng);
}

double gamma_conjugate(double p) {
  require(p >= 1.0 && p <= 2.0, "gamma_conjugate: p must lie in [1, 2]");
  // q = p / (p - 1), 1 - 2/q = 1 - 2 (p - 1) / p = (2 - p) / p
  return (2.0 - p) / p;
}

StripBoundReport strip_bound_check(const RadialGridFunction& f, double p, int lines, int samples,
                                   double lambda_max) {
  require(p >= 1.0 && p < 2.0, "strip_bound_check: p must lie in [1, 2)");
  require(lines >= 1 && samples >= 2, "strip_bound_check: need lines >= 1 and samples >= 2");
  StripBoundReport rep;
  rep.p = p;
  rep.q = p == 1.0 ? 0.0 : p / (p - 1.0);
  rep.gamma_q = gamma_conjugate(p);
  const double rho = f.basis->profile().rho();
  rep.halfwidth = rep.gamma_q * rho;
  rep.lp_norm = lp_norm(f, p);
  if (lambda_max <= 0.0) lambda_max = std::min(10.0, f.basis->options().lambda_max);
  for (int k = 0; k < lines; ++k) {
    StripLine line;
    line.im = rep.halfwidth * k / lines;
    std::vector<Complex> z;
    for (int s = 0; s < samples; ++s)
      z.emplace_back(lambda_max * s / (samples - 1), line.im);
    for (const Complex& v : fourier(f, z)) line.sup_abs = std::max(line.sup_abs, std::abs(v));
    line.ratio = rep.lp_norm > 0.0 ? line.sup_abs / rep.lp_norm : 0.0;
    rep.max_ratio = std::max(rep.max_ratio, line.ratio);
    rep.lines.push_back(line);
  }
  return rep;
}

double holomorphy_check(const RadialGridFunction& f, double p, const Rect& rect,
                        int nodes_per_side) {
  require(rect.re0 < rect.re1 && rect.im0 < rect.im1, "holomorphy_check: degenerate rectangle");
  const double hw = gamma_conjugate(p) * f.basis->profile().rho();
  require(std::max(std::abs(rect.im0), std::abs(rect.im1)) < hw * (1.0 - 1e-9),
          "holomorphy_check: rectangle must lie strictly inside the strip");
  const GaussLegendreRule gl = gauss_legendre(nodes_per_side);
  struct Side {
    Complex a, b;
  };
  const Complex c00{rect.re0, rect.im0}, c10{rect.re1, rect.im0}, c11{rect.re1, rect.im1},
      c01{rect.re0, rect.im1};
  const Side sides[] = {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
  Complex integral{};
  double max_abs = 0.0;
  for (const Side& s : sides) {
    const Complex mid = 0.5 * (s.a + s.b), half = 0.5 * (s.b - s.a);
    std::vector<Complex> z(gl.nodes.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = mid + half * gl.nodes[k];
    const std::vector<Complex> v = fourier(f, z);
    for (std::size_t k = 0; k < z.size(); ++k) {
      integral += half * gl.weights[k] * v[k];
      max_abs = std::max(max_abs, std::abs(v[k]));
    }
  }
  if (max_abs == 0.0) return 0.0;
  const double perimeter = 2.0 * ((rect.re1 - rect.re0) + (rect.im1 - rect.im0));
  return std::abs(integral) / (perimeter * max_abs);
}

}  // namespace radharm
