#include "radharm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "radharm/error.hpp"
#include "radharm/parallel.hpp"

namespace radharm {

namespace {

constexpr Complex I{0.0, 1.0};

void check_lambda(const DensityProfile& p, Complex lambda, double strip_fraction) {
  require(p.rho() > 0.0, "spherical functions need rho > 0");
  if (std::abs(lambda.imag()) > strip_fraction * p.rho() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "|Im lambda| = " << std::abs(lambda.imag()) << " exceeds the admissible strip "
       << strip_fraction * p.rho();
    fail(ErrorKind::strip, os.str());
  }
}

}  // namespace

std::vector<State2> trace_phi(const DensityProfile& p, Complex lambda,
                              std::span<const double> radii, const EigenOptions& options) {
  check_lambda(p, lambda, options.strip_fraction);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0, "trace_phi: radii must be positive");
    if (i > 0) require(radii[i] > radii[i - 1], "trace_phi: radii must increase");
  }
  const double rho = p.rho();
  const double alpha = p.alpha();
  const Complex mu = lambda * lambda + rho * rho;
  const Complex a2 = -mu / (4.0 * (alpha + 1.0));
  const Complex a4 = -a2 * (mu + 4.0 * p.b2()) / (8.0 * (alpha + 2.0));
  const double rs = std::min(options.r_start, 0.05 / std::sqrt(std::max(1.0, std::abs(mu))));

  std::vector<State2> out(radii.size());
  std::size_t first = 0;
  for (; first < radii.size() && radii[first] <= rs; ++first) {
    const double r = radii[first];
    const double r2 = r * r;
    out[first] = {1.0 + r2 * (a2 + a4 * r2), r * (2.0 * a2 + 4.0 * a4 * r2)};
  }
  if (first == radii.size()) return out;

  // Integrate v = e^{rho r} u, which stays O(1) for real lambda.
  const Complex k0 = lambda * lambda + 2.0 * rho * rho;
  auto rhs = [&](double r, const State2& y) -> State2 {
    const double l = p.log_derivative(r);
    return {y[1], -(l - 2.0 * rho) * y[1] - (k0 - rho * l) * y[0]};
  };
  const double r2s = rs * rs;
  const Complex u0 = 1.0 + r2s * (a2 + a4 * r2s);
  const Complex du0 = rs * (2.0 * a2 + 4.0 * a4 * r2s);
  const double e0 = std::exp(rho * rs);
  const State2 y0{e0 * u0, e0 * (du0 + rho * u0)};

  OdeOptions ode;
  ode.rtol = options.rk_tol;
  ode.atol = options.rk_tol;
  ode.initial_step = 0.1 * rs;
  DormandPrince45 solver(ode);
  const std::span<const double> targets = radii.subspan(first);
  solver.integrate(rhs, rs, y0, targets, [&](std::size_t k, double r, const State2& y) {
    const double e = std::exp(-rho * r);
    out[first + k] = {e * y[0], e * (y[1] - rho * y[0])};
  });
  return out;
}

EigenTable solve_phi(const DensityProfile& p, std::span<const Complex> lambdas,
                     std::span<const double> r_grid, const EigenOptions& options) {
  require(!r_grid.empty() && r_grid[0] == 0.0, "solve_phi: r_grid must start at 0");
  EigenTable table;
  table.profile_id = p.spec_string();
  table.lambdas.assign(lambdas.begin(), lambdas.end());
  table.r_grid.assign(r_grid.begin(), r_grid.end());
  table.rk_tol = options.rk_tol;
  table.values.resize(lambdas.size());
  table.derivs.resize(lambdas.size());
  std::vector<double> residual(lambdas.size(), -1.0);
  const std::span<const double> inner = r_grid.subspan(1);

  parallel_for(lambdas.size(), options.threads, [&](std::size_t j) {
    const std::vector<State2> uv = trace_phi(p, lambdas[j], inner, options);
    auto& vals = table.values[j];
    auto& ders = table.derivs[j];
    vals.assign(r_grid.size(), Complex{});
    ders.assign(r_grid.size(), Complex{});
    vals[0] = 1.0;
    ders[0] = 0.0;
    for (std::size_t i = 0; i < uv.size(); ++i) {
      vals[i + 1] = uv[i][0];
      ders[i + 1] = uv[i][1];
    }
    if (options.estimate_residual) {
      EigenOptions fine = options;
      fine.rk_tol = options.rk_tol / 100.0;
      const std::vector<State2> ref = trace_phi(p, lambdas[j], inner, fine);
      double worst = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double scale = std::exp(p.rho() * inner[i]);
        const double dev = std::abs(uv[i][0] - ref[i][0]) * scale;
        worst = std::max(worst, dev / (1.0 + std::abs(ref[i][0]) * scale));
      }
      residual[j] = worst;
    }
  });
  if (options.estimate_residual) {
    table.ode_residual = 0.0;
    for (double r : residual) table.ode_residual = std::max(table.ode_residual, r);
  }
  return table;
}

EigenTable solve_phi(const DensityProfile& p, Complex lambda, std::span<const double> r_grid,
                     const EigenOptions& options) {
  const Complex one[] = {lambda};
  return solve_phi(p, std::span<const Complex>(one), r_grid, options);
}

double matching_offset(Complex lambda) {
  return std::numbers::pi / (4.0 * std::max(std::abs(lambda.real()), 0.5));
}

CValue match_pair(Complex lambda, double r1, Complex v1, double r2, Complex v2) {
  if (lambda == Complex{}) fail(ErrorKind::degenerate_matching, "c-function matching at lambda = 0");
  const Complex e1 = std::exp(I * lambda * r1);
  const Complex e2 = std::exp(I * lambda * r2);
  const Complex f1 = 1.0 / e1, f2 = 1.0 / e2;
  const Complex det = e1 * f2 - f1 * e2;
  const double frob2 = std::norm(e1) + std::norm(f1) + std::norm(e2) + std::norm(f2);
  const double adet = std::abs(det);
  if (!(adet > 1e-8 * frob2)) {
    std::ostringstream os;
    os << "singular matching system at lambda=" << lambda.real() << "+" << lambda.imag()
       << "i (|lambda| delta near a multiple of pi)";
    fail(ErrorKind::degenerate_matching, os.str());
  }
  CValue out;
  out.lambda = lambda;
  out.r1 = r1;
  out.delta = r2 - r1;
  out.c = (v1 * f2 - v2 * f1) / det;
  out.c_minus = (e1 * v2 - e2 * v1) / det;
  // 2x2 singular values from the Frobenius norm and |det|.
  const double disc = std::sqrt(std::max(0.0, frob2 * frob2 - 4.0 * adet * adet));
  const double smax = std::sqrt(0.5 * (frob2 + disc));
  const double smin = adet / smax;
  out.conditioning = smax / smin;
  return out;
}

namespace {

double default_r1(const DensityProfile& p, const MatchingOptions& m) {
  return m.r1 > 0.0 ? m.r1 : std::max(15.0 / p.rho(), 15.0);
}

// Matching radii: pairs (R1 + j push, R1 + j push + delta), j = 0..max_pushes.
std::vector<double> matching_radii(const DensityProfile& p, Complex lambda,
                                   const MatchingOptions& m) {
  const double r1 = default_r1(p, m);
  const double delta = matching_offset(lambda);
  std::vector<double> radii;
  for (int j = 0; j <= m.max_pushes; ++j) {
    radii.push_back(r1 + j * m.push);
    radii.push_back(r1 + j * m.push + delta);
  }
  return radii;
}

// Picks the c estimate from the sequence of pushed matching pairs.
CValue settle_c(const DensityProfile& p, Complex lambda, const MatchingOptions& m,
                std::span<const double> radii, std::span<const Complex> u, double rk_tol) {
  std::vector<CValue> est;
  for (std::size_t j = 0; j + 1 < radii.size(); j += 2) {
    const Complex v1 = std::exp(p.rho() * radii[j]) * u[j];
    const Complex v2 = std::exp(p.rho() * radii[j + 1]) * u[j + 1];
    est.push_back(match_pair(lambda, radii[j], v1, radii[j + 1], v2));
  }
  const double noise = std::max(m.agreement, 100.0 * rk_tol);
  CValue best = est.front();
  best.drift = 0.0;
  for (std::size_t j = 1; j < est.size(); ++j) {
    const double drift = std::abs(est[j].c - est[j - 1].c) / std::abs(est[j].c);
    best = est[j];
    best.pushes = static_cast<int>(j);
    best.drift = drift;
    if (drift < noise) break;
    if (j >= 2) {
      // Aitken step, kept only when the sequence visibly contracts.
      const Complex d1 = est[j - 1].c - est[j - 2].c;
      const Complex d2 = est[j].c - est[j - 1].c;
      if (std::abs(d2) < 0.5 * std::abs(d1) && std::abs(d2 - d1) > 0.0) {
        const Complex acc = est[j].c - d2 * d2 / (d2 - d1);
        if (std::abs(acc - est[j].c) <= 2.0 * std::abs(d2)) {
          const Complex shift = acc - est[j].c;
          best.c = acc;
          best.c_minus = est[j].c_minus + (lambda.imag() == 0.0 ? std::conj(shift) : Complex{});
        }
      }
    }
  }
  if (est.size() == 1) best.drift = 0.0;
  best.r1 = est.front().r1;
  best.conditioning = est.front().conditioning;
  return best;
}

}  // namespace

CValue compute_c(const DensityProfile& p, Complex lambda, const MatchingOptions& matching,
                 const EigenOptions& options) {
  if (lambda == Complex{}) fail(ErrorKind::degenerate_matching, "c-function matching at lambda = 0");
  const std::vector<double> radii = matching_radii(p, lambda, matching);
  const std::vector<State2> uv = trace_phi(p, lambda, radii, options);
  std::vector<Complex> u(uv.size());
  for (std::size_t i = 0; i < uv.size(); ++i) u[i] = uv[i][0];
  CValue out = settle_c(p, lambda, matching, radii, u, options.rk_tol);
  out.ill_conditioned = out.conditioning > matching.warn_conditioning;
  return out;
}

CFunctionTable plancherel_density(const DensityProfile& p, std::span<const double> lambdas,
                                  const MatchingOptions& matching, const EigenOptions& options) {
  for (double l : lambdas)
    require(l > 0.0, "plancherel_density: every lambda must be positive");
  CFunctionTable t;
  t.profile_id = p.spec_string();
  t.lambdas.assign(lambdas.begin(), lambdas.end());
  t.C0 = 1.0 / (2.0 * std::numbers::pi * p.omega());
  t.kappa = p.kappa();
  const std::size_t n = lambdas.size();
  t.c_values.resize(n);
  t.plancherel.resize(n);
  t.conditioning.resize(n);
  t.drift.resize(n);
  parallel_for(n, options.threads, [&](std::size_t j) {
    const CValue c = compute_c(p, lambdas[j], matching, options);
    t.c_values[j] = c.c;
    t.plancherel[j] = t.C0 / t.kappa / std::norm(c.c);
    t.conditioning[j] = c.conditioning;
    t.drift[j] = c.drift;
  });
  return t;
}

BasisOptions resolve(const BasisOptions& options, const DensityProfile& p) {
  BasisOptions o = options;
  require(p.rho() > 0.0, "spectral basis needs rho > 0");
  if (o.r_max <= 0.0) o.r_max = 25.0 / p.rho();
  if (o.lambda_width <= 0.0) o.lambda_width = std::min(0.5, 10.0 / o.r_max);
  require(o.lambda_min > 0.0 && o.lambda_max > o.lambda_min,
          "spectral basis: need 0 < lambda_min < lambda_max");
  require(o.rk_tol > 0.0, "spectral basis: rk_tol must be positive");
  return o;
}

SpectralBasis::SpectralBasis(DensityProfile profile, BasisOptions options)
    : profile_(std::move(profile)), options_(resolve(options, profile_)) {
  radial_ = graded_radial_grid(options_.r_max, options_.r_panels, options_.order);
  spectral_ = graded_spectral_grid(options_.lambda_min, options_.lambda_max,
                                   options_.lambda_width, options_.order);
  const std::size_t nr = radial_.size();
  const std::size_t nl = spectral_.size();
  phi_.assign(nl * nr, 0.0);

  c_table_.profile_id = profile_.spec_string();
  c_table_.lambdas.assign(spectral_.nodes().begin(), spectral_.nodes().end());
  c_table_.C0 = 1.0 / (2.0 * std::numbers::pi * profile_.omega());
  c_table_.kappa = profile_.kappa();
  c_table_.c_values.resize(nl);
  c_table_.plancherel.resize(nl);
  c_table_.conditioning.resize(nl);
  c_table_.drift.resize(nl);

  EigenOptions eo;
  eo.rk_tol = options_.rk_tol;
  const MatchingOptions mo;
  const std::span<const double> rnodes = radial_.nodes();

  parallel_for(nl, options_.threads, [&](std::size_t j) {
    const double lambda = spectral_.nodes()[j];
    const std::vector<double> match = matching_radii(profile_, lambda, mo);
    std::vector<double> radii(rnodes.begin(), rnodes.end());
    radii.insert(radii.end(), match.begin(), match.end());
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    const std::vector<State2> uv = trace_phi(profile_, lambda, radii, eo);
    auto at = [&](double r) {
      const auto it = std::lower_bound(radii.begin(), radii.end(), r);
      return uv[static_cast<std::size_t>(it - radii.begin())][0];
    };
    for (std::size_t i = 0; i < nr; ++i) phi_[j * nr + i] = at(rnodes[i]).real();
    std::vector<Complex> um(match.size());
    for (std::size_t k = 0; k < match.size(); ++k) um[k] = at(match[k]);
    const CValue c = settle_c(profile_, lambda, mo, match, um, eo.rk_tol);
    c_table_.c_values[j] = c.c;
    c_table_.plancherel[j] = c_table_.C0 / c_table_.kappa / std::norm(c.c);
    c_table_.conditioning[j] = c.conditioning;
    c_table_.drift[j] = c.drift;
  });

  const std::vector<State2> uv0 = trace_phi(profile_, 0.0, rnodes, eo);
  phi0_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) phi0_[i] = uv0[i][0].real();
  assemble_measures();
}

SpectralBasis::SpectralBasis(DensityProfile profile, BasisOptions options, std::vector<double> phi,
                             std::vector<double> phi0, CFunctionTable c_table)
    : profile_(std::move(profile)),
      options_(resolve(options, profile_)),
      phi_(std::move(phi)),
      phi0_(std::move(phi0)),
      c_table_(std::move(c_table)) {
  radial_ = graded_radial_grid(options_.r_max, options_.r_panels, options_.order);
  spectral_ = graded_spectral_grid(options_.lambda_min, options_.lambda_max,
                                   options_.lambda_width, options_.order);
  if (phi_.size() != radial_.size() * spectral_.size() || phi0_.size() != radial_.size() ||
      c_table_.plancherel.size() != spectral_.size())
    fail(ErrorKind::cache, "cached spectral tables do not match the requested grids");
  assemble_measures();
}

void SpectralBasis::assemble_measures() {
  const std::size_t nr = radial_.size();
  r_measure_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i)
    r_measure_[i] = profile_.omega() * radial_.weights()[i] * profile_.density(radial_.nodes()[i]);
  lambda_measure_.resize(spectral_.size());
  for (std::size_t j = 0; j < spectral_.size(); ++j)
    lambda_measure_[j] = spectral_.weights()[j] * c_table_.plancherel[j];
}

std::vector<Complex> SpectralBasis::forward(std::span<const Complex> u) const {
  require(u.size() == r_size(), "forward transform: size mismatch");
  std::vector<Complex> wu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) wu[i] = r_measure_[i] * u[i];
  std::vector<Complex> out(lambda_size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double* row = phi_.data() + j * r_size();
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < wu.size(); ++i) {
      re += row[i] * wu[i].real();
      im += row[i] * wu[i].imag();
    }
    out[j] = {re, im};
  }
  return out;
}

std::vector<Complex> SpectralBasis::inverse(std::span<const Complex> spectrum) const {
  require(spectrum.size() == lambda_size(), "inverse transform: size mismatch");
  std::vector<double> re(r_size(), 0.0), im(r_size(), 0.0);
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const Complex w = lambda_measure_[j] * spectrum[j];
    if (w == Complex{}) continue;
    const double* row = phi_.data() + j * r_size();
    for (std::size_t i = 0; i < re.size(); ++i) {
      re[i] += w.real() * row[i];
      im[i] += w.imag() * row[i];
    }
  }
  std::vector<Complex> out(r_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

std::vector<Complex> SpectralBasis::phi_at(Complex lambda) const {
  EigenOptions eo;
  eo.rk_tol = options_.rk_tol;
  const std::vector<State2> uv = trace_phi(profile_, lambda, radial_.nodes(), eo);
  std::vector<Complex> out(uv.size());
  for (std::size_t i = 0; i < uv.size(); ++i) out[i] = uv[i][0];
  return out;
}

std::string SpectralBasis::cache_identity() const { return basis_identity(profile_, options_); }

std::string basis_identity(const DensityProfile& p, const BasisOptions& o) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "r_max=%.17g;r_panels=%zu;lambda_min=%.17g;lambda_max=%.17g;"
                "lambda_width=%.17g;order=%d;rk_tol=%.17g",
                o.r_max, o.r_panels, o.lambda_min, o.lambda_max, o.lambda_width, o.order,
                o.rk_tol);
  return p.spec_string() + "|" + buf;
}

}  // namespace radharm
