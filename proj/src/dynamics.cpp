#include "radharm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "radharm/error.hpp"

namespace radharm {

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::heat: return "heat";
    case SymbolKind::shifted_heat: return "shifted-heat";
    case SymbolKind::resolvent: return "resolvent";
    case SymbolKind::custom: return "custom";
    case SymbolKind::step: return "step";
  }
  return "?";
}

const char* to_string(ChaosClass c) {
  switch (c) {
    case ChaosClass::chaotic: return "Chaotic";
    case ChaosClass::chaotic_after_scaling: return "ChaoticAfterScaling";
    case ChaosClass::not_chaotic: return "NotChaotic";
  }
  return "?";
}

Complex Symbol::operator()(Complex lambda) const {
  const Complex s = lambda * lambda + rho * rho;
  switch (kind) {
    case SymbolKind::heat:
      return std::exp(-t * s);
    case SymbolKind::shifted_heat:
      return std::exp(c * t - t * s);
    case SymbolKind::resolvent:
      return -1.0 / (s + z);
    case SymbolKind::custom:
      return formula(lambda);
    case SymbolKind::step:
      return std::abs(lambda.real()) < cut ? -1.0 : 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Symbol heat_symbol(double rho, double t) {
  require(t > 0.0, "heat symbol needs t > 0");
  Symbol m;
  m.kind = SymbolKind::heat;
  m.rho = rho;
  m.t = t;
  m.strip_halfwidth = rho;
  m.label = "heat";
  return m;
}

Symbol shifted_heat_symbol(double rho, Complex c, double t) {
  require(t > 0.0, "shifted heat symbol needs t > 0");
  Symbol m = heat_symbol(rho, t);
  m.kind = SymbolKind::shifted_heat;
  m.c = c;
  m.label = "shifted-heat";
  return m;
}

Symbol resolvent_symbol(double rho, Complex z) {
  Symbol m;
  m.kind = SymbolKind::resolvent;
  m.rho = rho;
  m.z = z;
  m.strip_halfwidth = rho;
  m.label = "resolvent";
  return m;
}

Symbol custom_symbol(double rho, std::function<Complex(Complex)> formula, double strip_halfwidth,
                     std::string label, bool continuous) {
  require(static_cast<bool>(formula), "custom symbol needs a formula");
  Symbol m;
  m.kind = SymbolKind::custom;
  m.rho = rho;
  m.formula = std::move(formula);
  m.strip_halfwidth = strip_halfwidth;
  m.label = std::move(label);
  m.continuous = continuous;
  return m;
}

Symbol constant_symbol(double rho, Complex value) {
  return custom_symbol(rho, [value](Complex) { return value; }, rho, "constant");
}

Symbol step_symbol(double rho, double cut) {
  Symbol m;
  m.kind = SymbolKind::step;
  m.rho = rho;
  m.cut = cut;
  m.strip_halfwidth = 0.0;
  m.continuous = false;
  m.label = "step";
  return m;
}

Symbol dual_symbol(const Symbol& m) {
  Symbol d = m;
  switch (m.kind) {
    case SymbolKind::heat:
    case SymbolKind::step:
      break;
    case SymbolKind::shifted_heat:
      d.c = std::conj(m.c);
      break;
    case SymbolKind::resolvent:
      d.z = std::conj(m.z);
      break;
    case SymbolKind::custom: {
      auto f = m.formula;
      d.formula = [f](Complex l) { return std::conj(f(std::conj(l))); };
      d.label = "dual(" + m.label + ")";
      break;
    }
  }
  return d;
}

StripSpec strip_spec(double rho, double p) {
  require(p >= 1.0, "strip_spec: p must be at least 1");
  StripSpec s;
  s.p = p;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  s.halfwidth = std::abs(1.0 - 2.0 * inv_p) * rho;
  const double inv_q = 1.0 - inv_p;
  s.gamma_q = 1.0 - 2.0 * inv_q;
  return s;
}

Threshold c_threshold(double rho, double p) {
  require(p >= 1.0, "c_threshold: p must be at least 1");
  if (p == 1.0 || std::isinf(p)) return {0.0, true};
  // 4 rho^2 / (p q) with q = p / (p - 1)
  return {4.0 * rho * rho * (p - 1.0) / (p * p), false};
}

OpNormBound heat_opnorm_bound(double rho, double p, double t) {
  require(p != 2.0, "heat_opnorm_bound: p must differ from 2");
  require(t > 0.0, "heat_opnorm_bound: t must be positive");
  const double cp = c_threshold(rho, p).value;
  const double gamma = std::isinf(p) ? 1.0 : std::abs(1.0 - 2.0 / p);
  OpNormBound out;
  out.bound = std::exp(-cp * t);
  out.symbol_value = std::abs(heat_symbol(rho, t)(Complex(0.0, -gamma * rho)));
  return out;
}

namespace {

bool conjugate_symmetric_modulus(const Symbol& m) {
  switch (m.kind) {
    case SymbolKind::heat:
    case SymbolKind::shifted_heat:
    case SymbolKind::step:
      return true;
    case SymbolKind::resolvent:
      return m.z.imag() == 0.0;
    case SymbolKind::custom:
      return false;
  }
  return false;
}

void check_resolvent_pole(const Symbol& m, double halfwidth) {
  if (m.kind != SymbolKind::resolvent) return;
  const Complex pole = std::sqrt(-(m.rho * m.rho + m.z));
  if (std::abs(pole.imag()) < halfwidth) {
    std::ostringstream os;
    os << "resolvent symbol has a pole at lambda = +/-(" << pole.real() << "+" << pole.imag()
       << "i) inside the strip |Im lambda| < " << halfwidth;
    fail(ErrorKind::pole, os.str());
  }
}

}  // namespace

ChaosVerdict classify_chaos(const Symbol& m, double p, const ClassifyOptions& options) {
  require(p >= 1.0, "classify_chaos: p must be at least 1");
  require(!std::isinf(p), "classify_chaos: p = infinity is not supported");
  require(options.n_re >= 2 && options.n_im >= 2, "classify_chaos: grid too small");
  if (!m.continuous && p != 2.0)
    require(false, "classify_chaos: discontinuous symbols are only meaningful for p = 2");

  ChaosVerdict v;
  const StripSpec strip = strip_spec(m.rho, p);
  v.strip_halfwidth = strip.halfwidth;
  v.c_p = c_threshold(m.rho, p).value;
  v.holomorphy_assumed = m.kind == SymbolKind::custom;
  if (p <= 2.0) {
    v.reason = "p_leq_2";
    return v;
  }
  check_resolvent_pole(m, strip.halfwidth);

  const double top = strip.halfwidth * (1.0 - 1e-3);
  std::vector<double> ims;
  for (int k = 0; k < options.n_im; ++k) ims.push_back(top * k / (options.n_im - 1));
  if (!conjugate_symmetric_modulus(m))
    for (int k = 1; k < options.n_im; ++k) ims.push_back(-top * k / (options.n_im - 1));

  struct Sample {
    Complex lambda;
    Complex value;
    double abs;
  };
  std::vector<Sample> grid;
  grid.reserve(ims.size() * options.n_re);
  for (double y : ims) {
    for (int k = 0; k < options.n_re; ++k) {
      const Complex l(options.lambda_max * k / (options.n_re - 1), y);
      const Complex val = m(l);
      if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
        std::ostringstream os;
        os << "symbol is not finite at lambda = " << l.real() << "+" << l.imag() << "i";
        fail(ErrorKind::pole, os.str());
      }
      grid.push_back({l, val, std::abs(val)});
    }
  }
  const auto by_abs = [](const Sample& a, const Sample& b) { return a.abs < b.abs; };
  const Sample lo = *std::min_element(grid.begin(), grid.end(), by_abs);
  const Sample hi = *std::max_element(grid.begin(), grid.end(), by_abs);
  v.inf_abs = lo.abs;
  v.sup_abs = hi.abs;

  if (hi.abs - lo.abs <= 1e-10 * std::max(1.0, hi.abs)) {
    v.reason = "constant_symbol";
    return v;
  }
  if (lo.abs < 1.0 && hi.abs > 1.0 + 1e-12) {
    v.classification = ChaosClass::chaotic;
    v.reason = "witness_pair_found";
    v.witnesses = Witnesses{lo.lambda, hi.lambda, lo.abs, hi.abs};
    return v;
  }
  if (hi.abs <= 1.0) {
    v.reason = "contraction";
    return v;
  }
  if (lo.abs < 1.0) {
    // sup exceeds 1 only at rounding level
    v.reason = "no_expanding_witness";
    return v;
  }
  // |m| >= 1 everywhere: rescale by a value of m strictly between inf and sup.
  const double target = std::sqrt(lo.abs * hi.abs);
  const Sample mid = *std::min_element(grid.begin(), grid.end(), [&](const Sample& a, const Sample& b) {
    return std::abs(a.abs - target) < std::abs(b.abs - target);
  });
  v.classification = ChaosClass::chaotic_after_scaling;
  v.reason = "witness_pair_found";
  v.nu = mid.value;
  v.witnesses = Witnesses{lo.lambda, hi.lambda, lo.abs / mid.abs, hi.abs / mid.abs};
  return v;
}

namespace {

std::vector<Complex> symbol_on_grid(const Symbol& m, const SpectralBasis& b) {
  if (m.kind == SymbolKind::resolvent) {
    const Complex w = -(m.rho * m.rho + m.z);
    if (w.imag() == 0.0 && w.real() >= 0.0) {
      const double pole = std::sqrt(w.real());
      if (pole <= b.spectral_grid().upper()) {
        std::ostringstream os;
        os << "resolvent symbol has a pole at real lambda = " << pole;
        fail(ErrorKind::pole, os.str());
      }
    }
  }
  std::vector<Complex> out;
  out.reserve(b.lambda_size());
  for (double l : b.spectral_grid().nodes()) {
    const Complex v = m(l);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "symbol is not finite at lambda = " << l;
      fail(ErrorKind::pole, os.str());
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

RadialGridFunction apply_multiplier(const Symbol& m, const RadialGridFunction& f,
                                    const Tolerances& tol) {
  const std::vector<Complex> mv = symbol_on_grid(m, *f.basis);
  SpectralGridFunction F = fourier_grid(f);
  for (std::size_t j = 0; j < F.values.size(); ++j) F.values[j] *= mv[j];
  return inverse_fourier(F, tol);
}

OrbitTrace orbit_simulate(const Symbol& m, const RadialGridFunction& f, double p, int N,
                          const Tolerances& tol) {
  require(N >= 1, "orbit_simulate: N must be at least 1");
  require(p >= 1.0, "orbit_simulate: p must be at least 1");
  const std::vector<Complex> mv = symbol_on_grid(m, *f.basis);
  SpectralGridFunction S = fourier_grid(f);
  double log_scale = 0.0;
  OrbitTrace trace;
  for (int n = 0; n <= N; ++n) {
    if (n > 0)
      for (std::size_t j = 0; j < S.values.size(); ++j) S.values[j] *= mv[j];
    double peak = 0.0;
    for (const Complex& v : S.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) {
      trace.norms.push_back(0.0);
      trace.log_norms.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    for (Complex& v : S.values) v /= peak;
    log_scale += std::log(peak);
    double norm = 0.0;
    try {
      norm = lp_norm(inverse_fourier(S, tol), p, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::truncation && e.kind() != ErrorKind::tail) throw;
      trace.truncated = true;
      std::ostringstream os;
      os << "orbit stopped at step " << n << ": " << e.what();
      trace.message = os.str();
      break;
    }
    const double log_norm = log_scale + std::log(norm);
    trace.log_norms.push_back(log_norm);
    trace.norms.push_back(std::exp(log_norm));
  }
  for (std::size_t n = 1; n < trace.log_norms.size(); ++n)
    trace.growth.push_back(std::exp(trace.log_norms[n] - trace.log_norms[n - 1]));
  return trace;
}

std::vector<PeriodicPoint> periodic_point_search(const Symbol& m, int n_max, double lambda_max,
                                                 int samples) {
  require(n_max >= 1 && samples >= 2, "periodic_point_search: need n_max >= 1, samples >= 2");
  auto excess = [&](double l) { return std::abs(m(l)) - 1.0; };
  std::vector<double> roots;
  std::vector<double> xs(samples), gs(samples);
  for (int k = 0; k < samples; ++k) {
    xs[k] = lambda_max * k / (samples - 1);
    gs[k] = excess(xs[k]);
  }
  constexpr double zero = 1e-14;
  for (int k = 0; k < samples; ++k) {
    if (std::abs(gs[k]) <= zero) {
      roots.push_back(xs[k]);
      continue;
    }
    if (k + 1 < samples && std::abs(gs[k + 1]) > zero && (gs[k] < 0.0) != (gs[k + 1] < 0.0)) {
      if (!m.continuous) continue;  // a jump, not a crossing
      double a = xs[k], b = xs[k + 1], ga = gs[k];
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = excess(mid);
        if ((gm < 0.0) == (ga < 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
  }
  std::vector<PeriodicPoint> out;
  for (double l : roots) {
    const double theta = std::arg(m(l));
    for (int n = 1; n <= n_max; ++n) {
      if (std::abs(std::remainder(n * theta, 2.0 * std::numbers::pi)) < 1e-9) {
        out.push_back({l, n});
        break;
      }
    }
  }
  return out;
}

PoleRegion resolvent_pole_region(double rho, double p, Complex z) {
  require(p >= 1.0 && p <= 2.0, "resolvent_pole_region: p must lie in [1, 2]");
  PoleRegion out;
  out.a = rho * (2.0 / p - 1.0);
  out.c_p = c_threshold(rho, p).value;
  out.degenerate = out.a == 0.0;
  const double sigma = z.real(), tau = z.imag();
  out.boundary_tau2 = -4.0 * out.a * out.a * (sigma + out.c_p);
  out.distance = tau * tau - out.boundary_tau2;
  out.bounded = tau * tau > out.boundary_tau2;
  return out;
}

ResolventSearch resolvent_chaotic_z(double rho, double p, const ClassifyOptions& options,
                                    int budget) {
  require(p > 2.0 && !std::isinf(p), "resolvent_chaotic_z: p must lie in (2, infinity)");
  const double hw = strip_spec(rho, p).halfwidth;
  ResolventSearch out;
  // Boundary of {-(lambda^2 + rho^2) : |Im lambda| < hw} at lambda = x + i hw,
  // pushed outward by d along the unit normal.
  for (double d : {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
    for (double x : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      if (out.candidates_tried >= budget) break;
      ++out.candidates_tried;
      const Complex boundary(-(x * x - hw * hw + rho * rho), -2.0 * x * hw);
      const Complex normal = Complex(2.0 * hw, -2.0 * x) / std::hypot(2.0 * hw, 2.0 * x);
      const Complex z = boundary + d * normal;
      try {
        const ChaosVerdict v = classify_chaos(resolvent_symbol(rho, z), p, options);
        if (v.classification == ChaosClass::chaotic) {
          out.z = z;
          out.verdict = v;
          return out;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::pole) throw;
      }
    }
  }
  std::ostringstream os;
  os << "no chaotic resolvent parameter found after " << out.candidates_tried << " candidates";
  fail(ErrorKind::not_found, os.str());
}

}  // namespace radharm
