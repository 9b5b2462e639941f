#include "radharm/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "radharm/error.hpp"
#include "radharm/quadrature.hpp"

namespace radharm {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::hyperbolic: return "hyperbolic";
    case ProfileKind::damek_ricci: return "damek_ricci";
    case ProfileKind::custom: return "custom";
  }
  return "?";
}

double sphere_area(double d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

// log(sinh x) without overflow for large x.
double log_sinh(double x) {
  if (x > 20.0) return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

double log_cosh(double x) {
  return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

}  // namespace

DensityProfile make_hyperbolic(int n) {
  if (n < 2) fail(ErrorKind::invalid_dimension, "hyperbolic profile needs n >= 2, got " + std::to_string(n));
  DensityProfile p;
  p.name_ = "H^" + std::to_string(n);
  p.kind_ = ProfileKind::hyperbolic;
  p.dim_n_ = n;
  p.rho_ = 0.5 * (n - 1);
  p.alpha_ = 0.5 * (n - 2);
  p.omega_ = sphere_area(n);
  p.kappa_ = std::ldexp(1.0, -(n - 1));
  p.b2_ = (n - 1) / 6.0;
  return p;
}

DensityProfile make_damek_ricci(int m, int k) {
  if (m < 1 || k < 1)
    fail(ErrorKind::invalid_dimension, "Damek-Ricci profile needs m, k >= 1");
  DensityProfile p;
  p.name_ = "DR(" + std::to_string(m) + "," + std::to_string(k) + ")";
  p.kind_ = ProfileKind::damek_ricci;
  p.m_ = m;
  p.k_ = k;
  p.dim_n_ = m + k + 1;
  p.rho_ = (m + 2.0 * k) / 4.0;
  p.alpha_ = 0.5 * (m + k - 1);
  p.omega_ = sphere_area(m + k + 1);
  p.kappa_ = std::ldexp(1.0, -k);
  p.b2_ = (m + k) / 24.0 + k / 8.0;
  return p;
}

DensityProfile make_custom(std::string name, std::span<const double> r,
                           std::span<const double> log_a, std::optional<double> alpha,
                           std::optional<double> rho_hint) {
  require(r.size() == log_a.size(), "custom profile: r and log A columns differ in length");
  require(r.size() >= 4, "custom profile: need at least four table rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i]) || !std::isfinite(log_a[i])) {
      std::ostringstream os;
      os << "custom profile: invalid table row " << i << " (r=" << r[i] << ")";
      fail(ErrorKind::profile_evaluation, os.str());
    }
  }
  DensityProfile p;
  p.name_ = std::move(name);
  p.kind_ = ProfileKind::custom;
  const double a = alpha.value_or(
      0.5 * ((log_a[1] - log_a[0]) / (std::log(r[1]) - std::log(r[0])) - 1.0));
  require(a > -0.5, "custom profile: alpha must exceed -1/2");
  p.alpha_ = a;
  p.dim_n_ = static_cast<int>(std::lround(2.0 * a + 2.0));
  p.omega_ = sphere_area(2.0 * a + 2.0);

  auto t = std::make_shared<DensityProfile::Table>();
  t->r.assign(r.begin(), r.end());
  t->log_a.assign(log_a.begin(), log_a.end());
  std::vector<double> lb(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) lb[i] = log_a[i] - (2.0 * a + 1.0) * std::log(r[i]);
  t->log_b = MonotoneCubic(t->r, lb);
  t->slope_front = t->log_b.derivative(t->r.front());
  t->slope_back = t->log_b.derivative(t->r.back());
  p.table_ = std::move(t);

  const double r_end = r.back();
  p.rho_ = rho_hint.value_or(0.5 * p.log_derivative(r_end));
  p.kappa_ = std::exp(log_a.back() - 2.0 * p.rho_ * r_end);
  p.b2_ = p.table_->slope_front / (2.0 * r.front());
  return p;
}

double DensityProfile::table_spacing(double r) const {
  if (!table_) return 0.0;
  const std::vector<double>& t = table_->r;
  if (r < t.front() || r > t.back()) return 0.0;
  auto it = std::upper_bound(t.begin(), t.end(), r);
  if (it == t.end()) --it;
  return *it - *(it - 1);
}

double DensityProfile::log_b(double r) const {
  const Table& t = *table_;
  if (r < t.r.front()) return t.log_b(t.r.front()) + t.slope_front * (r - t.r.front());
  if (r > t.r.back()) return t.log_b(t.r.back()) + t.slope_back * (r - t.r.back());
  return t.log_b(r);
}

double DensityProfile::log_b_derivative(double r) const {
  const Table& t = *table_;
  if (r < t.r.front()) return t.slope_front;
  if (r > t.r.back()) return t.slope_back;
  return t.log_b.derivative(r);
}

double DensityProfile::log_density(double r) const {
  switch (kind_) {
    case ProfileKind::hyperbolic:
      return (dim_n_ - 1) * log_sinh(r);
    case ProfileKind::damek_ricci:
      return (m_ + k_) * (std::numbers::ln2 + log_sinh(0.5 * r)) + k_ * log_cosh(0.5 * r);
    case ProfileKind::custom:
      return (2.0 * alpha_ + 1.0) * std::log(r) + log_b(r);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DensityProfile::density(double r) const {
  if (kind_ == ProfileKind::hyperbolic) return std::pow(std::sinh(r), dim_n_ - 1);
  return std::exp(log_density(r));
}

double DensityProfile::log_derivative(double r) const {
  switch (kind_) {
    case ProfileKind::hyperbolic:
      return (dim_n_ - 1) / std::tanh(r);
    case ProfileKind::damek_ricci: {
      const double h = 0.5 * r;
      return 0.5 * (m_ + k_) / std::tanh(h) + 0.5 * k_ * std::tanh(h);
    }
    case ProfileKind::custom:
      return (2.0 * alpha_ + 1.0) / r + log_b_derivative(r);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DensityProfile::fd_step(double r) {
  return std::min(1e-4 * std::max(1.0, r), 0.25 * r);
}

double DensityProfile::log_second_derivative(double r) const {
  switch (kind_) {
    case ProfileKind::hyperbolic: {
      const double s = std::sinh(r);
      return -(dim_n_ - 1) / (s * s);
    }
    case ProfileKind::damek_ricci: {
      const double s = std::sinh(0.5 * r), c = std::cosh(0.5 * r);
      return -0.25 * (m_ + k_) / (s * s) + 0.25 * k_ / (c * c);
    }
    case ProfileKind::custom: {
      const double h = fd_step(r);
      return -(2.0 * alpha_ + 1.0) / (r * r) +
             (log_b_derivative(r + h) - log_b_derivative(r - h)) / (2.0 * h);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string DensityProfile::spec_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ProfileKind::hyperbolic:
      os << "hyperbolic;n=" << dim_n_;
      break;
    case ProfileKind::damek_ricci:
      os << "damek_ricci;m=" << m_ << ";k=" << k_;
      break;
    case ProfileKind::custom: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", alpha_);
      os << "custom;alpha=" << buf;
      std::snprintf(buf, sizeof buf, "%.17g", rho_);
      os << ";rho=" << buf << ";table=";
      for (std::size_t i = 0; i < table_->r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g:%.17g,", table_->r[i], table_->log_a[i]);
        os << buf;
      }
      break;
    }
  }
  return os.str();
}

double liouville_potential(const DensityProfile& p, double r) {
  const double l = p.log_derivative(r);
  return 0.25 * l * l + 0.5 * p.log_second_derivative(r) - p.rho() * p.rho();
}

namespace {

void check_finite(double value, double r, const char* what) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite " << what << " at r=" << r;
    fail(ErrorKind::profile_evaluation, os.str());
  }
}

// Size of the error in liouville_potential, used to tell genuine tail
// increments from noise. For a table the interpolant's derivative jumps at the
// knots, so a difference quotient over one knot interval is compared with the
// fine one.
double potential_noise(const DensityProfile& p, double r) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double l = p.log_derivative(r);
  const double dl = p.log_second_derivative(r);
  double noise = 4.0 * eps * (0.25 * l * l + 0.5 * std::abs(dl) + p.rho() * p.rho());
  if (p.kind() != ProfileKind::custom) return noise;
  const double h = DensityProfile::fd_step(r);
  noise += 4.0 * eps * std::abs(l) / h;
  const double H = std::min(p.table_spacing(r), 0.25 * r);
  if (H > h) {
    const double coarse = (p.log_derivative(r + H) - p.log_derivative(r - H)) / (2.0 * H);
    noise += 0.5 * std::abs(dl - coarse);
  }
  return noise;
}

}  // namespace

ConditionReport verify_conditions(const DensityProfile& p, double r0, double r1, double R,
                                  double tol) {
  require(r0 > 0.0 && r0 < r1 && r1 < R, "verify_conditions: need 0 < r0 < r1 < R");
  require(tol > 0.0, "verify_conditions: tol must be positive");
  ConditionReport rep;

  // Geometric sampling of [r0, R].
  constexpr int samples = 4000;
  std::vector<double> rs(samples + 1), la(samples + 1), ld(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    rs[i] = i == samples ? R : r0 * std::pow(R / r0, static_cast<double>(i) / samples);
    la[i] = p.log_density(rs[i]);
    ld[i] = p.log_derivative(rs[i]);
    check_finite(la[i], rs[i], "log A");
    check_finite(ld[i], rs[i], "A'/A");
  }

  // C1
  bool increasing = true;
  for (int i = 1; i <= samples; ++i) increasing = increasing && la[i] > la[i - 1];
  rep.c1_ok = increasing;

  // C2
  bool non_increasing = true;
  double worst_rise = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double rise = ld[i] - ld[i - 1];
    worst_rise = std::max(worst_rise, rise);
    if (rise > std::max(1e-10, tol) * std::max(1.0, std::abs(ld[i - 1]))) non_increasing = false;
  }
  const double l_end = ld[samples];
  const double l_back = p.log_derivative(0.75 * R);
  rep.rho_estimate = 0.5 * l_end;
  const double settle = std::abs(l_end - l_back);
  rep.c2_ok = non_increasing && p.rho() > 0.0 && rep.rho_estimate > 10.0 * tol &&
              settle < 10.0 * tol && std::abs(rep.rho_estimate - p.rho()) < 10.0 * tol;
  rep.details["c2_max_rise"] = worst_rise;
  rep.details["c2_limit_drift"] = settle;
  rep.details["c2_rho_residual"] = std::abs(rep.rho_estimate - p.rho());

  // C3 via Richardson extrapolation of B(r) = A(r) / r^{2 alpha + 1} to r = 0.
  double rc = 1e-2;
  if (p.kind() == ProfileKind::custom) rc = std::max(rc, 2.0 * p.table_start());
  const auto log_b = [&](double r) {
    return p.log_density(r) - (2.0 * p.alpha() + 1.0) * std::log(r);
  };
  const double b0 = (4.0 * std::exp(log_b(0.5 * rc)) - std::exp(log_b(rc))) / 3.0;
  check_finite(b0, rc, "A / r^(2 alpha + 1)");
  rep.details["c3_b0"] = b0;
  rep.c3_ok = std::abs(b0 - 1.0) < 10.0 * tol;

  // C4
  double g_sup = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double g = liouville_potential(p, rs[i]);
    check_finite(g, rs[i], "G");
    g_sup = std::max(g_sup, std::abs(g));
  }
  rep.g_sup = g_sup;

  const GaussLegendreRule gl = gauss_legendre(16);
  struct Window {
    double a, b, value, noise;
  };
  std::vector<Window> windows;
  for (double a = r1; a < R; a *= 2.0) {
    const double b = std::min(2.0 * a, R);
    double value = 0.0, noise = 0.0;
    constexpr int panels = 8;
    for (int q = 0; q < panels; ++q) {
      const double pa = a + (b - a) * q / panels;
      const double pb = a + (b - a) * (q + 1) / panels;
      const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
      for (int j = 0; j < 16; ++j) {
        const double r = mid + half * gl.nodes[j];
        const double g = liouville_potential(p, r);
        check_finite(g, r, "G");
        value += half * gl.weights[j] * r * std::abs(g);
        noise += half * gl.weights[j] * r * potential_noise(p, r);
      }
    }
    windows.push_back({a, b, value, noise});
  }
  double total = 0.0;
  for (const Window& w : windows) total += w.value;
  rep.g_integral = total;

  bool converging = std::isfinite(total);
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < windows.size(); ++i) {
    const Window& prev = windows[i - 1];
    const Window& cur = windows[i];
    if (prev.a < R / 8.0 || cur.b - cur.a < cur.a * (1.0 - 1e-12)) continue;
    const bool prev_noise = prev.value < 100.0 * prev.noise + 1e-12;
    const bool cur_noise = cur.value < 100.0 * cur.noise + 1e-12;
    if (cur_noise) continue;
    if (prev_noise) {
      converging = false;  // growth out of the noise floor
      continue;
    }
    const double ratio = cur.value / prev.value;
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio < 0.5)) converging = false;
  }
  rep.c4_ok = converging;
  rep.details["c4_worst_ratio"] = worst_ratio;
  rep.details["c4_last_increment"] = windows.empty() ? 0.0 : windows.back().value;

  // Exponential volume growth band on [1, R].
  double band_lo = std::numeric_limits<double>::infinity(), band_hi = 0.0;
  for (int i = 0; i <= samples; ++i) {
    if (rs[i] < 1.0) continue;
    const double v = std::exp(la[i] - 2.0 * p.rho() * rs[i]);
    band_lo = std::min(band_lo, v);
    band_hi = std::max(band_hi, v);
  }
  if (band_hi > 0.0) {
    rep.details["growth_band_lo"] = band_lo;
    rep.details["growth_band_hi"] = band_hi;
  }
  return rep;
}

}  // namespace radharm
