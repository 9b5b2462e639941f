#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radharm/radial.hpp"

namespace radharm {

enum class SymbolKind { heat, shifted_heat, resolvent, custom, step };

const char* to_string(SymbolKind kind);

/// An even multiplier symbol m(lambda) on a horizontal strip.
struct Symbol {
  SymbolKind kind = SymbolKind::custom;
  double rho = 1;
  double t = 0;      // heat, shifted_heat
  Complex c{};       // shifted_heat
  Complex z{};       // resolvent
  double cut = 1.0;  // step: m = -1 for |Re lambda| < cut
  /// Validity bound for |Im lambda|.
  double strip_halfwidth = 0;
  bool continuous = true;
  std::string label;
  std::function<Complex(Complex)> formula;  // custom

  Complex operator()(Complex lambda) const;
};

Symbol heat_symbol(double rho, double t);
Symbol shifted_heat_symbol(double rho, Complex c, double t);
Symbol resolvent_symbol(double rho, Complex z);
/// `formula` must be even; holomorphy on the declared strip is taken on trust.
Symbol custom_symbol(double rho, std::function<Complex(Complex)> formula, double strip_halfwidth,
                     std::string label = "custom", bool continuous = true);
Symbol constant_symbol(double rho, Complex value);
/// -1 on |Re lambda| < cut and +1 elsewhere; discontinuous, real.
Symbol step_symbol(double rho, double cut = 1.0);

/// lambda -> conj(m(conj lambda)).
Symbol dual_symbol(const Symbol& m);

struct StripSpec {
  double p = 2;
  double halfwidth = 0;  // |1 - 2/p| rho
  double gamma_q = 0;    // 1 - 2/q, q the conjugate exponent
};

StripSpec strip_spec(double rho, double p);

struct Threshold {
  double value = 0;
  bool limit = false;  // p = 1 or infinity
};

/// 4 rho^2 / (p q).
Threshold c_threshold(double rho, double p);

struct OpNormBound {
  double bound = 0;         // e^{-c_p t}
  double symbol_value = 0;  // heat symbol at -i gamma_p rho
};

OpNormBound heat_opnorm_bound(double rho, double p, double t);

enum class ChaosClass { chaotic, chaotic_after_scaling, not_chaotic };

const char* to_string(ChaosClass c);

struct Witnesses {
  Complex l1, l2;
  double m1_abs = 0, m2_abs = 0;
};

struct ChaosVerdict {
  ChaosClass classification = ChaosClass::not_chaotic;
  std::string reason;
  std::optional<Witnesses> witnesses;
  Complex nu{1.0, 0.0};  // scaling for chaotic_after_scaling
  double c_p = 0;
  double strip_halfwidth = 0;
  double sup_abs = 0, inf_abs = 0;
  bool holomorphy_assumed = false;
};

struct ClassifyOptions {
  int n_re = 200;
  int n_im = 50;
  double lambda_max = 30.0;
};

ChaosVerdict classify_chaos(const Symbol& m, double p, const ClassifyOptions& options = {});

/// inverse_fourier(m * f^).
RadialGridFunction apply_multiplier(const Symbol& m, const RadialGridFunction& f,
                                    const Tolerances& tol = {});

struct OrbitTrace {
  std::vector<double> norms;      // ||T^n f||_p, n = 0..N (inf when out of range)
  std::vector<double> log_norms;  // natural log of the same
  std::vector<double> growth;     // norms[n] / norms[n-1]
  bool truncated = false;
  std::string message;
};

/// Iterates T = m on the spectral side with a separate log scale so that
/// |m|^n never overflows; norms are computed after synthesis.
OrbitTrace orbit_simulate(const Symbol& m, const RadialGridFunction& f, double p, int N,
                          const Tolerances& tol = {});

struct PeriodicPoint {
  double lambda = 0;
  int n = 0;
};

std::vector<PeriodicPoint> periodic_point_search(const Symbol& m, int n_max,
                                                 double lambda_max = 30.0, int samples = 3001);

struct PoleRegion {
  bool bounded = false;  // z outside the L^p spectrum of the Laplacian
  bool degenerate = false;
  double a = 0;
  double c_p = 0;
  double boundary_tau2 = 0;  // -4 a^2 (sigma + c_p)
  double distance = 0;       // tau^2 - boundary_tau2
};

PoleRegion resolvent_pole_region(double rho, double p, Complex z);

struct ResolventSearch {
  Complex z;
  ChaosVerdict verdict;
  int candidates_tried = 0;
};

ResolventSearch resolvent_chaotic_z(double rho, double p, const ClassifyOptions& options = {},
                                    int budget = 400);

}  // namespace radharm
