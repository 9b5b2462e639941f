// radharm: command-line front end for the radial harmonic analysis library.
//
// Every subcommand prints one JSON report (or writes it to --out) carrying the
// profile hash, grid block and tolerance block. Exit codes: 0 ok, 1 a check
// failed, 2 a numerical flag was raised, 3 usage error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radharm/convolution.hpp"
#include "radharm/corpus.hpp"
#include "radharm/dynamics.hpp"
#include "radharm/error.hpp"
#include "radharm/interp.hpp"
#include "radharm/io.hpp"

using namespace radharm;
using io::Json;

namespace {

enum Exit { exit_ok = 0, exit_check_failed = 1, exit_numerical = 2, exit_usage = 3 };

struct RunConfig {
  std::string config_path;
  io::ProfileSpec profile;
  BasisOptions grid;
  double tail_tol = Tolerances{}.tail_tol;
  std::string cache_dir;
  bool build_cache = false;
  std::uint64_t seed = 1;
  std::string out, csv;
};

// Values given on the command line win over the config file.
struct Flags {
  std::optional<std::string> kind, table;
  std::optional<int> n, m, k;
  std::optional<double> alpha, rho;
  std::optional<double> r_max, lambda_min, lambda_max, lambda_width, rk_tol, tail_tol;
  std::optional<std::size_t> r_panels;
  std::optional<int> order;
  std::optional<unsigned> threads;
  std::optional<std::string> cache_dir;
  std::optional<std::uint64_t> seed;
};

double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::usage, "config key " + key + " expects a number, got '" + v + "'");
}

RunConfig resolve_config(const std::string& config_path, const Flags& f) {
  RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) fail(ErrorKind::usage, "cannot open config file " + config_path);
    const auto kv = io::parse_key_values(in);
    io::apply_profile_keys(cfg.profile, kv);
    for (const auto& [key, value] : kv) {
      if (key == "r_max") cfg.grid.r_max = parse_number(key, value);
      else if (key == "r_panels") cfg.grid.r_panels = static_cast<std::size_t>(parse_number(key, value));
      else if (key == "lambda_min") cfg.grid.lambda_min = parse_number(key, value);
      else if (key == "lambda_max") cfg.grid.lambda_max = parse_number(key, value);
      else if (key == "lambda_width") cfg.grid.lambda_width = parse_number(key, value);
      else if (key == "order") cfg.grid.order = static_cast<int>(parse_number(key, value));
      else if (key == "rk_tol") cfg.grid.rk_tol = parse_number(key, value);
      else if (key == "tail_tol") cfg.tail_tol = parse_number(key, value);
      else if (key == "threads") cfg.grid.threads = static_cast<unsigned>(parse_number(key, value));
      else if (key == "cache_dir") cfg.cache_dir = value;
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number(key, value));
      else if (key != "kind" && key != "n" && key != "m" && key != "k" && key != "table_path" &&
               key != "alpha" && key != "rho")
        fail(ErrorKind::usage, "unknown config key '" + key + "'");
    }
  }
  if (f.kind) cfg.profile.kind = *f.kind;
  if (f.table) cfg.profile.table_path = *f.table;
  if (f.n) cfg.profile.n = *f.n;
  if (f.m) cfg.profile.m = *f.m;
  if (f.k) cfg.profile.k = *f.k;
  if (f.alpha) cfg.profile.alpha = *f.alpha;
  if (f.rho) cfg.profile.rho = *f.rho;
  if (f.r_max) cfg.grid.r_max = *f.r_max;
  if (f.r_panels) cfg.grid.r_panels = *f.r_panels;
  if (f.lambda_min) cfg.grid.lambda_min = *f.lambda_min;
  if (f.lambda_max) cfg.grid.lambda_max = *f.lambda_max;
  if (f.lambda_width) cfg.grid.lambda_width = *f.lambda_width;
  if (f.order) cfg.grid.order = *f.order;
  if (f.rk_tol) cfg.grid.rk_tol = *f.rk_tol;
  if (f.tail_tol) cfg.tail_tol = *f.tail_tol;
  if (f.threads) cfg.grid.threads = *f.threads;
  if (f.cache_dir) cfg.cache_dir = *f.cache_dir;
  if (f.seed) cfg.seed = *f.seed;

  require(cfg.grid.r_max >= 0.0 && cfg.grid.r_panels > 0 && cfg.grid.order > 0,
          "grid sizes must be positive");
  require(cfg.grid.lambda_min > 0.0 && cfg.grid.lambda_max > cfg.grid.lambda_min,
          "need 0 < lambda_min < lambda_max");
  require(cfg.grid.rk_tol > 0.0 && cfg.tail_tol > 0.0, "tolerances must be positive");
  return cfg;
}

Json envelope(const std::string& operation, const DensityProfile& p, const RunConfig& cfg,
              const BasisPtr& basis) {
  Json j{{"operation", operation},
         {"profile", io::profile_block(p)},
         {"tolerances", io::tolerance_block(cfg.grid.rk_tol, cfg.tail_tol)},
         {"seed", cfg.seed},
         {"format_version", io::format_version}};
  if (basis) j["grid"] = io::grid_block(*basis);
  return j;
}

void emit(const RunConfig& cfg, const Json& report) {
  if (cfg.out.empty())
    std::cout << io::dump(report);
  else
    io::write_text(cfg.out, io::dump(report));
}

int status_exit(Json& report, bool ok) {
  report["status"] = ok ? "ok" : "check_failed";
  return ok ? exit_ok : exit_check_failed;
}

// Shared symbol flags for chaos, orbit and resolvent.
struct SymbolFlags {
  std::string kind = "shifted-heat";
  double t = 1.0;
  double c_re = 0.0, c_im = 0.0;
  double z_re = 0.0, z_im = 0.0;
  double value_re = 1.0, value_im = 0.0;
  double cut = 1.0;

  void attach(CLI::App* sub) {
    sub->add_option("--symbol", kind, "heat | shifted-heat | resolvent | constant | step")
        ->check(CLI::IsMember({"heat", "shifted-heat", "resolvent", "constant", "step"}));
    sub->add_option("--t", t, "heat time");
    sub->add_option("--c", c_re, "shift (real part)");
    sub->add_option("--c-im", c_im, "shift (imaginary part)");
    sub->add_option("--z", z_re, "resolvent parameter (real part)");
    sub->add_option("--z-im", z_im, "resolvent parameter (imaginary part)");
    sub->add_option("--value", value_re, "constant symbol (real part)");
    sub->add_option("--value-im", value_im, "constant symbol (imaginary part)");
    sub->add_option("--cut", cut, "step symbol switches sign at |lambda| = cut");
  }

  Symbol make(double rho) const {
    if (kind == "heat") return heat_symbol(rho, t);
    if (kind == "shifted-heat") return shifted_heat_symbol(rho, Complex(c_re, c_im), t);
    if (kind == "resolvent") return resolvent_symbol(rho, Complex(z_re, z_im));
    if (kind == "constant") return constant_symbol(rho, Complex(value_re, value_im));
    return step_symbol(rho, cut);
  }

  Json describe() const {
    Json j{{"kind", kind}};
    if (kind == "heat" || kind == "shifted-heat") j["t"] = io::number(t);
    if (kind == "shifted-heat") j["c"] = io::complex_json(Complex(c_re, c_im));
    if (kind == "resolvent") j["z"] = io::complex_json(Complex(z_re, z_im));
    if (kind == "constant") j["value"] = io::complex_json(Complex(value_re, value_im));
    if (kind == "step") j["cut"] = io::number(cut);
    return j;
  }
};

// Input function: a named family or a CSV of (x, re[, im]) interpolated onto the grid.
struct FunctionFlags {
  std::string name = "gaussian";
  double scale = 1.0;
  std::string input;

  void attach(CLI::App* sub, const std::string& prefix = "") {
    sub->add_option("--" + prefix + "function", name, "gaussian | bump | exp");
    sub->add_option("--" + prefix + "scale", scale, "scale parameter of the named function");
    sub->add_option("--" + prefix + "input", input, "CSV file with columns r, re[, im]");
  }
};

std::vector<Complex> interpolate_rows(const std::vector<std::vector<double>>& rows,
                                      std::span<const double> grid) {
  require(rows.size() >= 2, "input CSV needs at least two rows");
  std::vector<double> x, re, im;
  for (const auto& row : rows) {
    require(row.size() >= 2, "input CSV needs columns x, re[, im]");
    x.push_back(row[0]);
    re.push_back(row[1]);
    im.push_back(row.size() > 2 ? row[2] : 0.0);
  }
  const MonotoneCubic fre(x, re), fim(x, im);
  std::vector<Complex> out;
  for (double g : grid) {
    if (g > x.back()) {
      out.emplace_back();
      continue;
    }
    const double at = std::max(g, x.front());
    out.emplace_back(fre(at), fim(at));
  }
  return out;
}

RadialGridFunction load_function(const FunctionFlags& f, const BasisPtr& basis) {
  if (f.input.empty()) return named_function(basis, f.name, f.scale);
  RadialGridFunction out;
  out.basis = basis;
  out.values = interpolate_rows(io::read_csv(f.input), basis->radial_grid().nodes());
  return out;
}

Json function_json(const FunctionFlags& f) {
  if (!f.input.empty()) return Json{{"input", f.input}};
  return Json{{"name", f.name}, {"scale", io::number(f.scale)}};
}

// ---------------------------------------------------------------------------

int cmd_profile_check(const RunConfig& cfg, double r0, double r1, double R, double tol) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const ConditionReport rep = verify_conditions(p, r0, r1, R, tol);
  Json j = envelope("verify_conditions", p, cfg, nullptr);
  j["grid"] = Json{{"r0", io::number(r0)}, {"r1", io::number(r1)}, {"R", io::number(R)},
                   {"samples", 4000}};
  j["check_tol"] = io::number(tol);
  j["result"] = io::to_json(rep);
  const int code = status_exit(j, rep.all_ok());
  emit(cfg, j);
  return code;
}

int cmd_transform(const RunConfig& cfg, const FunctionFlags& f, bool inverse) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const Tolerances tol{cfg.tail_tol};
  Json j = envelope(inverse ? "inverse_fourier" : "fourier_grid", p, cfg, b);
  j["function"] = function_json(f);
  if (inverse) {
    require(!f.input.empty(), "transform --inverse needs --input with columns lambda, re[, im]");
    SpectralGridFunction F{b, interpolate_rows(io::read_csv(f.input), b->spectral_grid().nodes())};
    const RadialGridFunction u = inverse_fourier(F, tol);
    j["result"] = Json{{"l2_norm", io::number(lp_norm(u, 2.0, tol))}};
    if (!cfg.csv.empty()) io::write_radial(cfg.csv, u, Json{{"operation", "inverse_fourier"}});
  } else {
    const RadialGridFunction u = load_function(f, b);
    const SpectralGridFunction F = fourier_grid(u);
    const RadialGridFunction back = inverse_fourier(F, tol);
    j["result"] = Json{{"l2_norm", io::number(lp_norm(u, 2.0, tol))},
                       {"l1_norm", io::number(lp_norm(u, 1.0, tol))},
                       {"roundtrip_rel_l2", io::number(relative_l2(back, u))},
                       {"lambda_nodes", F.values.size()}};
    if (!cfg.csv.empty()) io::write_spectral(cfg.csv, F, Json{{"operation", "fourier_grid"}});
  }
  j["status"] = "ok";
  emit(cfg, j);
  return exit_ok;
}

int cmd_plancherel(const RunConfig& cfg, std::size_t count, double threshold,
                   double roundtrip_threshold) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const Tolerances tol{cfg.tail_tol};
  const auto corpus = random_gaussians(b, count, cfg.seed);
  double worst = 0.0, worst_rt = 0.0;
  Json rows = Json::array();
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& f = corpus[k];
    const auto& g = corpus[(k + 1) % corpus.size()];
    const double res = std::max(plancherel_check(f, f), plancherel_check(f, g));
    const double rt = relative_l2(inverse_fourier(fourier_grid(f), tol), f);
    worst = std::max(worst, res);
    worst_rt = std::max(worst_rt, rt);
    rows.push_back(Json{{"residual", io::number(res)}, {"roundtrip_rel_l2", io::number(rt)}});
  }
  Json j = envelope("plancherel_check", p, cfg, b);
  j["result"] = Json{{"count", count},
                     {"max_residual", io::number(worst)},
                     {"max_roundtrip_rel_l2", io::number(worst_rt)},
                     {"residual_threshold", io::number(threshold)},
                     {"roundtrip_threshold", io::number(roundtrip_threshold)},
                     {"samples", rows}};
  const int code = status_exit(j, worst < threshold && worst_rt < roundtrip_threshold);
  emit(cfg, j);
  return code;
}

int cmd_convolve(const RunConfig& cfg, const FunctionFlags& ff, const FunctionFlags& gf,
                 const std::string& method, double p_exp, double q_exp) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const Tolerances tol{cfg.tail_tol};
  const RadialGridFunction f = load_function(ff, b).spatial_only();
  const RadialGridFunction g = load_function(gf, b).spatial_only();

  Json j = envelope(method == "spatial" ? "convolve_spatial_hyperbolic" : "convolve_spectral", p,
                    cfg, b);
  j["f"] = function_json(ff);
  j["g"] = function_json(gf);
  std::optional<RadialGridFunction> spectral, spatial;
  if (method != "spatial") spectral = convolve_spectral(f, g, tol);
  if (method != "spectral") {
    if (p.kind() != ProfileKind::hyperbolic)
      fail(ErrorKind::usage, "the spatial route is only available for hyperbolic profiles");
    SpatialOptions so;
    so.threads = cfg.grid.threads;
    spatial = convolve_spatial_hyperbolic(f, g, p.dim_n(), so);
  }
  ConvolutionReport rep = young_check(f, g, p_exp, q_exp);
  rep.method = method;
  Json result = io::to_json(rep);
  if (spectral && spatial) result["two_route_rel_l2"] = io::number(relative_l2(*spatial, *spectral));
  j["result"] = result;
  const RadialGridFunction& h = spectral ? *spectral : *spatial;
  if (!cfg.csv.empty()) io::write_radial(cfg.csv, h, Json{{"operation", j["operation"]}});
  j["status"] = "ok";
  emit(cfg, j);
  return exit_ok;
}

int cmd_young(const RunConfig& cfg, double p_exp, double q_exp, std::size_t count, double slack,
              bool kunze_stein) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const auto corpus = random_gaussians(b, 2 * count, cfg.seed);
  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const ConvolutionReport rep = kunze_stein
                                      ? kunze_stein_check(corpus[2 * k], corpus[2 * k + 1], p_exp)
                                      : young_check(corpus[2 * k], corpus[2 * k + 1], p_exp, q_exp);
    worst = std::max(worst, rep.ratio);
    rows.push_back(io::to_json(rep));
  }
  Json j = envelope(kunze_stein ? "kunze_stein_check" : "young_check", p, cfg, b);
  j["result"] = Json{{"count", count},
                     {"max_ratio", io::number(worst)},
                     {"slack", io::number(slack)},
                     {"reports", rows}};
  if (!cfg.csv.empty()) {
    std::vector<std::vector<double>> csv;
    for (std::size_t k = 0; k < rows.size(); ++k)
      csv.push_back({static_cast<double>(k), rows[k]["ratio"].get<double>()});
    io::write_csv(cfg.csv, {"pair", "ratio"}, csv);
  }
  const int code = status_exit(j, worst <= 1.0 + slack);
  emit(cfg, j);
  return code;
}

RadialGridFunction heat_kernel(const BasisPtr& b, double t, const Tolerances& tol) {
  const Symbol h = heat_symbol(b->profile().rho(), t);
  SpectralGridFunction F{b, {}};
  for (double l : b->spectral_grid().nodes()) F.values.push_back(h(l));
  return inverse_fourier(F, tol);
}

int cmd_heat(const RunConfig& cfg, double t, const std::vector<std::string>& checks,
             double threshold) {
  require(t > 0.0, "heat: t must be positive");
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const Tolerances tol{cfg.tail_tol};
  const RadialGridFunction h = heat_kernel(b, t, tol);
  const RadialGridFunction hs = h.spatial_only();
  const double rho = p.rho();

  Json result{{"t", io::number(t)}, {"threshold", io::number(threshold)}};
  bool ok = true;
  for (const std::string& check : checks) {
    if (check == "mass") {
      double mass = 0.0;
      const auto w = b->r_measure();
      for (std::size_t i = 0; i < hs.size(); ++i) mass += w[i] * hs.values[i].real();
      result["mass"] = io::number(mass);
      ok = ok && std::abs(mass - 1.0) < threshold;
    } else if (check == "symbol") {
      double err = 0.0;
      for (int k = 0; k <= 59; ++k) {
        const double l = 0.1 + 0.1 * k;
        err = std::max(err, std::abs(fourier(hs, l, tol) - std::exp(-t * (l * l + rho * rho))));
      }
      result["symbol_error"] = io::number(err);
      ok = ok && err < threshold;
    } else if (check == "semigroup") {
      const RadialGridFunction half = heat_kernel(b, 0.5 * t, tol).spatial_only();
      const RadialGridFunction sq = convolve_spectral(half, half, tol);
      double err = 0.0;
      for (std::size_t i = 0; i < sq.size(); ++i)
        err = std::max(err, std::abs(sq.values[i] - h.values[i]));
      result["semigroup_sup_error"] = io::number(err);
      ok = ok && err < threshold;
    } else {
      fail(ErrorKind::usage, "unknown heat check '" + check + "' (mass, symbol, semigroup)");
    }
  }
  Json j = envelope("heat_kernel", p, cfg, b);
  j["result"] = result;
  if (!cfg.csv.empty()) io::write_radial(cfg.csv, h, Json{{"operation", "heat_kernel"}, {"t", t}});
  const int code = status_exit(j, ok);
  emit(cfg, j);
  return code;
}

int cmd_resolvent(const RunConfig& cfg, const SymbolFlags& sf, double p_exp, bool search,
                  const ClassifyOptions& co) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const double rho = p.rho();
  Json j = envelope("resolvent", p, cfg, nullptr);
  const Complex z(sf.z_re, sf.z_im);
  Json result{{"p", io::number(p_exp)}};
  if (search) {
    const ResolventSearch s = resolvent_chaotic_z(rho, p_exp, co);
    result["operation"] = "resolvent_chaotic_z";
    result["z"] = io::complex_json(s.z);
    result["candidates_tried"] = s.candidates_tried;
    result["verdict"] = io::to_json(s.verdict);
  } else if (p_exp <= 2.0) {
    const PoleRegion pr = resolvent_pole_region(rho, p_exp, z);
    result["operation"] = "resolvent_pole_region";
    result["z"] = io::complex_json(z);
    result["bounded"] = pr.bounded;
    result["degenerate"] = pr.degenerate;
    result["a"] = io::number(pr.a);
    result["c_p"] = io::number(pr.c_p);
    result["boundary_tau2"] = io::number(pr.boundary_tau2);
    result["distance"] = io::number(pr.distance);
    // The region is decided on tau^2; the same bound read linearly in tau
    // can disagree for negative tau, so both verdicts are reported.
    const bool linear = z.imag() > pr.boundary_tau2;
    result["linear_form_bounded"] = linear;
    result["forms_agree"] = linear == pr.bounded;
  } else {
    result["operation"] = "classify_chaos";
    result["z"] = io::complex_json(z);
    result["verdict"] = io::to_json(classify_chaos(resolvent_symbol(rho, z), p_exp, co));
  }
  j["result"] = result;
  j["status"] = "ok";
  emit(cfg, j);
  return exit_ok;
}

int cmd_chaos(const RunConfig& cfg, const SymbolFlags& sf, double p_exp, const ClassifyOptions& co) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const Symbol m = sf.make(p.rho());
  Json j = envelope("classify_chaos", p, cfg, nullptr);
  j["symbol"] = sf.describe();
  j["p"] = io::number(p_exp);
  Json v = io::to_json(classify_chaos(m, p_exp, co));
  j["result"] = v;
  // flattened for quick inspection
  j["classification"] = v["classification"];
  j["c_p"] = v["c_p"];
  j["status"] = "ok";
  emit(cfg, j);
  return exit_ok;
}

int cmd_orbit(const RunConfig& cfg, const SymbolFlags& sf, const FunctionFlags& ff, double p_exp,
              int steps, std::size_t random_count) {
  const DensityProfile p = io::make_profile(cfg.profile);
  const BasisPtr b = io::obtain_basis(p, cfg.grid, cfg.cache_dir, cfg.build_cache);
  const Tolerances tol{cfg.tail_tol};
  const Symbol m = sf.make(p.rho());

  std::vector<RadialGridFunction> inputs;
  if (random_count > 0)
    inputs = random_gaussians(b, random_count, cfg.seed);
  else
    inputs.push_back(load_function(ff, b));

  Json traces = Json::array();
  bool truncated = false;
  std::vector<std::vector<double>> csv;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const OrbitTrace tr = orbit_simulate(m, inputs[k], p_exp, steps, tol);
    truncated = truncated || tr.truncated;
    bool decreasing = true;
    for (std::size_t n = 1; n < tr.norms.size(); ++n)
      decreasing = decreasing && tr.norms[n] < tr.norms[n - 1];
    Json t = io::to_json(tr);
    t["strictly_decreasing"] = decreasing;
    traces.push_back(t);
    for (std::size_t n = 0; n < tr.norms.size(); ++n)
      csv.push_back({static_cast<double>(k), static_cast<double>(n), tr.norms[n]});
  }
  Json j = envelope("orbit_simulate", p, cfg, b);
  j["symbol"] = sf.describe();
  j["p"] = io::number(p_exp);
  j["steps"] = steps;
  j["function"] = random_count > 0 ? Json{{"random_gaussians", random_count}} : function_json(ff);
  j["result"] = Json{{"orbits", traces}};
  if (!cfg.csv.empty()) {
    if (inputs.size() == 1) {
      for (auto& row : csv) row.erase(row.begin());
      io::write_csv(cfg.csv, {"n", "norm"}, csv);
    } else {
      io::write_csv(cfg.csv, {"function", "n", "norm"}, csv);
    }
  }
  int code = exit_ok;
  if (truncated) {
    j["status"] = "numerical_flag";
    j["reason"] = "truncation";
    code = exit_numerical;
  } else {
    j["status"] = "ok";
  }
  emit(cfg, j);
  return code;
}

int error_exit(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::usage:
    case ErrorKind::invalid_dimension:
    case ErrorKind::io:
      return exit_usage;
    default:
      return exit_numerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial harmonic analysis on spaces with exponential volume growth"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Flags flags;
  RunConfig out_paths;
  bool build_cache = false;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--kind", flags.kind, "hyperbolic | damek_ricci | custom");
  app.add_option("--n", flags.n, "dimension of H^n");
  app.add_option("--m", flags.m, "Damek-Ricci m");
  app.add_option("--k", flags.k, "Damek-Ricci k");
  app.add_option("--table", flags.table, "custom profile CSV (r, logA)");
  app.add_option("--alpha", flags.alpha, "custom profile alpha override");
  app.add_option("--rho", flags.rho, "custom profile rho override");
  app.add_option("--r-max", flags.r_max, "radial grid end (default 25/rho)");
  app.add_option("--r-panels", flags.r_panels, "radial panels");
  app.add_option("--lambda-min", flags.lambda_min, "first spectral break");
  app.add_option("--lambda-max", flags.lambda_max, "spectral cutoff");
  app.add_option("--lambda-width", flags.lambda_width, "largest spectral panel width");
  app.add_option("--order", flags.order, "Gauss-Legendre nodes per panel");
  app.add_option("--rk-tol", flags.rk_tol, "ODE tolerance");
  app.add_option("--tail-tol", flags.tail_tol, "tolerated share in the last panel");
  app.add_option("--threads", flags.threads, "worker threads (0 = all cores)");
  app.add_option("--cache-dir", flags.cache_dir, "directory for cached eigen-tables");
  app.add_flag("--build-cache", build_cache, "build the cache when missing or stale");
  app.add_option("--seed", flags.seed, "seed for random corpora");
  app.add_option("--out", out_paths.out, "write the JSON report here instead of stdout");
  app.add_option("--csv", out_paths.csv, "write the data series here");

  double r0 = 1e-3, r1 = 1.0, R = 30.0, check_tol = 1e-6;
  auto* profile_check = app.add_subcommand("profile-check", "verify the density conditions");
  profile_check->add_option("--r0", r0, "smallest sampled radius");
  profile_check->add_option("--r1", r1, "start of the potential integral");
  profile_check->add_option("--R", R, "largest sampled radius");
  profile_check->add_option("--tol", check_tol, "tolerance of the checks");

  FunctionFlags tf;
  bool inverse = false;
  auto* transform = app.add_subcommand("transform", "radial Fourier transform of a function");
  tf.attach(transform);
  transform->add_flag("--inverse", inverse, "treat --input as (lambda, re, im) and invert");

  std::size_t pl_count = 10;
  double pl_threshold = 1e-4, pl_rt = 1e-3;
  auto* plancherel = app.add_subcommand("plancherel", "Plancherel identity on a seeded corpus");
  plancherel->add_option("--count", pl_count, "number of random functions");
  plancherel->add_option("--threshold", pl_threshold, "largest admissible residual");
  plancherel->add_option("--roundtrip-threshold", pl_rt, "largest admissible round-trip error");

  FunctionFlags cf, cg;
  cg.name = "bump";
  cg.scale = 2.0;
  std::string method = "spectral";
  double cp = 1.0, cq = 1.0;
  auto* convolve = app.add_subcommand("convolve", "convolution of two radial functions");
  cf.attach(convolve, "f-");
  cg.attach(convolve, "g-");
  convolve->add_option("--method", method, "spectral | spatial | both")
      ->check(CLI::IsMember({"spectral", "spatial", "both"}));
  convolve->add_option("--p", cp, "exponent of f in the Young report");
  convolve->add_option("--q", cq, "exponent of g in the Young report");

  double yp = 1.0, yq = 1.0, slack = 1e-6;
  std::size_t y_count = 100;
  bool kunze_stein = false;
  auto* young = app.add_subcommand("young", "Young or Kunze-Stein ratios on a seeded corpus");
  young->add_option("--p", yp, "exponent of f");
  young->add_option("--q", yq, "exponent of g");
  young->add_option("--count", y_count, "number of random pairs");
  young->add_option("--slack", slack, "admissible excess over 1");
  young->add_flag("--kunze-stein", kunze_stein, "check ||f*g||_2 <= ||g||_p ||f||_2 instead");

  double heat_t = 1.0, heat_threshold = 1e-3;
  std::vector<std::string> heat_checks;
  auto* heat = app.add_subcommand("heat", "heat kernel and its checks");
  heat->add_option("--t", heat_t, "time");
  heat->add_option("--check", heat_checks, "mass | symbol | semigroup (repeatable)");
  heat->add_option("--threshold", heat_threshold, "tolerance of the checks");

  ClassifyOptions co;
  SymbolFlags rf;
  rf.kind = "resolvent";
  double rp = 4.0;
  bool r_search = false;
  auto* resolvent = app.add_subcommand("resolvent", "resolvent pole region or chaos search");
  resolvent->add_option("--z", rf.z_re, "z (real part)");
  resolvent->add_option("--z-im", rf.z_im, "z (imaginary part)");
  resolvent->add_option("--p", rp, "exponent");
  resolvent->add_flag("--search", r_search, "look for a z giving a chaotic resolvent");

  SymbolFlags sf;
  double sp = 4.0;
  auto* chaos = app.add_subcommand("chaos", "classify a multiplier on L^p");
  sf.attach(chaos);
  chaos->add_option("--p", sp, "exponent");
  for (auto* sub : {chaos, resolvent}) {
    sub->add_option("--n-re", co.n_re, "real samples of the strip grid");
    sub->add_option("--n-im", co.n_im, "imaginary samples per half strip");
    sub->add_option("--classify-lambda-max", co.lambda_max, "real extent of the strip grid");
  }

  SymbolFlags of;
  FunctionFlags off;
  double op = 4.0;
  int steps = 50;
  std::size_t o_random = 0;
  auto* orbit = app.add_subcommand("orbit", "norms of T^n f");
  of.attach(orbit);
  off.attach(orbit);
  orbit->add_option("--p", op, "exponent");
  orbit->add_option("--n,--steps", steps, "number of iterations (put the H^n dimension before the subcommand)");
  orbit->add_option("--random", o_random, "use this many seeded random functions instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    RunConfig cfg = resolve_config(config_path, flags);
    cfg.out = out_paths.out;
    cfg.csv = out_paths.csv;
    cfg.build_cache = build_cache;
    if (*profile_check) return cmd_profile_check(cfg, r0, r1, R, check_tol);
    if (*transform) return cmd_transform(cfg, tf, inverse);
    if (*plancherel) return cmd_plancherel(cfg, pl_count, pl_threshold, pl_rt);
    if (*convolve) return cmd_convolve(cfg, cf, cg, method, cp, cq);
    if (*young) return cmd_young(cfg, yp, yq, y_count, slack, kunze_stein);
    if (*heat) return cmd_heat(cfg, heat_t, heat_checks, heat_threshold);
    if (*resolvent) return cmd_resolvent(cfg, rf, rp, r_search, co);
    if (*chaos) return cmd_chaos(cfg, sf, sp, co);
    if (*orbit) return cmd_orbit(cfg, of, off, op, steps, o_random);
  } catch (const Error& e) {
    const int code = error_exit(e);
    const Json j{{"status", code == exit_usage ? "usage_error" : "numerical_flag"},
                 {"reason", to_string(e.kind())},
                 {"message", e.what()}};
    std::cout << io::dump(j);
    std::cerr << "radharm: " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "radharm: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_usage;
}
