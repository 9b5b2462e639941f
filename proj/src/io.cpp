#include "radharm/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "radharm/error.hpp"

namespace radharm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::invalid_dimension: return "invalid_dimension";
    case ErrorKind::profile_evaluation: return "profile_evaluation";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::propagation: return "propagation";
    case ErrorKind::degenerate_matching: return "degenerate_matching";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::strip: return "strip";
    case ErrorKind::tail: return "tail";
    case ErrorKind::pole: return "pole";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::cache: return "cache";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace radharm

namespace radharm::io {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::io, "SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json complex_json(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string profile_hash(const DensityProfile& p) { return sha256_hex(p.spec_string()); }

Json profile_block(const DensityProfile& p) {
  Json j{{"name", p.name()},
         {"kind", to_string(p.kind())},
         {"hash", profile_hash(p)},
         {"rho", number(p.rho())},
         {"alpha", number(p.alpha())},
         {"kappa", number(p.kappa())}};
  if (p.kind() == ProfileKind::hyperbolic) j["n"] = p.dim_n();
  if (p.kind() == ProfileKind::damek_ricci) {
    j["m"] = p.m();
    j["k"] = p.k();
  }
  return j;
}

Json grid_block(const SpectralBasis& b) {
  const BasisOptions& o = b.options();
  return Json{{"r_max", number(o.r_max)},
              {"r_panels", o.r_panels},
              {"r_nodes", b.r_size()},
              {"lambda_min", number(o.lambda_min)},
              {"lambda_max", number(o.lambda_max)},
              {"lambda_width", number(o.lambda_width)},
              {"lambda_nodes", b.lambda_size()},
              {"order", o.order}};
}

Json tolerance_block(double rk_tol, double tail_tol) {
  return Json{{"rk_tol", number(rk_tol)}, {"tail_tol", number(tail_tol)}};
}

Json to_json(const ConditionReport& rep) {
  Json residuals = Json::object();
  for (const auto& [key, value] : rep.details) residuals[key] = number(value);
  return Json{{"c1", rep.c1_ok},
              {"c2", rep.c2_ok},
              {"c3", rep.c3_ok},
              {"c4", rep.c4_ok},
              {"all_ok", rep.all_ok()},
              {"rho_estimate", number(rep.rho_estimate)},
              {"g_integral", number(rep.g_integral)},
              {"g_sup", number(rep.g_sup)},
              {"residuals", residuals}};
}

Json to_json(const ConvolutionReport& rep) {
  return Json{{"method", rep.method},      {"p", number(rep.p)},
              {"q", number(rep.q)},        {"r", number(rep.r)},
              {"lhs", number(rep.lhs_norm)}, {"rhs", number(rep.rhs_bound)},
              {"ratio", number(rep.ratio)}};
}

Json to_json(const OrbitTrace& trace) {
  Json norms = Json::array(), logs = Json::array();
  for (double x : trace.norms) norms.push_back(number(x));
  for (double x : trace.log_norms) logs.push_back(number(x));
  return Json{{"norms", norms},
              {"log_norms", logs},
              {"truncated", trace.truncated},
              {"message", trace.message}};
}

Json to_json(const ChaosVerdict& v, const OrbitTrace* orbit) {
  Json j{{"classification", to_string(v.classification)},
         {"reason", v.reason},
         {"c_p", number(v.c_p)},
         {"strip_halfwidth", number(v.strip_halfwidth)},
         {"sup_abs", number(v.sup_abs)},
         {"inf_abs", number(v.inf_abs)},
         {"holomorphy_assumed", v.holomorphy_assumed},
         {"witnesses", nullptr}};
  if (v.witnesses)
    j["witnesses"] = Json{{"l1", complex_json(v.witnesses->l1)},
                          {"l2", complex_json(v.witnesses->l2)},
                          {"m1_abs", number(v.witnesses->m1_abs)},
                          {"m2_abs", number(v.witnesses->m2_abs)}};
  if (v.classification == ChaosClass::chaotic_after_scaling) j["nu"] = complex_json(v.nu);
  if (orbit) {
    Json norms = Json::array();
    for (double x : orbit->norms) norms.push_back(number(x));
    j["orbit"] = norms;
  }
  return j;
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out.push_back(',');
    out += header[k];
  }
  out.push_back('\n');
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out.push_back(',');
      const int n = std::snprintf(buf, sizeof buf, "%.17g", row[k]);
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<std::vector<double>> parse_csv(std::string_view text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    while (true) {
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      const std::size_t comma = line.find(',');
      std::string_view field = line.substr(0, comma);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double x = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        numeric = false;
        break;
      }
      row.push_back(x);
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      fail(ErrorKind::io, origin + ": non-numeric field on line " + std::to_string(line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorKind::io, origin + ": ragged row on line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json sidecar(const BasisPtr& basis, const std::string& domain, const Json& extra) {
  Json j{{"format_version", format_version},
         {"domain", domain},
         {"profile", profile_block(basis->profile())},
         {"grid", grid_block(*basis)},
         {"tolerances", tolerance_block(basis->options().rk_tol, Tolerances{}.tail_tol)}};
  if (extra.is_object())
    for (const auto& [key, value] : extra.items()) j[key] = value;
  return j;
}

fs::path sidecar_path(const fs::path& path) { return fs::path(path.string() + ".json"); }

}  // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  write_text(path, csv_text(header, rows));
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  return parse_csv(read_text(path), path.string());
}

void write_radial(const fs::path& path, const RadialGridFunction& f, const Json& extra) {
  std::vector<std::vector<double>> rows;
  const auto r = f.r_grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    rows.push_back({r[i], f.values[i].real(), f.values[i].imag()});
  write_csv(path, {"r", "re", "im"}, rows);
  write_text(sidecar_path(path), dump(sidecar(f.basis, "r", extra)));
}

void write_spectral(const fs::path& path, const SpectralGridFunction& F, const Json& extra) {
  std::vector<std::vector<double>> rows;
  const auto l = F.lambda_grid();
  const auto& density = F.basis->c_table().plancherel;
  for (std::size_t j = 0; j < F.values.size(); ++j)
    rows.push_back({l[j], F.values[j].real(), F.values[j].imag(), density[j]});
  write_csv(path, {"lambda", "re", "im", "plancherel"}, rows);
  write_text(sidecar_path(path), dump(sidecar(F.basis, "lambda", extra)));
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::usage, "config line " + std::to_string(line_no) + " lacks '='");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_profile_keys(ProfileSpec& spec, const std::map<std::string, std::string>& kv) {
  auto to_int = [](const std::string& key, const std::string& v) {
    int x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(ErrorKind::usage, "config key " + key + " expects an integer, got '" + v + "'");
    return x;
  };
  auto to_double = [](const std::string& key, const std::string& v) {
    double x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(ErrorKind::usage, "config key " + key + " expects a number, got '" + v + "'");
    return x;
  };
  for (const auto& [key, value] : kv) {
    if (key == "kind") spec.kind = value;
    else if (key == "n") spec.n = to_int(key, value);
    else if (key == "m") spec.m = to_int(key, value);
    else if (key == "k") spec.k = to_int(key, value);
    else if (key == "table_path") spec.table_path = value;
    else if (key == "alpha") spec.alpha = to_double(key, value);
    else if (key == "rho") spec.rho = to_double(key, value);
  }
}

DensityProfile make_profile(const ProfileSpec& spec) {
  if (spec.kind == "hyperbolic") return make_hyperbolic(spec.n);
  if (spec.kind == "damek_ricci") return make_damek_ricci(spec.m, spec.k);
  if (spec.kind == "custom") {
    require(!spec.table_path.empty(), "custom profile needs a table path");
    return load_custom_table(spec.table_path, spec.alpha, spec.rho);
  }
  fail(ErrorKind::usage, "unknown profile kind '" + spec.kind + "'");
}

DensityProfile load_custom_table(const fs::path& path, std::optional<double> alpha,
                                 std::optional<double> rho) {
  const auto rows = read_csv(path);
  std::vector<double> r, log_a;
  for (const auto& row : rows) {
    if (row.size() < 2) fail(ErrorKind::io, path.string() + ": expected two columns r, logA");
    r.push_back(row[0]);
    log_a.push_back(row[1]);
  }
  return make_custom(path.stem().string(), r, log_a, alpha, rho);
}

std::string cache_key(const DensityProfile& p, const BasisOptions& options) {
  return sha256_hex(basis_identity(p, resolve(options, p)) +
                    "|format_version=" + std::to_string(format_version));
}

fs::path save_basis(const SpectralBasis& b, const fs::path& dir) {
  const std::string key = cache_key(b.profile(), b.options());
  const fs::path root = dir / key;
  fs::create_directories(root);

  const auto r = b.radial_grid().nodes();
  const auto l = b.spectral_grid().nodes();
  std::vector<std::vector<double>> rows;
  rows.reserve(b.r_size() * b.lambda_size());
  for (std::size_t j = 0; j < b.lambda_size(); ++j)
    for (std::size_t i = 0; i < b.r_size(); ++i) rows.push_back({l[j], r[i], b.phi(j, i), 0.0});
  const std::string phi = csv_text({"lambda", "r", "re_phi", "im_phi"}, rows);

  rows.clear();
  for (std::size_t i = 0; i < b.r_size(); ++i) rows.push_back({r[i], b.phi0()[i]});
  const std::string phi0 = csv_text({"r", "phi0"}, rows);

  rows.clear();
  const CFunctionTable& c = b.c_table();
  for (std::size_t j = 0; j < c.lambdas.size(); ++j)
    rows.push_back({c.lambdas[j], c.c_values[j].real(), c.c_values[j].imag(), c.plancherel[j],
                    c.conditioning[j], c.drift[j]});
  const std::string ctab =
      csv_text({"lambda", "re_c", "im_c", "plancherel", "conditioning", "drift"}, rows);

  write_text(root / "phi.csv", phi);
  write_text(root / "phi0.csv", phi0);
  write_text(root / "c_table.csv", ctab);
  const Json header{{"format_version", format_version},
                    {"key", key},
                    {"identity", b.cache_identity()},
                    {"profile", profile_block(b.profile())},
                    {"grid", grid_block(b)},
                    {"tolerances", tolerance_block(b.options().rk_tol, Tolerances{}.tail_tol)},
                    {"C0", number(c.C0)},
                    {"kappa", number(c.kappa)},
                    {"sha256", {{"phi.csv", sha256_hex(phi)},
                                {"phi0.csv", sha256_hex(phi0)},
                                {"c_table.csv", sha256_hex(ctab)}}}};
  write_text(root / "header.json", dump(header));
  return root;
}

BasisPtr load_basis(const DensityProfile& p, const BasisOptions& options, const fs::path& dir) {
  const std::string key = cache_key(p, options);
  const fs::path root = dir / key;
  const std::string rebuild = "; rerun with --build-cache to rebuild it";
  if (!fs::exists(root / "header.json"))
    fail(ErrorKind::cache, "no cached tables for key " + key + " under " + dir.string() + rebuild);
  Json header;
  try {
    header = Json::parse(read_text(root / "header.json"));
  } catch (const Json::exception&) {
    fail(ErrorKind::cache, "unreadable cache header " + (root / "header.json").string() + rebuild);
  }
  if (header.value("format_version", -1) != format_version || header.value("key", "") != key ||
      header.value("identity", "") != basis_identity(p, resolve(options, p)))
    fail(ErrorKind::cache, "cache header does not match the requested configuration" + rebuild);

  auto payload = [&](const char* name) {
    const std::string text = read_text(root / name);
    if (sha256_hex(text) != header["sha256"].value(name, ""))
      fail(ErrorKind::cache, std::string("checksum mismatch in cached ") + name + rebuild);
    return parse_csv(text, (root / name).string());
  };
  const auto phi_rows = payload("phi.csv");
  const auto phi0_rows = payload("phi0.csv");
  const auto c_rows = payload("c_table.csv");

  std::vector<double> phi, phi0;
  phi.reserve(phi_rows.size());
  for (const auto& row : phi_rows) phi.push_back(row.at(2));
  for (const auto& row : phi0_rows) phi0.push_back(row.at(1));
  CFunctionTable c;
  c.profile_id = p.spec_string();
  c.C0 = header.at("C0").get<double>();
  c.kappa = header.at("kappa").get<double>();
  for (const auto& row : c_rows) {
    c.lambdas.push_back(row.at(0));
    c.c_values.emplace_back(row.at(1), row.at(2));
    c.plancherel.push_back(row.at(3));
    c.conditioning.push_back(row.at(4));
    c.drift.push_back(row.at(5));
  }
  try {
    return std::make_shared<const SpectralBasis>(p, options, std::move(phi), std::move(phi0),
                                                 std::move(c));
  } catch (const Error& e) {
    fail(ErrorKind::cache, std::string(e.what()) + rebuild);
  }
}

BasisPtr obtain_basis(const DensityProfile& p, const BasisOptions& options, const fs::path& dir,
                      bool build) {
  if (dir.empty()) return shared_basis(p, options);
  if (!build) return load_basis(p, options, dir);
  try {
    return load_basis(p, options, dir);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::cache) throw;
  }
  BasisPtr b = shared_basis(p, options);
  save_basis(*b, dir);
  return b;
}

}  // namespace radharm::io
