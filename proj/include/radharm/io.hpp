#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "radharm/convolution.hpp"
#include "radharm/density.hpp"
#include "radharm/dynamics.hpp"
#include "radharm/radial.hpp"

namespace radharm::io {

using Json = nlohmann::json;

inline constexpr int format_version = 1;

std::string sha256_hex(std::string_view data);

/// printf("%.17g"); used for every CSV number.
std::string format_double(double x);

/// Finite values become numbers, others the strings "inf", "-inf", "nan".
Json number(double x);
Json complex_json(Complex z);

/// Key-sorted JSON with two-space indentation and a trailing newline.
std::string dump(const Json& j);

std::string profile_hash(const DensityProfile& p);
Json profile_block(const DensityProfile& p);
Json grid_block(const SpectralBasis& b);
Json tolerance_block(double rk_tol, double tail_tol);

Json to_json(const ConditionReport& rep);
Json to_json(const ConvolutionReport& rep);
Json to_json(const OrbitTrace& trace);
/// The orbit, when given, is stored under "orbit" as the list of norms.
Json to_json(const ChaosVerdict& v, const OrbitTrace* orbit = nullptr);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// CSV with a header row; each row holds `header.size()` numbers.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
/// Numeric rows of a CSV file; a non-numeric first line is taken as a header.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path);

/// (r, re, im) rows plus a JSON sidecar `<path>.json`.
void write_radial(const std::filesystem::path& path, const RadialGridFunction& f,
                  const Json& extra = {});
/// (lambda, re, im, plancherel) rows plus a JSON sidecar.
void write_spectral(const std::filesystem::path& path, const SpectralGridFunction& F,
                    const Json& extra = {});

struct ProfileSpec {
  std::string kind = "hyperbolic";
  int n = 3;
  int m = 0, k = 0;
  std::string table_path;
  std::optional<double> alpha, rho;
};

/// `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);
/// Overwrites fields of `spec` present in `kv`.
void apply_profile_keys(ProfileSpec& spec, const std::map<std::string, std::string>& kv);
DensityProfile make_profile(const ProfileSpec& spec);
/// Two-column CSV (r, log A) with an optional header row.
DensityProfile load_custom_table(const std::filesystem::path& path,
                                 std::optional<double> alpha = {},
                                 std::optional<double> rho = {});

/// SHA-256 of the basis identity and the format version.
std::string cache_key(const DensityProfile& p, const BasisOptions& options);

/// Writes header.json, phi.csv, phi0.csv and c_table.csv under dir/<key>/.
std::filesystem::path save_basis(const SpectralBasis& b, const std::filesystem::path& dir);

/// Loads a cached basis; throws ErrorKind::cache when it is missing, stale or
/// corrupt.
BasisPtr load_basis(const DensityProfile& p, const BasisOptions& options,
                    const std::filesystem::path& dir);

/// Empty dir: in-memory basis. Otherwise load from the cache, or build and
/// save it when `build` is set.
BasisPtr obtain_basis(const DensityProfile& p, const BasisOptions& options,
                      const std::filesystem::path& dir, bool build);

}  // namespace radharm::io
