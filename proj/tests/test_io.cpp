#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "radharm/error.hpp"
#include "radharm/io.hpp"

using namespace radharm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("radharm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

BasisOptions small_grid() {
  BasisOptions o;
  o.r_panels = 24;
  o.order = 8;
  o.lambda_max = 6.0;
  return o;
}

}  // namespace

TEST_CASE("SHA-256 test vectors") {
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("CSV round trip is exact") {
  const fs::path dir = scratch_dir("csv");
  const std::vector<std::vector<double>> rows{{0.1, 1.0 / 3.0, -2.5e-300}, {1e10, std::exp(1.0), 0.0}};
  io::write_csv(dir / "a.csv", {"x", "y", "z"}, rows);
  CHECK(io::read_csv(dir / "a.csv") == rows);
  io::write_text(dir / "bad.csv", "x,y\n1,2\n3,oops\n");
  CHECK_THROWS_AS(io::read_csv(dir / "bad.csv"), Error);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("key=value configuration") {
  std::istringstream in("# profile\nkind = damek_ricci\nm=2\n k = 1 # trailing\n\n");
  const auto kv = io::parse_key_values(in);
  CHECK(kv.at("kind") == "damek_ricci");
  io::ProfileSpec spec;
  io::apply_profile_keys(spec, kv);
  const DensityProfile p = io::make_profile(spec);
  CHECK(p.kind() == ProfileKind::damek_ricci);
  CHECK(p.rho() == doctest::Approx(1.0));

  std::istringstream bad("kind hyperbolic\n");
  CHECK_THROWS_AS(io::parse_key_values(bad), Error);
  spec.kind = "flat";
  CHECK_THROWS_AS(io::make_profile(spec), Error);
}

TEST_CASE("custom table loader") {
  const fs::path dir = scratch_dir("table");
  std::ofstream out(dir / "h3.csv");
  out << "r,logA\n";
  for (int i = 0; i <= 1000; ++i) {
    const double r = i < 140 ? 1e-3 * std::pow(1.05, i) : 1e-3 * std::pow(1.05, 140) + 0.05 * (i - 140);
    out << io::format_double(r) << "," << io::format_double(2.0 * std::log(std::sinh(r))) << "\n";
  }
  out.close();
  const DensityProfile p = io::load_custom_table(dir / "h3.csv");
  CHECK(p.kind() == ProfileKind::custom);
  CHECK(p.rho() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reports serialize deterministically with the documented keys") {
  ChaosVerdict v = classify_chaos(shifted_heat_symbol(1.0, 1.0, 1.0), 4.0);
  OrbitTrace tr;
  tr.norms = {1.0, 0.5};
  const io::Json j = io::to_json(v, &tr);
  for (const char* key : {"classification", "reason", "witnesses", "c_p", "strip_halfwidth", "orbit"})
    CHECK(j.contains(key));
  for (const char* key : {"l1", "l2", "m1_abs", "m2_abs"}) CHECK(j["witnesses"].contains(key));
  CHECK(io::dump(j) == io::dump(io::to_json(v, &tr)));
  CHECK(io::Json::parse(io::dump(j)) == j);

  ConvolutionReport rep;
  rep.r = INFINITY;
  const io::Json c = io::to_json(rep);
  for (const char* key : {"method", "p", "q", "r", "lhs", "rhs", "ratio"}) CHECK(c.contains(key));
  CHECK(c["r"] == "inf");

  const io::Json cond = io::to_json(verify_conditions(make_hyperbolic(3), 1e-3, 1.0, 20.0, 1e-6));
  for (const char* key : {"c1", "c2", "c3", "c4", "rho_estimate", "g_integral", "residuals"})
    CHECK(cond.contains(key));
}

TEST_CASE("radial and spectral series carry a JSON sidecar") {
  const fs::path dir = scratch_dir("series");
  const BasisPtr b = shared_basis(make_hyperbolic(3), small_grid());
  const auto f = testing::gaussian(b);
  io::write_radial(dir / "f.csv", f);
  io::write_spectral(dir / "F.csv", fourier_grid(f));
  const auto rows = io::read_csv(dir / "f.csv");
  REQUIRE(rows.size() == f.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i][1] == f.values[i].real());
  const io::Json side = io::Json::parse(io::read_text(dir / "f.csv.json"));
  CHECK(side["profile"]["hash"] == io::profile_hash(b->profile()));
  CHECK(side["grid"]["r_nodes"] == b->r_size());
  CHECK(side.contains("tolerances"));
  CHECK(io::read_csv(dir / "F.csv").size() == b->lambda_size());
}

TEST_CASE("eigen-table cache round trip and failure modes") {
  const fs::path dir = scratch_dir("cache");
  const DensityProfile p = make_hyperbolic(3);
  const BasisOptions o = small_grid();

  try {
    io::load_basis(p, o, dir);
    FAIL("expected a cache error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cache);
    CHECK(std::string(e.what()).find("--build-cache") != std::string::npos);
  }

  const BasisPtr built = io::obtain_basis(p, o, dir, true);
  const BasisPtr loaded = io::load_basis(p, o, dir);
  REQUIRE(loaded->lambda_size() == built->lambda_size());
  CHECK(std::equal(built->phi_matrix().begin(), built->phi_matrix().end(),
                   loaded->phi_matrix().begin()));
  CHECK(built->c_table().plancherel == loaded->c_table().plancherel);
  CHECK(built->lambda_measure()[3] == loaded->lambda_measure()[3]);

  BasisOptions other = o;
  other.lambda_max = 7.0;
  CHECK_THROWS_AS(io::load_basis(p, other, dir), Error);
  CHECK(io::cache_key(p, o) != io::cache_key(p, other));

  const fs::path phi = dir / io::cache_key(p, o) / "phi.csv";
  io::write_text(phi, io::read_text(phi) + "0,0,0,0\n");
  try {
    io::load_basis(p, o, dir);
    FAIL("expected a checksum error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cache);
  }
  CHECK_NOTHROW(io::obtain_basis(p, o, dir, true));
  CHECK_NOTHROW(io::load_basis(p, o, dir));
}
