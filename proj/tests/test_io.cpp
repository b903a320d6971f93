#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "krein/io.hpp"
#include "oracle.hpp"

using namespace krein;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("krein_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("matrix text format: bit-exact round trip") {
  SplitMix64 rng(12);
  Matrix m = random_matrix(rng, 5, 3);
  m(0, 0) = Complex(1.0 / 3.0, -2.0e-300);
  m(4, 2) = Complex(0.0, 0.1);
  std::stringstream ss;
  write_matrix(ss, m);
  Matrix back = read_matrix(ss, "buffer");
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 3);
  CHECK(fingerprint(back) == fingerprint(m));
}

TEST_CASE("matrix text format: file round trip and parse errors") {
  TempDir dir;
  SplitMix64 rng(13);
  Matrix m = random_hermitian(rng, 4);
  write_matrix(dir.file("m.txt"), m);
  CHECK(fingerprint(read_matrix(dir.file("m.txt"))) == fingerprint(m));

  CHECK_THROWS_WITH_AS(read_matrix(dir.file("missing.txt")),
                       doctest::Contains("ConfigParse"), Error);
  std::stringstream bad_header("0 2\n");
  CHECK_THROWS_WITH_AS(read_matrix(bad_header, "buffer"),
                       doctest::Contains("ConfigParse"), Error);
  std::stringstream truncated("2 2\n1 0 2 0\n");
  CHECK_THROWS_WITH_AS(read_matrix(truncated, "buffer"),
                       doctest::Contains("ConfigParse"), Error);
}

TEST_CASE("config parser: full valid file") {
  std::stringstream ss(R"(# comment
[model]
kind = lattice
n_sites = 32
coupling_sites = 10, 21
coupling = 0.75
seed = 3

[family]
kind = perturbed
weyl = canonical

[command]
grid = -5, 5, -4, 4, 81, 61
interval = -2, 0
z = 0.5, 2.5
samples = 40
pairs = 10
seed = 9
rcond_threshold = 1e-7
identity_tolerance = 1e-8

[tolerances]
identity = 1e-10
rcond = 1e-9
)");
  RunConfig config = parse_config(ss);
  CHECK(config.recipe.kind == ModelKind::LatticeLaplacian1D);
  CHECK(config.recipe.n_sites == 32);
  REQUIRE(config.recipe.coupling_sites.size() == 2);
  CHECK(config.recipe.coupling_sites[0] == 10);
  CHECK(config.recipe.coupling_sites[1] == 21);
  CHECK(config.recipe.coupling == 0.75);
  CHECK(config.recipe.seed == 3);
  CHECK(config.recipe.family == QFamilyTag::Perturbed);
  CHECK(config.recipe.weyl_variant == WeylVariant::Canonical);
  CHECK(config.grid.set);
  CHECK(config.grid.re0 == -5.0);
  CHECK(config.grid.nx == 81);
  CHECK(config.grid.ny == 61);
  CHECK(config.interval.set);
  CHECK(config.interval.a == -2.0);
  CHECK(config.z_set);
  CHECK(config.z == Complex(0.5, 2.5));
  CHECK(config.samples == 40);
  CHECK(config.pairs == 10);
  CHECK(config.cmd_seed == 9);
  CHECK(config.rcond_threshold == 1e-7);
  CHECK(config.identity_tolerance == 1e-8);
  CHECK(config.tol.identity == 1e-10);
  CHECK(config.tol.rcond == 1e-9);
  CHECK(config.recipe.tol.rcond == 1e-9);  // propagated into the recipe
}

TEST_CASE("config parser: rejections") {
  auto reject = [](const char* text, const char* needle) {
    std::stringstream ss(text);
    CHECK_THROWS_WITH_AS(parse_config(ss), doctest::Contains(needle), Error);
  };
  reject("[model]\nflavor = chocolate\n", "unknown key model.flavor");
  reject("[physics]\nc = 1\n", "unknown section");
  reject("kind = random\n", "inside a section");
  reject("[tolerances]\nidentity = 2\n", "(0, 1)");
  reject("[tolerances]\nidentity = -1e-9\n", "(0, 1)");
  reject("[model]\nn_h = eight\n", "bad number");
  reject("[command]\ngrid = 1, 2, 3\n", "grid needs");
  reject("[family]\nkind = cayley\n", "unknown family.kind");
}

TEST_CASE("make_instance: generated recipe honors the config") {
  std::stringstream ss(R"([model]
kind = random
seed = 7
n_h = 6
n_k = 2
[family]
kind = alpha
)");
  RunConfig config = parse_config(ss);
  auto [model, family] = make_instance(config);
  auto [expected, fam2] = oracle::seed7_model();
  CHECK(fingerprint(model.a0) == fingerprint(expected.a0));
  CHECK(fingerprint(model.tau) == fingerprint(expected.tau));
}

TEST_CASE("make_instance: explicit matrices from files") {
  TempDir dir;
  auto [pinned, fam_pinned] = oracle::diag12_model(0.5);
  write_matrix(dir.file("a0.txt"), pinned.a0);
  write_matrix(dir.file("tau.txt"), pinned.tau);
  write_matrix(dir.file("alpha.txt"), fam_pinned.alpha);

  std::stringstream ss("[model]\nkind = files\na0_file = " + dir.file("a0.txt") +
                       "\ntau_file = " + dir.file("tau.txt") +
                       "\n[family]\nkind = alpha\nalpha_file = " +
                       dir.file("alpha.txt") + "\n");
  RunConfig config = parse_config(ss);
  auto [model, family] = make_instance(config);
  CHECK((model.a0 - pinned.a0).norm() == 0.0);
  CHECK((family.alpha - fam_pinned.alpha).norm() == 0.0);
  ReconstructedOperator recon =
      reconstruct_operator(model, family, Complex(0, 3), Complex(1.5, 2));
  CHECK(std::abs(recon.evals[0] - 0.5) <= 1e-10);

  SUBCASE("missing family matrix is rejected") {
    std::stringstream bad("[model]\nkind = files\na0_file = " +
                          dir.file("a0.txt") + "\ntau_file = " +
                          dir.file("tau.txt") + "\n[family]\nkind = alpha\n");
    RunConfig c2 = parse_config(bad);
    CHECK_THROWS_WITH_AS(make_instance(c2), doctest::Contains("alpha_file"),
                         Error);
  }
}

TEST_CASE("scan CSV: header and one line per grid point") {
  auto [model, family] = oracle::diag12_model(0.5);
  std::vector<Complex> grid = {Complex(-3, 0), Complex(0, 2), Complex(1, 0)};
  ZQScanResult scan = scan_zq(model, family, grid, 1e-8);
  std::stringstream ss;
  write_scan_csv(ss, scan);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line == "re_z,im_z,sigma_min_Q,rcond_Q,label");
  int rows = 0;
  std::vector<std::string> labels;
  while (std::getline(ss, line)) {
    ++rows;
    labels.push_back(line.substr(line.rfind(',') + 1));
  }
  REQUIRE(rows == 3);
  CHECK(labels[0] == "InZQ");
  CHECK(labels[1] == "InZQ");
  CHECK(labels[2] == "InSpectrumA0");  // z = 1 is an eigenvalue of A0
}

TEST_CASE("report JSON: shape and pass flags") {
  VerificationReport report;
  report.fingerprint = "abc123";
  report.add("Lambda1", 1e-12, 25, 1e-9);
  report.add("inv", 2e-9, 25, 1e-9);
  nlohmann::json j = report_to_json(report);
  CHECK(j["fingerprint"] == "abc123");
  CHECK(j["overall_pass"] == false);
  REQUIRE(j["identities"].size() == 2);
  CHECK(j["identities"][0]["identity"] == "Lambda1");
  CHECK(j["identities"][0]["pass"] == true);
  CHECK(j["identities"][1]["pass"] == false);
  CHECK(j["identities"][1]["max_residual"] == 2e-9);
}

TEST_CASE("format_double: binary64 round trip") {
  for (double x : {1.0 / 3.0, 0.1, -2.0e-300, 1.7976931348623157e308, 0.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}
