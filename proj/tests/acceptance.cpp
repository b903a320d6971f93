// Acceptance gate: one pass/fail line per criterion, pinned tolerances,
// wall-clock budgets enforced. Takes the CLI binary path as argv[1]
// (criteria 7 and 8 exercise the command-line front end).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "krein/io.hpp"

using namespace krein;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<Criterion> results;

template <class F>
void run_criterion(int id, const std::string& name, double budget_seconds,
                   F&& body) {
  Criterion c{id, name};
  auto t0 = Clock::now();
  try {
    c.pass = body(c.detail);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_seconds > 0.0 && c.seconds > budget_seconds) {
    c.pass = false;
    c.detail += " [over budget of " + format_double(budget_seconds) + " s]";
  }
  results.push_back(c);
  std::printf("criterion %d (%s): %s  (%.2f s%s%s)\n", c.id, c.name.c_str(),
              c.pass ? "PASS" : "FAIL", c.seconds, c.detail.empty() ? "" : "; ",
              c.detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// Model zoo: 15 random Hermitian instances (n_H in {4, 8, 16, 32, 64} x
// seeds {7, 101, 2026}, n_K cycling 1..3) and 5 lattice instances.
// ---------------------------------------------------------------------------

std::vector<ModelRecipe> model_zoo() {
  std::vector<ModelRecipe> zoo;
  int nk_cycle[3] = {1, 2, 3};
  int idx = 0;
  for (int n_h : {4, 8, 16, 32, 64})
    for (std::uint64_t seed : {7ULL, 101ULL, 2026ULL}) {
      ModelRecipe r;
      r.kind = ModelKind::RandomHermitian;
      r.seed = seed;
      r.n_h = n_h;
      r.n_k = nk_cycle[idx++ % 3];
      zoo.push_back(r);
    }
  struct LatticeSpec {
    int n;
    std::vector<int> sites;
  };
  for (const auto& spec : std::vector<LatticeSpec>{
           {8, {4}}, {16, {8}}, {32, {16}}, {16, {4, 11}}, {32, {10, 21}}}) {
    ModelRecipe r;
    r.kind = ModelKind::LatticeLaplacian1D;
    r.n_sites = spec.n;
    r.coupling_sites = spec.sites;
    r.coupling = 1.0;
    zoo.push_back(r);
  }
  return zoo;
}

const QFamilyTag kAllTags[] = {QFamilyTag::ProjectorTheta, QFamilyTag::AlphaType,
                               QFamilyTag::VWType, QFamilyTag::Perturbed};

std::pair<ExtensionModel, QFamily> instance(const ModelRecipe& base,
                                            QFamilyTag tag) {
  ModelRecipe r = base;
  r.family = tag;
  return generate(r);
}

Complex upper_point(const ExtensionModel& model, SplitMix64& rng) {
  double lo = model.evals.minCoeff() - 2.0;
  double hi = model.evals.maxCoeff() + 2.0;
  return {rng.uniform(lo, hi), rng.uniform(0.3, 4.0)};
}

// ---------------------------------------------------------------------------
// Criteria 1-6: library-level properties on the zoo.
// ---------------------------------------------------------------------------

bool criterion_gamma_weyl(std::string& detail) {
  double worst = 0.0;
  for (const auto& recipe : model_zoo()) {
    auto [model, family] = instance(recipe, QFamilyTag::AlphaType);
    SplitMix64 rng(recipe.seed ^ 0xabcdULL);
    for (int p = 0; p < 100; ++p) {
      Complex z = upper_point(model, rng);
      Complex w = std::conj(upper_point(model, rng));
      auto [gzw, gzwp] = check_gamma_identities(model, z, w);
      Matrix mz = weyl(model, z).m;
      Matrix mw = weyl(model, w).m;
      double w_sym =
          relative_residual(mz.adjoint(), weyl(model, std::conj(z)).m);
      double w_diff = relative_residual(
          mz - mw, (z - w) * (gamma_adjoint_bar(model, w) * gamma(model, z).g));
      worst = std::max({worst, gzw, gzwp, w_sym, w_diff});
    }
  }
  detail = "max residual " + format_double(worst);
  return worst <= 1e-10;
}

bool criterion_q_axioms(std::string& detail) {
  double worst_m2 = 0.0, worst_m1 = 0.0;
  int m1_points[4] = {0, 0, 0, 0};
  int tag_index = 0;
  for (QFamilyTag tag : kAllTags) {
    for (const auto& recipe : model_zoo()) {
      auto [model, family] = instance(recipe, tag);
      auto [veff, weff] = effective_vw(family, model.n_k());
      SplitMix64 rng(recipe.seed ^ 0x0f0fULL);
      for (int p = 0; p < 10; ++p) {
        Complex z = upper_point(model, rng);
        Complex w = std::conj(upper_point(model, rng));
        Matrix qz = build_q(model, family, z).q;
        Matrix qw = build_q(model, family, w).q;
        Matrix rhs = qw + (z - w) * (veff * gamma_adjoint_bar(model, w) *
                                     gamma(model, z).g * weff);
        worst_m2 = std::max(worst_m2, relative_residual(qz, rhs));
      }
      auto points = sample_zq_points(model, family, 3, recipe.seed ^ 0x11ULL);
      for (Complex z : points) {
        Complex w = std::conj(upper_point(model, rng));
        auto [m2, m1] = check_q_axioms(model, family, z, w);
        worst_m2 = std::max(worst_m2, m2);
        worst_m1 = std::max(worst_m1, m1);
        ++m1_points[tag_index];
      }
    }
    ++tag_index;
  }
  for (int count : m1_points)
    if (count < 50) {
      detail = "fewer than 50 (M1) points for a family";
      return false;
    }
  detail = "max (M2) " + format_double(worst_m2) + ", max (M1) " +
           format_double(worst_m1);
  return worst_m2 <= 1e-10 && worst_m1 <= 1e-10;
}

bool criterion_identity_suite(std::string& detail) {
  double worst = 0.0;
  for (QFamilyTag tag : kAllTags)
    for (const auto& recipe : model_zoo()) {
      auto [model, family] = instance(recipe, tag);
      SampleSpec spec{25, recipe.seed ^ 0x1dULL, 1e-9};
      VerificationReport report = identity_suite(model, family, spec);
      for (const auto& e : report.entries) {
        worst = std::max(worst, e.max_residual);
        if (!e.pass) {
          detail = std::string(to_string(tag)) + "/" + e.identity_name +
                   " residual " + format_double(e.max_residual);
          return false;
        }
      }
    }
  detail = "max residual " + format_double(worst);
  return worst <= 1e-9;
}

bool criterion_main_theorem(std::string& detail) {
  for (QFamilyTag tag : kAllTags)
    for (const auto& recipe : model_zoo()) {
      auto [model, family] = instance(recipe, tag);
      VerificationReport report;
      try {
        report =
            verify_main_theorem(model, family, 100, recipe.seed ^ 0x7eULL, 1e-9);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::EmptyZQ) continue;  // hypothesis unmet
        throw;
      }
      for (const auto& e : report.entries)
        if (!e.pass) {
          detail = std::string(to_string(tag)) + "/" + e.identity_name +
                   " residual " + format_double(e.max_residual);
          return false;
        }
    }
  detail = "all entries pass on every instance with nonempty Z_Q";
  return true;
}

bool criterion_oracle_equivalence(std::string& detail) {
  double worst_agree = 0.0, worst_herm = 0.0, worst_ext = 0.0;
  for (QFamilyTag tag : kAllTags)
    for (const auto& recipe : model_zoo()) {
      auto [model, family] = instance(recipe, tag);
      auto refs = sample_zq_points(model, family, 2, recipe.seed ^ 0x55ULL);
      ReconstructedOperator recon =
          reconstruct_operator(model, family, refs[0], refs[1]);
      Matrix aq_oracle = oracle_reconstruct(model, family, refs[0]);
      double scale = std::max(recon.aq_norm(), 1.0);
      worst_agree =
          std::max(worst_agree, (aq_oracle - recon.aq).norm() / scale);
      worst_herm = std::max(worst_herm, recon.herm_residual);
      worst_ext = std::max(worst_ext, recon.extension_residual);
    }
  detail = "agreement " + format_double(worst_agree) + ", hermiticity " +
           format_double(worst_herm) + ", extension " + format_double(worst_ext);
  return worst_agree <= 1e-9 && worst_herm <= 1e-10 && worst_ext <= 1e-10;
}

bool criterion_spectral_demo(std::string& detail) {
  ModelConfig mc;
  mc.a0 = Matrix::Zero(2, 2);
  mc.a0(0, 0) = 1.0;
  mc.a0(1, 1) = 2.0;
  mc.tau = Matrix::Zero(1, 2);
  mc.tau(0, 0) = 1.0;
  mc.v = Matrix::Identity(1, 1);
  mc.w = Matrix::Identity(1, 1);
  ExtensionModel pinned = build_model(mc);
  QFamily pinned_family;
  pinned_family.tag = QFamilyTag::AlphaType;
  pinned_family.alpha = 0.5 * Matrix::Identity(1, 1);
  ReconstructedOperator recon = reconstruct_operator(
      pinned, pinned_family, Complex(0, 3), Complex(1.5, 2));
  double err_pinned = std::abs(recon.evals[0] - 0.5);

  ModelRecipe recipe;
  recipe.kind = ModelKind::LatticeLaplacian1D;
  recipe.n_sites = 32;
  recipe.coupling_sites = {16};
  recipe.coupling = 1.0;
  auto [lattice, lfam] = generate(recipe);
  auto candidates = spectrum_aq_via_q(lattice, lfam, -2.0, 0.0, 256);
  if (candidates.size() != 1) {
    detail = "expected exactly one lattice bound state, found " +
             std::to_string(candidates.size());
    return false;
  }
  detail = "pinned eigenvalue error " + format_double(err_pinned) +
           ", lattice discrepancy " + format_double(candidates[0].discrepancy);
  return err_pinned <= 1e-10 && candidates[0].discrepancy <= 1e-8;
}

// ---------------------------------------------------------------------------
// Criteria 7-8: CLI behaviour.
// ---------------------------------------------------------------------------

std::string g_cli_path;

int run_cli(const std::string& args) {
  std::string cmd = "'" + g_cli_path + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("krein_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const char* name) const { return (path / name).string(); }
};

bool criterion_determinism(std::string& detail) {
  TempDir dir;
  {
    std::ofstream cfg(dir.file("run.cfg"));
    cfg << "[model]\nkind = random\nseed = 11\nn_h = 8\nn_k = 2\n"
        << "[family]\nkind = vw\n"
        << "[command]\ngrid = -5, 5, -5, 5, 21, 21\nsamples = 20\npairs = 8\n";
  }
  std::string cfg = " --config '" + dir.file("run.cfg") + "'";
  for (const char* cmd : {"scan", "verify"}) {
    std::string out1 = dir.file((std::string(cmd) + "1.out").c_str());
    std::string out2 = dir.file((std::string(cmd) + "2.out").c_str());
    int rc1 = run_cli(std::string(cmd) + cfg + " --out '" + out1 + "'");
    int rc2 = run_cli(std::string(cmd) + cfg + " --out '" + out2 + "'");
    if (rc1 != rc2 || rc1 < 0) {
      detail = std::string(cmd) + " exit codes differ or launch failed";
      return false;
    }
    std::string b1 = slurp(out1), b2 = slurp(out2);
    if (b1.empty() || b1 != b2) {
      detail = std::string(cmd) + " outputs are not byte-identical";
      return false;
    }
  }
  detail = "scan and verify outputs byte-identical across repeated runs";
  return true;
}

bool criterion_degeneracy(std::string& detail) {
  TempDir dir;
  // pi = 0 projects onto {0} and theta = 0 is Hermitian but singular, so
  // Q_z = theta is singular everywhere: Z_Q is empty by construction.
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = 2.0;
  Matrix tau = Matrix::Zero(1, 2);
  tau(0, 0) = 1.0;
  write_matrix(dir.file("a0.txt"), a0);
  write_matrix(dir.file("tau.txt"), tau);
  write_matrix(dir.file("pi.txt"), Matrix::Zero(1, 1));
  write_matrix(dir.file("theta.txt"), Matrix::Zero(1, 1));
  {
    std::ofstream cfg(dir.file("degenerate.cfg"));
    cfg << "[model]\nkind = files\na0_file = " << dir.file("a0.txt")
        << "\ntau_file = " << dir.file("tau.txt")
        << "\n[family]\nkind = projector_theta\npi_file = " << dir.file("pi.txt")
        << "\ntheta_file = " << dir.file("theta.txt") << "\n";
  }
  std::string out = dir.file("verify.json");
  int rc = run_cli("verify --config '" + dir.file("degenerate.cfg") +
                   "' --out '" + out + "'");
  if (rc != 2) {
    detail = "expected exit code 2, got " + std::to_string(rc);
    return false;
  }
  std::string body = slurp(out);
  if (body.find("EmptyZQ") == std::string::npos ||
      body.find("inconclusive") == std::string::npos) {
    detail = "output does not report the inconclusive EmptyZQ status";
    return false;
  }
  detail = "exit code 2 with inconclusive EmptyZQ report";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 1;
  }
  g_cli_path = argv[1];

  run_criterion(1, "gamma/Weyl axiom suite", 30.0, criterion_gamma_weyl);
  run_criterion(2, "Q-function axiom suite", 30.0, criterion_q_axioms);
  run_criterion(3, "operator identity suite", 60.0, criterion_identity_suite);
  run_criterion(4, "main theorem verification", 60.0, criterion_main_theorem);
  run_criterion(5, "oracle equivalence", 30.0, criterion_oracle_equivalence);
  run_criterion(6, "spectral correspondence demo", 5.0, criterion_spectral_demo);
  run_criterion(7, "determinism of CLI outputs", 0.0, criterion_determinism);
  run_criterion(8, "degenerate family handling", 0.0, criterion_degeneracy);

  bool all_pass = true;
  for (const auto& c : results) all_pass = all_pass && c.pass;
  std::printf("acceptance: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
