#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "krein/models.hpp"

namespace krein {

/// 17 significant digits: round-trip exact for binary64.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Plain-text complex-matrix format: first line "rows cols", then row-major
// "re im" pairs separated by whitespace.
// ---------------------------------------------------------------------------

inline void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << " ";
      os << format_double(m(i, j).real()) << " " << format_double(m(i, j).imag());
    }
    os << "\n";
  }
}

inline void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::ConfigParse, "cannot open " + path + " for writing");
  write_matrix(os, m);
}

inline Matrix read_matrix(std::istream& is, const std::string& what) {
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 1 || cols < 1)
    fail(ErrorKind::ConfigParse, "bad matrix header in " + what);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re, im;
      if (!(is >> re >> im))
        fail(ErrorKind::ConfigParse, "truncated matrix data in " + what);
      m(i, j) = Complex(re, im);
    }
  return m;
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::ConfigParse, "cannot open matrix file " + path);
  return read_matrix(is, path);
}

// ---------------------------------------------------------------------------
// Run configuration: sectioned key-value text file with sections
// [model], [family], [command], [tolerances]. Unknown keys are rejected.
// ---------------------------------------------------------------------------

struct GridSpec {
  double re0 = -5, re1 = 5, im0 = -5, im1 = 5;
  int nx = 41, ny = 41;
  bool set = false;
};

struct IntervalSpec {
  double a = 0, b = 1;
  bool set = false;
};

struct RunConfig {
  bool from_files = false;
  ModelRecipe recipe;

  std::string a0_file, tau_file;
  std::string pi_file, theta_file, alpha_file, v_file, w_file, b_file;

  GridSpec grid;
  IntervalSpec interval;
  int n_grid = 201;
  int samples = 100;
  int pairs = 25;
  std::uint64_t cmd_seed = 1;
  double rcond_threshold = 1e-8;
  Complex z{0.0, 3.0};
  bool z_set = false;
  double identity_tolerance = 1e-9;

  Tolerances tol;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_number_list(const std::string& value,
                                             const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigParse, "bad number '" + item + "' for key " + key);
    }
  }
  if (out.empty()) fail(ErrorKind::ConfigParse, "empty value for key " + key);
  return out;
}

inline double parse_number(const std::string& value, const std::string& key) {
  auto v = parse_number_list(value, key);
  if (v.size() != 1) fail(ErrorKind::ConfigParse, "expected one number for " + key);
  return v[0];
}

}  // namespace detail

inline void apply_config_entry(RunConfig& config, const std::string& section,
                               const std::string& key, const std::string& value) {
  using detail::parse_number;
  using detail::parse_number_list;
  auto number = [&] { return parse_number(value, section + "." + key); };
  auto numbers = [&] { return parse_number_list(value, section + "." + key); };

  if (section == "model") {
    if (key == "kind") {
      if (value == "random") config.recipe.kind = ModelKind::RandomHermitian;
      else if (value == "lattice") config.recipe.kind = ModelKind::LatticeLaplacian1D;
      else if (value == "files") config.from_files = true;
      else fail(ErrorKind::ConfigParse, "unknown model.kind '" + value + "'");
    } else if (key == "seed") config.recipe.seed = static_cast<std::uint64_t>(number());
    else if (key == "n_h") config.recipe.n_h = static_cast<int>(number());
    else if (key == "n_k") config.recipe.n_k = static_cast<int>(number());
    else if (key == "n_sites") config.recipe.n_sites = static_cast<int>(number());
    else if (key == "coupling_sites") {
      config.recipe.coupling_sites.clear();
      for (double s : numbers())
        config.recipe.coupling_sites.push_back(static_cast<int>(s));
    } else if (key == "coupling") config.recipe.coupling = number();
    else if (key == "a0_file") config.a0_file = value;
    else if (key == "tau_file") config.tau_file = value;
    else fail(ErrorKind::ConfigParse, "unknown key model." + key);
    return;
  }
  if (section == "family") {
    if (key == "kind") {
      if (value == "projector_theta") config.recipe.family = QFamilyTag::ProjectorTheta;
      else if (value == "alpha") config.recipe.family = QFamilyTag::AlphaType;
      else if (value == "vw") config.recipe.family = QFamilyTag::VWType;
      else if (value == "perturbed") config.recipe.family = QFamilyTag::Perturbed;
      else fail(ErrorKind::ConfigParse, "unknown family.kind '" + value + "'");
    } else if (key == "weyl") {
      if (value == "direct") config.recipe.weyl_variant = WeylVariant::Direct;
      else if (value == "canonical") config.recipe.weyl_variant = WeylVariant::Canonical;
      else fail(ErrorKind::ConfigParse, "unknown family.weyl '" + value + "'");
    } else if (key == "pi_file") config.pi_file = value;
    else if (key == "theta_file") config.theta_file = value;
    else if (key == "alpha_file") config.alpha_file = value;
    else if (key == "v_file") config.v_file = value;
    else if (key == "w_file") config.w_file = value;
    else if (key == "b_file") config.b_file = value;
    else fail(ErrorKind::ConfigParse, "unknown key family." + key);
    return;
  }
  if (section == "command") {
    if (key == "grid") {
      auto v = numbers();
      if (v.size() != 6) fail(ErrorKind::ConfigParse, "grid needs re0,re1,im0,im1,nx,ny");
      config.grid = {v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                     static_cast<int>(v[5]), true};
    } else if (key == "interval") {
      auto v = numbers();
      if (v.size() != 2) fail(ErrorKind::ConfigParse, "interval needs a,b");
      config.interval = {v[0], v[1], true};
    } else if (key == "z") {
      auto v = numbers();
      if (v.size() != 2) fail(ErrorKind::ConfigParse, "z needs re,im");
      config.z = Complex(v[0], v[1]);
      config.z_set = true;
    } else if (key == "n_grid") config.n_grid = static_cast<int>(number());
    else if (key == "samples") config.samples = static_cast<int>(number());
    else if (key == "pairs") config.pairs = static_cast<int>(number());
    else if (key == "seed") config.cmd_seed = static_cast<std::uint64_t>(number());
    else if (key == "rcond_threshold") config.rcond_threshold = number();
    else if (key == "identity_tolerance") config.identity_tolerance = number();
    else fail(ErrorKind::ConfigParse, "unknown key command." + key);
    return;
  }
  if (section == "tolerances") {
    double v = number();
    if (!(v > 0.0 && v < 1.0))
      fail(ErrorKind::ConfigParse, "tolerances must lie in (0, 1)");
    if (key == "identity") config.tol.identity = v;
    else if (key == "herm") config.tol.herm = v;
    else if (key == "spectral") config.tol.spectral = v;
    else if (key == "rcond") config.tol.rcond = v;
    else if (key == "singular") config.tol.singular = v;
    else fail(ErrorKind::ConfigParse, "unknown key tolerances." + key);
    return;
  }
  fail(ErrorKind::ConfigParse, "unknown section [" + section + "]");
}

inline RunConfig parse_config(std::istream& is) {
  RunConfig config;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = detail::trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos || section.empty())
      fail(ErrorKind::ConfigParse,
           "line " + std::to_string(lineno) + ": expected 'key = value' inside a section");
    apply_config_entry(config, section, detail::trim(t.substr(0, eq)),
                       detail::trim(t.substr(eq + 1)));
  }
  config.recipe.tol = config.tol;
  return config;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::ConfigParse, "cannot open config file " + path);
  return parse_config(is);
}

/// Builds the (model, family) instance a config describes: either a
/// generated recipe or explicit matrices from files.
inline std::pair<ExtensionModel, QFamily> make_instance(const RunConfig& config) {
  if (!config.from_files) {
    ModelRecipe recipe = config.recipe;
    recipe.tol = config.tol;
    return generate(recipe);
  }
  if (config.a0_file.empty() || config.tau_file.empty())
    fail(ErrorKind::ConfigParse, "files model needs a0_file and tau_file");
  ModelConfig mc;
  mc.tol = config.tol;
  mc.a0 = read_matrix(config.a0_file);
  mc.tau = read_matrix(config.tau_file);
  Eigen::Index n_k = mc.tau.rows();
  mc.v = Matrix::Identity(n_k, n_k);
  mc.w = Matrix::Identity(n_k, n_k);
  ExtensionModel model = build_model(mc);

  QFamily family;
  family.tag = config.recipe.family;
  family.weyl_variant = config.recipe.weyl_variant;
  family.z0 = Complex(0.0, 1.0 + model.a0_norm());
  auto require = [&](const std::string& path, const char* key) {
    if (path.empty())
      fail(ErrorKind::ConfigParse, std::string("family needs ") + key);
    return read_matrix(path);
  };
  switch (family.tag) {
    case QFamilyTag::ProjectorTheta:
      family.pi = require(config.pi_file, "pi_file");
      family.theta = require(config.theta_file, "theta_file");
      break;
    case QFamilyTag::AlphaType:
      family.alpha = require(config.alpha_file, "alpha_file");
      break;
    case QFamilyTag::VWType:
      family.v = require(config.v_file, "v_file");
      family.w = require(config.w_file, "w_file");
      break;
    case QFamilyTag::Perturbed:
      family.w = require(config.w_file, "w_file");
      family.b = require(config.b_file, "b_file");
      break;
  }
  validate_family(family, model);
  auto [veff, weff] = effective_vw(family, n_k);
  model.v = veff;
  model.w = weff;
  return {std::move(model), std::move(family)};
}

// ---------------------------------------------------------------------------
// Output serialization
// ---------------------------------------------------------------------------

inline void write_scan_csv(std::ostream& os, const ZQScanResult& scan) {
  os << "re_z,im_z,sigma_min_Q,rcond_Q,label\n";
  for (std::size_t i = 0; i < scan.grid.size(); ++i) {
    os << format_double(scan.grid[i].real()) << ","
       << format_double(scan.grid[i].imag()) << ","
       << format_double(scan.sigma_min_values[i]) << ","
       << format_double(scan.rcond_values[i]) << ","
       << to_string(scan.labels[i]) << "\n";
  }
}

inline nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"identity", e.identity_name},
                       {"max_residual", e.max_residual},
                       {"samples", e.sample_count},
                       {"tolerance", e.tolerance},
                       {"pass", e.pass}});
  }
  return {{"fingerprint", report.fingerprint},
          {"overall_pass", report.overall()},
          {"identities", entries}};
}

}  // namespace krein
