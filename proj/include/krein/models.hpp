#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "krein/krein.hpp"

namespace krein {

enum class ModelKind { RandomHermitian, LatticeLaplacian1D };

/// Deterministic instance recipe. Lattice recipes build the 1D Dirichlet
/// Laplacian with the (-1, 2, -1) stencil; tau picks out the coupling sites.
/// Coupling strengths are per-site in units of the hopping constant.
struct ModelRecipe {
  ModelKind kind = ModelKind::RandomHermitian;
  std::uint64_t seed = 7;

  int n_h = 8;  // random
  int n_k = 2;

  int n_sites = 16;  // lattice
  std::vector<int> coupling_sites = {8};
  double coupling = 1.0;  // lattice alpha per site

  QFamilyTag family = QFamilyTag::AlphaType;
  WeylVariant weyl_variant = WeylVariant::Direct;
  Tolerances tol;
};

namespace detail {

inline Matrix dirichlet_laplacian_1d(int n) {
  Matrix a0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a0(i, i) = 2.0;
    if (i + 1 < n) {
      a0(i, i + 1) = -1.0;
      a0(i + 1, i) = -1.0;
    }
  }
  return a0;
}

/// Empirical sup of ||M_z||_F along the horizontal line Im z = c.
inline double weyl_sup_norm(const ExtensionModel& model, double c,
                            WeylVariant variant, Complex z0) {
  double lo = model.evals.minCoeff() - 1.0;
  double hi = model.evals.maxCoeff() + 1.0;
  double sup = 0.0;
  const int probes = 17;
  for (int j = 0; j < probes; ++j) {
    double x = lo + (hi - lo) * static_cast<double>(j) / (probes - 1);
    sup = std::max(sup, weyl(model, Complex(x, c), variant, z0).m.norm());
  }
  return sup;
}

/// Smallest c in a doubling ladder such that a probe set on the strip
/// |Im z| in [c, c+4] lies entirely in Z_Q with a conditioning margin.
inline double scan_zq_cutoff(const ExtensionModel& model,
                             const QFamily& family) {
  double lo = model.evals.minCoeff() - 1.0;
  double hi = model.evals.maxCoeff() + 1.0;
  for (double c = 1.0; c <= 1024.0; c *= 2.0) {
    bool ok = true;
    for (int j = 0; j < 8 && ok; ++j) {
      double x = lo + (hi - lo) * static_cast<double>(j) / 7;
      for (double y : {c, c + 4.0})
        if (!in_zq(model, family, Complex(x, y), 1e-4)) {
          ok = false;
          break;
        }
    }
    if (ok) return c;
  }
  fail(ErrorKind::InvalidRecipe,
       "generated family has no detectable Z_Q strip");
}

}  // namespace detail

inline std::pair<ExtensionModel, QFamily> generate(const ModelRecipe& recipe) {
  ModelConfig config;
  config.tol = recipe.tol;
  SplitMix64 rng(recipe.seed);

  if (recipe.kind == ModelKind::RandomHermitian) {
    if (recipe.n_h < 1 || recipe.n_k < 1 || recipe.n_k > recipe.n_h)
      fail(ErrorKind::InvalidRecipe, "need 1 <= n_K <= n_H");
    config.a0 = random_hermitian(rng, recipe.n_h);
    config.tau = random_matrix(rng, recipe.n_k, recipe.n_h);
  } else {
    int n = recipe.n_sites;
    if (n < 2) fail(ErrorKind::InvalidRecipe, "lattice needs n_sites >= 2");
    if (recipe.coupling_sites.empty())
      fail(ErrorKind::InvalidRecipe, "lattice needs at least one coupling site");
    std::vector<int> sites = recipe.coupling_sites;
    std::sort(sites.begin(), sites.end());
    if (std::unique(sites.begin(), sites.end()) != sites.end() ||
        sites.front() < 0 || sites.back() >= n)
      fail(ErrorKind::InvalidRecipe, "coupling sites must be distinct and in [0, n_sites)");
    config.a0 = detail::dirichlet_laplacian_1d(n);
    config.tau = Matrix::Zero(static_cast<Eigen::Index>(sites.size()), n);
    for (std::size_t k = 0; k < sites.size(); ++k)
      config.tau(static_cast<Eigen::Index>(k), sites[k]) = 1.0;
  }

  // Placeholder coupling; fixed below once the family is built.
  Eigen::Index n_k = config.tau.rows();
  config.v = Matrix::Identity(n_k, n_k);
  config.w = Matrix::Identity(n_k, n_k);
  ExtensionModel model = build_model(config);

  QFamily family;
  family.tag = recipe.family;
  family.weyl_variant = recipe.weyl_variant;
  family.z0 = Complex(0.0, 1.0 + model.a0_norm());

  // Scale couplings against the empirical Weyl-function sup so the strip
  // |Im z| > 1 stays inside Z_Q (the examples' smallness bound).
  double m1 = detail::weyl_sup_norm(model, 1.0, family.weyl_variant, family.z0);
  Matrix id = Matrix::Identity(n_k, n_k);
  switch (recipe.family) {
    case QFamilyTag::ProjectorTheta: {
      Eigen::Index rank = (n_k + 1) / 2;
      family.pi = Matrix::Zero(n_k, n_k);
      for (Eigen::Index i = 0; i < rank; ++i) family.pi(i, i) = 1.0;
      Matrix h = random_hermitian(rng, n_k);
      family.theta = id + 0.3 * h / std::max(h.norm(), 1e-300);
      break;
    }
    case QFamilyTag::AlphaType: {
      if (recipe.kind == ModelKind::LatticeLaplacian1D) {
        family.alpha = recipe.coupling * id;
      } else {
        Matrix h = random_hermitian(rng, n_k);
        family.alpha = (0.5 / std::max(h.norm() * m1, 1e-300)) * h;
      }
      break;
    }
    case QFamilyTag::VWType: {
      Matrix w0 = random_matrix(rng, n_k, n_k);
      double s = std::sqrt(0.5 / std::max(w0.norm() * w0.norm() * m1, 1e-300));
      family.w = s * w0;
      family.v = family.w.adjoint();  // V := W^* guarantees V^* W^* = W V
      break;
    }
    case QFamilyTag::Perturbed: {
      Matrix h = random_hermitian(rng, n_k);
      double s = std::min(0.4 / std::max(h.norm() * m1, 1e-300), 1.0 / std::max(h.norm(), 1e-300));
      family.w = s * h;
      // B = b0 + b1 W is Hermitian and commutes with W, so B^* W = W^* B.
      family.b = 0.3 * id + 0.1 * family.w;
      break;
    }
  }
  validate_family(family, model);
  family.zq_im_cutoff = detail::scan_zq_cutoff(model, family);

  auto [veff, weff] = effective_vw(family, n_k);
  model.v = veff;
  model.w = weff;
  return {std::move(model), std::move(family)};
}

/// Implementation-independent reconstruction of A_Q: explicit dense
/// inverses all the way down, no shared solver path with the extension
/// module. Test oracle only.
inline Matrix oracle_reconstruct(const ExtensionModel& model,
                                 const QFamily& family, Complex z_probe) {
  const Eigen::Index n = model.n_h();
  const Eigen::Index n_k = model.n_k();
  Matrix id = Matrix::Identity(n, n);
  Matrix id_k = Matrix::Identity(n_k, n_k);

  auto inv = [](const Matrix& m, ErrorKind kind, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) fail(kind, what);
    return Matrix(lu.inverse());
  };

  Matrix r0 = inv(Matrix(-model.a0 + z_probe * id), ErrorKind::SpectrumHit,
                  "z_probe hits spectrum(A0)");
  Matrix r0bar = inv(Matrix(-model.a0 + std::conj(z_probe) * id),
                     ErrorKind::SpectrumHit, "conj(z_probe) hits spectrum(A0)");
  Matrix g = (model.tau * r0bar).adjoint();
  Matrix gbar_adj = model.tau * r0;  // G^*_{conj z}

  auto weyl_at = [&](Complex z) {
    Matrix rzbar = inv(Matrix(-model.a0 + std::conj(z) * id),
                       ErrorKind::SpectrumHit, "weyl point hits spectrum(A0)");
    Matrix gz = (model.tau * rzbar).adjoint();
    if (family.weyl_variant == WeylVariant::Direct)
      return Matrix(-model.tau * gz);
    Matrix rz0bar = inv(Matrix(-model.a0 + std::conj(family.z0) * id),
                        ErrorKind::SpectrumHit, "z0 hits spectrum(A0)");
    Matrix rz0 = inv(Matrix(-model.a0 + family.z0 * id),
                     ErrorKind::SpectrumHit, "z0 hits spectrum(A0)");
    Matrix g0 = (model.tau * rz0bar).adjoint();
    Matrix g0bar = (model.tau * rz0).adjoint();
    return Matrix(model.tau * (0.5 * (g0 + g0bar) - gz));
  };

  Matrix m = weyl_at(z_probe);
  Matrix q, veff, weff;
  switch (family.tag) {
    case QFamilyTag::ProjectorTheta:
      q = family.theta + family.pi * m * family.pi;
      veff = family.pi;
      weff = family.pi;
      break;
    case QFamilyTag::AlphaType:
      q = -(id_k - family.alpha * m);
      veff = family.alpha;
      weff = id_k;
      break;
    case QFamilyTag::VWType:
      q = -(id_k - family.v * m * family.w);
      veff = family.v;
      weff = family.w;
      break;
    case QFamilyTag::Perturbed:
      q = family.b - (id_k - m * family.w);
      veff = id_k;
      weff = family.w;
      break;
  }
  Matrix q_inv = inv(q, ErrorKind::QSingular, "Q at z_probe is singular");
  Matrix r = r0 + g * weff * q_inv * veff * gbar_adj;
  Matrix r_inv = inv(r, ErrorKind::ResolventSingular,
                     "candidate resolvent at z_probe is singular");
  Matrix aq = z_probe * id - r_inv;
  return 0.5 * (aq + aq.adjoint());
}

}  // namespace krein
