#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>
#include <vector>

#include "krein/types.hpp"

namespace krein {

/// The fixed scene: a Hermitian operator A0 on H, a boundary map tau: H -> K,
/// and the coupling operators V: K -> X, W: Y -> K*. All dual spaces are
/// realized through the Riesz identification (orthonormal coordinates, duality
/// map = identity), so adjoints are conjugate transposes throughout.
struct ExtensionModel {
  Matrix a0;   // n_H x n_H, Hermitian
  Matrix tau;  // n_K x n_H
  Matrix v;    // n_X x n_K
  Matrix w;    // n_K x n_Y
  Tolerances tol;

  double herm_correction = 0.0;  // norm of the symmetrization applied to a0

  // Spectral factorization of a0, computed once at build time. Resolvents
  // and resolvent-set tests reuse it; for a normal matrix the sigma_min of
  // (-a0 + z) is exactly min_k |z - lambda_k|.
  RealVector evals;  // ascending
  Matrix evecs;      // unitary, a0 = evecs * diag(evals) * evecs^*

  Eigen::Index n_h() const { return a0.rows(); }
  Eigen::Index n_k() const { return tau.rows(); }
  Eigen::Index n_x() const { return v.rows(); }
  Eigen::Index n_y() const { return w.cols(); }

  double a0_norm() const {
    return evals.size() ? evals.cwiseAbs().maxCoeff() : 0.0;
  }

  double spectral_gap(Complex z) const {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < evals.size(); ++k)
      gap = std::min(gap, std::abs(z - Complex(evals[k], 0.0)));
    return gap;
  }

  /// z in rho(A0), decided by the relative sigma_min gap.
  bool in_rho_a0(Complex z) const {
    return spectral_gap(z) > tol.spectral * (a0_norm() + std::abs(z));
  }
};

struct ModelConfig {
  Matrix a0;
  Matrix tau;
  Matrix v;
  Matrix w;
  Tolerances tol;
};

inline ExtensionModel build_model(const ModelConfig& config) {
  const Matrix& a0 = config.a0;
  if (a0.rows() < 1 || a0.rows() != a0.cols())
    fail(ErrorKind::DimensionMismatch, "a0 must be square with n_H >= 1");
  if (!all_finite(a0)) fail(ErrorKind::NonFiniteEntry, "a0 has a non-finite entry");
  if (!all_finite(config.tau) || !all_finite(config.v) || !all_finite(config.w))
    fail(ErrorKind::NonFiniteEntry, "tau/v/w has a non-finite entry");
  if (config.tau.cols() != a0.rows() || config.tau.rows() < 1)
    fail(ErrorKind::DimensionMismatch, "tau must be n_K x n_H");
  if (config.v.cols() != config.tau.rows() || config.v.rows() < 1)
    fail(ErrorKind::DimensionMismatch, "v must be n_X x n_K");
  if (config.w.rows() != config.tau.rows() || config.w.cols() < 1)
    fail(ErrorKind::DimensionMismatch, "w must be n_K x n_Y");

  ExtensionModel model;
  model.tol = config.tol;
  model.a0 = 0.5 * (a0 + a0.adjoint());
  model.herm_correction = (a0 - model.a0).norm();
  double scale = std::max(model.a0.norm(), 1.0);
  if (model.herm_correction > config.tol.herm * scale)
    fail(ErrorKind::HermitianViolation,
         "a0 deviates from Hermitian by " + std::to_string(model.herm_correction));
  model.tau = config.tau;
  model.v = config.v;
  model.w = config.w;

  Eigen::SelfAdjointEigenSolver<Matrix> es(model.a0);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::EigensolverFailure, "eigendecomposition of a0 failed");
  model.evals = es.eigenvalues();
  model.evecs = es.eigenvectors();
  return model;
}

struct SpectralPoint {
  Complex z;
};

/// R^0_z = (-A0 + z)^{-1}, via the stored spectral factorization.
inline Matrix resolvent0(const ExtensionModel& model, Complex z) {
  if (!model.in_rho_a0(z))
    fail(ErrorKind::SpectrumHit, "z is in or numerically near spectrum(A0)");
  Vector d(model.evals.size());
  for (Eigen::Index k = 0; k < model.evals.size(); ++k)
    d[k] = 1.0 / (z - Complex(model.evals[k], 0.0));
  return model.evecs * d.asDiagonal() * model.evecs.adjoint();
}

/// Eigenvalues of A0, ascending.
inline std::vector<double> spectrum0(const ExtensionModel& model) {
  return {model.evals.data(), model.evals.data() + model.evals.size()};
}

struct GammaValue {
  Complex z;
  Matrix g;  // n_H x n_K, represents G_z : K* -> H
};

/// G_z := (tau R^0_{conj z})^*.
inline GammaValue gamma(const ExtensionModel& model, Complex z) {
  Matrix g = (model.tau * resolvent0(model, std::conj(z))).adjoint();
  return {z, std::move(g)};
}

/// Adjoint of the gamma field as a map H -> K: G^*_{conj z} = tau R^0_z.
inline Matrix gamma_adjoint_bar(const ExtensionModel& model, Complex z) {
  return model.tau * resolvent0(model, z);
}

/// Residuals of the two equivalent gamma-field identities
///   G_z - G_w = (w - z) R^0_w G_z
///   G_z = (1 + (w - z) R^0_z) G_w
/// These are theorems; a large residual signals an implementation bug.
inline std::pair<double, double> check_gamma_identities(
    const ExtensionModel& model, Complex z, Complex w) {
  Matrix gz = gamma(model, z).g;
  Matrix gw = gamma(model, w).g;
  Matrix r0w = resolvent0(model, w);
  Matrix r0z = resolvent0(model, z);
  Eigen::Index n = model.n_h();
  double r1 = relative_residual(gz - gw, (w - z) * (r0w * gz));
  double r2 = relative_residual(
      gz, (Matrix::Identity(n, n) + (w - z) * r0z) * gw);
  return {r1, r2};
}

}  // namespace krein
