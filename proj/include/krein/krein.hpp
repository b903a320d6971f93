#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "krein/weyl.hpp"

namespace krein {

/// X * Q^{-1} computed through a factorized solve of the adjoint system.
inline Matrix solve_right(const Matrix& x, const Matrix& q) {
  return q.adjoint().partialPivLu().solve(x.adjoint()).adjoint();
}

struct KreinResolvent {
  Complex z;
  Matrix r;  // n_H x n_H
  double rcond_q = 0.0;
};

/// R^Q_z = R^0_z + G_z W Q_z^{-1} V G^*_{conj z}, valid for z in Z_Q.
inline KreinResolvent krein_resolvent(const ExtensionModel& model,
                                      const QFamily& family, Complex z) {
  QValue qz = build_q(model, family, z);
  if (qz.rcond <= model.tol.rcond)
    fail(ErrorKind::QSingular, "Q_z fails the rcond test");
  if (z.imag() != 0.0 &&
      build_q(model, family, std::conj(z)).rcond <= model.tol.rcond)
    fail(ErrorKind::QSingular, "Q_{conj z} fails the rcond test");
  auto [veff, weff] = effective_vw(family, model.n_k());
  Matrix gz = gamma(model, z).g;
  Matrix gzbar_adj = gamma_adjoint_bar(model, z);  // G^*_{conj z}
  Matrix correction =
      gz * weff * qz.q.partialPivLu().solve(veff * gzbar_adj);
  return {z, Matrix(resolvent0(model, z) + correction), qz.rcond};
}

/// Relative residual of R^Q_z - R^Q_w = (w - z) R^Q_w R^Q_z.
inline double verify_first_resolvent_identity(const ExtensionModel& model,
                                              const QFamily& family, Complex z,
                                              Complex w) {
  Matrix rz = krein_resolvent(model, family, z).r;
  Matrix rw = krein_resolvent(model, family, w).r;
  return relative_residual(rz - rw, (w - z) * (rw * rz));
}

struct ReconstructedOperator {
  Matrix aq;  // Hermitian part of z_ref I - (R^Q_{z_ref})^{-1}
  Complex z_ref, z_ref2;
  double herm_residual = 0.0;
  double zref_independence_residual = 0.0;
  double extension_residual = 0.0;  // max over a ker(tau) basis

  RealVector evals;  // spectral factorization of aq
  Matrix evecs;
  Tolerances tol;

  double aq_norm() const {
    return evals.size() ? evals.cwiseAbs().maxCoeff() : 0.0;
  }

  double spectral_gap(Complex z) const {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < evals.size(); ++k)
      gap = std::min(gap, std::abs(z - Complex(evals[k], 0.0)));
    return gap;
  }

  bool in_rho_aq(Complex z) const {
    return spectral_gap(z) > tol.spectral * (aq_norm() + std::abs(z));
  }

  /// (-A_Q + z)^{-1} from the reconstructed operator.
  Matrix resolvent_aq(Complex z) const {
    if (!in_rho_aq(z))
      fail(ErrorKind::NotInRhoAQ, "z is in or numerically near spectrum(A_Q)");
    Vector d(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k)
      d[k] = 1.0 / (z - Complex(evals[k], 0.0));
    return evecs * d.asDiagonal() * evecs.adjoint();
  }
};

namespace detail {

inline Matrix invert_resolvent(const Matrix& r, Complex z, double rcond_min) {
  if (rcond_of(r) <= rcond_min)
    fail(ErrorKind::ResolventSingular,
         "candidate resolvent fails its rcond test (degenerate family?)");
  Eigen::Index n = r.rows();
  return z * Matrix::Identity(n, n) - r.partialPivLu().solve(Matrix::Identity(n, n));
}

}  // namespace detail

/// A_Q = z I - (R^Q_z)^{-1}, cross-checked between two reference points and
/// against the extension property on ker(tau).
inline ReconstructedOperator reconstruct_operator(const ExtensionModel& model,
                                                  const QFamily& family,
                                                  Complex z_ref,
                                                  Complex z_ref2) {
  KreinResolvent kr1 = krein_resolvent(model, family, z_ref);
  KreinResolvent kr2 = krein_resolvent(model, family, z_ref2);
  Matrix aq1 = detail::invert_resolvent(kr1.r, z_ref, model.tol.rcond);
  Matrix aq2 = detail::invert_resolvent(kr2.r, z_ref2, model.tol.rcond);

  ReconstructedOperator recon;
  recon.z_ref = z_ref;
  recon.z_ref2 = z_ref2;
  recon.tol = model.tol;
  recon.aq = 0.5 * (aq1 + aq1.adjoint());
  double scale = std::max(recon.aq.norm(), 1.0);
  recon.herm_residual = (aq1 - aq1.adjoint()).norm() / scale;
  recon.zref_independence_residual = (aq1 - aq2).norm() / scale;

  // Extension property: A_Q agrees with A0 on ker(tau), realized as
  // R^Q_z (-A0 + z) v = v for every kernel basis vector v.
  Matrix kernel = Eigen::FullPivLU<Matrix>(model.tau).kernel();
  if (kernel.cols() > 0 && kernel.norm() > 0.0) {
    Matrix shifted =
        (-model.a0 + z_ref * Matrix::Identity(model.n_h(), model.n_h())) *
        kernel;
    Matrix back = kr1.r * shifted;
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
      double res = (back.col(j) - kernel.col(j)).norm() / kernel.col(j).norm();
      recon.extension_residual = std::max(recon.extension_residual, res);
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(recon.aq);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::EigensolverFailure, "eigendecomposition of A_Q failed");
  recon.evals = es.eigenvalues();
  recon.evecs = es.eigenvectors();
  return recon;
}

struct LambdaHatValue {
  Complex z;
  Complex w_ref;
  Matrix lam;  // n_Y x n_X
};

/// Analytic extension of Q_z^{-1} anchored at w_ref in Z_Q:
///   Lhat_z = Q_w^{-1} + (w - z) Q_w^{-1} V G^*_{conj w} (1 + (w - z) R^Q_z)
///            G_w W Q_w^{-1},
/// with R^Q_z taken from the reconstructed operator so that Lhat is defined
/// on the whole of rho(A_Q).
inline LambdaHatValue lambda_hat(const ExtensionModel& model,
                                 const QFamily& family,
                                 const ReconstructedOperator& recon,
                                 Complex w_ref, Complex z) {
  QValue qw = build_q(model, family, w_ref);
  if (qw.rcond <= model.tol.rcond ||
      (w_ref.imag() != 0.0 &&
       build_q(model, family, std::conj(w_ref)).rcond <= model.tol.rcond))
    fail(ErrorKind::QSingular, "reference point w_ref is not in Z_Q");
  Matrix rqz = recon.resolvent_aq(z);

  auto [veff, weff] = effective_vw(family, model.n_k());
  auto lu = qw.q.partialPivLu();
  Matrix gw = gamma(model, w_ref).g;
  Matrix gwbar_adj = gamma_adjoint_bar(model, w_ref);  // G^*_{conj w}
  Complex dz = w_ref - z;
  Eigen::Index n = model.n_h();
  Matrix left = lu.solve(veff * gwbar_adj);                     // n_Y x n_H
  Matrix right = solve_right(Matrix(gw * weff), qw.q);          // n_H x n_X
  Matrix qw_inv = lu.solve(Matrix::Identity(qw.q.rows(), qw.q.cols()));
  Matrix lam =
      qw_inv + dz * left * (Matrix::Identity(n, n) + dz * rqz) * right;
  return {z, w_ref, std::move(lam)};
}

/// Convenience overload that reconstructs A_Q from w_ref and its conjugate
/// mirror before extending.
inline LambdaHatValue lambda_hat(const ExtensionModel& model,
                                 const QFamily& family, Complex w_ref,
                                 Complex z) {
  Complex second = (w_ref.imag() != 0.0) ? std::conj(w_ref)
                                         : w_ref + Complex(0.0, 1.0);
  ReconstructedOperator recon =
      reconstruct_operator(model, family, w_ref, second);
  return lambda_hat(model, family, recon, w_ref, z);
}

struct VerificationEntry {
  std::string identity_name;
  double max_residual = 0.0;
  int sample_count = 0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;
  std::string fingerprint;  // model/family tag

  void add(const std::string& name, double max_residual, int samples,
           double tolerance) {
    entries.push_back(
        {name, max_residual, samples, tolerance, max_residual <= tolerance});
  }

  bool overall() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

struct SampleSpec {
  int n_pairs = 25;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

/// Evaluates every operator identity of the extension construction at
/// sampled pairs (z, w) in Z_Q, with Lambda_z := Q_z^{-1}:
/// (Lambda1), (Lambda2), (Lambda2'), (Lambda3), the functional-calculus
/// identity for A0 and A_Q, and the two inverse identities.
inline VerificationReport identity_suite(const ExtensionModel& model,
                                         const QFamily& family,
                                         const SampleSpec& spec) {
  if (spec.n_pairs < 1)
    fail(ErrorKind::InsufficientSamples, "need at least one sample pair");
  std::vector<Complex> pts =
      sample_zq_points(model, family, 2 * spec.n_pairs, spec.seed);

  auto [veff, weff] = effective_vw(family, model.n_k());
  Eigen::Index n = model.n_h();
  Matrix id_h = Matrix::Identity(n, n);

  double r_l1 = 0, r_l2 = 0, r_l2p = 0, r_l3 = 0;
  double r_fc0 = 0, r_fcq = 0, r_inv = 0, r_invp = 0;

  for (int p = 0; p < spec.n_pairs; ++p) {
    Complex z = pts[2 * p];
    Complex w = pts[2 * p + 1];

    Matrix qz = build_q(model, family, z).q;
    Matrix qw = build_q(model, family, w).q;
    Matrix qzbar = build_q(model, family, std::conj(z)).q;
    Matrix lam_z = qz.partialPivLu().solve(Matrix::Identity(qz.rows(), qz.cols()));
    Matrix lam_w = qw.partialPivLu().solve(Matrix::Identity(qw.rows(), qw.cols()));
    Matrix lam_zbar =
        qzbar.partialPivLu().solve(Matrix::Identity(qzbar.rows(), qzbar.cols()));

    Matrix gz = gamma(model, z).g;
    Matrix gw = gamma(model, w).g;
    Matrix gzbar_adj = gamma_adjoint_bar(model, z);  // G^*_{conj z}
    Matrix gwbar_adj = gamma_adjoint_bar(model, w);  // G^*_{conj w}

    // (Lambda1): V^* Lambda_z^* W^* = W Lambda_{conj z} V
    r_l1 = std::max(r_l1, relative_residual(
        veff.adjoint() * lam_z.adjoint() * weff.adjoint(),
        weff * lam_zbar * veff));

    // (Lambda2): Lambda_z - Lambda_w = (w-z) Lambda_w V G^*_{conj w} G_z W Lambda_z
    r_l2 = std::max(r_l2, relative_residual(
        lam_z - lam_w,
        (w - z) * (lam_w * veff * gwbar_adj * gz * weff * lam_z)));

    // (Lambda2'): Lambda_z = (1 + (w-z) Lambda_z V G^*_{conj z} G_w W) Lambda_w
    Matrix id_y = Matrix::Identity(lam_z.rows(), lam_z.rows());
    r_l2p = std::max(r_l2p, relative_residual(
        lam_z,
        (id_y + (w - z) * (lam_z * veff * gzbar_adj * gw * weff)) * lam_w));

    // (Lambda3), with R^Lambda_z assembled by the resolvent formula
    Matrix rlz = krein_resolvent(model, family, z).r;
    r_l3 = std::max(r_l3, relative_residual(
        lam_z - lam_w,
        (w - z) * (lam_w * veff * gwbar_adj * (id_h + (w - z) * rlz) * gw *
                   weff * lam_w)));

    // (fc): (w-z)(1 + (w-z)R_z) = (-R_w + 1/(w-z))^{-1}, for A0 and A_Q
    Matrix r0z = resolvent0(model, z);
    Matrix r0w = resolvent0(model, w);
    Matrix lhs0 = (w - z) * (id_h + (w - z) * r0z);
    Matrix rhs0 = Matrix(-r0w + (1.0 / (w - z)) * id_h).partialPivLu().solve(id_h);
    r_fc0 = std::max(r_fc0, relative_residual(lhs0, rhs0));

    Matrix rlw = krein_resolvent(model, family, w).r;
    Matrix lhsq = (w - z) * (id_h + (w - z) * rlz);
    Matrix rhsq = Matrix(-rlw + (1.0 / (w - z)) * id_h).partialPivLu().solve(id_h);
    r_fcq = std::max(r_fcq, relative_residual(lhsq, rhsq));

    // (inv): R^L_z - R^0_z
    //      = (1+(w-z)R^L_z) G_w W Lambda_w V G^*_{conj w} (1+(w-z)R^0_z)
    Matrix core = gw * weff * lam_w * veff * gwbar_adj;
    r_inv = std::max(r_inv, relative_residual(
        rlz - r0z,
        (id_h + (w - z) * rlz) * core * (id_h + (w - z) * r0z)));

    // (inv'): same with the roles of R^L_z and R^0_z exchanged
    r_invp = std::max(r_invp, relative_residual(
        rlz - r0z,
        (id_h + (w - z) * r0z) * core * (id_h + (w - z) * rlz)));
  }

  VerificationReport report;
  double tol = spec.tolerance;
  report.add("Lambda1", r_l1, spec.n_pairs, tol);
  report.add("Lambda2", r_l2, spec.n_pairs, tol);
  report.add("Lambda2p", r_l2p, spec.n_pairs, tol);
  report.add("Lambda3", r_l3, spec.n_pairs, tol);
  report.add("fc_A0", r_fc0, spec.n_pairs, tol);
  report.add("fc_AQ", r_fcq, spec.n_pairs, tol);
  report.add("inv", r_inv, spec.n_pairs, tol);
  report.add("invp", r_invp, spec.n_pairs, tol);
  return report;
}

/// The finite-rank-through-K correction term of the resolvent formula.
inline Matrix gz_correction(const ExtensionModel& model, const QFamily& family,
                            Complex z, const Matrix& veff, const Matrix& weff) {
  Matrix qz = build_q(model, family, z).q;
  Matrix gz = gamma(model, z).g;
  Matrix gzbar_adj = gamma_adjoint_bar(model, z);
  return gz * weff * qz.partialPivLu().solve(veff * gzbar_adj);
}

/// Executable form of the main theorem Z_Q = rho(A0) cap rho(A_Q):
/// (a) Lhat_z Q_z = 1 and Q_z Lhat_z = 1 at sampled z in rho(A0) cap rho(A_Q);
/// (b) w-independence of Lhat across three reference points;
/// (c) eigenvalues of A_Q inside rho(A0) are sigma_min(Q)-roots, and every
///     sampled z passes the Z_Q membership test;
/// (d) the resolvent formula against (-A_Q + z)^{-1} from the reconstruction.
inline VerificationReport verify_main_theorem(const ExtensionModel& model,
                                              const QFamily& family,
                                              int n_samples, std::uint64_t seed,
                                              double tolerance = 1e-9) {
  std::vector<Complex> refs;
  try {
    refs = sample_zq_points(model, family, 3, seed);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InsufficientSamples)
      fail(ErrorKind::EmptyZQ,
           "no Z_Q points detected; hypothesis of the theorem unmet");
    throw;
  }
  ReconstructedOperator recon =
      reconstruct_operator(model, family, refs[0], refs[1]);

  auto [veff, weff] = effective_vw(family, model.n_k());
  Eigen::Index n = model.n_h();
  Matrix id_h = Matrix::Identity(n, n);

  // Sample z from a box covering both spectra, keeping a conditioning
  // margin from each so residuals are evaluated on well-posed points.
  double lo = std::min(model.evals.minCoeff(), recon.evals.minCoeff()) - 2.0;
  double hi = std::max(model.evals.maxCoeff(), recon.evals.maxCoeff()) + 2.0;
  double scale = std::max({model.a0_norm(), recon.aq_norm(), 1.0});
  double margin = 1e-3 * scale;
  SplitMix64 rng(seed ^ 0x5eedULL);
  std::vector<Complex> samples;
  int attempts = 0;
  while (static_cast<int>(samples.size()) < n_samples && attempts < 400 * n_samples) {
    ++attempts;
    Complex z(rng.uniform(lo, hi), rng.uniform(-5.0, 5.0));
    if (model.spectral_gap(z) > margin && recon.spectral_gap(z) > margin)
      samples.push_back(z);
  }
  if (static_cast<int>(samples.size()) < n_samples)
    fail(ErrorKind::InsufficientSamples,
         "could not sample rho(A0) cap rho(A_Q)");

  double r_left = 0, r_right = 0, r_windep = 0, r_formula = 0;
  int zq_failures = 0;
  for (Complex z : samples) {
    Matrix qz = build_q(model, family, z).q;
    Matrix lam = lambda_hat(model, family, recon, refs[0], z).lam;
    Matrix id_y = Matrix::Identity(lam.rows(), lam.rows());
    Matrix id_x = Matrix::Identity(qz.rows(), qz.rows());
    r_left = std::max(r_left, (lam * qz - id_y).norm());
    r_right = std::max(r_right, (qz * lam - id_x).norm());

    Matrix rq = recon.resolvent_aq(z);
    Matrix correction = gz_correction(model, family, z, veff, weff);
    r_formula = std::max(r_formula, relative_residual(
        rq, resolvent0(model, z) + correction));

    if (!in_zq(model, family, z)) ++zq_failures;
  }

  int n_windep = std::min(n_samples, 10);
  for (int i = 0; i < n_windep; ++i) {
    Complex z = samples[i];
    Matrix l0 = lambda_hat(model, family, recon, refs[0], z).lam;
    Matrix l1 = lambda_hat(model, family, recon, refs[1], z).lam;
    Matrix l2 = lambda_hat(model, family, recon, refs[2], z).lam;
    r_windep = std::max(r_windep, relative_residual(l0, l1));
    r_windep = std::max(r_windep, relative_residual(l0, l2));
  }

  // Eigenvalues of A_Q lying inside rho(A0) must be sigma_min(Q)-roots.
  // The reference scale is sigma_max(Q) at a well-conditioned point; for
  // n_K = 1 the local sigma_max vanishes at the root and cannot serve.
  double q_ref_scale = 1e-300;
  for (Complex ref : refs) {
    QValue q = build_q(model, family, ref);
    if (q.rcond > 0.0) q_ref_scale = std::max(q_ref_scale, q.sigma_min / q.rcond);
  }
  double r_root = 0.0;
  int n_roots = 0;
  for (Eigen::Index k = 0; k < recon.evals.size(); ++k) {
    Complex mu(recon.evals[k], 0.0);
    if (model.spectral_gap(mu) <= 1e-6 * scale) continue;  // shared spectrum
    QValue q = build_q(model, family, mu);
    double local_max = q.rcond > 0.0 ? q.sigma_min / q.rcond : 0.0;
    r_root = std::max(r_root, q.sigma_min / std::max(local_max, q_ref_scale));
    ++n_roots;
  }

  VerificationReport report;
  report.add("teoinv_lhat_q_left", r_left, n_samples, tolerance);
  report.add("teoinv_q_lhat_right", r_right, n_samples, tolerance);
  report.add("teoinv_w_independence", r_windep, 2 * n_windep, tolerance);
  report.add("teoinv_resolvent_formula", r_formula, n_samples, tolerance);
  report.add("teoinv_aq_eigen_q_roots", r_root, n_roots, model.tol.singular);
  report.add("teoinv_zq_membership", static_cast<double>(zq_failures),
             n_samples, 0.5);
  report.add("reconstruction_hermitian", recon.herm_residual, 1,
             model.tol.identity);
  report.add("reconstruction_zref_independence",
             recon.zref_independence_residual, 1, model.tol.identity);
  report.add("extension_property_ker_tau", recon.extension_residual,
             static_cast<int>(model.n_h() - model.n_k()), model.tol.identity);
  return report;
}

struct SpectrumCandidate {
  double via_q_root = 0.0;         // sigma_min(Q) root location
  double via_diagonalization = 0.0;  // nearest eigenvalue of reconstructed A_Q
  double discrepancy = 0.0;
};

namespace detail {

/// Golden-section minimization of f on [a, b] down to the given width.
template <class F>
double golden_section_min(F&& f, double a, double b, double width) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Real eigenvalue candidates of A_Q inside rho(A0): grid-bracketed local
/// minima of x -> sigma_min(Q_x), refined by golden-section search and
/// cross-validated against the diagonalization of the reconstructed A_Q.
inline std::vector<SpectrumCandidate> spectrum_aq_via_q(
    const ExtensionModel& model, const QFamily& family, double a, double b,
    int n_grid, std::uint64_t seed = 2026) {
  if (n_grid < 8) fail(ErrorKind::InvalidRecipe, "n_grid must be >= 8");
  if (!(a < b)) fail(ErrorKind::InvalidRecipe, "interval must satisfy a < b");
  validate_family(family, model);

  double scale = model.a0_norm() + std::max(std::abs(a), std::abs(b));
  double gap_margin = 1e-6 * std::max(scale, 1.0);
  auto usable = [&](double x) {
    return model.spectral_gap(Complex(x, 0.0)) > gap_margin;
  };
  auto smin_at = [&](double x) {
    return build_q(model, family, Complex(x, 0.0)).sigma_min;
  };

  std::vector<double> xs(n_grid);
  for (int i = 0; i < n_grid; ++i)
    xs[i] = a + (b - a) * static_cast<double>(i) / (n_grid - 1);
  bool any_usable = false;
  double q_scale = 1e-300;  // sup of ||Q|| over the interval, root threshold scale
  std::vector<double> vals(n_grid, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n_grid; ++i)
    if (usable(xs[i])) {
      QValue q = build_q(model, family, Complex(xs[i], 0.0));
      vals[i] = q.sigma_min;
      q_scale = std::max(q_scale, q.q.norm());
      any_usable = true;
    }
  if (!any_usable)
    fail(ErrorKind::IntervalInSpectrumA0,
         "no grid point passes the rho(A0) test");

  std::vector<double> roots;
  for (int i = 1; i + 1 < n_grid; ++i) {
    if (!std::isfinite(vals[i])) continue;
    if (!(vals[i] < vals[i - 1] && vals[i] <= vals[i + 1])) continue;
    double lo = std::isfinite(vals[i - 1]) ? xs[i - 1] : xs[i];
    double hi = std::isfinite(vals[i + 1]) ? xs[i + 1] : xs[i];
    if (!(lo < hi)) continue;
    double x = detail::golden_section_min(smin_at, lo, hi, 1e-10);
    if (!usable(x)) continue;
    if (smin_at(x) > model.tol.singular * q_scale) continue;
    roots.push_back(x);
  }
  // Deduplicate refined minima that collapsed to the same root.
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double p, double q) { return std::abs(p - q) < 1e-9; }),
              roots.end());

  std::vector<SpectrumCandidate> out;
  if (roots.empty()) return out;

  std::vector<Complex> refs = sample_zq_points(model, family, 2, seed);
  ReconstructedOperator recon =
      reconstruct_operator(model, family, refs[0], refs[1]);
  for (double x : roots) {
    double best = recon.evals[0];
    for (Eigen::Index k = 0; k < recon.evals.size(); ++k)
      if (std::abs(recon.evals[k] - x) < std::abs(best - x))
        best = recon.evals[k];
    out.push_back({x, best, std::abs(best - x)});
  }
  return out;
}

}  // namespace krein
