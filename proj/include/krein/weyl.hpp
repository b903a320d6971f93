#pragma once

#include <Eigen/SVD>
#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "krein/model.hpp"
#include "krein/prng.hpp"

namespace krein {

enum class WeylVariant { Direct, Canonical };

inline const char* to_string(WeylVariant v) {
  return v == WeylVariant::Direct ? "direct" : "canonical";
}

struct WeylValue {
  Complex z;
  Matrix m;  // n_K x n_K, represents M_z : K* -> K
  WeylVariant variant;
};

/// Weyl function. Direct variant: M_z := -tau G_z (tau is everywhere defined
/// in finite dimension). Canonical variant:
/// M_z := tau((G_{z0} + G_{conj z0})/2 - G_z). Both satisfy
/// M_z^* = M_{conj z} and M_z - M_w = (z - w) G^*_{conj w} G_z; they differ
/// by a z-independent Hermitian constant.
inline WeylValue weyl(const ExtensionModel& model, Complex z,
                      WeylVariant variant = WeylVariant::Direct,
                      Complex z0 = Complex(0.0, 1.0)) {
  Matrix gz = gamma(model, z).g;
  if (variant == WeylVariant::Direct) {
    return {z, Matrix(-model.tau * gz), variant};
  }
  Matrix g0 = gamma(model, z0).g;
  Matrix g0bar = gamma(model, std::conj(z0)).g;
  return {z, Matrix(model.tau * (0.5 * (g0 + g0bar) - gz)), variant};
}

enum class QFamilyTag { ProjectorTheta, AlphaType, VWType, Perturbed };

inline const char* to_string(QFamilyTag t) {
  switch (t) {
    case QFamilyTag::ProjectorTheta: return "projector_theta";
    case QFamilyTag::AlphaType: return "alpha";
    case QFamilyTag::VWType: return "vw";
    case QFamilyTag::Perturbed: return "perturbed";
  }
  return "?";
}

/// One of the four Q-function constructions:
///   ProjectorTheta: Q_z = theta + pi M_z pi^*         (V = pi, W = pi^*)
///   AlphaType:      Q_z = -(1 - alpha M_z)            (V = alpha, W = 1)
///   VWType:         Q_z = -(1 - V M_z W)              (V^* W^* = W V)
///   Perturbed:      Q_z = b + base Q_z, base has V = 1, W Hermitian,
///                   b^* W = W^* b.
struct QFamily {
  QFamilyTag tag = QFamilyTag::AlphaType;

  Matrix pi;     // ProjectorTheta: orthogonal projector on K
  Matrix theta;  // ProjectorTheta: Hermitian block
  Matrix alpha;  // AlphaType
  Matrix v, w;   // VWType; Perturbed uses w as the base family's W
  Matrix b;      // Perturbed

  WeylVariant weyl_variant = WeylVariant::Direct;
  Complex z0 = Complex(0.0, 1.0);

  // Sampling hint recorded by the generators: |Im z| above this puts z in
  // Z_Q for the generated instance (empirical surrogate of the examples'
  // norm bound). Not an invariant of arbitrary families.
  double zq_im_cutoff = 1.0;
};

/// Family-effective (V, W) entering (M2), (M1) and the resolvent formula.
inline std::pair<Matrix, Matrix> effective_vw(const QFamily& family,
                                              Eigen::Index n_k) {
  switch (family.tag) {
    case QFamilyTag::ProjectorTheta:
      return {family.pi, family.pi};  // pi^* = pi as a matrix
    case QFamilyTag::AlphaType:
      return {family.alpha, Matrix::Identity(n_k, n_k)};
    case QFamilyTag::VWType:
      return {family.v, family.w};
    case QFamilyTag::Perturbed:
      return {Matrix::Identity(n_k, n_k), family.w};
  }
  fail(ErrorKind::FamilyInvariantViolation, "unknown family tag");
}

inline void validate_family(const QFamily& family, const ExtensionModel& model) {
  const Eigen::Index n_k = model.n_k();
  const double eps = model.tol.herm;
  auto square_nk = [&](const Matrix& m, const char* name) {
    if (m.rows() != n_k || m.cols() != n_k)
      fail(ErrorKind::FamilyInvariantViolation,
           std::string(name) + " must be n_K x n_K");
  };
  switch (family.tag) {
    case QFamilyTag::ProjectorTheta: {
      square_nk(family.pi, "pi");
      square_nk(family.theta, "theta");
      double scale = std::max(family.pi.norm(), 1.0);
      if ((family.pi * family.pi - family.pi).norm() > eps * scale ||
          (family.pi - family.pi.adjoint()).norm() > eps * scale)
        fail(ErrorKind::FamilyInvariantViolation, "pi is not an orthogonal projector");
      if ((family.theta - family.theta.adjoint()).norm() >
          eps * std::max(family.theta.norm(), 1.0))
        fail(ErrorKind::FamilyInvariantViolation, "theta is not Hermitian");
      break;
    }
    case QFamilyTag::AlphaType: {
      square_nk(family.alpha, "alpha");
      if ((family.alpha - family.alpha.adjoint()).norm() >
          eps * std::max(family.alpha.norm(), 1.0))
        fail(ErrorKind::FamilyInvariantViolation, "alpha is not Hermitian");
      break;
    }
    case QFamilyTag::VWType: {
      square_nk(family.v, "v");
      square_nk(family.w, "w");
      double scale = std::max(family.v.norm() * family.w.norm(), 1.0);
      if ((family.v.adjoint() * family.w.adjoint() - family.w * family.v).norm() >
          eps * scale)
        fail(ErrorKind::FamilyInvariantViolation, "V^* W^* != W V");
      break;
    }
    case QFamilyTag::Perturbed: {
      square_nk(family.w, "w");
      square_nk(family.b, "b");
      if ((family.w - family.w.adjoint()).norm() >
          eps * std::max(family.w.norm(), 1.0))
        fail(ErrorKind::FamilyInvariantViolation,
             "perturbed base requires Hermitian W (V = 1)");
      double scale = std::max(family.b.norm() * family.w.norm(), 1.0);
      if ((family.b.adjoint() * family.w - family.w.adjoint() * family.b).norm() >
          eps * scale)
        fail(ErrorKind::FamilyInvariantViolation, "B^* W != W^* B");
      break;
    }
  }
}

struct QValue {
  Complex z;
  Matrix q;  // n_X x n_Y, represents Q_z : Y -> X
  double sigma_min = 0.0;
  double rcond = 0.0;
};

inline QValue build_q(const ExtensionModel& model, const QFamily& family,
                      Complex z) {
  validate_family(family, model);
  Matrix m = weyl(model, z, family.weyl_variant, family.z0).m;
  Eigen::Index n_k = model.n_k();
  Matrix id = Matrix::Identity(n_k, n_k);
  Matrix q;
  switch (family.tag) {
    case QFamilyTag::ProjectorTheta:
      q = family.theta + family.pi * m * family.pi;
      break;
    case QFamilyTag::AlphaType:
      q = -(id - family.alpha * m);
      break;
    case QFamilyTag::VWType:
      q = -(id - family.v * m * family.w);
      break;
    case QFamilyTag::Perturbed:
      q = family.b - (id - m * family.w);
      break;
  }
  Eigen::JacobiSVD<Matrix> svd(q);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return {z, std::move(q), smin, smax > 0.0 ? smin / smax : 0.0};
}

inline double rcond_of(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smax > 0.0 ? smin / smax : 0.0;
}

/// z in Z_Q: z in rho(A0) and both Q_z and Q_{conj z} pass the rcond test.
inline bool in_zq(const ExtensionModel& model, const QFamily& family, Complex z,
                  std::optional<double> rcond_threshold = std::nullopt) {
  double thr = rcond_threshold.value_or(model.tol.rcond);
  if (!model.in_rho_a0(z)) return false;
  if (build_q(model, family, z).rcond <= thr) return false;
  if (z.imag() != 0.0 && build_q(model, family, std::conj(z)).rcond <= thr)
    return false;
  return true;
}

/// Residuals of the Q-function axioms:
///   (M2)  Q_z = Q_w + (z - w) V G^*_{conj w} G_z W
///   (M1)  V^* (Q_z^*)^{-1} W^* = W Q_{conj z}^{-1} V     (needs z in Z_Q)
inline std::pair<double, double> check_q_axioms(const ExtensionModel& model,
                                                const QFamily& family,
                                                Complex z, Complex w) {
  auto [veff, weff] = effective_vw(family, model.n_k());
  QValue qz = build_q(model, family, z);
  QValue qw = build_q(model, family, w);
  Matrix gz = gamma(model, z).g;
  Matrix gwbar_adj = gamma_adjoint_bar(model, w);  // G^*_{conj w} = tau R^0_w
  double res_m2 = relative_residual(
      qz.q, qw.q + (z - w) * (veff * gwbar_adj * gz * weff));

  QValue qzbar = build_q(model, family, std::conj(z));
  if (qz.rcond <= model.tol.rcond || qzbar.rcond <= model.tol.rcond)
    fail(ErrorKind::QSingular, "Q_z or Q_{conj z} fails the rcond test for (M1)");
  Matrix lhs = veff.adjoint() *
               qz.q.adjoint().partialPivLu().solve(weff.adjoint());
  Matrix rhs = weff * qzbar.q.partialPivLu().solve(veff);
  double res_m1 = relative_residual(lhs, rhs);
  return {res_m2, res_m1};
}

enum class ZQLabel { InZQ, QSingular, InSpectrumA0 };

inline const char* to_string(ZQLabel l) {
  switch (l) {
    case ZQLabel::InZQ: return "InZQ";
    case ZQLabel::QSingular: return "QSingular";
    case ZQLabel::InSpectrumA0: return "InSpectrumA0";
  }
  return "?";
}

struct ZQScanResult {
  std::vector<Complex> grid;
  std::vector<ZQLabel> labels;
  std::vector<double> sigma_min_values;
  std::vector<double> rcond_values;
  double threshold = 0.0;
};

/// Classifies every grid point. Work is fanned out over n_threads workers
/// (results are keyed by grid index, so the output is deterministic).
inline ZQScanResult scan_zq(const ExtensionModel& model, const QFamily& family,
                            const std::vector<Complex>& grid,
                            double rcond_threshold, int n_threads = 1) {
  if (grid.empty()) fail(ErrorKind::EmptyGrid, "scan grid is empty");
  validate_family(family, model);
  ZQScanResult result;
  result.grid = grid;
  result.threshold = rcond_threshold;
  result.labels.resize(grid.size());
  result.sigma_min_values.resize(grid.size());
  result.rcond_values.resize(grid.size());

  auto classify = [&](std::size_t i) {
    Complex z = grid[i];
    if (!model.in_rho_a0(z)) {
      result.labels[i] = ZQLabel::InSpectrumA0;
      result.sigma_min_values[i] = 0.0;
      result.rcond_values[i] = 0.0;
      return;
    }
    QValue qz = build_q(model, family, z);
    result.sigma_min_values[i] = qz.sigma_min;
    result.rcond_values[i] = qz.rcond;
    bool ok = qz.rcond > rcond_threshold;
    if (ok && z.imag() != 0.0)
      ok = build_q(model, family, std::conj(z)).rcond > rcond_threshold;
    result.labels[i] = ok ? ZQLabel::InZQ : ZQLabel::QSingular;
  };

  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(grid.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) classify(i);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n_threads; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size();
             i = next.fetch_add(1))
          classify(i);
      });
    for (auto& worker : workers) worker.join();
  }
  return result;
}

/// Deterministic sampler for points of Z_Q. Draws from the strip
/// |Im z| in [im_min, im_max], Re z in [-re_span, re_span]; a margin larger
/// than the bare membership thresholds keeps the sampled points well
/// conditioned for residual evaluation.
inline std::vector<Complex> sample_zq_points(const ExtensionModel& model,
                                             const QFamily& family, int count,
                                             std::uint64_t seed,
                                             double rcond_margin = 1e-6) {
  SplitMix64 rng(seed);
  double re_span = model.a0_norm() + 1.0;
  double im_min = family.zq_im_cutoff;
  double im_max = im_min + 4.0;
  std::vector<Complex> points;
  int attempts = 0;
  const int max_attempts = 200 * count + 2000;
  while (static_cast<int>(points.size()) < count && attempts < max_attempts) {
    ++attempts;
    double re = rng.uniform(-re_span, re_span);
    double im = rng.uniform(im_min, im_max) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
    Complex z(re, im);
    if (in_zq(model, family, z, rcond_margin)) points.push_back(z);
  }
  if (static_cast<int>(points.size()) < count)
    fail(ErrorKind::InsufficientSamples,
         "could not sample enough Z_Q points (empty or thin Z_Q?)");
  return points;
}

}  // namespace krein
