#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace krein {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};

/// Relative tolerances used by the numerical membership tests and the
/// identity checks. All are relative to operand norms.
struct Tolerances {
  double herm = 1e-12;      // Hermitian-symmetry checks
  double identity = 1e-10;  // operator-identity residuals
  double spectral = 1e-10;  // sigma_min gap for resolvent-set membership
  double rcond = 1e-8;      // reciprocal condition number for "bounded inverse"
  double singular = 1e-8;   // sigma_min threshold in root detection
};

enum class ErrorKind {
  DimensionMismatch,
  NonFiniteEntry,
  HermitianViolation,
  SpectrumHit,
  EigensolverFailure,
  FamilyInvariantViolation,
  QSingular,
  ResolventSingular,
  NotInRhoAQ,
  EmptyGrid,
  EmptyZQ,
  InsufficientSamples,
  IntervalInSpectrumA0,
  InvalidRecipe,
  ConfigParse,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::HermitianViolation: return "HermitianViolation";
    case ErrorKind::SpectrumHit: return "SpectrumHit";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::FamilyInvariantViolation: return "FamilyInvariantViolation";
    case ErrorKind::QSingular: return "QSingular";
    case ErrorKind::ResolventSingular: return "ResolventSingular";
    case ErrorKind::NotInRhoAQ: return "NotInRhoAQ";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::EmptyZQ: return "EmptyZQ";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::IntervalInSpectrumA0: return "IntervalInSpectrumA0";
    case ErrorKind::InvalidRecipe: return "InvalidRecipe";
    case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// ||a - b||_F scaled by the largest operand norm (floored at 1 so that
/// residuals of near-zero operands stay meaningful).
inline double relative_residual(const Matrix& a, const Matrix& b) {
  double scale = std::max({a.norm(), b.norm(), 1.0});
  return (a - b).norm() / scale;
}

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace krein
