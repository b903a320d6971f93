#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include "krein/types.hpp"

namespace krein {

/// splitmix64 (Steele, Lea, Flood 2014). Fixed constants, identical output
/// on every platform; this is the only entropy source for generated
/// fixtures so that golden values stay reproducible across languages.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t x = (state += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  Complex complex_in_box(double lo, double hi) {
    double re = uniform(lo, hi);
    double im = uniform(lo, hi);
    return {re, im};
  }
};

/// Dense complex matrix with entries uniform in the square [-1,1)^2.
inline Matrix random_matrix(SplitMix64& rng, Eigen::Index rows,
                            Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rng.complex_in_box(-1.0, 1.0);
  return m;
}

/// Random Hermitian matrix: symmetric-distribution draw followed by
/// Hermitian symmetrization.
inline Matrix random_hermitian(SplitMix64& rng, Eigen::Index n) {
  Matrix m = random_matrix(rng, n, n);
  return 0.5 * (m + m.adjoint()).eval();
}

/// FNV-1a over the row-major (re, im) binary64 representation of the
/// entries. Used to fingerprint generated fixtures.
inline std::uint64_t fingerprint(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      mix(m(i, j).real());
      mix(m(i, j).imag());
    }
  return h;
}

inline std::string fingerprint_hex(const Matrix& m) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fingerprint(m)));
  return buf;
}

}  // namespace krein
