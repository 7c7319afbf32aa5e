#pragma once

#include <cstdint>
#include <random>

#include "pencilkit/types.hpp"

namespace pencilkit {

/// Deterministic random source for reproducible test instances.
///
/// All draws are derived from std::mt19937_64 integer output only (uniform
/// doubles come from the top 53 bits, normals from a Box-Muller transform of
/// those), so a given seed produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard real Gaussian.
  double normal();
  /// Complex Gaussian (independent real and imaginary parts).
  Complex cnormal();

  /// Matrix with independent complex Gaussian entries.
  CMatrix gaussian_matrix(Index rows, Index cols);
  /// Random Hermitian matrix with spectral norm about `scale`.
  CMatrix hermitian(Index n, double scale = 1.0);
  /// Haar-ish random unitary (QR of a Gaussian matrix with phase fix).
  CMatrix unitary(Index n);
  /// Complex Gaussian vector.
  CVector gaussian_vector(Index n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pencilkit
