#pragma once

// Seeded sampling: a xoshiro256** generator seeded through SplitMix64,
// Haar-random unitaries, and random states, observables and POVMs.

#include <cstdint>

#include "qrms/linalg.hpp"
#include "qrms/measurement.hpp"

namespace qrms {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent stream for trial `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Householder QR of a complex Gaussian matrix with R's diagonal phases moved
/// into Q.
Matrix haar_unitary(std::size_t n, Rng& rng);
StateVector random_state(std::size_t n, Rng& rng);
/// rho = G G^dag / tr with G an n x rank complex Gaussian matrix.
DensityOperator random_density(std::size_t n, std::size_t rank, Rng& rng);
/// Complex Gaussian Hermitian matrix scaled by `scale`.
Matrix random_hermitian(std::size_t n, Rng& rng, double scale = 1.0);

/// V diag(values) V^dag for Haar V, with spectrum rebuilt from V's columns.
Observable observable_in_basis(const Matrix& v, const std::vector<double>& values);
/// Eigenvalues uniform in [lo, hi]; with `levels` < n, values repeat.
Observable random_observable(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0, std::size_t levels = 0);
/// Haar-rotated +-1 observable with both eigenvalues present (n >= 2).
Observable random_dichotomic(std::size_t n, Rng& rng);
/// Effects S^{-1/2} G_k S^{-1/2} with S = sum_k G_k, G_k Wishart, outcomes uniform in [lo, hi].
Povm random_povm(std::size_t n, std::size_t outcomes, Rng& rng, double lo = -1.0, double hi = 1.0);

}  // namespace qrms
