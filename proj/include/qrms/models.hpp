#pragma once

// Seeded families of measurement models and observable pairs with known
// ground truth, used by the property suites and the reproduction cases.

#include <optional>
#include <string>

#include "qrms/measurement.hpp"
#include "qrms/random.hpp"

namespace qrms {

struct Model {
  std::string family;
  MeasuringProcess proc;
  Observable a;
  StateVector psi;
  /// Ground truth where the construction fixes it.
  std::optional<bool> accurate;
};

/// `count` values in [lo, hi] with pairwise gaps of at least `min_gap`.
std::vector<double> separated_values(std::size_t count, double lo, double hi, double min_gap, Rng& rng);

/// Copies the A-level of the system into the environment and scrambles both
/// sides afterwards: U = (G (x) W) C (I (x) R), C = sum_n P_n (x) S^n with S
/// the cyclic shift, xi = R^dag |0>, meter W M0 W^dag. Requires dim_k >= 1;
/// A gets min(dim_h, dim_k) distinct levels.
Model accurate_model(std::size_t dim_h, std::size_t dim_k, Rng& rng);

/// As accurate_model but the meter mislabels a nonempty proper subset of the
/// levels by +0.5. With `psi_in_good` the state lives in the correctly
/// labelled eigenspaces and the measurement is accurate there.
Model partially_accurate_model(std::size_t dim_h, std::size_t dim_k, bool psi_in_good, Rng& rng);

/// Accurate model followed by exp(-i delta H) on the joint space, H a unit-norm
/// random Hermitian matrix.
Model perturbed_model(std::size_t dim_h, std::size_t dim_k, double delta, Rng& rng);

/// Haar-random interaction, environment state, meter and observable.
Model haar_model(std::size_t dim_h, std::size_t dim_k, Rng& rng);

/// Projective measurement of a random observable M realized by dilation;
/// accurate only by accident.
Model projective_model(std::size_t dim_h, Rng& rng);

/// Projective measurement of f(A), where f relabels some levels of A. The
/// meter commutes with A; with `psi_in_good` the state avoids relabelled levels.
Model relabel_model(std::size_t dim_h, bool psi_in_good, Rng& rng);

/// A^2 = I, Haar interaction and a +-1 meter on K.
Model dichotomic_model(std::size_t dim_h, std::size_t dim_k, Rng& rng);

/// One of the families above chosen by the generator; dimensions in [2, max_dim].
Model random_model(Rng& rng, std::size_t max_dim = 3);

/// Observable pair and state with a known joint-distribution verdict.
struct PairCase {
  std::string family;
  Observable x;
  Observable y;
  StateVector psi;
  bool expect_joint = false;
};

/// Families: common eigenbasis (joint), common subspace with the state inside
/// (joint) or generic (not), generic pair (not), state an eigenvector of X
/// only (not).
PairCase random_pair_case(Rng& rng, std::size_t max_dim = 4);

}  // namespace qrms
