#pragma once

#include <cstddef>

namespace qrms {

/// Every numerical threshold used by the library, in one place.
/// Defaults are tuned for double precision on matrices up to ~64x64 with
/// O(1) entries.
struct Tolerances {
  // linalg
  double state_norm = 1e-10;        ///< | ||psi|| - 1 |
  double hermitian = 1e-9;          ///< relative to 1 + max|H_ij|
  double density = 1e-10;           ///< hermiticity, positivity and trace of rho
  double unitary = 1e-9;            ///< max |U^dag U - I|
  double jacobi_offdiag = 1e-15;    ///< stop when off-diagonal mass < this * ||H||_F
  std::size_t jacobi_max_sweeps = 100;

  // measurement model
  double group_relative = 1e-8;     ///< eigenvalue grouping: group_relative * (1 + spectral radius)
  double povm = 1e-9;               ///< positivity and completeness of effects
  double projector = 1e-9;          ///< observable spectral invariants
  double outcome_match = 1e-8;      ///< x == y when |x - y| <= outcome_match
  double probability_clamp = 1e-9;  ///< negatives in [-clamp, 0) are rounded to 0

  // error measures
  double negative_square = 1e-9;    ///< squared error below -this is an error
  double frequency_merge = 1e-10;
  double golden_section = 1e-10;    ///< final bracket width of the argmax refinement
  double grid_factor = 64.0;        ///< window length multiplier K for aperiodic profiles
  std::size_t max_denominator = 64; ///< rational detection of frequency ratios
  double rational_relative = 1e-9;
  std::size_t max_scan_points = std::size_t{1} << 24;

  // transport
  double value_merge = 1e-9;
  double distribution_sum = 1e-9;
  double cumulative_snap = 1e-12;   ///< quantile breakpoints closer than this coincide

  // correlation
  double commute = 1e-8;
  double verdict = 1e-8;            ///< off-diagonal WJD mass threshold for accuracy
  double meet = 1e-8;               ///< eigenvalue-2 threshold for P ^ Q
  double condition = 1e-8;          ///< joint-distribution condition checks
  double jpd_clamp = 1e-10;

  // relations
  double relation_slack = 1e-9;
  double violation_margin = 1e-6;
};

}  // namespace qrms
