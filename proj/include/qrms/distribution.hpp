#pragma once

#include <vector>

#include "qrms/tolerances.hpp"

namespace qrms {

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

/// Finite probability distribution on the real line. Atoms are sorted by
/// value and values closer than `value_merge` are merged on construction.
class DiscreteDist {
 public:
  DiscreteDist() = default;
  /// Throws NotADistribution on negative mass or a total that is not 1.
  explicit DiscreteDist(std::vector<Atom> atoms, const Tolerances& tol = {});

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// Mass at x (0 when no atom lies within `match` of x).
  double probability_of(double x, double match = Tolerances{}.outcome_match) const;
  double mean() const;
  double variance() const;

 private:
  std::vector<Atom> atoms_;
};

/// True when both distributions carry the same atoms within the tolerances.
bool approx_equal(const DiscreteDist& p, const DiscreteDist& q, double value_tol, double prob_tol);

struct JointAtom {
  double x = 0.0;
  double y = 0.0;
  double prob = 0.0;
};

/// Probability table on pairs of outcomes. Entries in [-jpd_clamp, 0) are
/// clamped to 0; anything more negative, or a total off by more than
/// distribution_sum, throws NotADistribution.
class JointDist {
 public:
  JointDist() = default;
  explicit JointDist(std::vector<JointAtom> table, const Tolerances& tol = {});

  const std::vector<JointAtom>& table() const noexcept { return table_; }
  double at(double x, double y, double match = Tolerances{}.outcome_match) const;
  DiscreteDist marginal_x(const Tolerances& tol = {}) const;
  DiscreteDist marginal_y(const Tolerances& tol = {}) const;
  /// mu(X = Y)
  double diagonal_mass(double match = Tolerances{}.outcome_match) const;

 private:
  std::vector<JointAtom> table_;
};

}  // namespace qrms
