#pragma once

// Commutativity in a state, joint and weak joint distributions of two
// observables, the four equivalent joint-distribution conditions, and the
// accuracy verdict for a measuring process.

#include <string>
#include <vector>

#include "qrms/distribution.hpp"
#include "qrms/linalg.hpp"
#include "qrms/measurement.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

struct CommuteResult {
  bool commute = false;
  /// max_{x,y} || [P^X(x), P^Y(y)] Psi ||
  double residual = 0.0;
};

CommuteResult commute_in_state(const Observable& x, const Observable& y, const StateVector& psi,
                               double tol = Tolerances{}.commute);

/// mu(x, y) = <Psi| P^X(x) P^Y(y) |Psi>. Throws NotCommutingInState with the
/// residual as magnitude when the pair does not commute in Psi.
JointDist jpd(const Observable& x, const Observable& y, const StateVector& psi, const Tolerances& tol = {});

struct WeakEntry {
  double x = 0.0;
  double y = 0.0;
  Complex value;
};

/// nu(x, y) = <Psi| P^Y(y) P^X(x) |Psi>. Never clamped: negative or complex
/// entries are the information.
class WeakJointDist {
 public:
  WeakJointDist() = default;
  explicit WeakJointDist(std::vector<WeakEntry> table) : table_(std::move(table)) {}

  const std::vector<WeakEntry>& table() const noexcept { return table_; }
  Complex at(double x, double y, double match = Tolerances{}.outcome_match) const;
  Complex total() const;
  /// sum_y nu(x, y), one entry per x in first-seen order
  std::vector<std::pair<double, Complex>> marginal_x() const;
  /// sum_x nu(x, y), one entry per y in first-seen order
  std::vector<std::pair<double, Complex>> marginal_y() const;
  /// max |Im nu| + max(0, -Re nu) over all entries
  double nonclassicality() const;

 private:
  std::vector<WeakEntry> table_;
};

WeakJointDist wjd(const Observable& x, const Observable& y, const StateVector& psi);

/// Projector onto range(P) ∩ range(Q): the eigenspace of P + Q with
/// eigenvalues above 2 - tol.meet.
Matrix meet(const Matrix& p, const Matrix& q, const Tolerances& tol = {});

/// <Psi|f(X,Y)|Psi> against sum f(x,y) Re nu(x,y) for one probe word.
struct ProbeResidual {
  /// A word over X and Y such as "YXY", or a projector sandwich such as
  /// "PY(1)PX(-1)PY(1)"; operators apply right to left.
  std::string word;
  Complex quantum;
  double classical = 0.0;
  double residual = 0.0;
};

struct JointConditionsReport {
  bool range_condition = false;  ///< (i) Psi in the range of sum P^X(x) ∧ P^Y(y)
  bool commute = false;          ///< (ii)
  bool jpd_exists = false;       ///< (iii) by the probe certificate
  bool meet_mass = false;        ///< (iv) sum <Psi|P^X(x) ∧ P^Y(y)|Psi> = 1

  double range_residual = 0.0;
  double commute_residual = 0.0;
  double wjd_nonclassicality = 0.0;
  double meet_total = 0.0;
  std::vector<ProbeResidual> probes;

  bool all_agree() const {
    return range_condition == commute && commute == jpd_exists && jpd_exists == meet_mass;
  }
};

/// Words over X and Y probed for condition (iii); projector sandwiches for
/// every level pair are probed as well.
const std::vector<std::string>& probe_words();

JointConditionsReport joint_conditions(const Observable& x, const Observable& y, const StateVector& psi,
                                   const Tolerances& tol = {});

struct AccuracyVerdict {
  bool accurate = false;         ///< offdiag_mass < tol
  double offdiag_mass = 0.0;     ///< max |nu(x, y)| over x != y
  double commute_residual = 0.0;
  double diagonal_mass = 0.0;    ///< Re sum_{x = y} <Psi|P^{A(0)}(x) P^{M(tau)}(y)|Psi>
  bool s_verdict = false;        ///< commute_residual < tol and diagonal_mass > 1 - tol
};

/// Accuracy of `proc` as a measurement of A in psi, decided on the weak joint
/// distribution of A(0) = A (x) I and M(tau) in psi (x) xi.
AccuracyVerdict is_accurate(const MeasuringProcess& proc, const Observable& a, const StateVector& psi,
                            double tol = Tolerances{}.verdict, const Tolerances& tols = {});

}  // namespace qrms
