#pragma once

// Observables with grouped spectral decompositions, POVMs, indirect measuring
// processes and the (joint) POVMs they induce on the system.

#include <optional>
#include <string>
#include <vector>

#include "qrms/distribution.hpp"
#include "qrms/linalg.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

struct SpectralComponent {
  double value = 0.0;
  Matrix projector;
};

/// Hermitian operator together with its spectral projections, one per
/// distinct eigenvalue, sorted by strictly increasing value.
class Observable {
 public:
  Observable() = default;
  /// No validation; see observable_violations().
  Observable(Matrix matrix, std::vector<SpectralComponent> spectrum)
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {}

  std::size_t dim() const noexcept { return matrix_.dim(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const std::vector<SpectralComponent>& spectrum() const noexcept { return spectrum_; }
  std::vector<double> values() const;
  double spectral_radius() const;

 private:
  Matrix matrix_;
  std::vector<SpectralComponent> spectrum_;
};

/// Groups eigenvalues whose consecutive gaps are <= group_tol; a group's value
/// is the multiplicity-weighted mean and its projector the sum of the rank-1
/// projectors.
Observable spectral_decompose(const Matrix& h, double group_tol, const Tolerances& tol = {});
/// Default grouping tolerance: tol.group_relative * (1 + spectral radius).
Observable spectral_decompose(const Matrix& h, const Tolerances& tol = {});

/// Observable from explicit (value, projector) pairs; the matrix is sum a_n P_n.
Observable observable_from_spectrum(std::vector<SpectralComponent> spectrum);

std::vector<std::string> observable_violations(const Observable& a, const Tolerances& tol = {});

/// A (x) I_K with projectors P_n (x) I_K.
Observable lift_left(const Observable& a, std::size_t dim_k);
/// I_H (x) M
Observable lift_right(const Observable& m, std::size_t dim_h);
/// U^dag X U, projectors conjugated alongside.
Observable conjugate(const Observable& x, const Matrix& u);

struct Effect {
  double outcome = 0.0;
  Matrix op;
};

/// Finite family of effects. Construction only checks dimensions; use
/// validate_povm() for positivity and completeness.
class Povm {
 public:
  Povm() = default;
  explicit Povm(std::vector<Effect> effects);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Effect>& effects() const noexcept { return effects_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Effect> effects_;
};

struct Violation {
  std::string check;
  double magnitude = 0.0;
};

std::vector<Violation> validate_povm(const Povm& p, const Tolerances& tol = {});

/// sum_x x^n Pi(x); throws InvalidPovm when validate_povm reports anything.
Matrix moment(const Povm& p, unsigned n, const Tolerances& tol = {});
/// moment() without the validation pass, for callers that validated already.
Matrix moment_unchecked(const Povm& p, unsigned n);

Povm projective_povm(const Observable& a);

/// Outcome distribution via the generalized Born rule. Negatives in
/// [-probability_clamp, 0) are rounded to 0; zero-probability outcomes stay.
DiscreteDist born_distribution(const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
DiscreteDist born_distribution(const Povm& p, const StateVector& psi, const Tolerances& tol = {});
DiscreteDist born_distribution(const Observable& a, const DensityOperator& rho, const Tolerances& tol = {});
DiscreteDist born_distribution(const Observable& a, const StateVector& psi, const Tolerances& tol = {});

/// System H, environment K in state xi, interaction unitary U on H (x) K,
/// meter M on K and optionally a system observable B whose disturbance is
/// of interest.
class MeasuringProcess {
 public:
  /// Validates unitarity, dimensions and the meter / disturbed observables;
  /// throws ValidationError or DimensionMismatch.
  MeasuringProcess(std::size_t dim_h, StateVector xi, Matrix unitary, Observable meter,
                   std::optional<Observable> disturbed = std::nullopt, const Tolerances& tol = {});

  std::size_t dim_h() const noexcept { return dim_h_; }
  std::size_t dim_k() const noexcept { return xi_.dim(); }
  const StateVector& xi() const noexcept { return xi_; }
  const Matrix& unitary() const noexcept { return unitary_; }
  const Observable& meter() const noexcept { return meter_; }
  const std::optional<Observable>& disturbed() const noexcept { return disturbed_; }

  MeasuringProcess with_disturbed(Observable b) const;

 private:
  std::size_t dim_h_;
  StateVector xi_;
  Matrix unitary_;
  Observable meter_;
  std::optional<Observable> disturbed_;
};

/// M(tau) = U^dag (I (x) M) U. Outcomes are exactly those of M.
Observable heisenberg_meter(const MeasuringProcess& proc);
/// B(tau) = U^dag (B (x) I) U; throws MissingDisturbedObservable.
Observable heisenberg_disturbed(const MeasuringProcess& proc);

/// Pi(x) = <xi| P^{M(tau)}(x) |xi>
Povm povm_from_process(const MeasuringProcess& proc);

struct JointEffect {
  double x = 0.0;
  double y = 0.0;
  Matrix op;
};

class JointPovm {
 public:
  JointPovm() = default;
  explicit JointPovm(std::vector<JointEffect> entries);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<JointEffect>& entries() const noexcept { return entries_; }
  Povm marginal_x() const;
  Povm marginal_y() const;
  Matrix total() const;

 private:
  std::size_t dim_ = 0;
  std::vector<JointEffect> entries_;
};

/// Pi(x, y) = <xi| P^{M(tau)}(x) P^{B(tau)}(y) |xi>
JointPovm joint_povm_from_process(const MeasuringProcess& proc);

/// psi (x) xi
StateVector initial_state(const MeasuringProcess& proc, const StateVector& psi);

/// Positive square root of a PSD matrix. Eigenvalues below 64 epsilon times
/// the spectral radius count as 0.
Matrix psd_sqrt(const Matrix& m, const Tolerances& tol = {});

/// Realizes an arbitrary POVM as a measuring process: K = C^{#outcomes},
/// xi = |0>, meter = sum_x x |x><x| and U(psi (x) |0>) = sum_x sqrt(Pi(x)) psi (x) |x>.
/// The induced instrument is the Lueders one, so the disturbed observable's
/// joint POVM is sqrt(Pi(x)) P^B(y) sqrt(Pi(x)).
MeasuringProcess naimark_dilation(const Povm& p, std::optional<Observable> disturbed = std::nullopt,
                                  const Tolerances& tol = {});

}  // namespace qrms
