#pragma once

// Quantum root-mean-square error measures for an observable A, a POVM Pi and
// a state: the noise-operator error, the error profile over phase rotations
// e^{-itA}, its supremum (locally uniform error), density-weighted and
// dephased averages, and the classical Gauss error of a joint distribution.

#include <optional>
#include <string>
#include <vector>

#include "qrms/distribution.hpp"
#include "qrms/linalg.hpp"
#include "qrms/measurement.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

struct TrigTerm {
  double frequency = 0.0;  ///< > 0
  Complex coefficient;
};

/// value(t) = constant + sum_k 2 Re(c_k e^{i w_k t}); real for every t.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  /// Sorts terms by frequency and merges frequencies closer than `merge_tol`.
  TrigPolynomial(double constant, std::vector<TrigTerm> terms, double merge_tol = Tolerances{}.frequency_merge);

  double constant() const noexcept { return constant_; }
  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  bool is_constant() const noexcept { return terms_.empty(); }

  double value(double t) const;
  /// constant + sum 2|c_k|
  double upper_bound() const;
  double max_frequency() const;

 private:
  double constant_ = 0.0;
  std::vector<TrigTerm> terms_;
};

/// D = A^2 + Pi^(2) - (A Pi^(1) + Pi^(1) A), so that eps_t^2 = <D> in the rotated state.
Matrix squared_noise_operator(const Observable& a, const Povm& p);

/// sqrt(Re <A^2 - 2 A Pi^(1) + Pi^(2)>). Throws NegativeSquare below -tol.negative_square.
/// Here and in eps_bar, eps_m, eps_f, squares within 64 epsilon of the
/// Frobenius norms of the terms of D are cancellation round-off and give 0.
double eps_no(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
double eps_no(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol = {});

/// sqrt(sum (y - x)^2 mu(x, y))
double eps_g(const JointDist& mu);

/// Terms of eps_g^2 = sigma_x^2 + sigma_y^2 - 2 cov + bias^2.
struct GaussDecomposition {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double covariance = 0.0;
  double bias = 0.0;  ///< E[x] - E[y]
};
GaussDecomposition gauss_decomposition(const JointDist& mu);

/// Exact eps_t^2 as a trigonometric polynomial. Frequencies are the positive
/// gaps a_m - a_n of A's spectrum with coefficients tr(rho P_m D P_n).
TrigPolynomial profile(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
TrigPolynomial profile(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol = {});

struct SupResult {
  double value = 0.0;     ///< sup_t sqrt(profile(t))
  double argmax_t = 0.0;
  bool periodic = true;   ///< false when the scan used a finite window
  double scan_length = 0.0;
};

/// Global maximum of sqrt(poly(t)) over the real line.
///
/// Rationally related frequencies give a period 2 pi / g (g the fundamental
/// frequency) which is scanned once. Otherwise the scan covers
/// [0, 2 pi max(1, w_max / w_gap) K] with K = tol.grid_factor. Grid step is at
/// most pi / (8 w_max); the best grid local maxima are refined by golden
/// section search. Ties resolve to the smallest t.
SupResult maximize_profile(const TrigPolynomial& poly, const Tolerances& tol = {});

/// Fundamental frequency when all frequency ratios are rational with
/// denominators <= tol.max_denominator.
std::optional<double> fundamental_frequency(const TrigPolynomial& poly, const Tolerances& tol = {});

SupResult eps_bar(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
SupResult eps_bar(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol = {});

/// sum_n P^A(a_n) rho P^A(a_n)
DensityOperator dephase(const Observable& a, const DensityOperator& rho);

/// eps_no on the A-dephased state (the time-average of eps_t^2).
double eps_m(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
double eps_m(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol = {});

/// Strictly positive densities on the real line with closed-form
/// characteristic functions.
struct DensitySpec {
  enum class Family { Gaussian, Cauchy };
  Family family = Family::Gaussian;
  double location = 0.0;
  double scale = 1.0;  ///< standard deviation (Gaussian) or half-width (Cauchy)

  static DensitySpec gaussian(double mean, double width) { return {Family::Gaussian, mean, width}; }
  static DensitySpec cauchy(double location, double scale) { return {Family::Cauchy, location, scale}; }
  /// "gaussian:<width>[:<mean>]" or "cauchy:<scale>[:<location>]"; throws UnsupportedDensity.
  static DensitySpec parse(const std::string& text);

  double pdf(double t) const;
  /// E[e^{i w t}]
  Complex characteristic(double w) const;
  std::string describe() const;
};

/// sqrt(integral eps_t^2 f(t) dt), integrated termwise against f's
/// characteristic function. Throws UnsupportedDensity for scale <= 0.
double eps_f(const Observable& a, const Povm& p, const DensityOperator& rho, const DensitySpec& f,
             const Tolerances& tol = {});
double eps_f(const Observable& a, const Povm& p, const StateVector& psi, const DensitySpec& f,
             const Tolerances& tol = {});

/// Standard deviation of A in the state; 0 when the variance is within
/// 64 epsilon ||A^2||_F.
double sigma(const Observable& a, const DensityOperator& rho);
double sigma(const Observable& a, const StateVector& psi);

struct ErrorReport {
  double eps_no = 0.0;
  double eps_bar = 0.0;
  double eps_m = 0.0;
  TrigPolynomial profile;
  double argmax_t = 0.0;
};

ErrorReport error_report(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol = {});
ErrorReport error_report(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol = {});

}  // namespace qrms
