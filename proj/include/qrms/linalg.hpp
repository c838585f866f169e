#pragma once

// Dense complex linear algebra at desk scale: square matrices, unit state
// vectors, density operators, a Jacobi Hermitian eigensolver, tensor products
// and partial inner products against an environment vector.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qrms/tolerances.hpp"

namespace qrms {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim);
  Matrix(std::size_t dim, std::vector<Complex> row_major);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const double> values);
  static Matrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }
  std::span<const Complex> data() const noexcept { return data_; }

  Matrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// max_ij |H_ij - conj(H_ji)|
  double hermiticity_defect() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex scalar);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Complex scalar, Matrix m);
Vector operator*(const Matrix& m, std::span<const Complex> v);

/// max_ij |a_ij - b_ij|; throws DimensionMismatch on differing sizes.
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket);
double norm(std::span<const Complex> v);

/// Unit vector in C^n.
class StateVector {
 public:
  /// Validates ||amplitudes|| = 1 within `tol`; throws ValidationError.
  explicit StateVector(Vector amplitudes, double tol = Tolerances{}.state_norm);
  /// Rescales to unit norm; throws InvalidArgument for the zero vector.
  static StateVector normalized(Vector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  operator std::span<const Complex>() const noexcept { return amps_; }

 private:
  StateVector() = default;
  Vector amps_;
};

StateVector tensor(const StateVector& a, const StateVector& b);

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix rho, double tol = Tolerances{}.density);
  static DensityOperator pure(const StateVector& psi);

  std::size_t dim() const noexcept { return rho_.dim(); }
  const Matrix& matrix() const noexcept { return rho_; }

 private:
  struct Unchecked {};
  DensityOperator(Matrix rho, Unchecked) : rho_(std::move(rho)) {}
  Matrix rho_;
};

/// Re tr(rho X)
double expectation(const Matrix& x, const DensityOperator& rho);
/// <psi|X|psi> (real part)
double expectation(const Matrix& x, const StateVector& psi);
Complex expectation_complex(const Matrix& x, const StateVector& psi);
Complex expectation_complex(const Matrix& x, const DensityOperator& rho);

struct EigenSystem {
  std::vector<double> values;  ///< ascending
  Matrix vectors;              ///< column k is the eigenvector of values[k]

  Vector column(std::size_t k) const;
};

/// Cyclic complex Jacobi. Throws NotHermitian when
/// ||H - H^dag||_max > tol.hermitian * (1 + ||H||_max).
EigenSystem herm_eig(const Matrix& h, const Tolerances& tol = {});

/// (A (x) B)[(i*dimB + k), (j*dimB + l)] = A[i,j] B[k,l]
Matrix tensor(const Matrix& a, const Matrix& b);

/// <xi| Op |xi> as an operator on H, for Op on H (x) K and xi in K.
Matrix partial_inner(const StateVector& xi, const Matrix& op);

/// exp(-i t H) through the spectral decomposition of H.
Matrix unitary_from_hamiltonian(const Matrix& h, double t, const Tolerances& tol = {});

/// max |U^dag U - I|
double unitarity_defect(const Matrix& u);

/// Permutation unitary exchanging the factors of C^n (x) C^n.
Matrix swap_operator(std::size_t n);

/// f(H) = V f(lambda) V^dag for real-valued f.
template <typename F>
Matrix apply_spectral(const EigenSystem& es, F&& f) {
  const std::size_t n = es.values.size();
  Matrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex fk = f(es.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

}  // namespace qrms
