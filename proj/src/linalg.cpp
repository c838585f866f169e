#include "qrms/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                    std::to_string(dim_ * dim_));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    require_same_dim(row.size(), dim_, "matrix row length");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  require_same_dim(ket.size(), bra.size(), "outer product");
  Matrix m(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Matrix::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_dim(dim_, other.dim_, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_dim(dim_, other.dim_, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Complex scalar, Matrix m) { return m *= scalar; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "matrix product");
  const std::size_t n = lhs.dim();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector operator*(const Matrix& m, std::span<const Complex> v) {
  require_same_dim(m.dim(), v.size(), "matrix-vector product");
  Vector out(v.size());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_dim(a.dim(), b.dim(), "matrix comparison");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket) {
  require_same_dim(bra.size(), ket.size(), "inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < bra.size(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

StateVector::StateVector(Vector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw Error(ErrorCode::ValidationError, "state has dimension 0");
  const double n = norm(amps_);
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    std::ostringstream msg;
    msg << "state norm " << std::setprecision(12) << n;
    throw Error(ErrorCode::ValidationError, msg.str(), n);
  }
}

StateVector StateVector::normalized(Vector amplitudes) {
  const double n = norm(amplitudes);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  StateVector s;
  s.amps_ = std::move(amplitudes);
  for (auto& z : s.amps_) z /= n;
  return s;
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Vector v(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector v;
  v.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) v.push_back(a[i] * b[k]);
  return StateVector::normalized(std::move(v));
}

DensityOperator::DensityOperator(Matrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.empty()) throw Error(ErrorCode::ValidationError, "density operator has dimension 0");
  const double herm = rho_.hermiticity_defect();
  if (herm > tol) throw Error(ErrorCode::ValidationError, "density operator not Hermitian", herm);
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorCode::ValidationError, "density operator trace " + std::to_string(tr), tr);
  }
  const auto es = herm_eig(rho_);
  if (es.values.front() < -tol) {
    throw Error(ErrorCode::ValidationError, "density operator has a negative eigenvalue",
                es.values.front());
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(Matrix::outer(psi.amplitudes(), psi.amplitudes()), Unchecked{});
}

Complex expectation_complex(const Matrix& x, const DensityOperator& rho) {
  require_same_dim(x.dim(), rho.dim(), "expectation");
  const Matrix& r = rho.matrix();
  Complex s = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k)
    for (std::size_t j = 0; j < x.dim(); ++j) s += r(k, j) * x(j, k);
  return s;
}

Complex expectation_complex(const Matrix& x, const StateVector& psi) {
  return inner(psi.amplitudes(), x * psi.amplitudes());
}

double expectation(const Matrix& x, const DensityOperator& rho) {
  return expectation_complex(x, rho).real();
}

double expectation(const Matrix& x, const StateVector& psi) {
  return expectation_complex(x, psi).real();
}

Vector EigenSystem::column(std::size_t k) const {
  Vector v(vectors.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
  return v;
}

EigenSystem herm_eig(const Matrix& h, const Tolerances& tol) {
  const double defect = h.hermiticity_defect();
  if (defect > tol.hermitian * (1.0 + h.max_abs())) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian", defect);
  }
  const std::size_t n = h.dim();
  // Work on the exactly Hermitian part.
  Matrix a = h;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();

  auto offdiag = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  // An entry below round-off of both diagonal entries, or far below ||H||_F,
  // moves eigenvectors by less than round-off and is dropped. Converged once
  // a sweep drops everything or the off-diagonal mass is below jacobi_offdiag.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto negligible = [&](double r, std::size_t p, std::size_t q) {
    return r < 1e-3 * eps * scale ||
           (r < 1e-2 * eps * std::abs(a(p, p).real()) && r < 1e-2 * eps * std::abs(a(q, q).real()));
  };
  for (std::size_t sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
    if (scale == 0.0 || offdiag() < tol.jacobi_offdiag * scale) break;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        if (negligible(r, p, q)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        // J = diag(.., e^{-i phi} at q) * real Givens rotation; J^dag A J has a(p,q) = 0.
        const Complex phase = std::conj(apq) / r;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * jpp + aiq * jqp;
          a(i, q) = aip * jpq + aiq * jqq;
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * jpp + viq * jqp;
          v(i, q) = vip * jpq + viq * jqq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
          a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  Matrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

Matrix partial_inner(const StateVector& xi, const Matrix& op) {
  const std::size_t nk = xi.dim();
  if (op.dim() % nk != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator dimension " + std::to_string(op.dim()) +
                    " is not a multiple of environment dimension " + std::to_string(nk));
  }
  const std::size_t nh = op.dim() / nk;
  Matrix out(nh);
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        const Complex xk = std::conj(xi[k]);
        if (xk == Complex{}) continue;
        for (std::size_t l = 0; l < nk; ++l) s += xk * op(i * nk + k, j * nk + l) * xi[l];
      }
      out(i, j) = s;
    }
  return out;
}

Matrix unitary_from_hamiltonian(const Matrix& h, double t, const Tolerances& tol) {
  const auto es = herm_eig(h, tol);
  return apply_spectral(es, [t](double lambda) { return std::exp(Complex(0.0, -lambda * t)); });
}

double unitarity_defect(const Matrix& u) {
  return max_abs_diff(u.adjoint() * u, Matrix::identity(u.dim()));
}

Matrix swap_operator(std::size_t n) {
  Matrix s(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) s(k * n + i, i * n + k) = 1.0;
  return s;
}

}  // namespace qrms
