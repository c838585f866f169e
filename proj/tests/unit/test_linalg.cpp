#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrms/errors.hpp"
#include "qrms/linalg.hpp"
#include "qrms/random.hpp"

using namespace qrms;

namespace {

Matrix pauli_x() { return Matrix{{0, 1}, {1, 0}}; }
Matrix pauli_y() { return Matrix{{0, Complex(0, -1)}, {Complex(0, 1), 0}}; }
Matrix pauli_z() { return Matrix{{1, 0}, {0, -1}}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("pauli algebra") {
    CHECK(max_abs_diff(pauli_x() * pauli_y(), Complex(0, 1) * pauli_z()) < 1e-15);
    CHECK(max_abs_diff(commutator(pauli_x(), pauli_y()), Complex(0, 2) * pauli_z()) < 1e-15);
    CHECK(pauli_y().hermiticity_defect() == 0.0);
    CHECK(std::abs(pauli_x().trace()) == 0.0);
  }

  TEST_CASE("herm_eig on a known spectrum") {
    const auto es = herm_eig(Matrix{{2, 1}, {1, 2}});
    REQUIRE(es.values.size() == 2);
    CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(es.values[1] == doctest::Approx(3.0).epsilon(1e-14));
    const auto back = apply_spectral(es, [](double x) { return x; });
    CHECK(max_abs_diff(back, Matrix{{2, 1}, {1, 2}}) < 1e-13);
  }

  TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
    Rng rng(7);
    for (std::size_t n = 1; n <= 8; ++n) {
      const Matrix h = random_hermitian(n, rng);
      const auto es = herm_eig(h);
      CHECK(max_abs_diff(apply_spectral(es, [](double x) { return x; }), h) < 1e-11);
      CHECK(unitarity_defect(es.vectors) < 1e-12);
      for (std::size_t k = 1; k < n; ++k) CHECK(es.values[k - 1] <= es.values[k]);
    }
  }

  TEST_CASE("spectrum of A (x) I repeats each eigenvalue dim_k times") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_hermitian(2, rng);
      const auto ea = herm_eig(a);
      const auto ek = herm_eig(tensor(a, Matrix::identity(3)));
      REQUIRE(ek.values.size() == 6);
      for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(ek.values[i] - ea.values[i / 3]) < 1e-11);
    }
  }

  TEST_CASE("herm_eig rejects non-Hermitian input") {
    CHECK(code_of([] { herm_eig(Matrix{{0, 1}, {0, 0}}); }) == ErrorCode::NotHermitian);
  }

  TEST_CASE("tensor product index convention") {
    const Matrix a{{1, 2}, {3, 4}};
    const Matrix b{{0, 5}, {6, 7}};
    const Matrix ab = tensor(a, b);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t l = 0; l < 2; ++l) CHECK(ab(i * 2 + k, j * 2 + l) == a(i, j) * b(k, l));
  }

  TEST_CASE("partial_inner of a product operator") {
    Rng rng(3);
    const Matrix a = random_hermitian(2, rng);
    const Matrix b = random_hermitian(3, rng);
    const StateVector xi = random_state(3, rng);
    const Matrix got = partial_inner(xi, tensor(a, b));
    CHECK(max_abs_diff(got, expectation_complex(b, xi) * a) < 1e-13);
  }

  TEST_CASE("partial_inner preserves positivity") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix g = random_hermitian(6, rng);
      const Matrix psd = g * g;
      const Matrix out = partial_inner(random_state(3, rng), psd);
      CHECK(herm_eig(out).values.front() >= -1e-9);
    }
  }

  TEST_CASE("unitary_from_hamiltonian") {
    const double t = 0.37;
    const Matrix u = unitary_from_hamiltonian(pauli_x(), t);
    const Matrix expect = Complex(std::cos(t)) * Matrix::identity(2) + Complex(0, -std::sin(t)) * pauli_x();
    CHECK(max_abs_diff(u, expect) < 1e-14);
    Rng rng(2);
    CHECK(unitarity_defect(unitary_from_hamiltonian(random_hermitian(5, rng), 1.3)) < 1e-12);
  }

  TEST_CASE("swap_operator exchanges factors") {
    Rng rng(9);
    const StateVector a = random_state(3, rng), b = random_state(3, rng);
    const Vector swapped = swap_operator(3) * tensor(a, b).amplitudes();
    const auto ba = tensor(b, a);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(swapped[i] - ba[i]) < 1e-15);
  }

  TEST_CASE("state validation") {
    CHECK_NOTHROW(StateVector(Vector{0.6, Complex(0, 0.8)}));
    try {
      StateVector(Vector{1.2, 0.0});
      FAIL("accepted a non-unit state");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ValidationError);
      CHECK(std::string(e.what()).find("state norm 1.2") != std::string::npos);
    }
    CHECK(code_of([] { StateVector::normalized(Vector{0.0, 0.0}); }) == ErrorCode::InvalidArgument);
    const auto s = StateVector::normalized(Vector{3.0, 4.0});
    CHECK(norm(s) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("density operator validation") {
    CHECK_NOTHROW(DensityOperator(Matrix{{0.5, 0}, {0, 0.5}}));
    CHECK_THROWS_AS(DensityOperator(Matrix{{1.5, 0}, {0, -0.5}}), Error);
    CHECK_THROWS_AS(DensityOperator(Matrix{{0.6, 0}, {0, 0.6}}), Error);
    CHECK_THROWS_AS(DensityOperator(Matrix{{0.5, 0.1}, {0.2, 0.5}}), Error);
    Rng rng(4);
    const StateVector psi = random_state(4, rng);
    const Matrix h = random_hermitian(4, rng);
    CHECK(std::abs(expectation(h, DensityOperator::pure(psi)) - expectation(h, psi)) < 1e-13);
  }

  TEST_CASE("dimension mismatch") {
    CHECK(code_of([] { max_abs_diff(Matrix(2), Matrix(3)); }) == ErrorCode::DimensionMismatch);
  }

  TEST_CASE("herm_eig on diagonal and rank-one inputs") {
    const auto d = herm_eig(Matrix::diagonal(std::vector<double>{3, 1}));
    CHECK(d.values[0] == 1.0);
    CHECK(d.values[1] == 3.0);
    CHECK(std::abs(std::abs(d.vectors(1, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(d.vectors(0, 1)) - 1.0) < 1e-15);
    const auto r = herm_eig(Matrix{{1, 1}, {1, 1}});
    CHECK(std::abs(r.values[0]) < 1e-14);
    CHECK(r.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("tensor identities") {
    CHECK(max_abs_diff(tensor(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4)) == 0.0);
    CHECK(max_abs_diff(tensor(pauli_z(), Matrix::identity(2)), Matrix::diagonal(std::vector<double>{1, 1, -1, -1})) ==
          0.0);
    Rng rng(41);
    const Matrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
    const Matrix mixed = tensor(a, Matrix::identity(3)) * tensor(Matrix::identity(2), b);
    CHECK(max_abs_diff(mixed, tensor(a, b)) < 1e-14);
  }

  TEST_CASE("partial_inner of the identity") {
    Rng rng(43);
    const Matrix got = partial_inner(random_state(3, rng), Matrix::identity(6));
    CHECK(max_abs_diff(got, Matrix::identity(2)) < 1e-14);
  }

  TEST_CASE("unitary_from_hamiltonian special cases") {
    CHECK(max_abs_diff(unitary_from_hamiltonian(Matrix(3), 2.0), Matrix::identity(3)) < 1e-15);
    const Matrix quarter = unitary_from_hamiltonian(pauli_z(), std::numbers::pi / 2);
    CHECK(max_abs_diff(quarter, Matrix{{Complex(0, -1), 0}, {0, Complex(0, 1)}}) < 1e-15);
    Rng rng(47);
    const Matrix h = random_hermitian(4, rng);
    const Matrix round = unitary_from_hamiltonian(h, 0.8) * unitary_from_hamiltonian(h, -0.8);
    CHECK(max_abs_diff(round, Matrix::identity(4)) < 1e-12);
  }
}
