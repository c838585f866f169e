#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrms/error_measures.hpp"
#include "qrms/errors.hpp"
#include "qrms/random.hpp"
#include "qrms/relations.hpp"

using namespace qrms;

TEST_SUITE("relations") {
  TEST_CASE("c_ab for Pauli pairs") {
    const Complex i(0, 1);
    const Observable x = spectral_decompose(Matrix{{0, 1}, {1, 0}});
    const Observable y = spectral_decompose(Matrix{{0, -i}, {i, 0}});
    // [X, Y] = 2iZ, so C = |<Z>|.
    CHECK(c_ab(x, y, StateVector::basis(2, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c_ab(x, y, StateVector::normalized({1, 1})) < 1e-14);
    CHECK(c_ab(x, y, DensityOperator::pure(StateVector::basis(2, 1))) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("check_uedr slack") {
    CHECK(check_uedr(0, 0, 1, 1, 0));
    CHECK(check_uedr(0, 0, 1, 1, 5e-10));
    CHECK_FALSE(check_uedr(0, 0, 1, 1, 1e-6));
    CHECK(check_uedr(0.5, 0.5, 1, 1, 1.25));
  }

  TEST_CASE("robertson bound on random triples") {
    Rng rng(301);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng.below(3);
      const Observable a = random_observable(n, rng), b = random_observable(n, rng);
      const StateVector psi = random_state(n, rng);
      CHECK(c_ab(a, b, psi) <= sigma(a, psi) * sigma(b, psi) + 1e-9);
    }
  }

  TEST_CASE("search is deterministic and independent of worker count") {
    const auto one = search_violations(5, 400, 2, Measure::NO, 1);
    const auto four = search_violations(5, 400, 2, Measure::NO, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
      CHECK(one[k].trial == four[k].trial);
      CHECK(one[k].product_lhs == four[k].product_lhs);
    }
    for (std::size_t k = 1; k < one.size(); ++k) CHECK(one[k - 1].trial < one[k].trial);
  }

  TEST_CASE("violations of the product relation respect the universal one") {
    for (Measure m : {Measure::NO, Measure::BAR}) {
      const auto found = search_violations(11, 2000, 2, m, 2);
      CHECK_FALSE(found.empty());
      for (const auto& r : found) {
        CHECK_FALSE(r.product_holds);
        CHECK(r.uedr_holds);
        CHECK(r.c_ab - r.product_lhs > 1e-6);
      }
    }
  }

  TEST_CASE("universal relation on sampled trials") {
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
      Observable a;
      StateVector psi = StateVector::basis(2, 0);
      const MeasuringProcess proc = violation_trial_process(17, trial, 2, a, psi);
      for (Measure m : {Measure::NO, Measure::BAR}) {
        const auto r = error_disturbance(proc, a, psi, m);
        CHECK(r.uedr_holds);
        CHECK(r.c_ab <= r.sigma_a * r.sigma_b + 1e-9);
      }
      const auto no = error_disturbance(proc, a, psi, Measure::NO);
      const auto bar = error_disturbance(proc, a, psi, Measure::BAR);
      CHECK(bar.eps_a >= no.eps_a - 1e-12);
    }
  }

  TEST_CASE("error_disturbance requires B") {
    const Observable z = spectral_decompose(Matrix{{1, 0}, {0, -1}});
    const MeasuringProcess proc = naimark_dilation(projective_povm(z));
    try {
      error_disturbance(proc, z, StateVector::basis(2, 0), Measure::NO);
      FAIL("missing B accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingDisturbedObservable);
    }
  }

  TEST_CASE("sup over a finite family") {
    const Observable a = spectral_decompose(Matrix{{1, 1}, {1, 1}});
    const Povm pi = projective_povm(spectral_decompose(Matrix{{1, 1}, {1, -1}}));
    const std::vector<StateVector> states{StateVector::basis(2, 0), StateVector::basis(2, 1)};
    const double no = sup_over_states(a, pi, states, Measure::NO);
    for (const auto& s : states) CHECK(no >= eps_no(a, pi, s) - 1e-12);
    CHECK(sup_over_states(a, pi, states, Measure::BAR) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(sup_over_states(a, pi, {}, Measure::NO), Error);
  }

  TEST_CASE("builtin relations") {
    const auto rel = builtin_relations();
    REQUIRE(rel.size() == 2);
    RelationReport r;
    r.c_ab = 1.0;
    r.product_lhs = 0.5;
    r.uedr_lhs = 1.5;
    CHECK_FALSE(rel[0].holds(r));
    CHECK(rel[1].holds(r));
  }
  TEST_CASE("check_uedr arithmetic") {
    CHECK(check_uedr(0, 0, 1, 1, 0));
    CHECK_FALSE(check_uedr(0, 0, 1, 1, 0.5));
  }

  TEST_CASE("empty search") { CHECK(search_violations(1, 0, 2).empty()); }

  TEST_CASE("accurate non-disturbing measurement") {
    const Observable a = spectral_decompose(Matrix::diagonal(std::vector<double>{1, -1, 1}));
    const Observable b = spectral_decompose(Matrix::diagonal(std::vector<double>{2, 3, 5}));
    const MeasuringProcess proc = naimark_dilation(projective_povm(a), b);
    const StateVector psi = StateVector::normalized({0.3, Complex(0.4, 0.2), -0.5});
    for (Measure m : {Measure::NO, Measure::BAR}) {
      const auto r = error_disturbance(proc, a, psi, m);
      CHECK(r.eps_a < 1e-9);
      CHECK(r.eta_b < 1e-9);
      CHECK(r.c_ab < 1e-12);
      CHECK(r.uedr_holds);
    }
  }

  TEST_CASE("uniform measure dominates componentwise") {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      Observable a;
      StateVector psi = StateVector::basis(2, 0);
      const MeasuringProcess proc = violation_trial_process(307, trial, 2, a, psi);
      const auto no = error_disturbance(proc, a, psi, Measure::NO);
      const auto bar = error_disturbance(proc, a, psi, Measure::BAR);
      CHECK(bar.eps_a >= no.eps_a - 1e-9);
      CHECK(bar.eta_b >= no.eta_b - 1e-9);
      CHECK(no.uedr_holds);
      CHECK(bar.uedr_holds);
    }
  }

  TEST_CASE("sup over accurate and rotated families") {
    Rng rng(311);
    const Observable z = random_observable(3, rng);
    std::vector<StateVector> states;
    for (int k = 0; k < 5; ++k) states.push_back(random_state(3, rng));
    CHECK(sup_over_states(z, projective_povm(z), states, Measure::NO) < 1e-9);
    CHECK(sup_over_states(z, projective_povm(z), states, Measure::BAR) < 1e-9);

    const Observable a = spectral_decompose(Matrix{{1, 1}, {1, 1}});
    const Povm pi = projective_povm(spectral_decompose(Matrix{{1, 1}, {1, -1}}));
    std::vector<StateVector> rotated;
    for (int k = 0; k <= 64; ++k) {
      const double t = k * std::numbers::pi / 64;
      rotated.push_back(
          StateVector::normalized(unitary_from_hamiltonian(a.matrix(), t) * StateVector::basis(2, 0).amplitudes()));
    }
    CHECK(sup_over_states(a, pi, rotated, Measure::NO) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sup_over_states(a, pi, rotated, Measure::BAR) >= sup_over_states(a, pi, rotated, Measure::NO) - 1e-9);
  }
}
