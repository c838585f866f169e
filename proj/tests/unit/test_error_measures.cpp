#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qrms/errors.hpp"
#include "qrms/error_measures.hpp"
#include "qrms/models.hpp"
#include "qrms/random.hpp"

using namespace qrms;

namespace {

constexpr double kPi = std::numbers::pi;

struct Counterexample {
  Observable a = spectral_decompose(Matrix{{1, 1}, {1, 1}});
  Povm pi = projective_povm(spectral_decompose(Matrix{{1, 1}, {1, -1}}));
  StateVector psi = StateVector::basis(2, 0);
};

StateVector rotated(const Observable& a, const StateVector& psi, double t) {
  return StateVector::normalized(unitary_from_hamiltonian(a.matrix(), t) * psi.amplitudes());
}

// Composite Simpson on [lo, hi] with n (even) intervals.
template <typename F>
double simpson(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("error-measures") {
  TEST_CASE("counterexample profile is 2|sin t|") {
    const Counterexample ex;
    CHECK(eps_no(ex.a, ex.pi, ex.psi) < 1e-9);
    const auto poly = profile(ex.a, ex.pi, ex.psi);
    for (double t : {0.0, kPi / 6, kPi / 4, kPi / 2, 1.0, 2.5})
      CHECK(std::sqrt(std::max(0.0, poly.value(t))) == doctest::Approx(2.0 * std::abs(std::sin(t))).epsilon(1e-9));
    const auto bar = eps_bar(ex.a, ex.pi, ex.psi);
    CHECK(bar.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::fmod(bar.argmax_t, kPi) == doctest::Approx(kPi / 2).epsilon(1e-6));
    CHECK(eps_m(ex.a, ex.pi, ex.psi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  }

  TEST_CASE("profile equals eps_no of the rotated state") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
      const Model m = random_model(rng, 3);
      const Povm p = povm_from_process(m.proc);
      const auto poly = profile(m.a, p, m.psi);
      for (double t : {0.0, 0.3, 1.7, -4.2, 11.0}) {
        const double direct = eps_no(m.a, p, rotated(m.a, m.psi, t));
        CHECK(std::abs(poly.value(t) - direct * direct) < 1e-9);
      }
    }
  }

  TEST_CASE("eps_bar lies between dense samples and the coefficient bound") {
    Rng rng(103);
    for (int trial = 0; trial < 60; ++trial) {
      const Model m = random_model(rng, 3);
      const Povm p = povm_from_process(m.proc);
      const auto poly = profile(m.a, p, m.psi);
      const double bar = eps_bar(m.a, p, m.psi).value;
      double sampled = 0.0;
      for (int i = 0; i <= 4000; ++i) sampled = std::max(sampled, poly.value(i * 0.01));
      // Compared as squares: sqrt amplifies round-off near zero.
      const double e0 = eps_no(m.a, p, m.psi);
      CHECK(bar * bar >= sampled - 1e-12);
      CHECK(bar * bar <= poly.upper_bound() + 1e-12);
      CHECK(bar >= e0);
    }
  }

  TEST_CASE("commuting model has a constant profile") {
    const Observable z = spectral_decompose(Matrix{{1, 0}, {0, -1}});
    const Povm p({{1.0, Matrix{{0.8, 0}, {0, 0.3}}}, {-1.0, Matrix{{0.2, 0}, {0, 0.7}}}});
    const StateVector psi(Vector{0.6, 0.8});
    const auto poly = profile(z, p, psi);
    const double e0 = poly.value(0.0);
    for (double t : {0.5, 1.0, 2.0, 3.0}) CHECK(poly.value(t) == doctest::Approx(e0).epsilon(1e-12));
    const auto bar = eps_bar(z, p, psi);
    CHECK(bar.value == doctest::Approx(eps_no(z, p, psi)).epsilon(1e-12));
    CHECK(bar.argmax_t == 0.0);
  }

  TEST_CASE("maximize_profile on hand-built polynomials") {
    // 1 + 2 cos t + 2 cos(2t) peaks at t = 0 with value 5.
    const TrigPolynomial periodic(1.0, {{1.0, 1.0}, {2.0, 1.0}});
    const auto r = maximize_profile(periodic);
    CHECK(r.periodic);
    CHECK(r.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(r.argmax_t == doctest::Approx(0.0).epsilon(1e-6));
    // Incommensurate frequencies: the sup approaches the coefficient bound.
    const TrigPolynomial aperiodic(2.0, {{1.0, 0.5}, {std::numbers::sqrt2, 0.5}});
    const auto q = maximize_profile(aperiodic);
    CHECK_FALSE(q.periodic);
    CHECK(q.value <= std::sqrt(aperiodic.upper_bound()) + 1e-12);
    CHECK(q.value > std::sqrt(aperiodic.upper_bound()) - 1e-3);
    CHECK(fundamental_frequency(periodic).value() == doctest::Approx(1.0));
    CHECK_FALSE(fundamental_frequency(aperiodic).has_value());
  }

  TEST_CASE("maximize_profile terminates on nearly degenerate gaps") {
    const TrigPolynomial poly(1.0, {{1.0, Complex(0.2, 0.1)}, {1.0 + 1e-7, Complex(-0.1, 0.3)}, {2.3, 0.05}});
    const auto r = maximize_profile(poly);
    CHECK(std::isfinite(r.value));
    CHECK(r.value <= std::sqrt(poly.upper_bound()) + 1e-12);
  }

  TEST_CASE("eps_f matches numerical quadrature") {
    Rng rng(107);
    for (int trial = 0; trial < 20; ++trial) {
      const Model m = random_model(rng, 3);
      const Povm p = povm_from_process(m.proc);
      const auto poly = profile(m.a, p, m.psi);
      for (const auto& f : {DensitySpec::gaussian(0.3, 0.7), DensitySpec::cauchy(-0.2, 0.4)}) {
        // Truncate at loc +- span; beyond it only the constant term survives
        // averaging, weighted by the exact tail mass.
        const bool gauss = f.family == DensitySpec::Family::Gaussian;
        const double span = gauss ? 12.0 * f.scale : 4000.0 * f.scale;
        const double tail = gauss ? 0.0 : 1.0 - 2.0 * std::atan(span / f.scale) / kPi;
        const double integral =
            simpson([&](double t) { return poly.value(t) * f.pdf(t); }, f.location - span, f.location + span,
                    gauss ? 20000 : 2000000) +
            poly.constant() * tail;
        CHECK(eps_f(m.a, p, m.psi, f) == doctest::Approx(std::sqrt(std::max(0.0, integral))).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("ordering eps_m, eps_f <= eps_bar") {
    Rng rng(109);
    for (int trial = 0; trial < 100; ++trial) {
      const Model m = random_model(rng, 3);
      const Povm p = povm_from_process(m.proc);
      const auto rep = error_report(m.a, p, m.psi);
      CHECK(rep.eps_m <= rep.eps_bar + 1e-9);
      for (double w : {0.25, 1.0, 4.0}) CHECK(eps_f(m.a, p, m.psi, DensitySpec::gaussian(0, w)) <= rep.eps_bar + 1e-9);
    }
  }

  TEST_CASE("eps_m is eps_no on the dephased state") {
    Rng rng(113);
    const Model m = random_model(rng, 3);
    const Povm p = povm_from_process(m.proc);
    const DensityOperator rho = dephase(m.a, DensityOperator::pure(m.psi));
    CHECK(eps_m(m.a, p, m.psi) == doctest::Approx(eps_no(m.a, p, rho)).epsilon(1e-12));
  }

  TEST_CASE("gauss error decomposition") {
    const JointDist mu({{1, 1, 1.0 / 9}, {1, -1, 2.0 / 9}, {-1, 1, 2.0 / 9}, {-1, -1, 4.0 / 9}});
    CHECK(eps_g(mu) == doctest::Approx(4.0 / 3).epsilon(1e-12));
    const auto d = gauss_decomposition(mu);
    const double sq = d.sigma_x * d.sigma_x + d.sigma_y * d.sigma_y - 2 * d.covariance + d.bias * d.bias;
    CHECK(sq == doctest::Approx(16.0 / 9).epsilon(1e-12));
  }

  TEST_CASE("density parsing") {
    const auto g = DensitySpec::parse("gaussian:2");
    CHECK(g.family == DensitySpec::Family::Gaussian);
    CHECK(g.scale == 2.0);
    const auto c = DensitySpec::parse("cauchy:0.5:1");
    CHECK(c.family == DensitySpec::Family::Cauchy);
    CHECK(c.location == 1.0);
    CHECK_THROWS_AS(DensitySpec::parse("uniform:1"), Error);
    CHECK_THROWS_AS(DensitySpec::parse("gaussian:-1"), Error);
    CHECK(std::abs(g.characteristic(0.0) - Complex(1.0)) < 1e-15);
  }

  TEST_CASE("sigma") {
    const Observable a = spectral_decompose(Matrix::diagonal(std::vector<double>{1, 1, -1, -1}));
    const StateVector psi(Vector{1.0 / 3, std::sqrt(2.0) / 3, std::sqrt(2.0) / 3, 2.0 / 3});
    CHECK(sigma(a, psi) == doctest::Approx(2.0 * std::sqrt(2.0) / 3).epsilon(1e-12));
  }

  TEST_CASE("four-level example") {
    const Observable a = spectral_decompose(Matrix::diagonal(std::vector<double>{1, 1, -1, -1}));
    const Povm pi({{1.0, Matrix::diagonal(std::vector<double>{1, 0, 1, 0})},
                   {-1.0, Matrix::diagonal(std::vector<double>{0, 1, 0, 1})}});
    const StateVector psi(Vector{1.0 / 3, std::sqrt(2.0) / 3, std::sqrt(2.0) / 3, 2.0 / 3});
    CHECK(eps_no(a, pi, psi) == doctest::Approx(4.0 / 3).epsilon(1e-12));
    // A and Pi commute, so the profile is constant.
    CHECK(eps_bar(a, pi, psi).value == doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(eps_m(a, pi, psi) == doctest::Approx(4.0 / 3).epsilon(1e-12));
  }

  TEST_CASE("projective measurement of A has zero error") {
    Rng rng(127);
    for (int trial = 0; trial < 20; ++trial) {
      const Observable a = random_observable(3, rng);
      const Povm p = projective_povm(a);
      const StateVector psi = random_state(3, rng);
      CHECK(eps_no(a, p, psi) < 1e-9);
      CHECK(eps_bar(a, p, psi).value < 1e-9);
      CHECK(eps_m(a, p, psi) < 1e-9);
    }
  }

  TEST_CASE("gauss error of diagonal and point-mass tables") {
    CHECK(eps_g(JointDist({{1, 1, 0.25}, {-2, -2, 0.75}})) == 0.0);
    CHECK(eps_g(JointDist({{0, 3, 1.0}})) == doctest::Approx(3.0).epsilon(1e-15));
  }

  TEST_CASE("eps_f on constant and counterexample profiles") {
    const Observable z = spectral_decompose(Matrix{{1, 0}, {0, -1}});
    const Povm p({{1.0, Matrix{{0.8, 0}, {0, 0.3}}}, {-1.0, Matrix{{0.2, 0}, {0, 0.7}}}});
    const StateVector psi(Vector{0.6, 0.8});
    for (const auto& f : {DensitySpec::gaussian(0.3, 0.1), DensitySpec::cauchy(-2.0, 5.0)})
      CHECK(eps_f(z, p, psi, f) == doctest::Approx(eps_no(z, p, psi)).epsilon(1e-12));
    const Counterexample ex;
    CHECK(std::abs(eps_f(ex.a, ex.pi, ex.psi, DensitySpec::gaussian(0, 1e3)) - std::sqrt(2.0)) < 1e-3);
  }

  TEST_CASE("eps_m equals eps_no when the profile is constant") {
    const Observable z = spectral_decompose(Matrix{{1, 0}, {0, -1}});
    const Povm p({{1.0, Matrix{{0.8, 0}, {0, 0.3}}}, {-1.0, Matrix{{0.2, 0}, {0, 0.7}}}});
    const StateVector psi(Vector{0.6, 0.8});
    CHECK(eps_m(z, p, psi) == doctest::Approx(eps_no(z, p, psi)).epsilon(1e-12));
  }

  TEST_CASE("eps_m is the long-time average of the profile") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
      const Model m = random_model(rng, 3);
      const Povm p = povm_from_process(m.proc);
      const auto poly = profile(m.a, p, m.psi);
      if (poly.is_constant()) continue;
      double w_min = poly.terms().front().frequency;
      for (const auto& term : poly.terms()) w_min = std::min(w_min, term.frequency);
      const double horizon = 1e4 / w_min;
      const double avg = simpson([&](double t) { return poly.value(t); }, 0.0, horizon, 400000) / horizon;
      CHECK(std::abs(std::sqrt(std::max(0.0, avg)) - eps_m(m.a, p, m.psi)) < 1e-3);
    }
  }

  TEST_CASE("sigma vanishes on eigenstates and matches the Born variance") {
    Rng rng(137);
    const Observable a = random_observable(4, rng);
    const auto& top = a.spectrum().back();
    const auto es = herm_eig(top.projector);
    const StateVector eigen = StateVector::normalized(es.column(3));
    CHECK(sigma(a, eigen) < 1e-9);
    const StateVector psi = random_state(4, rng);
    const double var = born_distribution(a, psi).variance();
    CHECK(sigma(a, psi) == doctest::Approx(std::sqrt(var)).epsilon(1e-10));
  }
}
