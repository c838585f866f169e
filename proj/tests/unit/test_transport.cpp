#include <cmath>

#include "doctest.h"
#include "qrms/errors.hpp"
#include "qrms/random.hpp"
#include "qrms/transport.hpp"

using namespace qrms;

namespace {

DiscreteDist random_dist(Rng& rng, std::size_t max_atoms) {
  const std::size_t n = 1 + rng.below(max_atoms);
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (auto& a : atoms) {
    a.value = std::round(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;
    a.prob = rng.uniform() + 1e-3;
    total += a.prob;
  }
  for (auto& a : atoms) a.prob /= total;
  return DiscreteDist(atoms);
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("distribution invariants") {
    const DiscreteDist d({{2.0, 0.25}, {1.0, 0.5}, {2.0 + 1e-12, 0.25}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].value == 1.0);
    CHECK(d.probability_of(2.0) == doctest::Approx(0.5));
    CHECK(d.mean() == doctest::Approx(1.5));
    CHECK(d.variance() == doctest::Approx(0.25));
    CHECK_THROWS_AS(DiscreteDist({{0.0, 0.7}}), Error);
    CHECK_THROWS_AS(DiscreteDist({{0.0, 1.2}, {1.0, -0.2}}), Error);
    CHECK_THROWS_AS(DiscreteDist(std::vector<Atom>{}), Error);
  }

  TEST_CASE("joint distribution clamps round-off negatives") {
    const JointDist mu({{0, 0, 0.5 + 5e-11}, {1, 1, 0.5}, {0, 1, -5e-11}});
    CHECK(mu.at(0, 1) == 0.0);
    CHECK(mu.diagonal_mass() == doctest::Approx(1.0));
    CHECK_THROWS_AS(JointDist({{0, 0, 1.1}, {1, 1, -0.1}}), Error);
  }

  TEST_CASE("point masses") {
    const DiscreteDist a({{0.0, 1.0}}), b({{3.0, 1.0}});
    CHECK(w2(a, b) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(w2_oracle(a, b) == doctest::Approx(3.0).epsilon(1e-12));
  }

  TEST_CASE("known two-atom coupling") {
    // Monotone coupling moves mass 1/2 from 0 to 1: W2^2 = 1/2.
    const DiscreteDist p({{0.0, 1.0}}), q({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(w2(p, q) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(w2_oracle(p, q) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  }

  TEST_CASE("translation shifts by the offset") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const DiscreteDist p = random_dist(rng, 6);
      std::vector<Atom> shifted = p.atoms();
      for (auto& a : shifted) a.value += 1.75;
      CHECK(std::abs(w2(p, DiscreteDist(shifted)) - 1.75) < 1e-12);
    }
  }

  TEST_CASE("quantile formula agrees with the LP oracle") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
      const DiscreteDist p = random_dist(rng, 6), q = random_dist(rng, 6);
      CHECK(std::abs(w2(p, q) - w2_oracle(p, q)) < 1e-9);
    }
  }

  TEST_CASE("metric axioms") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const DiscreteDist p = random_dist(rng, 5), q = random_dist(rng, 5), r = random_dist(rng, 5);
      CHECK(w2(p, p) == 0.0);
      CHECK(w2(p, q) == doctest::Approx(w2(q, p)).epsilon(1e-12));
      CHECK(w2(p, r) <= w2(p, q) + w2(q, r) + 1e-12);
    }
  }

  TEST_CASE("oracle size limit") {
    std::vector<Atom> atoms;
    for (int i = 0; i < 9; ++i) atoms.push_back({double(i), 1.0 / 9});
    const DiscreteDist big(atoms);
    try {
      w2_oracle(big, big);
      FAIL("oracle accepted 9 atoms");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooLarge);
    }
  }
  TEST_CASE("identical distributions and the four-level marginals") {
    const DiscreteDist p({{-1.0, 2.0 / 3}, {1.0, 1.0 / 3}});
    CHECK(w2(p, p) == 0.0);
    CHECK(w2_oracle(p, p) < 1e-12);
    const DiscreteDist q({{1.0, 1.0 / 3}, {-1.0, 2.0 / 3}});
    CHECK(w2(p, q) < 1e-12);
  }
}
