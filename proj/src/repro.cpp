#include "qrms/repro.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "qrms/correlation.hpp"
#include "qrms/error_measures.hpp"
#include "qrms/errors.hpp"
#include "qrms/models.hpp"
#include "qrms/random.hpp"
#include "qrms/relations.hpp"
#include "qrms/transport.hpp"

namespace qrms {

namespace {

constexpr double kPi = std::numbers::pi;

Check near(std::string q, double expected, double computed, double tol, Provenance p) {
  return {std::move(q), expected, computed, tol, Compare::Near, p, std::abs(computed - expected) <= tol};
}

Check below(std::string q, double bound, double computed, Provenance p) {
  return {std::move(q), bound, computed, 0.0, Compare::Below, p, computed < bound};
}

Check above(std::string q, double bound, double computed, Provenance p) {
  return {std::move(q), bound, computed, 0.0, Compare::Above, p, computed > bound};
}

Check flag(std::string q, bool expected, bool computed, Provenance p) {
  return {std::move(q), expected ? 1.0 : 0.0, computed ? 1.0 : 0.0, 0.0, Compare::Near, p, expected == computed};
}

Rng case_rng(std::uint64_t seed, std::uint64_t salt, std::uint64_t trial) {
  return Rng::stream(seed ^ (salt * 0x9E3779B97F4A7C15ULL), trial);
}

std::vector<Check> counterexample_2d(std::uint64_t) {
  const Observable a = spectral_decompose(Matrix{{1, 1}, {1, 1}});
  const Observable m = spectral_decompose(Matrix{{1, 1}, {1, -1}});
  const Povm pi = projective_povm(m);
  const StateVector psi = StateVector::basis(2, 0);
  std::vector<Check> out;
  out.push_back(near("eps_no", 0.0, eps_no(a, pi, psi), 1e-9, Provenance::Published));
  const auto poly = profile(a, pi, psi);
  for (double t : {0.0, kPi / 6, kPi / 4, kPi / 2}) {
    const double eps_t = std::sqrt(std::max(0.0, poly.value(t)));
    out.push_back(near("eps_t(" + std::to_string(t) + ")", 2.0 * std::abs(std::sin(t)), eps_t, 1e-9,
                       Provenance::Published));
  }
  const auto bar = eps_bar(a, pi, psi);
  out.push_back(near("eps_bar", 2.0, bar.value, 1e-6, Provenance::Published));
  out.push_back(near("argmax_t mod pi", kPi / 2, std::fmod(bar.argmax_t, kPi), 1e-6, Provenance::Derived));
  out.push_back(near("eps_m", std::sqrt(2.0), eps_m(a, pi, psi), 1e-9, Provenance::Derived));
  out.push_back(flag("accurate", false, is_accurate(naimark_dilation(pi), a, psi).accurate, Provenance::Published));
  out.push_back(near("P^A(2)", 0.5, born_distribution(a, psi).probability_of(2.0), 1e-12, Provenance::Published));
  out.push_back(near("Pi(2)", 0.0, born_distribution(pi, psi).probability_of(2.0), 1e-12, Provenance::Published));
  return out;
}

std::vector<Check> independent_4d(std::uint64_t) {
  const std::vector<double> av{1, 1, -1, -1}, mv{1, -1, 1, -1};
  const Observable a = spectral_decompose(Matrix::diagonal(av));
  const Observable m = spectral_decompose(Matrix::diagonal(mv));
  const double r2 = std::sqrt(2.0);
  const StateVector psi(Vector{1.0 / 3, r2 / 3, r2 / 3, 2.0 / 3});
  // Swapping system and environment gives M(tau) = M (x) I.
  const MeasuringProcess proc(4, StateVector::basis(4, 0), swap_operator(4), m);
  const Observable a0 = lift_left(a, 4);
  const JointDist mu = jpd(a0, heisenberg_meter(proc), initial_state(proc, psi));
  const Povm pi = povm_from_process(proc);

  std::vector<Check> out;
  out.push_back(near("mu(+1,+1)", 1.0 / 9, mu.at(1, 1), 1e-12, Provenance::Published));
  out.push_back(near("mu(+1,-1)", 2.0 / 9, mu.at(1, -1), 1e-12, Provenance::Published));
  out.push_back(near("mu(-1,+1)", 2.0 / 9, mu.at(-1, 1), 1e-12, Provenance::Published));
  out.push_back(near("mu(-1,-1)", 4.0 / 9, mu.at(-1, -1), 1e-12, Provenance::Published));
  out.push_back(near("eps_g", 4.0 / 3, eps_g(mu), 1e-9, Provenance::Published));
  out.push_back(near("eps_no", 4.0 / 3, eps_no(a, pi, psi), 1e-9, Provenance::Published));
  out.push_back(near("sigma_a", 2.0 * r2 / 3, sigma(a, psi), 1e-12, Provenance::Published));
  const auto pa = born_distribution(a, psi);
  const auto pp = born_distribution(pi, psi);
  out.push_back(near("w2", 0.0, w2(pa, pp), 1e-12, Provenance::Published));
  out.push_back(near("mu^A(+1)", 1.0 / 3, pa.probability_of(1), 1e-12, Provenance::Published));
  out.push_back(near("mu^A(-1)", 2.0 / 3, pa.probability_of(-1), 1e-12, Provenance::Published));
  out.push_back(near("mu^Pi(+1)", 1.0 / 3, pp.probability_of(1), 1e-12, Provenance::Published));
  out.push_back(near("mu^Pi(-1)", 2.0 / 3, pp.probability_of(-1), 1e-12, Provenance::Published));
  return out;
}

std::vector<Check> pauli_weak(std::uint64_t) {
  const Complex i(0, 1);
  const Observable x = spectral_decompose(Matrix{{0, 1}, {1, 0}});
  const Observable y = spectral_decompose(Matrix{{0, -i}, {i, 0}});
  const StateVector psi = StateVector::normalized({1, 1});
  const auto nu = wjd(x, y, psi);
  std::vector<Check> out;
  double max_imag = 0.0;
  for (const auto& e : nu.table()) max_imag = std::max(max_imag, std::abs(e.value.imag()));
  out.push_back(near("nu(+1,+1)", 0.5, nu.at(1, 1).real(), 1e-12, Provenance::Published));
  out.push_back(near("nu(+1,-1)", 0.5, nu.at(1, -1).real(), 1e-12, Provenance::Published));
  out.push_back(near("nu(-1,+1)", 0.0, nu.at(-1, 1).real(), 1e-12, Provenance::Published));
  out.push_back(near("nu(-1,-1)", 0.0, nu.at(-1, -1).real(), 1e-12, Provenance::Published));
  out.push_back(near("max |Im nu|", 0.0, max_imag, 1e-12, Provenance::Trivial));
  const auto jc = joint_conditions(x, y, psi);
  const auto probe = std::find_if(jc.probes.begin(), jc.probes.end(), [](const auto& p) { return p.word == "YXY"; });
  out.push_back(near("<YXY>", -1.0, probe->quantum.real(), 1e-12, Provenance::Published));
  out.push_back(near("sum f mu for YXY", 1.0, probe->classical, 1e-12, Provenance::Published));
  out.push_back(flag("commute_in_state", false, commute_in_state(x, y, psi).commute, Provenance::Published));
  out.push_back(flag("(i) range", false, jc.range_condition, Provenance::Published));
  out.push_back(flag("(ii) commute", false, jc.commute, Provenance::Published));
  out.push_back(flag("(iii) joint distribution", false, jc.jpd_exists, Provenance::Published));
  out.push_back(flag("(iv) meet mass", false, jc.meet_mass, Provenance::Published));
  return out;
}

std::vector<Check> soundness(std::uint64_t seed) {
  double worst_no = 0, worst_bar = 0, worst_m = 0, worst_w2 = 0;
  int accurate = 0;
  constexpr int kTrials = 200;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 4, t);
    const Model m = accurate_model(2 + rng.below(3), 2 + rng.below(3), rng);
    const Povm pi = povm_from_process(m.proc);
    const auto rep = error_report(m.a, pi, m.psi);
    worst_no = std::max(worst_no, rep.eps_no);
    worst_bar = std::max(worst_bar, rep.eps_bar);
    worst_m = std::max(worst_m, rep.eps_m);
    worst_w2 = std::max(worst_w2, w2(born_distribution(m.a, m.psi), born_distribution(pi, m.psi)));
    accurate += is_accurate(m.proc, m.a, m.psi).accurate ? 1 : 0;
  }
  return {
      below("max eps_no", 1e-7, worst_no, Provenance::Derived),
      below("max eps_bar", 1e-7, worst_bar, Provenance::Derived),
      below("max eps_m", 1e-7, worst_m, Provenance::Derived),
      below("max w2", 1e-7, worst_w2, Provenance::Derived),
      near("accurate verdicts", kTrials, accurate, 0.0, Provenance::Derived),
  };
}

std::vector<Check> completeness(std::uint64_t seed) {
  constexpr int kTrials = 500;
  int disagree = 0, truth_mismatch = 0, n_accurate = 0;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 5, t);
    const Model m = random_model(rng, 3);
    const Povm pi = povm_from_process(m.proc);
    const bool small = error_report(m.a, pi, m.psi).eps_bar < 1e-7;
    const bool w = is_accurate(m.proc, m.a, m.psi, 1e-6).accurate;
    disagree += small != w ? 1 : 0;
    if (m.accurate && *m.accurate != w) ++truth_mismatch;
    n_accurate += w ? 1 : 0;
  }
  // The two-level counterexample: eps_no vanishes on an inaccurate measurement.
  const Observable a = spectral_decompose(Matrix{{1, 1}, {1, 1}});
  const Povm pi = projective_povm(spectral_decompose(Matrix{{1, 1}, {1, -1}}));
  const StateVector psi = StateVector::basis(2, 0);
  const bool no_says_accurate = eps_no(a, pi, psi) < 1e-7;
  const bool w = is_accurate(naimark_dilation(pi), a, psi, 1e-6).accurate;
  return {
      near("eps_bar vs weak-table verdict disagreements", 0, disagree, 0.0, Provenance::Derived),
      near("ground-truth mismatches", 0, truth_mismatch, 0.0, Provenance::Derived),
      above("accurate models sampled", 0, n_accurate, Provenance::Derived),
      above("inaccurate models sampled", 0, kTrials - n_accurate, Provenance::Derived),
      flag("eps_no misclassifies counterexample", true, no_says_accurate != w, Provenance::Published),
  };
}

std::vector<Check> joint_audit(std::uint64_t seed) {
  constexpr int kTrials = 1000;
  int flag_disagree = 0, truth_mismatch = 0, sw_disagree = 0, n_joint = 0, n_acc = 0;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 6, t);
    const PairCase pc = random_pair_case(rng, 4);
    const auto r = joint_conditions(pc.x, pc.y, pc.psi);
    flag_disagree += r.all_agree() ? 0 : 1;
    truth_mismatch += r.commute != pc.expect_joint ? 1 : 0;
    n_joint += r.commute ? 1 : 0;
  }
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 66, t);
    const Model m = random_model(rng, 3);
    const auto v = is_accurate(m.proc, m.a, m.psi);
    sw_disagree += v.accurate != v.s_verdict ? 1 : 0;
    n_acc += v.accurate ? 1 : 0;
  }
  return {
      near("four-condition disagreements", 0, flag_disagree, 0.0, Provenance::Derived),
      near("joint-distribution ground-truth mismatches", 0, truth_mismatch, 0.0, Provenance::Derived),
      above("pairs with a joint distribution", 0, n_joint, Provenance::Derived),
      near("joint-table vs weak-table verdict disagreements", 0, sw_disagree, 0.0, Provenance::Derived),
      above("accurate processes sampled", 0, n_acc, Provenance::Derived),
  };
}

std::vector<Check> dichotomic(std::uint64_t seed) {
  constexpr int kTrials = 200;
  double worst_var = 0, worst_gap = 0, worst_sq = 0;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 7, t);
    const Model m = dichotomic_model(2 + rng.below(3), 2 + rng.below(2), rng);
    const Povm pi = povm_from_process(m.proc);
    const Matrix id = Matrix::identity(m.a.dim());
    worst_sq = std::max({worst_sq, max_abs_diff(m.a.matrix() * m.a.matrix(), id), max_abs_diff(moment_unchecked(pi, 2), id)});
    const auto poly = profile(m.a, pi, m.psi);
    double lo = INFINITY, hi = -INFINITY;
    constexpr int kSamples = 4096;
    for (int s = 0; s <= kSamples; ++s) {
      const double e = std::sqrt(std::max(0.0, poly.value(4.0 * kPi * s / kSamples)));
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    worst_var = std::max(worst_var, hi - lo);
    const auto rep = error_report(m.a, pi, m.psi);
    worst_gap = std::max(worst_gap, std::abs(rep.eps_bar - rep.eps_no));
  }
  return {
      below("max |A^2 - I|, |Pi^(2) - I|", 1e-9, worst_sq, Provenance::Trivial),
      below("max (max_t eps_t - min_t eps_t)", 1e-8, worst_var, Provenance::Published),
      below("max |eps_bar - eps_no|", 1e-8, worst_gap, Provenance::Published),
  };
}

std::vector<Check> uedr(std::uint64_t seed) {
  constexpr std::uint64_t kTrials = 10000;
  int fail_no = 0, fail_bar = 0, product_fail = 0;
  double best_margin = -INFINITY;
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    Observable a;
    StateVector psi = StateVector::basis(2, 0);
    const MeasuringProcess proc = violation_trial_process(seed, t, 2, a, psi);
    const auto no = error_disturbance(proc, a, psi, Measure::NO);
    const auto bar = error_disturbance(proc, a, psi, Measure::BAR);
    fail_no += no.uedr_holds ? 0 : 1;
    fail_bar += bar.uedr_holds ? 0 : 1;
    product_fail += no.product_holds ? 0 : 1;
    best_margin = std::max(best_margin, no.c_ab - no.product_lhs);
  }
  return {
      near("uedr failures (no)", 0, fail_no, 0.0, Provenance::Published),
      near("uedr failures (bar)", 0, fail_bar, 0.0, Provenance::Published),
      above("product relation failures", 0, product_fail, Provenance::Published),
      above("largest product violation margin", 1e-3, best_margin, Provenance::Published),
  };
}

DiscreteDist random_dist(Rng& rng, std::size_t max_atoms) {
  const std::size_t n = 1 + rng.below(max_atoms);
  std::vector<Atom> atoms(n);
  double total = 0.0;
  const bool lattice = rng.coin();
  for (auto& a : atoms) {
    a.value = lattice ? std::round(rng.uniform(-2.0, 2.0) * 4.0) / 4.0 : rng.uniform(-2.0, 2.0);
    a.prob = rng.uniform() < 0.1 ? 0.0 : rng.uniform();
    total += a.prob;
  }
  if (total == 0.0) {
    atoms[0].prob = 1.0;
    total = 1.0;
  }
  for (auto& a : atoms) a.prob /= total;
  return DiscreteDist(std::move(atoms));
}

std::vector<Check> transport(std::uint64_t seed) {
  constexpr int kTrials = 500;
  double worst_oracle = 0, worst_sym = 0, worst_tri = -INFINITY, worst_wg = -INFINITY, worst_self = 0;
  int identity_fail = 0, commuting = 0;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 9, t);
    const auto p = random_dist(rng, 6), q = random_dist(rng, 6), r = random_dist(rng, 6);
    const double pq = w2(p, q);
    worst_oracle = std::max(worst_oracle, std::abs(pq - w2_oracle(p, q)));
    worst_sym = std::max(worst_sym, std::abs(pq - w2(q, p)));
    worst_tri = std::max(worst_tri, w2(p, r) - pq - w2(q, r));
    worst_self = std::max(worst_self, w2(p, p));
    const bool equal = approx_equal(p, q, 1e-9, 1e-9);
    if (equal != (pq < 1e-9)) ++identity_fail;

    const Model m = random_model(rng, 3);
    const Observable a0 = lift_left(m.a, m.proc.dim_k());
    const Observable mt = heisenberg_meter(m.proc);
    const StateVector big = initial_state(m.proc, m.psi);
    if (!commute_in_state(a0, mt, big).commute) continue;
    ++commuting;
    const double eg = eps_g(jpd(a0, mt, big));
    const double d = w2(born_distribution(m.a, m.psi), born_distribution(povm_from_process(m.proc), m.psi));
    worst_wg = std::max(worst_wg, d - eg);
  }
  return {
      below("max |w2 - LP oracle|", 1e-9, worst_oracle, Provenance::Derived),
      below("max symmetry defect", 1e-12, worst_sym, Provenance::Derived),
      below("max triangle excess", 1e-9, worst_tri, Provenance::Derived),
      below("max w2(p, p)", 1e-12, worst_self, Provenance::Trivial),
      near("identity-of-indiscernibles failures", 0, identity_fail, 0.0, Provenance::Derived),
      above("commuting-in-state models", 0, commuting, Provenance::Derived),
      below("max (w2 - eps_g) when commuting", 1e-9, worst_wg, Provenance::Published),
  };
}

std::vector<Check> ordering(std::uint64_t seed) {
  constexpr int kTrials = 200;
  double worst_m = -INFINITY, worst_f = -INFINITY, worst_wide = 0;
  int wide_count = 0;
  const std::vector<DensitySpec> fs{DensitySpec::gaussian(0.0, 0.25), DensitySpec::gaussian(0.0, 1.0),
                                    DensitySpec::gaussian(0.0, 4.0)};
  for (int t = 0; t < kTrials; ++t) {
    Rng rng = case_rng(seed, 10, t);
    const Model m = random_model(rng, 3);
    const Povm pi = povm_from_process(m.proc);
    const auto rep = error_report(m.a, pi, m.psi);
    worst_m = std::max(worst_m, rep.eps_m - rep.eps_bar);
    for (const auto& f : fs) worst_f = std::max(worst_f, eps_f(m.a, pi, m.psi, f) - rep.eps_bar);
    const auto values = m.a.values();
    double gap = INFINITY;
    for (std::size_t k = 1; k < values.size(); ++k) gap = std::min(gap, values[k] - values[k - 1]);
    if (gap >= 0.01) {
      ++wide_count;
      worst_wide = std::max(worst_wide, std::abs(eps_f(m.a, pi, m.psi, DensitySpec::gaussian(0.0, 1e3)) - rep.eps_m));
    }
  }
  return {
      below("max (eps_m - eps_bar)", 1e-9, worst_m, Provenance::Published),
      below("max (eps_f - eps_bar), three widths", 1e-9, worst_f, Provenance::Published),
      above("well-separated models", 0, wide_count, Provenance::Derived),
      below("max |eps_f(width 1e3) - eps_m|", 1e-3, worst_wide, Provenance::Derived),
  };
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Published: return "published";
    case Provenance::Trivial: return "trivial";
    case Provenance::Derived: return "derived";
  }
  return "unknown";
}

bool CaseResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<ReproCase>& repro_cases() {
  static const std::vector<ReproCase> cases{
      {"counterexample-2d", "zero noise-operator error on an inaccurate two-level measurement", counterexample_2d},
      {"independent-4d", "independent four-level pair: equal marginals, positive Gauss error", independent_4d},
      {"pauli-weak", "Pauli pair: nonnegative weak table without a joint distribution", pauli_weak},
      {"soundness", "accurate copy models have vanishing errors", soundness},
      {"completeness", "locally uniform error vanishes exactly on accurate models", completeness},
      {"joint-audit", "joint-distribution conditions and both accuracy verdicts agree", joint_audit},
      {"dichotomic", "dichotomic models have constant error profiles", dichotomic},
      {"uedr", "universal error-disturbance relation holds, product relation fails", uedr},
      {"transport", "W2 matches the LP oracle and is bounded by the Gauss error", transport},
      {"ordering", "dephased and density-averaged errors stay below the uniform error", ordering},
  };
  return cases;
}

std::vector<CaseResult> run_repro(const std::string& filter, std::uint64_t seed) {
  std::vector<CaseResult> out;
  for (const auto& c : repro_cases()) {
    if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
    CaseResult r{c.name, c.title, {}, 0.0, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
      r.checks = c.run(seed);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qrms
