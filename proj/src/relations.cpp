#include "qrms/relations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qrms/error_measures.hpp"
#include "qrms/errors.hpp"
#include "qrms/random.hpp"

namespace qrms {

std::string to_string(Measure m) { return m == Measure::NO ? "no" : "bar"; }

double c_ab(const Observable& a, const Observable& b, const StateVector& psi) {
  if (a.dim() != b.dim() || a.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "c_ab: dimensions differ");
  return 0.5 * std::abs(expectation_complex(commutator(a.matrix(), b.matrix()), psi));
}

double c_ab(const Observable& a, const Observable& b, const DensityOperator& rho) {
  if (a.dim() != b.dim() || a.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "c_ab: dimensions differ");
  return 0.5 * std::abs(expectation_complex(commutator(a.matrix(), b.matrix()), rho));
}

bool check_uedr(double eps_a, double eps_b, double sigma_a, double sigma_b, double c, double slack) {
  return eps_a * eps_b + eps_a * sigma_b + sigma_a * eps_b >= c - slack;
}

RelationReport error_disturbance(const MeasuringProcess& proc, const Observable& a, const StateVector& psi,
                                 Measure measure, const Tolerances& tol) {
  const JointPovm joint = joint_povm_from_process(proc);
  const Observable& b = *proc.disturbed();
  const Povm pa = joint.marginal_x();
  const Povm pb = joint.marginal_y();

  RelationReport r;
  r.measure = measure;
  if (measure == Measure::NO) {
    r.eps_a = eps_no(a, pa, psi, tol);
    r.eta_b = eps_no(b, pb, psi, tol);
  } else {
    r.eps_a = eps_bar(a, pa, psi, tol).value;
    r.eta_b = eps_bar(b, pb, psi, tol).value;
  }
  r.sigma_a = sigma(a, psi);
  r.sigma_b = sigma(b, psi);
  r.c_ab = c_ab(a, b, psi);
  r.product_lhs = r.eps_a * r.eta_b;
  r.uedr_lhs = r.product_lhs + r.eps_a * r.sigma_b + r.sigma_a * r.eta_b;
  r.product_holds = r.product_lhs >= r.c_ab - tol.relation_slack;
  r.uedr_holds = check_uedr(r.eps_a, r.eta_b, r.sigma_a, r.sigma_b, r.c_ab, tol.relation_slack);
  return r;
}

MeasuringProcess violation_trial_process(std::uint64_t seed, std::uint64_t trial, std::size_t dim,
                                         Observable& a_out, StateVector& psi_out) {
  Rng rng = Rng::stream(seed, trial);
  constexpr std::size_t kEnv = 2;
  const double tau = rng.uniform(0.0, std::numbers::pi);
  const Matrix basis = haar_unitary(dim * kEnv, rng);
  std::vector<double> energies(dim * kEnv);
  for (auto& e : energies) e = rng.normal();
  const Matrix h = basis * Matrix::diagonal(energies) * basis.adjoint();
  a_out = random_dichotomic(dim, rng);
  Observable b = random_dichotomic(dim, rng);
  Observable meter = random_dichotomic(kEnv, rng);
  psi_out = random_state(dim, rng);
  StateVector xi = random_state(kEnv, rng);
  return MeasuringProcess(dim, std::move(xi), unitary_from_hamiltonian(h, tau), std::move(meter), std::move(b));
}

std::vector<RelationReport> search_violations(std::uint64_t seed, std::uint64_t trials, std::size_t dim,
                                              Measure measure, unsigned workers, const Tolerances& tol) {
  if (dim < 2 || dim > 8) throw Error(ErrorCode::InvalidArgument, "search dimension must lie in [2, 8]");
  workers = std::max(1u, workers);
  std::vector<std::vector<RelationReport>> found(workers);
  auto run = [&](unsigned w) {
    for (std::uint64_t i = w; i < trials; i += workers) {
      Observable a;
      StateVector psi = StateVector::basis(dim, 0);
      const MeasuringProcess proc = violation_trial_process(seed, i, dim, a, psi);
      RelationReport r = error_disturbance(proc, a, psi, measure, tol);
      r.trial = i;
      if (r.c_ab - r.product_lhs > tol.violation_margin) found[w].push_back(r);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::vector<RelationReport> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  std::sort(out.begin(), out.end(), [](const RelationReport& x, const RelationReport& y) { return x.trial < y.trial; });
  return out;
}

double sup_over_states(const Observable& a, const Povm& p, const std::vector<StateVector>& states, Measure measure,
                       const Tolerances& tol) {
  if (states.empty()) throw Error(ErrorCode::EmptyFamily, "no states supplied");
  double best = 0.0;
  for (const auto& psi : states) {
    const double e = measure == Measure::NO ? eps_no(a, p, psi, tol) : error_report(a, p, psi, tol).eps_bar;
    best = std::max(best, e);
  }
  return best;
}

std::vector<NamedRelation> builtin_relations(const Tolerances& tol) {
  const double slack = tol.relation_slack;
  return {
      {"product", [slack](const RelationReport& r) { return r.product_lhs >= r.c_ab - slack; }},
      {"uedr", [slack](const RelationReport& r) { return r.uedr_lhs >= r.c_ab - slack; }},
  };
}

}  // namespace qrms
