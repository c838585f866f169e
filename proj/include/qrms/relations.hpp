#pragma once

// Error-disturbance uncertainty relations: the commutator bound C_{A,B}, the
// naive product relation, the universally valid relation, and a seeded search
// for product-relation violations.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrms/linalg.hpp"
#include "qrms/measurement.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

enum class Measure { NO, BAR };

std::string to_string(Measure m);

/// |<[A, B]>| / 2
double c_ab(const Observable& a, const Observable& b, const StateVector& psi);
double c_ab(const Observable& a, const Observable& b, const DensityOperator& rho);

struct RelationReport {
  Measure measure = Measure::NO;
  double eps_a = 0.0;
  double eta_b = 0.0;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  double c_ab = 0.0;
  double product_lhs = 0.0;  ///< eps_a eta_b
  double uedr_lhs = 0.0;     ///< eps_a eta_b + eps_a sigma_b + sigma_a eta_b
  bool product_holds = false;
  bool uedr_holds = false;
  std::uint64_t trial = 0;   ///< set by search_violations
};

/// eps_a eps_b + eps_a sigma_b + sigma_a eps_b >= c - slack
bool check_uedr(double eps_a, double eps_b, double sigma_a, double sigma_b, double c,
                double slack = Tolerances{}.relation_slack);

/// Error of A from the meter marginal and disturbance of B from the B marginal
/// of the joint POVM, under the chosen error measure. Throws
/// MissingDisturbedObservable when the process has no B.
RelationReport error_disturbance(const MeasuringProcess& proc, const Observable& a, const StateVector& psi,
                                 Measure measure, const Tolerances& tol = {});

/// Dim-`dim` searches with dichotomic A, B, meter on a qubit environment and
/// U = exp(-i tau H). Trial i draws from Rng::stream(seed, i), so the result
/// does not depend on `workers`. Returns the reports whose product relation
/// fails by more than tol.violation_margin, ordered by trial.
std::vector<RelationReport> search_violations(std::uint64_t seed, std::uint64_t trials, std::size_t dim,
                                              Measure measure = Measure::NO, unsigned workers = 1,
                                              const Tolerances& tol = {});

/// The model drawn for one search trial.
MeasuringProcess violation_trial_process(std::uint64_t seed, std::uint64_t trial, std::size_t dim,
                                         Observable& a_out, StateVector& psi_out);

/// Largest error over a finite family of states. Throws EmptyFamily.
double sup_over_states(const Observable& a, const Povm& p, const std::vector<StateVector>& states, Measure measure,
                       const Tolerances& tol = {});

/// A relation verdict plugged in by name; none beyond the two above ship.
struct NamedRelation {
  std::string name;
  std::function<bool(const RelationReport&)> holds;
};

std::vector<NamedRelation> builtin_relations(const Tolerances& tol = {});

}  // namespace qrms
