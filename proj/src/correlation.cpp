#include "qrms/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

std::string format_value(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void require_same_dim(const Observable& x, const Observable& y, const StateVector& psi) {
  if (x.dim() != y.dim() || x.dim() != psi.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observables " + std::to_string(x.dim()) + " and " +
                                                  std::to_string(y.dim()) + ", state " + std::to_string(psi.dim()));
  }
}

std::vector<Vector> project_all(const Observable& a, const StateVector& psi) {
  std::vector<Vector> out;
  out.reserve(a.spectrum().size());
  for (const auto& c : a.spectrum()) out.push_back(c.projector * psi.amplitudes());
  return out;
}

double distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<std::pair<double, Complex>> accumulate(const std::vector<WeakEntry>& table, bool by_x) {
  std::vector<std::pair<double, Complex>> out;
  for (const auto& e : table) {
    const double key = by_x ? e.x : e.y;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == key; });
    if (it == out.end()) {
      out.emplace_back(key, e.value);
    } else {
      it->second += e.value;
    }
  }
  return out;
}

}  // namespace

CommuteResult commute_in_state(const Observable& x, const Observable& y, const StateVector& psi, double tol) {
  require_same_dim(x, y, psi);
  const auto px = project_all(x, psi);
  const auto py = project_all(y, psi);
  double residual = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t j = 0; j < py.size(); ++j) {
      const Vector xy = x.spectrum()[i].projector * py[j];
      const Vector yx = y.spectrum()[j].projector * px[i];
      residual = std::max(residual, distance(xy, yx));
    }
  }
  return {residual < tol, residual};
}

JointDist jpd(const Observable& x, const Observable& y, const StateVector& psi, const Tolerances& tol) {
  const auto c = commute_in_state(x, y, psi, tol.commute);
  if (!c.commute) {
    throw Error(ErrorCode::NotCommutingInState, "commutator residual " + std::to_string(c.residual), c.residual);
  }
  const auto nu = wjd(x, y, psi);
  std::vector<JointAtom> table;
  table.reserve(nu.table().size());
  // In a commuting state nu is real; <P^X P^Y> is its conjugate.
  for (const auto& e : nu.table()) table.push_back({e.x, e.y, e.value.real()});
  return JointDist(std::move(table), tol);
}

Complex WeakJointDist::at(double x, double y, double match) const {
  Complex s = 0.0;
  for (const auto& e : table_)
    if (std::abs(e.x - x) <= match && std::abs(e.y - y) <= match) s += e.value;
  return s;
}

Complex WeakJointDist::total() const {
  Complex s = 0.0;
  for (const auto& e : table_) s += e.value;
  return s;
}

std::vector<std::pair<double, Complex>> WeakJointDist::marginal_x() const { return accumulate(table_, true); }
std::vector<std::pair<double, Complex>> WeakJointDist::marginal_y() const { return accumulate(table_, false); }

double WeakJointDist::nonclassicality() const {
  double im = 0.0, neg = 0.0;
  for (const auto& e : table_) {
    im = std::max(im, std::abs(e.value.imag()));
    neg = std::max(neg, -e.value.real());
  }
  return im + neg;
}

WeakJointDist wjd(const Observable& x, const Observable& y, const StateVector& psi) {
  require_same_dim(x, y, psi);
  const auto px = project_all(x, psi);
  const auto py = project_all(y, psi);
  std::vector<WeakEntry> table;
  table.reserve(px.size() * py.size());
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t j = 0; j < py.size(); ++j)
      table.push_back({x.spectrum()[i].value, y.spectrum()[j].value, inner(py[j], px[i])});
  return WeakJointDist(std::move(table));
}

Matrix meet(const Matrix& p, const Matrix& q, const Tolerances& tol) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "meet: dimensions differ");
  const auto es = herm_eig(p + q, tol);
  return apply_spectral(es, [&](double v) { return v > 2.0 - tol.meet ? 1.0 : 0.0; });
}

const std::vector<std::string>& probe_words() {
  static const std::vector<std::string> words{"XY", "YX", "XXY", "XYY", "YXY", "XYX"};
  return words;
}

JointConditionsReport joint_conditions(const Observable& x, const Observable& y, const StateVector& psi,
                                   const Tolerances& tol) {
  require_same_dim(x, y, psi);
  JointConditionsReport r;

  Matrix range(psi.dim());
  for (const auto& cx : x.spectrum())
    for (const auto& cy : y.spectrum()) range += meet(cx.projector, cy.projector, tol);
  const Vector projected = range * psi.amplitudes();
  r.range_residual = distance(projected, Vector(psi.amplitudes().begin(), psi.amplitudes().end()));
  r.range_condition = r.range_residual < tol.condition;
  r.meet_total = expectation(range, psi);
  r.meet_mass = std::abs(r.meet_total - 1.0) < tol.condition;

  const auto c = commute_in_state(x, y, psi, tol.commute);
  r.commute = c.commute;
  r.commute_residual = c.residual;

  const auto nu = wjd(x, y, psi);
  r.wjd_nonclassicality = nu.nonclassicality();
  bool probes_ok = true;
  for (const auto& word : probe_words()) {
    ProbeResidual pr;
    pr.word = word;
    Vector v(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = (*it == 'X' ? x.matrix() : y.matrix()) * v;
    pr.quantum = inner(psi.amplitudes(), v);
    for (const auto& e : nu.table()) {
      double f = 1.0;
      for (char ch : word) f *= ch == 'X' ? e.x : e.y;
      pr.classical += f * e.value.real();
    }
    pr.residual = std::abs(pr.quantum - pr.classical);
    probes_ok = probes_ok && pr.residual < tol.condition;
    r.probes.push_back(std::move(pr));
  }
  // Spectral projectors are polynomials in X and Y too. Sandwich words over
  // them do not lose resolution when eigenvalues nearly coincide, where the
  // words over X and Y differ only at second order in the gap.
  auto sandwich = [&](const Matrix& outer, const Matrix& mid, std::string word, Complex weak) {
    ProbeResidual pr;
    pr.word = std::move(word);
    const Vector v = outer * psi.amplitudes();
    pr.quantum = inner(v, mid * std::span<const Complex>(v));
    pr.classical = weak.real();
    pr.residual = std::abs(pr.quantum - pr.classical);
    probes_ok = probes_ok && pr.residual < tol.condition;
    r.probes.push_back(std::move(pr));
  };
  for (const auto& cx : x.spectrum()) {
    for (const auto& cy : y.spectrum()) {
      const Complex weak = nu.at(cx.value, cy.value, 0.0);
      const std::string px = "PX(" + format_value(cx.value) + ")", py = "PY(" + format_value(cy.value) + ")";
      sandwich(cy.projector, cx.projector, py + px + py, weak);
      sandwich(cx.projector, cy.projector, px + py + px, weak);
    }
  }
  r.jpd_exists = r.wjd_nonclassicality < tol.condition && probes_ok;
  return r;
}

AccuracyVerdict is_accurate(const MeasuringProcess& proc, const Observable& a, const StateVector& psi, double tol,
                            const Tolerances& tols) {
  if (a.dim() != proc.dim_h() || psi.dim() != proc.dim_h()) {
    throw Error(ErrorCode::DimensionMismatch, "is_accurate: system dimension " + std::to_string(proc.dim_h()));
  }
  const Observable a0 = lift_left(a, proc.dim_k());
  const Observable m_tau = heisenberg_meter(proc);
  const StateVector big = initial_state(proc, psi);

  AccuracyVerdict v;
  const auto nu = wjd(a0, m_tau, big);
  double diag = 0.0;
  for (const auto& e : nu.table()) {
    if (std::abs(e.x - e.y) > tols.outcome_match) {
      v.offdiag_mass = std::max(v.offdiag_mass, std::abs(e.value));
    } else {
      diag += e.value.real();
    }
  }
  v.diagonal_mass = diag;
  v.commute_residual = commute_in_state(a0, m_tau, big, tol).residual;
  v.accurate = v.offdiag_mass < tol;
  v.s_verdict = v.commute_residual < tol && v.diagonal_mass > 1.0 - tol;
  return v;
}

}  // namespace qrms
