#include "qrms/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrms/errors.hpp"

namespace qrms {

DiscreteDist::DiscreteDist(std::vector<Atom> atoms, const Tolerances& tol) {
  if (atoms.empty()) throw Error(ErrorCode::NotADistribution, "distribution has no atoms");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.prob)) {
      throw Error(ErrorCode::NotADistribution, "non-finite atom");
    }
    if (a.prob < 0.0) {
      throw Error(ErrorCode::NotADistribution,
                  "negative probability " + std::to_string(a.prob) + " at " + std::to_string(a.value),
                  a.prob);
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > tol.distribution_sum) {
    throw Error(ErrorCode::NotADistribution, "total mass " + std::to_string(total), total);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && a.value - atoms_.back().value <= tol.value_merge) {
      atoms_.back().prob += a.prob;
    } else {
      atoms_.push_back(a);
    }
  }
}

double DiscreteDist::probability_of(double x, double match) const {
  double p = 0.0;
  for (const auto& a : atoms_)
    if (std::abs(a.value - x) <= match) p += a.prob;
  return p;
}

double DiscreteDist::mean() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.value * a.prob;
  return m;
}

double DiscreteDist::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& a : atoms_) v += (a.value - m) * (a.value - m) * a.prob;
  return v;
}

bool approx_equal(const DiscreteDist& p, const DiscreteDist& q, double value_tol, double prob_tol) {
  // Zero-mass atoms do not distinguish distributions.
  auto support = [](const DiscreteDist& d) {
    std::vector<Atom> s;
    for (const auto& a : d.atoms())
      if (a.prob > 0.0) s.push_back(a);
    return s;
  };
  const auto sp = support(p), sq = support(q);
  std::size_t i = 0, j = 0;
  while (i < sp.size() || j < sq.size()) {
    if (i < sp.size() && j < sq.size() && std::abs(sp[i].value - sq[j].value) <= value_tol) {
      if (std::abs(sp[i].prob - sq[j].prob) > prob_tol) return false;
      ++i;
      ++j;
    } else if (j == sq.size() || (i < sp.size() && sp[i].value < sq[j].value)) {
      if (sp[i].prob > prob_tol) return false;
      ++i;
    } else {
      if (sq[j].prob > prob_tol) return false;
      ++j;
    }
  }
  return true;
}

JointDist::JointDist(std::vector<JointAtom> table, const Tolerances& tol) : table_(std::move(table)) {
  if (table_.empty()) throw Error(ErrorCode::NotADistribution, "joint distribution has no entries");
  double total = 0.0;
  for (auto& e : table_) {
    if (!std::isfinite(e.prob) || !std::isfinite(e.x) || !std::isfinite(e.y)) {
      throw Error(ErrorCode::NotADistribution, "non-finite joint entry");
    }
    if (e.prob < 0.0) {
      if (e.prob < -tol.jpd_clamp) {
        throw Error(ErrorCode::NotADistribution, "negative joint probability " + std::to_string(e.prob), e.prob);
      }
      e.prob = 0.0;
    }
    total += e.prob;
  }
  if (std::abs(total - 1.0) > tol.distribution_sum) {
    throw Error(ErrorCode::NotADistribution, "joint total mass " + std::to_string(total), total);
  }
}

double JointDist::at(double x, double y, double match) const {
  double p = 0.0;
  for (const auto& e : table_)
    if (std::abs(e.x - x) <= match && std::abs(e.y - y) <= match) p += e.prob;
  return p;
}

DiscreteDist JointDist::marginal_x(const Tolerances& tol) const {
  std::vector<Atom> atoms;
  for (const auto& e : table_) atoms.push_back({e.x, e.prob});
  return DiscreteDist(std::move(atoms), tol);
}

DiscreteDist JointDist::marginal_y(const Tolerances& tol) const {
  std::vector<Atom> atoms;
  for (const auto& e : table_) atoms.push_back({e.y, e.prob});
  return DiscreteDist(std::move(atoms), tol);
}

double JointDist::diagonal_mass(double match) const {
  double p = 0.0;
  for (const auto& e : table_)
    if (std::abs(e.x - e.y) <= match) p += e.prob;
  return p;
}

}  // namespace qrms
