#include "qrms/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

void require_dim(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch,
                what + ": dimension " + std::to_string(got) + ", expected " + std::to_string(want));
  }
}

double clamp_probability(double p, const Tolerances& tol) {
  return (p < 0.0 && p >= -tol.probability_clamp) ? 0.0 : p;
}

}  // namespace

std::vector<double> Observable::values() const {
  std::vector<double> v;
  v.reserve(spectrum_.size());
  for (const auto& c : spectrum_) v.push_back(c.value);
  return v;
}

double Observable::spectral_radius() const {
  double r = 0.0;
  for (const auto& c : spectrum_) r = std::max(r, std::abs(c.value));
  return r;
}

Observable spectral_decompose(const Matrix& h, double group_tol, const Tolerances& tol) {
  const auto es = herm_eig(h, tol);
  const std::size_t n = es.values.size();
  std::vector<SpectralComponent> spectrum;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && es.values[end] - es.values[end - 1] <= group_tol) ++end;
    double mean = 0.0;
    Matrix proj(n);
    for (std::size_t k = start; k < end; ++k) {
      mean += es.values[k];
      const Vector v = es.column(k);
      proj += Matrix::outer(v, v);
    }
    spectrum.push_back({mean / static_cast<double>(end - start), std::move(proj)});
    start = end;
  }
  return Observable(h, std::move(spectrum));
}

Observable spectral_decompose(const Matrix& h, const Tolerances& tol) {
  const auto es = herm_eig(h, tol);
  const double radius = std::max(std::abs(es.values.front()), std::abs(es.values.back()));
  return spectral_decompose(h, tol.group_relative * (1.0 + radius), tol);
}

Observable observable_from_spectrum(std::vector<SpectralComponent> spectrum) {
  if (spectrum.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  std::sort(spectrum.begin(), spectrum.end(),
            [](const SpectralComponent& a, const SpectralComponent& b) { return a.value < b.value; });
  const std::size_t n = spectrum.front().projector.dim();
  Matrix m(n);
  for (const auto& c : spectrum) {
    require_dim(c.projector.dim(), n, "spectral projector");
    m += Complex(c.value) * c.projector;
  }
  return Observable(std::move(m), std::move(spectrum));
}

std::vector<std::string> observable_violations(const Observable& a, const Tolerances& tol) {
  std::vector<std::string> out;
  const std::size_t n = a.dim();
  if (a.spectrum().empty()) {
    out.emplace_back("empty spectrum");
    return out;
  }
  Matrix sum(n), weighted(n);
  for (std::size_t m = 0; m < a.spectrum().size(); ++m) {
    const auto& pm = a.spectrum()[m];
    if (pm.projector.dim() != n) {
      out.emplace_back("projector dimension mismatch");
      return out;
    }
    if (m > 0 && !(pm.value > a.spectrum()[m - 1].value)) out.emplace_back("values not strictly increasing");
    sum += pm.projector;
    weighted += Complex(pm.value) * pm.projector;
    for (std::size_t k = m; k < a.spectrum().size(); ++k) {
      const Matrix prod = pm.projector * a.spectrum()[k].projector;
      const double d = (k == m) ? max_abs_diff(prod, pm.projector) : prod.max_abs();
      if (d > tol.projector) {
        out.push_back("projector orthogonality " + std::to_string(m) + "," + std::to_string(k) + ": " +
                      std::to_string(d));
      }
    }
  }
  const double completeness = max_abs_diff(sum, Matrix::identity(n));
  if (completeness > tol.projector) out.push_back("projectors do not resolve identity: " + std::to_string(completeness));
  const double recon = max_abs_diff(weighted, a.matrix());
  if (recon > 1e-8) out.push_back("spectral reconstruction: " + std::to_string(recon));
  return out;
}

Observable lift_left(const Observable& a, std::size_t dim_k) {
  const Matrix id = Matrix::identity(dim_k);
  std::vector<SpectralComponent> spectrum;
  for (const auto& c : a.spectrum()) spectrum.push_back({c.value, tensor(c.projector, id)});
  return Observable(tensor(a.matrix(), id), std::move(spectrum));
}

Observable lift_right(const Observable& m, std::size_t dim_h) {
  const Matrix id = Matrix::identity(dim_h);
  std::vector<SpectralComponent> spectrum;
  for (const auto& c : m.spectrum()) spectrum.push_back({c.value, tensor(id, c.projector)});
  return Observable(tensor(id, m.matrix()), std::move(spectrum));
}

Observable conjugate(const Observable& x, const Matrix& u) {
  const Matrix ud = u.adjoint();
  std::vector<SpectralComponent> spectrum;
  for (const auto& c : x.spectrum()) spectrum.push_back({c.value, ud * c.projector * u});
  return Observable(ud * x.matrix() * u, std::move(spectrum));
}

Povm::Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw Error(ErrorCode::InvalidPovm, "POVM has no effects");
  dim_ = effects_.front().op.dim();
  for (const auto& e : effects_) require_dim(e.op.dim(), dim_, "POVM effect");
}

std::vector<Violation> validate_povm(const Povm& p, const Tolerances& tol) {
  std::vector<Violation> out;
  if (p.effects().empty()) {
    out.push_back({"nonempty", 1.0});
    return out;
  }
  Matrix sum(p.dim());
  for (std::size_t i = 0; i < p.effects().size(); ++i) {
    const auto& e = p.effects()[i];
    if (!std::isfinite(e.outcome)) out.push_back({"finite outcome", std::abs(e.outcome)});
    const double herm = e.op.hermiticity_defect();
    if (herm > tol.povm) {
      out.push_back({"hermitian effect at " + std::to_string(e.outcome), herm});
    } else {
      const double lowest = herm_eig(e.op, tol).values.front();
      if (lowest < -tol.povm) out.push_back({"positive effect at " + std::to_string(e.outcome), -lowest});
    }
    for (std::size_t j = 0; j < i; ++j)
      if (p.effects()[j].outcome == e.outcome) out.push_back({"distinct outcomes", 0.0});
    sum += e.op;
  }
  const double completeness = max_abs_diff(sum, Matrix::identity(p.dim()));
  if (completeness > tol.povm) out.push_back({"completeness", completeness});
  return out;
}

Matrix moment_unchecked(const Povm& p, unsigned n) {
  Matrix out(p.dim());
  for (const auto& e : p.effects()) out += Complex(std::pow(e.outcome, static_cast<int>(n))) * e.op;
  return out;
}

Matrix moment(const Povm& p, unsigned n, const Tolerances& tol) {
  const auto violations = validate_povm(p, tol);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidPovm, violations.front().check, violations.front().magnitude);
  }
  if (n == 0) return Matrix::identity(p.dim());
  return moment_unchecked(p, n);
}

Povm projective_povm(const Observable& a) {
  std::vector<Effect> effects;
  for (const auto& c : a.spectrum()) effects.push_back({c.value, c.projector});
  return Povm(std::move(effects));
}

DiscreteDist born_distribution(const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  require_dim(rho.dim(), p.dim(), "state");
  std::vector<Atom> atoms;
  for (const auto& e : p.effects()) atoms.push_back({e.outcome, clamp_probability(expectation(e.op, rho), tol)});
  return DiscreteDist(std::move(atoms), tol);
}

DiscreteDist born_distribution(const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dim(psi.dim(), p.dim(), "state");
  std::vector<Atom> atoms;
  for (const auto& e : p.effects()) atoms.push_back({e.outcome, clamp_probability(expectation(e.op, psi), tol)});
  return DiscreteDist(std::move(atoms), tol);
}

DiscreteDist born_distribution(const Observable& a, const DensityOperator& rho, const Tolerances& tol) {
  return born_distribution(projective_povm(a), rho, tol);
}

DiscreteDist born_distribution(const Observable& a, const StateVector& psi, const Tolerances& tol) {
  return born_distribution(projective_povm(a), psi, tol);
}

MeasuringProcess::MeasuringProcess(std::size_t dim_h, StateVector xi, Matrix unitary, Observable meter,
                                   std::optional<Observable> disturbed, const Tolerances& tol)
    : dim_h_(dim_h),
      xi_(std::move(xi)),
      unitary_(std::move(unitary)),
      meter_(std::move(meter)),
      disturbed_(std::move(disturbed)) {
  if (dim_h_ == 0) throw Error(ErrorCode::ValidationError, "system dimension 0");
  require_dim(unitary_.dim(), dim_h_ * xi_.dim(), "interaction unitary");
  require_dim(meter_.dim(), xi_.dim(), "meter observable");
  const double defect = unitarity_defect(unitary_);
  if (defect > tol.unitary) throw Error(ErrorCode::ValidationError, "interaction is not unitary", defect);
  if (auto v = observable_violations(meter_, tol); !v.empty()) {
    throw Error(ErrorCode::ValidationError, "meter observable: " + v.front());
  }
  if (disturbed_) {
    require_dim(disturbed_->dim(), dim_h_, "disturbed observable");
    if (auto v = observable_violations(*disturbed_, tol); !v.empty()) {
      throw Error(ErrorCode::ValidationError, "disturbed observable: " + v.front());
    }
  }
}

MeasuringProcess MeasuringProcess::with_disturbed(Observable b) const {
  return MeasuringProcess(dim_h_, xi_, unitary_, meter_, std::move(b));
}

Observable heisenberg_meter(const MeasuringProcess& proc) {
  return conjugate(lift_right(proc.meter(), proc.dim_h()), proc.unitary());
}

Observable heisenberg_disturbed(const MeasuringProcess& proc) {
  if (!proc.disturbed()) {
    throw Error(ErrorCode::MissingDisturbedObservable, "process has no disturbed observable");
  }
  return conjugate(lift_left(*proc.disturbed(), proc.dim_k()), proc.unitary());
}

Povm povm_from_process(const MeasuringProcess& proc) {
  const Matrix& u = proc.unitary();
  const Matrix ud = u.adjoint();
  const Matrix id = Matrix::identity(proc.dim_h());
  std::vector<Effect> effects;
  for (const auto& c : proc.meter().spectrum()) {
    effects.push_back({c.value, partial_inner(proc.xi(), ud * tensor(id, c.projector) * u)});
  }
  return Povm(std::move(effects));
}

JointPovm::JointPovm(std::vector<JointEffect> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidPovm, "joint POVM has no entries");
  dim_ = entries_.front().op.dim();
  for (const auto& e : entries_) require_dim(e.op.dim(), dim_, "joint POVM entry");
}

namespace {

Povm marginal(const std::vector<JointEffect>& entries, std::size_t dim, bool over_x) {
  std::vector<Effect> effects;
  for (const auto& e : entries) {
    const double key = over_x ? e.x : e.y;
    auto it = std::find_if(effects.begin(), effects.end(), [&](const Effect& f) { return f.outcome == key; });
    if (it == effects.end()) {
      effects.push_back({key, Matrix(dim)});
      it = std::prev(effects.end());
    }
    it->op += e.op;
  }
  return Povm(std::move(effects));
}

}  // namespace

Povm JointPovm::marginal_x() const { return marginal(entries_, dim_, true); }
Povm JointPovm::marginal_y() const { return marginal(entries_, dim_, false); }

Matrix JointPovm::total() const {
  Matrix s(dim_);
  for (const auto& e : entries_) s += e.op;
  return s;
}

JointPovm joint_povm_from_process(const MeasuringProcess& proc) {
  if (!proc.disturbed()) {
    throw Error(ErrorCode::MissingDisturbedObservable, "process has no disturbed observable");
  }
  const Matrix& u = proc.unitary();
  const Matrix ud = u.adjoint();
  std::vector<JointEffect> entries;
  // P^{M(tau)}(x) P^{B(tau)}(y) = U^dag (P^B(y) (x) P^M(x)) U
  for (const auto& m : proc.meter().spectrum())
    for (const auto& b : proc.disturbed()->spectrum())
      entries.push_back({m.value, b.value, partial_inner(proc.xi(), ud * tensor(b.projector, m.projector) * u)});
  return JointPovm(std::move(entries));
}

StateVector initial_state(const MeasuringProcess& proc, const StateVector& psi) {
  require_dim(psi.dim(), proc.dim_h(), "system state");
  return tensor(psi, proc.xi());
}

Matrix psd_sqrt(const Matrix& m, const Tolerances& tol) {
  const auto es = herm_eig(m, tol);
  // Eigenvalues at round-off level are zero: sqrt would lift 1e-16 to 1e-8.
  const double top = es.values.empty() ? 0.0 : std::max(std::abs(es.values.front()), std::abs(es.values.back()));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, top);
  return apply_spectral(es, [floor](double lambda) { return Complex(lambda > floor ? std::sqrt(lambda) : 0.0); });
}

MeasuringProcess naimark_dilation(const Povm& p, std::optional<Observable> disturbed, const Tolerances& tol) {
  if (auto v = validate_povm(p, tol); !v.empty()) {
    throw Error(ErrorCode::InvalidPovm, v.front().check, v.front().magnitude);
  }
  const std::size_t nh = p.dim();
  const std::size_t nk = p.effects().size();
  const std::size_t n = nh * nk;

  std::vector<Vector> columns(n);
  std::vector<bool> filled(n, false);
  std::vector<Matrix> roots;
  for (const auto& e : p.effects()) roots.push_back(psd_sqrt(e.op, tol));

  auto orthogonalize = [&](Vector& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t c = 0; c < n; ++c) {
        if (!filled[c]) continue;
        const Complex overlap = inner(columns[c], v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * columns[c][i];
      }
  };

  // Columns (j, 0): U (e_j (x) |0>) = sum_x sqrt(Pi(x)) e_j (x) |x>.
  for (std::size_t j = 0; j < nh; ++j) {
    Vector v(n);
    for (std::size_t x = 0; x < nk; ++x)
      for (std::size_t i = 0; i < nh; ++i) v[i * nk + x] = roots[x](i, j);
    orthogonalize(v);
    const double len = norm(v);
    for (auto& z : v) z /= len;
    columns[j * nk] = std::move(v);
    filled[j * nk] = true;
  }
  // Complete with the standard basis vector of largest residual each time.
  for (std::size_t col = 0; col < n; ++col) {
    if (filled[col]) continue;
    Vector best;
    double best_len = -1.0;
    for (std::size_t m = 0; m < n; ++m) {
      Vector v(n);
      v[m] = 1.0;
      orthogonalize(v);
      const double len = norm(v);
      if (len > best_len) {
        best_len = len;
        best = std::move(v);
      }
    }
    for (auto& z : best) z /= best_len;
    columns[col] = std::move(best);
    filled[col] = true;
  }
  Matrix u(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) u(i, c) = columns[c][i];

  std::vector<SpectralComponent> meter;
  for (std::size_t x = 0; x < nk; ++x) {
    Matrix proj(nk);
    proj(x, x) = 1.0;
    meter.push_back({p.effects()[x].outcome, std::move(proj)});
  }
  return MeasuringProcess(nh, StateVector::basis(nk, 0), std::move(u), observable_from_spectrum(std::move(meter)),
                          std::move(disturbed), tol);
}

}  // namespace qrms
