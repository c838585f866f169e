#include "qrms/models.hpp"

#include <algorithm>
#include <cmath>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

Matrix shift_power(std::size_t n, std::size_t power) {
  Matrix s(n);
  for (std::size_t k = 0; k < n; ++k) s((k + power) % n, k) = 1.0;
  return s;
}

StateVector state_in_columns(const Matrix& v, const std::vector<std::size_t>& columns, Rng& rng) {
  Vector amps(v.dim(), 0.0);
  for (std::size_t c : columns) {
    const Complex w(rng.normal(), rng.normal());
    for (std::size_t i = 0; i < v.dim(); ++i) amps[i] += w * v(i, c);
  }
  return StateVector::normalized(std::move(amps));
}

// Env-copy construction shared by the accurate families. level_labels[l] is
// the meter value written for A-level l; junk fills unused meter levels.
Model copy_model(std::size_t dim_h, std::size_t dim_k, const std::vector<double>& a_vals,
                 const std::vector<double>& meter_vals, Rng& rng, std::vector<std::size_t>* level_of = nullptr,
                 Matrix* basis = nullptr) {
  const std::size_t levels = a_vals.size();
  const Matrix v = haar_unitary(dim_h, rng);
  std::vector<std::size_t> level(dim_h);
  std::vector<double> values(dim_h);
  for (std::size_t k = 0; k < dim_h; ++k) {
    level[k] = k < levels ? k : rng.below(levels);
    values[k] = a_vals[level[k]];
  }
  Observable a = observable_in_basis(v, values);

  Matrix c(dim_h * dim_k);
  for (const auto& comp : a.spectrum()) {
    const auto l = static_cast<std::size_t>(std::find(a_vals.begin(), a_vals.end(), comp.value) - a_vals.begin());
    c += tensor(comp.projector, shift_power(dim_k, l));
  }
  const Matrix g = haar_unitary(dim_h, rng);
  const Matrix w = haar_unitary(dim_k, rng);
  const Matrix r = haar_unitary(dim_k, rng);
  const Matrix u = tensor(g, w) * c * tensor(Matrix::identity(dim_h), r);
  Vector xi(dim_k);
  for (std::size_t i = 0; i < dim_k; ++i) xi[i] = std::conj(r(0, i));
  Observable meter = observable_in_basis(w, meter_vals);

  if (level_of) *level_of = level;
  if (basis) *basis = v;
  return Model{"accurate", MeasuringProcess(dim_h, StateVector::normalized(std::move(xi)), u, std::move(meter)),
               std::move(a), random_state(dim_h, rng), true};
}

}  // namespace

std::vector<double> separated_values(std::size_t count, double lo, double hi, double min_gap, Rng& rng) {
  const double slack = (hi - lo) - min_gap * static_cast<double>(count > 0 ? count - 1 : 0);
  if (slack < 0.0) throw Error(ErrorCode::InvalidArgument, "interval too short for the requested gaps");
  std::vector<double> u(count);
  for (auto& x : u) x = rng.uniform(0.0, slack);
  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < count; ++i) u[i] += lo + min_gap * static_cast<double>(i);
  // Fisher-Yates so that index order carries no information.
  for (std::size_t i = count; i > 1; --i) std::swap(u[i - 1], u[rng.below(i)]);
  return u;
}

Model accurate_model(std::size_t dim_h, std::size_t dim_k, Rng& rng) {
  const std::size_t levels = std::min(dim_h, dim_k);
  const auto meter_vals = separated_values(dim_k, -1.0, 1.0, 0.05, rng);
  const std::vector<double> a_vals(meter_vals.begin(), meter_vals.begin() + static_cast<std::ptrdiff_t>(levels));
  return copy_model(dim_h, dim_k, a_vals, meter_vals, rng);
}

Model partially_accurate_model(std::size_t dim_h, std::size_t dim_k, bool psi_in_good, Rng& rng) {
  const std::size_t levels = std::min(dim_h, dim_k);
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "partially accurate model needs two levels");
  std::vector<bool> bad(levels, false);
  const std::size_t n_bad = 1 + rng.below(levels - 1);
  for (std::size_t i = 0; i < n_bad; ++i) bad[i] = true;
  for (std::size_t i = levels; i > 1; --i) {
    const std::size_t j = rng.below(i);
    const bool t = bad[i - 1];
    bad[i - 1] = bad[j];
    bad[j] = t;
  }

  std::vector<double> meter_vals;
  for (;;) {
    meter_vals = separated_values(dim_k, -1.0, 1.0, 0.05, rng);
    for (std::size_t l = 0; l < levels; ++l)
      if (bad[l]) meter_vals[l] += 0.5;
    auto sorted = meter_vals;
    std::sort(sorted.begin(), sorted.end());
    bool ok = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) ok = ok && sorted[i] - sorted[i - 1] > 0.01;
    if (ok) break;
  }
  std::vector<double> a_vals(meter_vals.begin(), meter_vals.begin() + static_cast<std::ptrdiff_t>(levels));
  for (std::size_t l = 0; l < levels; ++l)
    if (bad[l]) a_vals[l] -= 0.5;

  std::vector<std::size_t> level_of;
  Matrix v;
  Model m = copy_model(dim_h, dim_k, a_vals, meter_vals, rng, &level_of, &v);
  if (psi_in_good) {
    std::vector<std::size_t> good;
    for (std::size_t k = 0; k < dim_h; ++k)
      if (!bad[level_of[k]]) good.push_back(k);
    m.psi = state_in_columns(v, good, rng);
  }
  m.family = psi_in_good ? "partial-good" : "partial-bad";
  m.accurate = psi_in_good;
  return m;
}

Model perturbed_model(std::size_t dim_h, std::size_t dim_k, double delta, Rng& rng) {
  Model m = accurate_model(dim_h, dim_k, rng);
  Matrix h = random_hermitian(dim_h * dim_k, rng);
  h *= Complex(1.0 / h.frobenius_norm());
  const Matrix u = unitary_from_hamiltonian(h, delta) * m.proc.unitary();
  m.proc = MeasuringProcess(dim_h, m.proc.xi(), u, m.proc.meter());
  m.family = "perturbed";
  m.accurate = false;
  return m;
}

Model haar_model(std::size_t dim_h, std::size_t dim_k, Rng& rng) {
  Observable meter = random_observable(dim_k, rng);
  MeasuringProcess proc(dim_h, random_state(dim_k, rng), haar_unitary(dim_h * dim_k, rng), std::move(meter));
  return Model{"haar", std::move(proc), random_observable(dim_h, rng), random_state(dim_h, rng), false};
}

Model projective_model(std::size_t dim_h, Rng& rng) {
  const Observable m = random_observable(dim_h, rng);
  return Model{"projective", naimark_dilation(projective_povm(m)), random_observable(dim_h, rng),
               random_state(dim_h, rng), false};
}

Model relabel_model(std::size_t dim_h, bool psi_in_good, Rng& rng) {
  if (dim_h < 2) throw Error(ErrorCode::InvalidArgument, "relabel model needs dimension 2");
  const Matrix v = haar_unitary(dim_h, rng);
  const std::size_t n_bad = 1 + rng.below(dim_h - 1);
  std::vector<double> values, relabelled;
  // Relabelled values must stay clear of the others: near-coincident distinct
  // values leave the meter's eigenvectors ill-conditioned.
  for (;;) {
    values = separated_values(dim_h, -1.0, 1.0, 0.05, rng);
    relabelled = values;
    for (std::size_t k = 0; k < n_bad; ++k) relabelled[k] += 0.5;
    auto sorted = relabelled;
    std::sort(sorted.begin(), sorted.end());
    bool ok = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) ok = ok && sorted[i] - sorted[i - 1] > 0.01;
    if (ok) break;
  }
  std::vector<std::size_t> good;
  for (std::size_t k = n_bad; k < dim_h; ++k) good.push_back(k);
  const Observable a = observable_in_basis(v, values);
  const Observable f = observable_in_basis(v, relabelled);
  StateVector psi = psi_in_good ? state_in_columns(v, good, rng) : random_state(dim_h, rng);
  return Model{psi_in_good ? "relabel-good" : "relabel-bad", naimark_dilation(projective_povm(f)), a,
               std::move(psi), psi_in_good};
}

Model dichotomic_model(std::size_t dim_h, std::size_t dim_k, Rng& rng) {
  MeasuringProcess proc(dim_h, random_state(dim_k, rng), haar_unitary(dim_h * dim_k, rng),
                        random_dichotomic(dim_k, rng));
  return Model{"dichotomic", std::move(proc), random_dichotomic(dim_h, rng), random_state(dim_h, rng),
               std::nullopt};
}

Model random_model(Rng& rng, std::size_t max_dim) {
  max_dim = std::max<std::size_t>(max_dim, 2);
  const std::size_t dh = 2 + rng.below(max_dim - 1);
  const std::size_t dk = 2 + rng.below(max_dim - 1);
  switch (rng.below(9)) {
    case 0: return accurate_model(dh, dk, rng);
    case 1: return partially_accurate_model(dh, dk, true, rng);
    case 2: return partially_accurate_model(dh, dk, false, rng);
    case 3: return perturbed_model(dh, dk, rng.uniform(0.03, 0.3), rng);
    case 4: return haar_model(dh, dk, rng);
    case 5: return projective_model(dh, rng);
    case 6: return relabel_model(dh, true, rng);
    case 7: return relabel_model(dh, false, rng);
    default: return dichotomic_model(dh, dk, rng);
  }
}

PairCase random_pair_case(Rng& rng, std::size_t max_dim) {
  max_dim = std::max<std::size_t>(max_dim, 3);
  const std::size_t n = 2 + rng.below(max_dim - 1);
  const Matrix v = haar_unitary(n, rng);
  const std::size_t kind = rng.below(5);
  if (kind == 0) {
    // Degenerate levels allowed: common eigenvectors make every meet large enough.
    std::vector<double> xv(n), yv(n);
    const auto xs = separated_values(n, -1.0, 1.0, 0.05, rng);
    const auto ys = separated_values(n, -1.0, 1.0, 0.05, rng);
    for (std::size_t k = 0; k < n; ++k) {
      xv[k] = xs[rng.below(n)];
      yv[k] = ys[rng.below(n)];
    }
    return {"common-basis", observable_in_basis(v, xv), observable_in_basis(v, yv), random_state(n, rng), true};
  }
  if ((kind == 1 || kind == 2) && n >= 3) {
    const std::size_t shared = 1 + rng.below(n - 2);
    const std::size_t rest = n - shared;
    auto rotate_tail = [&](const Matrix& w) {
      Matrix out = v;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < rest; ++c) {
          Complex s = 0.0;
          for (std::size_t k = 0; k < rest; ++k) s += v(i, shared + k) * w(k, c);
          out(i, shared + c) = s;
        }
      return out;
    };
    const Matrix bx = rotate_tail(haar_unitary(rest, rng));
    const Matrix by = rotate_tail(haar_unitary(rest, rng));
    Observable x = observable_in_basis(bx, separated_values(n, -1.0, 1.0, 0.05, rng));
    Observable y = observable_in_basis(by, separated_values(n, -1.0, 1.0, 0.05, rng));
    if (kind == 1) {
      std::vector<std::size_t> cols(shared);
      for (std::size_t k = 0; k < shared; ++k) cols[k] = k;
      return {"shared-subspace-inside", std::move(x), std::move(y), state_in_columns(v, cols, rng), true};
    }
    return {"shared-subspace-generic", std::move(x), std::move(y), random_state(n, rng), false};
  }
  Observable x = observable_in_basis(v, separated_values(n, -1.0, 1.0, 0.05, rng));
  Observable y = random_observable(n, rng);
  if (kind == 3) return {"x-eigenvector", std::move(x), std::move(y), state_in_columns(v, {rng.below(n)}, rng), false};
  return {"generic", std::move(x), std::move(y), random_state(n, rng), false};
}

}  // namespace qrms
