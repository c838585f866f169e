#include "qrms/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

Complex complex_normal(Rng& rng) { return {rng.normal() * std::numbers::sqrt2 / 2, rng.normal() * std::numbers::sqrt2 / 2}; }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t mix = seed;
  const std::uint64_t a = splitmix64(mix);
  std::uint64_t mix2 = index ^ a;
  return Rng(splitmix64(mix2) ^ rotl(a, 17));
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "below(0)");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

Matrix haar_unitary(std::size_t n, Rng& rng) {
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = complex_normal(rng);

  // Householder QR; Q accumulated explicitly.
  Matrix q = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    double col_norm = 0.0;
    for (std::size_t i = k; i < n; ++i) col_norm += std::norm(a(i, k));
    col_norm = std::sqrt(col_norm);
    if (col_norm == 0.0) continue;
    const Complex akk = a(k, k);
    const Complex phase = std::abs(akk) > 0.0 ? akk / std::abs(akk) : Complex(1.0);
    Vector v(n, 0.0);
    v[k] = akk + phase * col_norm;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    double vn = 0.0;
    for (std::size_t i = k; i < n; ++i) vn += std::norm(v[i]);
    if (vn == 0.0) continue;
    // H = I - 2 v v^dag / |v|^2 applied to A from the left and to Q from the right.
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0 / vn;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= v[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = k; j < n; ++j) s += q(i, j) * v[j];
      s *= 2.0 / vn;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
    }
  }
  // Make R's diagonal positive: Q <- Q diag(phase(R_kk)).
  for (std::size_t k = 0; k < n; ++k) {
    const Complex r = a(k, k);
    const Complex ph = std::abs(r) > 0.0 ? r / std::abs(r) : Complex(1.0);
    for (std::size_t i = 0; i < n; ++i) q(i, k) *= ph;
  }
  return q;
}

StateVector random_state(std::size_t n, Rng& rng) {
  Vector v(n);
  for (auto& z : v) z = complex_normal(rng);
  return StateVector::normalized(std::move(v));
}

DensityOperator random_density(std::size_t n, std::size_t rank, Rng& rng) {
  rank = std::clamp<std::size_t>(rank, 1, n);
  Matrix rho(n);
  for (std::size_t r = 0; r < rank; ++r) {
    Vector g(n);
    for (auto& z : g) z = complex_normal(rng);
    rho += Matrix::outer(g, g);
  }
  const double tr = rho.trace().real();
  rho *= Complex(1.0 / tr);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Complex avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = avg;
      rho(j, i) = std::conj(avg);
    }
  return DensityOperator(std::move(rho), 1e-9);
}

Matrix random_hermitian(std::size_t n, Rng& rng, double scale) {
  Matrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = rng.normal() * scale;
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = complex_normal(rng) * scale;
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

Observable observable_in_basis(const Matrix& v, const std::vector<double>& values) {
  const std::size_t n = v.dim();
  if (values.size() != n) throw Error(ErrorCode::DimensionMismatch, "one eigenvalue per basis vector required");
  std::vector<double> distinct(values);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<SpectralComponent> spectrum;
  for (double a : distinct) {
    Matrix p(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (values[k] != a) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) += v(i, k) * std::conj(v(j, k));
    }
    spectrum.push_back({a, std::move(p)});
  }
  return observable_from_spectrum(std::move(spectrum));
}

Observable random_observable(std::size_t n, Rng& rng, double lo, double hi, std::size_t levels) {
  if (levels == 0 || levels > n) levels = n;
  std::vector<double> pool(levels);
  for (auto& a : pool) a = rng.uniform(lo, hi);
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = k < levels ? pool[k] : pool[rng.below(levels)];
  return observable_in_basis(haar_unitary(n, rng), values);
}

Observable random_dichotomic(std::size_t n, Rng& rng) {
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = k == 0 ? 1.0 : (k == 1 ? -1.0 : (rng.coin() ? 1.0 : -1.0));
  if (n == 1) values[0] = rng.coin() ? 1.0 : -1.0;
  return observable_in_basis(haar_unitary(n, rng), values);
}

Povm random_povm(std::size_t n, std::size_t outcomes, Rng& rng, double lo, double hi) {
  if (outcomes == 0) throw Error(ErrorCode::InvalidArgument, "POVM needs at least one outcome");
  std::vector<Matrix> g;
  Matrix s(n);
  for (std::size_t k = 0; k < outcomes; ++k) {
    Matrix w(n);
    for (std::size_t r = 0; r < n; ++r) {
      Vector col(n);
      for (auto& z : col) z = complex_normal(rng);
      w += Matrix::outer(col, col);
    }
    s += w;
    g.push_back(std::move(w));
  }
  const auto es = herm_eig(s);
  const Matrix inv_root = apply_spectral(es, [](double v) { return 1.0 / std::sqrt(v); });
  std::vector<Effect> effects;
  for (std::size_t k = 0; k < outcomes; ++k) {
    Matrix e = inv_root * g[k] * inv_root;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const Complex avg = 0.5 * (e(i, j) + std::conj(e(j, i)));
        e(i, j) = avg;
        e(j, i) = std::conj(avg);
      }
    effects.push_back({rng.uniform(lo, hi), std::move(e)});
  }
  return Povm(std::move(effects));
}

}  // namespace qrms
