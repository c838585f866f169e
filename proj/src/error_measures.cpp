#include "qrms/error_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dims(const Observable& a, const Povm& p, std::size_t state_dim) {
  if (a.dim() != p.dim() || a.dim() != state_dim) {
    throw Error(ErrorCode::DimensionMismatch, "observable " + std::to_string(a.dim()) + ", POVM " +
                                                  std::to_string(p.dim()) + ", state " + std::to_string(state_dim));
  }
}

// Squares at or below `floor` are cancellation round-off and read as 0.
double checked_sqrt(double square, double floor, const Tolerances& tol, const char* what) {
  if (square < -tol.negative_square) {
    throw Error(ErrorCode::NegativeSquare, std::string(what) + " squared is " + std::to_string(square), square);
  }
  return square > floor ? std::sqrt(square) : 0.0;
}

constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

// Round-off level of <D>: D = A^2 + Pi^(2) - (A Pi^(1) + Pi^(1) A) cancels
// terms of this size.
double square_floor(const Observable& a, const Povm& p) {
  const Matrix& am = a.matrix();
  const Matrix first = moment_unchecked(p, 1);
  return kRoundoff * ((am * am).frobenius_norm() + moment_unchecked(p, 2).frobenius_norm() +
                      2.0 * (am * first).frobenius_norm());
}

// Best rational approximation p/q of x with q <= max_den, within rel * x.
std::optional<std::uint64_t> rational_denominator(double x, std::size_t max_den, double rel) {
  double h1 = 1.0, h2 = 0.0, k1 = 0.0, k2 = 1.0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    const double h = a * h1 + h2;
    const double k = a * k1 + k2;
    if (k > static_cast<double>(max_den)) break;
    if (std::abs(x - h / k) <= rel * x) return static_cast<std::uint64_t>(k);
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  return std::nullopt;
}

struct Candidate {
  double value;
  double t;
  bool operator>(const Candidate& o) const { return value > o.value; }
};

}  // namespace

TrigPolynomial::TrigPolynomial(double constant, std::vector<TrigTerm> terms, double merge_tol) : constant_(constant) {
  std::sort(terms.begin(), terms.end(), [](const TrigTerm& a, const TrigTerm& b) { return a.frequency < b.frequency; });
  for (const auto& t : terms) {
    if (!(t.frequency > 0.0)) throw Error(ErrorCode::InvalidArgument, "trig term frequency must be positive");
    if (!terms_.empty() && t.frequency - terms_.back().frequency <= merge_tol) {
      terms_.back().coefficient += t.coefficient;
    } else {
      terms_.push_back(t);
    }
  }
}

double TrigPolynomial::value(double t) const {
  double v = constant_;
  for (const auto& term : terms_) v += 2.0 * (term.coefficient * std::exp(Complex(0.0, term.frequency * t))).real();
  return v;
}

double TrigPolynomial::upper_bound() const {
  double b = constant_;
  for (const auto& term : terms_) b += 2.0 * std::abs(term.coefficient);
  return b;
}

double TrigPolynomial::max_frequency() const { return terms_.empty() ? 0.0 : terms_.back().frequency; }

Matrix squared_noise_operator(const Observable& a, const Povm& p) {
  if (a.dim() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "observable and POVM dimensions differ");
  const Matrix& am = a.matrix();
  const Matrix first = moment_unchecked(p, 1);
  return am * am + moment_unchecked(p, 2) - (am * first + first * am);
}

double eps_no(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  require_dims(a, p, rho.dim());
  return checked_sqrt(expectation(squared_noise_operator(a, p), rho), square_floor(a, p), tol, "eps_no");
}

double eps_no(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return checked_sqrt(expectation(squared_noise_operator(a, p), psi), square_floor(a, p), tol, "eps_no");
}

double eps_g(const JointDist& mu) {
  double s = 0.0;
  for (const auto& e : mu.table()) s += (e.y - e.x) * (e.y - e.x) * e.prob;
  return std::sqrt(s);
}

GaussDecomposition gauss_decomposition(const JointDist& mu) {
  double mx = 0.0, my = 0.0;
  for (const auto& e : mu.table()) {
    mx += e.x * e.prob;
    my += e.y * e.prob;
  }
  GaussDecomposition g;
  double vx = 0.0, vy = 0.0, cov = 0.0;
  for (const auto& e : mu.table()) {
    vx += (e.x - mx) * (e.x - mx) * e.prob;
    vy += (e.y - my) * (e.y - my) * e.prob;
    cov += (e.x - mx) * (e.y - my) * e.prob;
  }
  g.sigma_x = std::sqrt(vx);
  g.sigma_y = std::sqrt(vy);
  g.covariance = cov;
  g.bias = mx - my;
  return g;
}

TrigPolynomial profile(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  require_dims(a, p, rho.dim());
  const Matrix d = squared_noise_operator(a, p);
  const auto& spec = a.spectrum();
  double constant = 0.0;
  std::vector<TrigTerm> terms;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const Matrix pd = spec[m].projector * d;
    for (std::size_t n = 0; n <= m; ++n) {
      const Complex c = expectation_complex(pd * spec[n].projector, rho);
      if (n == m) {
        constant += c.real();
      } else {
        terms.push_back({spec[m].value - spec[n].value, c});
      }
    }
  }
  return TrigPolynomial(constant, std::move(terms), tol.frequency_merge);
}

TrigPolynomial profile(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return profile(a, p, DensityOperator::pure(psi), tol);
}

std::optional<double> fundamental_frequency(const TrigPolynomial& poly, const Tolerances& tol) {
  if (poly.is_constant()) return std::nullopt;
  const double base = poly.terms().front().frequency;
  std::uint64_t lcm = 1;
  for (const auto& term : poly.terms()) {
    const auto q = rational_denominator(term.frequency / base, tol.max_denominator, tol.rational_relative);
    if (!q) return std::nullopt;
    lcm = std::lcm(lcm, *q);
    if (lcm > 1'000'000) return std::nullopt;
  }
  return base / static_cast<double>(lcm);
}

SupResult maximize_profile(const TrigPolynomial& poly, const Tolerances& tol) {
  if (poly.is_constant()) return {std::sqrt(std::max(0.0, poly.constant())), 0.0, true, 0.0};
  // An oscillation at round-off level carries no argmax information; the
  // upper bound is then the supremum up to round-off.
  const double swing = poly.upper_bound() - poly.constant();
  if (swing <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(poly.constant()))) {
    return {std::sqrt(std::max(0.0, poly.upper_bound())), 0.0, true, 0.0};
  }

  const double w_max = poly.max_frequency();
  const double step_max = kPi / (8.0 * w_max);
  SupResult result;
  double length = 0.0;
  const auto fundamental = fundamental_frequency(poly, tol);
  if (fundamental && std::ceil(2.0 * kPi / *fundamental / step_max) <= static_cast<double>(tol.max_scan_points)) {
    length = 2.0 * kPi / *fundamental;
    result.periodic = true;
  } else {
    double gap = poly.terms().front().frequency;
    for (std::size_t k = 1; k < poly.terms().size(); ++k)
      gap = std::min(gap, poly.terms()[k].frequency - poly.terms()[k - 1].frequency);
    length = 2.0 * kPi * std::max(1.0, w_max / gap) * tol.grid_factor;
    result.periodic = false;
  }
  result.scan_length = length;

  // FIXME: the aperiodic window is capped at max_scan_points grid points, which
  // relaxes the pi / (8 w_max) step bound for nearly degenerate frequency gaps.
  const double wanted = std::ceil(length / step_max);
  const auto n = static_cast<std::size_t>(
      std::clamp(wanted, 16.0, static_cast<double>(tol.max_scan_points)));
  const double h = length / static_cast<double>(n);

  const auto& terms = poly.terms();
  std::vector<Complex> z(terms.size()), rot(terms.size());
  auto sync = [&](double t) {
    for (std::size_t k = 0; k < terms.size(); ++k)
      z[k] = terms[k].coefficient * std::exp(Complex(0.0, terms[k].frequency * t));
  };
  for (std::size_t k = 0; k < terms.size(); ++k) rot[k] = std::exp(Complex(0.0, terms[k].frequency * h));
  auto current = [&] {
    double v = poly.constant();
    for (const auto& zk : z) v += 2.0 * zk.real();
    return v;
  };

  constexpr std::size_t kCandidates = 64;
  constexpr std::size_t kResync = 4096;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> best;

  // Points i = -1 .. n; local maxima are taken at i = 0 .. n-1.
  sync(-h);
  double prev = current();
  sync(0.0);
  double cur = current();
  for (std::size_t i = 0; i < n; ++i) {
    const double t_next = static_cast<double>(i + 1) * h;
    if ((i + 1) % kResync == 0) {
      sync(t_next);
    } else {
      for (std::size_t k = 0; k < z.size(); ++k) z[k] *= rot[k];
    }
    const double next = current();
    if (cur >= prev && cur >= next) {
      // Rank by the vertex of the parabola through the three grid values; raw
      // grid values are biased by the grid offset of each peak.
      const double curvature = prev - 2.0 * cur + next;
      const double offset = curvature < 0.0 ? 0.5 * (prev - next) / curvature : 0.0;
      const Candidate c{cur - 0.25 * (prev - next) * offset, (static_cast<double>(i) + offset) * h};
      if (best.size() < kCandidates) {
        best.push(c);
      } else if (c.value > best.top().value) {
        best.pop();
        best.push(c);
      }
    }
    prev = cur;
    cur = next;
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double best_value = -std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  auto consider = [&](double v, double t) {
    if (result.periodic) {
      t = std::fmod(t, length);
      if (t < 0.0) t += length;
      // A flat maximum is located to ~sqrt(epsilon); one refined to just
      // below 0 wraps to the end of the period.
      if (length - t <= 1e-7 * std::max(1.0, length)) t = 0.0;
    }
    if (!std::isfinite(best_value)) {
      best_value = v;
      best_t = t;
      return;
    }
    const double tie = 1e-15 * std::max(1.0, std::abs(best_value));
    if (v > best_value + tie || (std::abs(v - best_value) <= tie && t < best_t)) {
      best_value = std::max(v, best_value);
      best_t = t;
    }
  };
  while (!best.empty()) {
    const Candidate c = best.top();
    best.pop();
    double lo = c.t - h, hi = c.t + h;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = poly.value(x1), f2 = poly.value(x2);
    // Far out in long windows the spacing of doubles exceeds golden_section.
    const double width = std::max(tol.golden_section, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(c.t));
    for (int iter = 0; iter < 200 && hi - lo > width; ++iter) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = poly.value(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = poly.value(x1);
      }
    }
    const double tm = 0.5 * (lo + hi);
    const double fm = poly.value(tm);
    const double fc = poly.value(c.t);
    if (fm >= fc) {
      consider(fm, tm);
    } else {
      consider(fc, c.t);
    }
  }
  result.value = std::sqrt(std::max(0.0, best_value));
  result.argmax_t = best_t;
  return result;
}

namespace {

// The supremum dominates both the value at t = 0 and the time average,
// whatever the scan's round-off. A round-off level supremum is 0.
SupResult floor_sup(SupResult sup, double at_zero, double mean, double floor) {
  if (sup.value < at_zero) {
    sup.value = at_zero;
    sup.argmax_t = 0.0;
  }
  sup.value = std::max(sup.value, mean);
  if (sup.value * sup.value <= floor) {
    sup.value = 0.0;
    sup.argmax_t = 0.0;
  }
  return sup;
}

}  // namespace

SupResult eps_bar(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  return floor_sup(maximize_profile(profile(a, p, rho, tol), tol), eps_no(a, p, rho, tol), eps_m(a, p, rho, tol),
                   square_floor(a, p));
}

SupResult eps_bar(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return floor_sup(maximize_profile(profile(a, p, psi, tol), tol), eps_no(a, p, psi, tol), eps_m(a, p, psi, tol),
                   square_floor(a, p));
}

DensityOperator dephase(const Observable& a, const DensityOperator& rho) {
  if (a.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "dephase: dimensions differ");
  Matrix out(rho.dim());
  for (const auto& c : a.spectrum()) out += c.projector * rho.matrix() * c.projector;
  return DensityOperator(std::move(out), 1e-8);
}

double eps_m(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  require_dims(a, p, rho.dim());
  return eps_no(a, p, dephase(a, rho), tol);
}

double eps_m(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return eps_m(a, p, DensityOperator::pure(psi), tol);
}

DensitySpec DensitySpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) {
    throw Error(ErrorCode::UnsupportedDensity, "expected <family>:<scale>[:<location>], got '" + text + "'");
  }
  double scale = 0.0, location = 0.0;
  try {
    scale = std::stod(parts[1]);
    if (parts.size() == 3) location = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnsupportedDensity, "bad number in '" + text + "'");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::UnsupportedDensity, "scale must be positive");
  if (parts[0] == "gaussian") return gaussian(location, scale);
  if (parts[0] == "cauchy") return cauchy(location, scale);
  throw Error(ErrorCode::UnsupportedDensity, "unknown density family '" + parts[0] + "'");
}

double DensitySpec::pdf(double t) const {
  const double u = (t - location) / scale;
  switch (family) {
    case Family::Gaussian: return std::exp(-0.5 * u * u) / (scale * std::sqrt(2.0 * kPi));
    case Family::Cauchy: return 1.0 / (kPi * scale * (1.0 + u * u));
  }
  return 0.0;
}

Complex DensitySpec::characteristic(double w) const {
  switch (family) {
    case Family::Gaussian: return std::exp(Complex(-0.5 * w * w * scale * scale, w * location));
    case Family::Cauchy: return std::exp(Complex(-scale * std::abs(w), w * location));
  }
  return 0.0;
}

std::string DensitySpec::describe() const {
  std::ostringstream os;
  os << (family == Family::Gaussian ? "gaussian" : "cauchy") << ':' << scale << ':' << location;
  return os.str();
}

double eps_f(const Observable& a, const Povm& p, const DensityOperator& rho, const DensitySpec& f,
             const Tolerances& tol) {
  if (!(f.scale > 0.0) || !std::isfinite(f.scale) || !std::isfinite(f.location)) {
    throw Error(ErrorCode::UnsupportedDensity, "density scale must be positive and finite");
  }
  const auto poly = profile(a, p, rho, tol);
  double v = poly.constant();
  for (const auto& term : poly.terms()) v += 2.0 * (term.coefficient * f.characteristic(term.frequency)).real();
  return checked_sqrt(v, square_floor(a, p), tol, "eps_f");
}

double eps_f(const Observable& a, const Povm& p, const StateVector& psi, const DensitySpec& f, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return eps_f(a, p, DensityOperator::pure(psi), f, tol);
}

double sigma(const Observable& a, const DensityOperator& rho) {
  if (a.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "sigma: dimensions differ");
  const Matrix& m = a.matrix();
  const Matrix sq = m * m;
  const double mean = expectation(m, rho);
  const double var = expectation(sq, rho) - mean * mean;
  return var > kRoundoff * sq.frobenius_norm() ? std::sqrt(var) : 0.0;
}

double sigma(const Observable& a, const StateVector& psi) {
  if (a.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "sigma: dimensions differ");
  const Matrix& m = a.matrix();
  const Matrix sq = m * m;
  const double mean = expectation(m, psi);
  const double var = expectation(sq, psi) - mean * mean;
  return var > kRoundoff * sq.frobenius_norm() ? std::sqrt(var) : 0.0;
}

ErrorReport error_report(const Observable& a, const Povm& p, const DensityOperator& rho, const Tolerances& tol) {
  ErrorReport r;
  r.eps_no = eps_no(a, p, rho, tol);
  r.profile = profile(a, p, rho, tol);
  r.eps_m = eps_m(a, p, rho, tol);
  const auto sup = floor_sup(maximize_profile(r.profile, tol), r.eps_no, r.eps_m, square_floor(a, p));
  r.eps_bar = sup.value;
  r.argmax_t = sup.argmax_t;
  return r;
}

ErrorReport error_report(const Observable& a, const Povm& p, const StateVector& psi, const Tolerances& tol) {
  require_dims(a, p, psi.dim());
  return error_report(a, p, DensityOperator::pure(psi), tol);
}

}  // namespace qrms
