#include "qrms/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "qrms/correlation.hpp"
#include "qrms/error_measures.hpp"
#include "qrms/errors.hpp"
#include "qrms/model_io.hpp"
#include "qrms/models.hpp"
#include "qrms/random.hpp"
#include "qrms/relations.hpp"
#include "qrms/transport.hpp"

namespace qrms {

namespace {

struct Outcome {
  bool applies = true;
  double residual = 0.0;
  double limit = 0.0;  ///< pass iff residual <= limit
};

Outcome skip() { return {false, 0.0, 0.0}; }

struct Property {
  const char* module;
  const char* name;
  std::function<Outcome(Rng&, const VerifyOptions&)> run;
};

std::size_t pick_dim(Rng& rng, const VerifyOptions& o) { return 2 + rng.below(std::max<std::size_t>(o.max_dim, 2) - 1); }

DiscreteDist small_dist(Rng& rng) {
  const std::size_t n = 1 + rng.below(5);
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (auto& a : atoms) {
    a.value = std::round(rng.uniform(-2.0, 2.0) * 8.0) / 8.0;
    a.prob = rng.uniform();
    total += a.prob;
  }
  for (auto& a : atoms) a.prob /= total;
  return DiscreteDist(std::move(atoms));
}

Model model_with_b(Rng& rng, const VerifyOptions& o) {
  Model m = random_model(rng, o.max_dim);
  m.proc = m.proc.with_disturbed(random_observable(m.proc.dim_h(), rng));
  return m;
}

StateVector rotate(const Observable& a, const StateVector& psi, double t) {
  Vector out(psi.dim(), 0.0);
  for (const auto& c : a.spectrum()) {
    const Complex phase = std::exp(Complex(0.0, -c.value * t));
    const Vector part = c.projector * psi.amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += phase * part[i];
  }
  return StateVector::normalized(std::move(out));
}

const std::vector<Property>& properties() {
  static const std::vector<Property> props{
      {"linalg", "eig-reconstruction",
       [](Rng& rng, const VerifyOptions&) {
         const std::size_t n = 1 + rng.below(8);
         const Matrix h = random_hermitian(n, rng);
         const auto es = herm_eig(h);
         const Matrix back = apply_spectral(es, [](double v) { return v; });
         return Outcome{true, max_abs_diff(back, h), 1e-10 * (1.0 + h.max_abs())};
       }},
      {"linalg", "eig-orthonormal",
       [](Rng& rng, const VerifyOptions&) {
         const std::size_t n = 1 + rng.below(8);
         const auto es = herm_eig(random_hermitian(n, rng));
         return Outcome{true, unitarity_defect(es.vectors), 1e-12};
       }},
      {"linalg", "haar-unitary",
       [](Rng& rng, const VerifyOptions&) {
         return Outcome{true, unitarity_defect(haar_unitary(1 + rng.below(8), rng)), 1e-12};
       }},
      {"linalg", "partial-inner-product",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o), k = pick_dim(rng, o);
         const Matrix x = random_hermitian(n, rng), y = random_hermitian(k, rng);
         const StateVector xi = random_state(k, rng);
         Matrix expect = x;
         expect *= expectation_complex(y, xi);
         return Outcome{true, max_abs_diff(partial_inner(xi, tensor(x, y)), expect), 1e-12};
       }},
      {"measurement", "process-povm-valid",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = haar_model(pick_dim(rng, o), pick_dim(rng, o), rng);
         double worst = 0.0;
         for (const auto& v : validate_povm(povm_from_process(m.proc))) worst = std::max(worst, v.magnitude + 1.0);
         return Outcome{true, worst, 0.0};
       }},
      {"measurement", "joint-marginal",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = model_with_b(rng, o);
         const Povm direct = povm_from_process(m.proc);
         const Povm marg = joint_povm_from_process(m.proc).marginal_x();
         double worst = 0.0;
         for (const auto& e : direct.effects()) {
           const auto it = std::find_if(marg.effects().begin(), marg.effects().end(),
                                        [&](const Effect& f) { return f.outcome == e.outcome; });
           worst = std::max(worst, it == marg.effects().end() ? 1.0 : max_abs_diff(it->op, e.op));
         }
         return Outcome{true, worst, 1e-10};
       }},
      {"measurement", "dilation-reproduces-povm",
       [](Rng& rng, const VerifyOptions& o) {
         const Povm p = random_povm(pick_dim(rng, o), 1 + rng.below(4), rng);
         const Povm q = povm_from_process(naimark_dilation(p));
         double worst = 0.0;
         for (const auto& e : p.effects()) {
           Matrix sum(p.dim());
           for (const auto& f : q.effects())
             if (f.outcome == e.outcome) sum += f.op;
           worst = std::max(worst, max_abs_diff(sum, e.op));
         }
         return Outcome{true, worst, 1e-9};
       }},
      {"measurement", "heisenberg-meter-spectrum",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = haar_model(pick_dim(rng, o), pick_dim(rng, o), rng);
         const Observable direct = heisenberg_meter(m.proc);
         const Observable eig = spectral_decompose(direct.matrix());
         if (eig.spectrum().size() != direct.spectrum().size()) return Outcome{true, 1.0, 0.0};
         double worst = 0.0;
         for (std::size_t k = 0; k < eig.spectrum().size(); ++k) {
           worst = std::max(worst, std::abs(eig.spectrum()[k].value - direct.spectrum()[k].value));
           worst = std::max(worst, max_abs_diff(eig.spectrum()[k].projector, direct.spectrum()[k].projector));
         }
         return Outcome{true, worst, 1e-8};
       }},
      {"error-measures", "domination",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const auto r = error_report(m.a, povm_from_process(m.proc), m.psi, o.tol);
         return Outcome{true, r.eps_no - r.eps_bar, 1e-9};
       }},
      {"error-measures", "profile-at-zero",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const Povm p = povm_from_process(m.proc);
         const double e = eps_no(m.a, p, m.psi, o.tol);
         return Outcome{true, std::abs(profile(m.a, p, m.psi, o.tol).value(0.0) - e * e), 1e-9};
       }},
      {"error-measures", "profile-rotation",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const Povm p = povm_from_process(m.proc);
         const auto poly = profile(m.a, p, m.psi, o.tol);
         double worst = 0.0;
         for (int k = 0; k < 5; ++k) {
           const double t = rng.uniform(-20.0, 20.0);
           // Compared as squares: sqrt amplifies round-off near zero.
           const double direct = eps_no(m.a, p, rotate(m.a, m.psi, t), o.tol);
           worst = std::max(worst, std::abs(direct * direct - poly.value(t)));
         }
         return Outcome{true, worst, 1e-9};
       }},
      {"error-measures", "sup-bounds",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const auto r = error_report(m.a, povm_from_process(m.proc), m.psi, o.tol);
         // Aperiodic profiles are maximized over the scan window only.
         const auto s = maximize_profile(r.profile, o.tol);
         const double lo = s.periodic ? -200.0 : 0.0, hi = s.periodic ? 200.0 : s.scan_length;
         double sampled = 0.0;
         for (int k = 0; k < 2000; ++k) sampled = std::max(sampled, r.profile.value(rng.uniform(lo, hi)));
         const double sq = r.eps_bar * r.eps_bar;
         return Outcome{true, std::max(sq - r.profile.upper_bound(), sampled - sq), 1e-9};
       }},
      {"error-measures", "dephased-below-uniform",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const auto r = error_report(m.a, povm_from_process(m.proc), m.psi, o.tol);
         return Outcome{true, r.eps_m - r.eps_bar, 1e-9};
       }},
      {"error-measures", "averaged-below-uniform",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const Povm p = povm_from_process(m.proc);
         const auto r = error_report(m.a, p, m.psi, o.tol);
         const double w = std::exp(rng.uniform(-3.0, 3.0));
         const DensitySpec f = rng.coin() ? DensitySpec::gaussian(rng.uniform(-5, 5), w)
                                          : DensitySpec::cauchy(rng.uniform(-5, 5), w);
         return Outcome{true, eps_f(m.a, p, m.psi, f, o.tol) - r.eps_bar, 1e-9};
       }},
      {"error-measures", "soundness",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o);
         const Observable a = random_observable(n, rng, -1.0, 1.0, 1 + rng.below(n));
         const StateVector psi = random_state(n, rng);
         const auto r = error_report(a, projective_povm(a), psi, o.tol);
         return Outcome{true, std::max({r.eps_no, r.eps_bar, r.eps_m}), 1e-9};
       }},
      {"error-measures", "dichotomic-conservation",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = dichotomic_model(pick_dim(rng, o), pick_dim(rng, o), rng);
         const auto poly = profile(m.a, povm_from_process(m.proc), m.psi, o.tol);
         double variation = 0.0;
         for (const auto& t : poly.terms()) variation += 2.0 * std::abs(t.coefficient);
         return Outcome{true, variation, 1e-9};
       }},
      {"error-measures", "correspondence",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const Observable a0 = lift_left(m.a, m.proc.dim_k());
         const Observable mt = heisenberg_meter(m.proc);
         const StateVector big = initial_state(m.proc, m.psi);
         if (!commute_in_state(a0, mt, big, o.tol.commute).commute) return skip();
         // Compared as squares: sqrt amplifies round-off near zero.
         const double eg = eps_g(jpd(a0, mt, big, o.tol));
         const double en = eps_no(m.a, povm_from_process(m.proc), m.psi, o.tol);
         return Outcome{true, std::abs(eg * eg - en * en), 1e-9};
       }},
      {"error-measures", "sigma-vs-distribution",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o);
         const Observable a = random_observable(n, rng, -2.0, 2.0);
         const StateVector psi = random_state(n, rng);
         const double s = sigma(a, psi);
         return Outcome{true, std::abs(s * s - born_distribution(a, psi).variance()), 1e-10};
       }},
      {"transport", "lp-oracle",
       [](Rng& rng, const VerifyOptions&) {
         const auto p = small_dist(rng), q = small_dist(rng);
         return Outcome{true, std::abs(w2(p, q) - w2_oracle(p, q)), 1e-9};
       }},
      {"transport", "symmetry",
       [](Rng& rng, const VerifyOptions&) {
         const auto p = small_dist(rng), q = small_dist(rng);
         return Outcome{true, std::abs(w2(p, q) - w2(q, p)), 1e-12};
       }},
      {"transport", "triangle",
       [](Rng& rng, const VerifyOptions&) {
         const auto p = small_dist(rng), q = small_dist(rng), r = small_dist(rng);
         return Outcome{true, w2(p, r) - w2(p, q) - w2(q, r), 1e-9};
       }},
      {"transport", "identity",
       [](Rng& rng, const VerifyOptions&) {
         const auto p = small_dist(rng), q = small_dist(rng);
         const bool equal = approx_equal(p, q, 1e-9, 1e-9);
         return Outcome{true, (equal == (w2(p, q) < 1e-9) && w2(p, p) < 1e-12) ? 0.0 : 1.0, 0.0};
       }},
      {"transport", "w2-below-gauss",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const Observable a0 = lift_left(m.a, m.proc.dim_k());
         const Observable mt = heisenberg_meter(m.proc);
         const StateVector big = initial_state(m.proc, m.psi);
         if (!commute_in_state(a0, mt, big, o.tol.commute).commute) return skip();
         const double d = w2(born_distribution(m.a, m.psi), born_distribution(povm_from_process(m.proc), m.psi));
         return Outcome{true, d - eps_g(jpd(a0, mt, big, o.tol)), 1e-9};
       }},
      {"correlation", "four-conditions-agree",
       [](Rng& rng, const VerifyOptions& o) {
         const PairCase pc = random_pair_case(rng, std::max<std::size_t>(o.max_dim, 3));
         const auto r = joint_conditions(pc.x, pc.y, pc.psi, o.tol);
         return Outcome{true, (r.all_agree() && r.commute == pc.expect_joint) ? 0.0 : 1.0, 0.0};
       }},
      {"correlation", "s-w-agree",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         const auto v = is_accurate(m.proc, m.a, m.psi, o.tol.verdict, o.tol);
         return Outcome{true, v.accurate == v.s_verdict ? 0.0 : 1.0, 0.0};
       }},
      {"correlation", "wjd-marginals",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o);
         const Observable x = random_observable(n, rng), y = random_observable(n, rng);
         const StateVector psi = random_state(n, rng);
         const auto nu = wjd(x, y, psi);
         double worst = std::abs(nu.total() - 1.0);
         const auto px = born_distribution(x, psi), py = born_distribution(y, psi);
         for (const auto& [v, s] : nu.marginal_x()) worst = std::max(worst, std::abs(s - px.probability_of(v, 0.0)));
         for (const auto& [v, s] : nu.marginal_y()) worst = std::max(worst, std::abs(s - py.probability_of(v, 0.0)));
         return Outcome{true, worst, 1e-10};
       }},
      {"correlation", "jpd-moments",
       [](Rng& rng, const VerifyOptions& o) {
         const PairCase pc = random_pair_case(rng, std::max<std::size_t>(o.max_dim, 3));
         if (!commute_in_state(pc.x, pc.y, pc.psi, o.tol.commute).commute) return skip();
         const auto mu = jpd(pc.x, pc.y, pc.psi, o.tol);
         double worst = 0.0;
         for (const auto& word : probe_words()) {
           Vector v(pc.psi.amplitudes().begin(), pc.psi.amplitudes().end());
           for (auto it = word.rbegin(); it != word.rend(); ++it) v = (*it == 'X' ? pc.x.matrix() : pc.y.matrix()) * v;
           double classical = 0.0;
           for (const auto& e : mu.table()) {
             double f = 1.0;
             for (char ch : word) f *= ch == 'X' ? e.x : e.y;
             classical += f * e.prob;
           }
           worst = std::max(worst, std::abs(inner(pc.psi.amplitudes(), v) - classical));
         }
         return Outcome{true, worst, 1e-8};
       }},
      {"correlation", "accurate-identically-distributed",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = random_model(rng, o.max_dim);
         if (!is_accurate(m.proc, m.a, m.psi, o.tol.verdict, o.tol).accurate) return skip();
         const auto pa = born_distribution(m.a, m.psi);
         const auto pp = born_distribution(povm_from_process(m.proc), m.psi);
         return Outcome{true, approx_equal(pa, pp, 1e-8, 1e-9) ? 0.0 : 1.0, 0.0};
       }},
      {"relations", "uedr-no",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = model_with_b(rng, o);
         const auto r = error_disturbance(m.proc, m.a, m.psi, Measure::NO, o.tol);
         return Outcome{true, r.c_ab - r.uedr_lhs, o.tol.relation_slack};
       }},
      {"relations", "uedr-bar",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = model_with_b(rng, o);
         const auto r = error_disturbance(m.proc, m.a, m.psi, Measure::BAR, o.tol);
         return Outcome{true, r.c_ab - r.uedr_lhs, o.tol.relation_slack};
       }},
      {"relations", "domination-transfer",
       [](Rng& rng, const VerifyOptions& o) {
         const Model m = model_with_b(rng, o);
         const auto no = error_disturbance(m.proc, m.a, m.psi, Measure::NO, o.tol);
         const auto bar = error_disturbance(m.proc, m.a, m.psi, Measure::BAR, o.tol);
         double worst = std::max(no.eps_a - bar.eps_a, no.eta_b - bar.eta_b);
         if (no.uedr_holds && !bar.uedr_holds) worst = std::max(worst, 1.0);
         if (no.product_holds && !bar.product_holds) worst = std::max(worst, 1.0);
         return Outcome{true, worst, 1e-9};
       }},
      {"relations", "robertson-bound",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o);
         const Observable a = random_observable(n, rng), b = random_observable(n, rng);
         const StateVector psi = random_state(n, rng);
         return Outcome{true, c_ab(a, b, psi) - sigma(a, psi) * sigma(b, psi), 1e-9};
       }},
      {"cli-repro", "model-roundtrip",
       [](Rng& rng, const VerifyOptions& o) {
         const std::size_t n = pick_dim(rng, o);
         ModelData d;
         d.dim_h = n;
         d.observable_a = random_hermitian(n, rng);
         d.observable_b = random_hermitian(n, rng);
         const StateVector psi = random_state(n, rng);
         d.state_vector = Vector(psi.amplitudes().begin(), psi.amplitudes().end());
         d.kind = SourceKind::Process;
         d.process.dim_k = 2;
         const StateVector xi = random_state(2, rng);
         d.process.xi = Vector(xi.amplitudes().begin(), xi.amplitudes().end());
         d.process.hamiltonian = random_hermitian(2 * n, rng);
         d.process.tau = rng.uniform(0.0, 3.0);
         d.process.meter = random_hermitian(2, rng);
         const ModelData back = parse_model_text(serialize_model(d));
         double worst = std::max(max_abs_diff(back.observable_a, d.observable_a),
                                 max_abs_diff(*back.process.hamiltonian, *d.process.hamiltonian));
         worst = std::max(worst, std::abs(back.process.tau - d.process.tau));
         for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs((*back.state_vector)[i] - (*d.state_vector)[i]));
         return Outcome{true, worst, 1e-12};
       }},
  };
  return props;
}

}  // namespace

std::vector<std::string> property_names() {
  std::vector<std::string> out;
  for (const auto& p : properties()) out.push_back(std::string(p.module) + "/" + p.name);
  return out;
}

std::vector<PropertySummary> run_verify(const VerifyOptions& opts) {
  if (opts.trials == 0) return {};
  const auto& props = properties();
  std::vector<PropertySummary> out(props.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < props.size(); k = next++) {
      PropertySummary& s = out[k];
      s.module = props[k].module;
      s.name = props[k].name;
      for (std::uint64_t t = 0; t < opts.trials; ++t) {
        Rng rng = Rng::stream(opts.seed ^ (0xA24BAED4963EE407ULL * (k + 1)), t);
        Outcome r;
        std::string failure;
        try {
          r = props[k].run(rng, opts);
        } catch (const std::exception& e) {
          r = Outcome{true, INFINITY, 0.0};
          failure = e.what();
        }
        if (!r.applies) continue;
        ++s.checked;
        s.worst = std::max(s.worst, r.residual);
        if (!(r.residual <= r.limit)) {
          ++s.failed;
          if (s.first_failure.empty()) {
            std::ostringstream os;
            os << "trial " << t << ": residual " << r.residual << " > " << r.limit;
            if (!failure.empty()) os << " (" << failure << ")";
            s.first_failure = os.str();
          }
        }
      }
    }
  };
  unsigned n = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(props.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace qrms
