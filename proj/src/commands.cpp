#include "qrms/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "qrms/correlation.hpp"
#include "qrms/error_measures.hpp"
#include "qrms/errors.hpp"
#include "qrms/model_io.hpp"
#include "qrms/relations.hpp"
#include "qrms/repro.hpp"
#include "qrms/transport.hpp"

namespace qrms {

namespace {

using Rows = std::vector<std::pair<std::string, std::string>>;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string boolean(bool b) { return b ? "true" : "false"; }

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnsupportedDensity:
    case ErrorCode::NotHermitian:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidPovm:
      return kExitValidation;
    default:
      return kExitComputation;
  }
}

std::string render(const Rows& rows, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::Kv:
      for (const auto& [k, v] : rows) os << k << '=' << v << '\n';
      break;
    case OutputFormat::Csv:
      os << "key,value\n";
      for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
      break;
    case OutputFormat::Text: {
      std::size_t width = 0;
      for (const auto& r : rows) width = std::max(width, r.first.size());
      for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
      break;
    }
  }
  return os.str();
}

template <typename F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {exit_code_for(e), "", std::string(e.what()) + "\n"};
  } catch (const std::exception& e) {
    return {kExitComputation, "", std::string(e.what()) + "\n"};
  }
}

void add_relation(Rows& rows, const RelationReport& r) {
  const std::string p = to_string(r.measure) + ".";
  rows.emplace_back(p + "eps_a", num(r.eps_a));
  rows.emplace_back(p + "eta_b", num(r.eta_b));
  rows.emplace_back(p + "sigma_a", num(r.sigma_a));
  rows.emplace_back(p + "sigma_b", num(r.sigma_b));
  rows.emplace_back(p + "c_ab", num(r.c_ab));
  rows.emplace_back(p + "product_lhs", num(r.product_lhs));
  rows.emplace_back(p + "uedr_lhs", num(r.uedr_lhs));
  rows.emplace_back(p + "product_holds", boolean(r.product_holds));
  rows.emplace_back(p + "uedr_holds", boolean(r.uedr_holds));
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "kv") return OutputFormat::Kv;
  if (text == "csv") return OutputFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + text + "' (text, kv, csv)");
}

CommandResult cmd_analyze(const std::string& model_path, const AnalyzeOptions& opts) {
  return guarded([&] {
    const Tolerances& tol = opts.tol;
    std::optional<DensitySpec> f;
    if (opts.measure.rfind("f:", 0) == 0) {
      f = DensitySpec::parse(opts.measure.substr(2));
    } else if (opts.measure != "no" && opts.measure != "bar" && opts.measure != "m") {
      throw Error(ErrorCode::InvalidArgument, "unknown measure '" + opts.measure + "' (no, bar, m, f:<density>)");
    }
    const LoadedModel model = load_model(parse_model_file(model_path), tol);
    const DensityOperator rho = model.density();
    const auto rep = error_report(model.a, model.povm, rho, tol);

    Rows rows;
    rows.emplace_back("dim_h", std::to_string(model.data.dim_h));
    rows.emplace_back("state", model.is_pure() ? "pure" : "mixed");
    rows.emplace_back("eps_no", num(rep.eps_no));
    rows.emplace_back("eps_bar", num(rep.eps_bar));
    rows.emplace_back("argmax_t", num(rep.argmax_t));
    rows.emplace_back("eps_m", num(rep.eps_m));
    double headline = rep.eps_no;
    if (opts.measure == "bar") headline = rep.eps_bar;
    if (opts.measure == "m") headline = rep.eps_m;
    if (f) {
      headline = eps_f(model.a, model.povm, rho, *f, tol);
      rows.emplace_back("eps_f", num(headline));
      rows.emplace_back("density", f->describe());
    }
    rows.emplace_back("measure", opts.measure);
    rows.emplace_back("eps", num(headline));
    rows.emplace_back("sigma_a", num(sigma(model.a, rho)));
    rows.emplace_back("w2", num(w2(born_distribution(model.a, rho, tol), born_distribution(model.povm, rho, tol), tol)));
    if (model.is_pure()) {
      const auto v = is_accurate(model.process, model.a, model.pure_state(), tol.verdict, tol);
      rows.emplace_back("accurate", boolean(v.accurate));
      rows.emplace_back("offdiag_mass", num(v.offdiag_mass));
      rows.emplace_back("commute_residual", num(v.commute_residual));
      rows.emplace_back("diagonal_mass", num(v.diagonal_mass));
      rows.emplace_back("s_verdict", boolean(v.s_verdict));
      if (model.b) {
        add_relation(rows, error_disturbance(model.process, model.a, model.pure_state(), Measure::NO, tol));
        add_relation(rows, error_disturbance(model.process, model.a, model.pure_state(), Measure::BAR, tol));
      }
    }
    return CommandResult{kExitOk, render(rows, opts.format), ""};
  });
}

CommandResult cmd_profile(const std::string& model_path, double t_min, double t_max, std::size_t steps,
                          const Tolerances& tol) {
  return guarded([&] {
    if (steps < 2) throw Error(ErrorCode::InvalidArgument, "steps must be at least 2");
    if (!(t_max >= t_min)) throw Error(ErrorCode::InvalidArgument, "t-max must not be below t-min");
    const LoadedModel model = load_model(parse_model_file(model_path), tol);
    const auto poly = profile(model.a, model.povm, model.density(), tol);
    std::ostringstream os;
    os << "t,eps_t\n";
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = i + 1 == steps ? t_max : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
      os << num(t) << ',' << num(std::sqrt(std::max(0.0, poly.value(t)))) << '\n';
    }
    return CommandResult{kExitOk, os.str(), ""};
  });
}

CommandResult cmd_verify(const VerifyOptions& opts, OutputFormat format) {
  return guarded([&] {
    const auto summary = run_verify(opts);
    std::ostringstream os;
    bool ok = true;
    if (format == OutputFormat::Csv) os << "module,property,checked,failed,worst\n";
    for (const auto& s : summary) {
      ok = ok && s.failed == 0;
      const std::string key = s.module + "/" + s.name;
      switch (format) {
        case OutputFormat::Csv:
          os << s.module << ',' << s.name << ',' << s.checked << ',' << s.failed << ',' << num(s.worst) << '\n';
          break;
        case OutputFormat::Kv:
          os << key << ".checked=" << s.checked << '\n' << key << ".failed=" << s.failed << '\n';
          os << key << ".worst=" << num(s.worst) << '\n';
          break;
        case OutputFormat::Text:
          os << (s.failed == 0 ? "ok   " : "FAIL ") << std::left << std::setw(44) << key << " checked " << std::setw(6)
             << s.checked << " failed " << std::setw(4) << s.failed << " worst " << std::setprecision(3) << s.worst;
          if (!s.first_failure.empty()) os << "  [" << s.first_failure << "]";
          os << '\n';
          break;
      }
    }
    if (format == OutputFormat::Text) os << (ok ? "all properties hold" : "property failures present") << '\n';
    return CommandResult{ok ? kExitOk : kExitMiss, os.str(), ""};
  });
}

CommandResult cmd_repro(const std::string& filter, std::uint64_t seed, OutputFormat format) {
  return guarded([&] {
    const auto results = run_repro(filter, seed);
    if (results.empty()) throw Error(ErrorCode::InvalidArgument, "no reproduction case matches '" + filter + "'");
    std::ostringstream os;
    bool ok = true;
    if (format == OutputFormat::Csv) os << "case,quantity,expected,computed,tolerance,compare,provenance,result\n";
    for (const auto& r : results) {
      ok = ok && r.pass();
      if (format == OutputFormat::Text) {
        os << "== " << r.name << ": " << r.title << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
        os.unsetf(std::ios::fixed);
      }
      if (!r.error.empty()) {
        if (format == OutputFormat::Text) {
          os << "  ERROR " << r.error << '\n';
        } else if (format == OutputFormat::Kv) {
          os << r.name << ".error=fail\n";
        } else {
          os << r.name << ",error,,,,,,fail\n";
        }
      }
      for (const auto& c : r.checks) {
        const char* cmp = c.compare == Compare::Near ? "near" : (c.compare == Compare::Below ? "below" : "above");
        const std::string result = c.pass ? "pass" : "fail";
        switch (format) {
          case OutputFormat::Csv:
            os << r.name << ",\"" << c.quantity << "\"," << num(c.expected) << ',' << num(c.computed) << ','
               << num(c.tol) << ',' << cmp << ',' << to_string(c.provenance) << ',' << result << '\n';
            break;
          case OutputFormat::Kv:
            os << r.name << '.' << c.quantity << '=' << result << '\n';
            break;
          case OutputFormat::Text: {
            std::ostringstream bound;
            if (c.compare == Compare::Near) {
              bound << "expected " << std::setprecision(10) << c.expected << " +- " << std::setprecision(2) << c.tol;
            } else {
              bound << (c.compare == Compare::Below ? "< " : "> ") << std::setprecision(3) << c.expected;
            }
            os << "  " << (c.pass ? "pass " : "FAIL ") << std::left << std::setw(42) << c.quantity << std::setw(34)
               << bound.str() << "computed " << std::setprecision(12) << c.computed << "  [" << to_string(c.provenance)
               << "]\n";
            break;
          }
        }
      }
    }
    if (format == OutputFormat::Text) os << (ok ? "all cases pass" : "reproduction misses present") << '\n';
    return CommandResult{ok ? kExitOk : kExitMiss, os.str(), ""};
  });
}

}  // namespace qrms
