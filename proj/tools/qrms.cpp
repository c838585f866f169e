#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qrms/commands.hpp"

namespace {

int emit(const qrms::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum root-mean-square measurement errors for finite-dimensional models"};
  app.require_subcommand(1);

  qrms::Tolerances tol;
  std::string format = "text";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol-group", tol.group_relative, "relative eigenvalue grouping tolerance")->capture_default_str();
    cmd->add_option("--tol-verdict", tol.verdict, "accuracy verdict tolerance")->capture_default_str();
    cmd->add_option("--grid-factor", tol.grid_factor, "scan window factor K for the uniform error")->capture_default_str();
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "kv", "csv"}))->capture_default_str();
  };

  std::string model_path;
  qrms::AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "error measures, accuracy verdict and relations for a model file");
  a->add_option("model", model_path, "model JSON file")->required();
  a->add_option("--measure", analyze.measure, "headline measure: no | bar | m | f:gaussian:<w>[:<mean>] | f:cauchy:<s>[:<loc>]")
      ->capture_default_str();
  add_common(a);

  double t_min = 0.0, t_max = 3.141592653589793;
  std::size_t steps = 65;
  auto* p = app.add_subcommand("profile", "CSV samples of the error profile eps_t");
  p->add_option("model", model_path, "model JSON file")->required();
  p->add_option("--t-min", t_min, "first sample time")->capture_default_str();
  p->add_option("--t-max", t_max, "last sample time")->capture_default_str();
  p->add_option("--steps", steps, "number of samples, at least 2")->capture_default_str();
  add_common(p);

  qrms::VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "randomized property suites of all modules");
  v->add_option("--seed", verify.seed, "base seed of the property streams")->capture_default_str();
  v->add_option("--trials", verify.trials, "trials per property")->capture_default_str();
  v->add_option("--dim", verify.max_dim, "largest system / environment dimension")->check(CLI::Range(2, 8))->capture_default_str();
  v->add_option("--workers", verify.workers, "threads (0: all cores)")->capture_default_str();
  add_common(v);

  std::string filter;
  std::uint64_t repro_seed = 20240611;
  auto* r = app.add_subcommand("repro", "built-in reproduction cases with pinned tolerances");
  r->add_option("--case", filter, "run only cases whose name contains this text");
  r->add_option("--seed", repro_seed, "seed of the randomized cases")->capture_default_str();
  add_common(r);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qrms::kExitOk : qrms::kExitValidation;
  }

  const qrms::OutputFormat fmt = qrms::parse_format(format);
  if (*a) {
    analyze.tol = tol;
    analyze.format = fmt;
    return emit(qrms::cmd_analyze(model_path, analyze));
  }
  if (*p) return emit(qrms::cmd_profile(model_path, t_min, t_max, steps, tol));
  if (*v) {
    verify.tol = tol;
    return emit(qrms::cmd_verify(verify, fmt));
  }
  return emit(qrms::cmd_repro(filter, repro_seed, fmt));
}
