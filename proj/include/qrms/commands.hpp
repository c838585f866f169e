#pragma once

// Command implementations behind the qrms executable. Each returns its
// complete output so that callers (and tests) control emission.

#include <cstdint>
#include <string>

#include "qrms/tolerances.hpp"
#include "qrms/verify.hpp"

namespace qrms {

enum class OutputFormat { Text, Kv, Csv };

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;
inline constexpr int kExitMiss = 3;

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

OutputFormat parse_format(const std::string& text);

struct AnalyzeOptions {
  Tolerances tol;
  /// no | bar | m | f:gaussian:<width>[:<mean>] | f:cauchy:<scale>[:<loc>]
  std::string measure = "no";
  OutputFormat format = OutputFormat::Text;
};

CommandResult cmd_analyze(const std::string& model_path, const AnalyzeOptions& opts);
CommandResult cmd_profile(const std::string& model_path, double t_min, double t_max, std::size_t steps,
                          const Tolerances& tol = {});
CommandResult cmd_verify(const VerifyOptions& opts, OutputFormat format = OutputFormat::Text);
CommandResult cmd_repro(const std::string& filter, std::uint64_t seed, OutputFormat format = OutputFormat::Text);

}  // namespace qrms
