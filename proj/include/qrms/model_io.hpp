#pragma once

// JSON model files: an observable A, optionally B, a state, and the source of
// the measurement (explicit POVM, projective measurement of an observable, or
// a measuring process). Complex entries are [re, im]; plain numbers are real.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "qrms/linalg.hpp"
#include "qrms/measurement.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

enum class SourceKind { Povm, Projective, Process };

struct ProcessSpec {
  std::size_t dim_k = 0;
  Vector xi;
  std::optional<Matrix> unitary;
  std::optional<Matrix> hamiltonian;
  double tau = 0.0;
  Matrix meter;
};

/// Raw operator data as written in the file.
struct ModelData {
  std::size_t dim_h = 0;
  Matrix observable_a;
  std::optional<Matrix> observable_b;
  std::optional<Vector> state_vector;
  std::optional<Matrix> state_density;
  SourceKind kind = SourceKind::Povm;
  std::vector<Effect> povm;  ///< kind == Povm
  Matrix projective;         ///< kind == Projective
  ProcessSpec process;       ///< kind == Process
};

/// Validated model. For POVM and projective sources the process is the
/// Lueders dilation of the POVM.
struct LoadedModel {
  ModelData data;
  Observable a;
  std::optional<Observable> b;
  std::variant<StateVector, DensityOperator> state;
  Povm povm;
  MeasuringProcess process;

  bool is_pure() const { return std::holds_alternative<StateVector>(state); }
  const StateVector& pure_state() const { return std::get<StateVector>(state); }
  DensityOperator density() const;
};

/// Throws ParseError (with line/column) on malformed JSON and ValidationError
/// naming the field path on invariant violations.
ModelData parse_model_text(const std::string& text);
ModelData parse_model_file(const std::filesystem::path& path);
LoadedModel load_model(ModelData data, const Tolerances& tol = {});

/// Keys sorted; numbers written with 17 significant digits.
std::string serialize_model(const ModelData& data);

}  // namespace qrms
