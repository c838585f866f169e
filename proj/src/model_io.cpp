#include "qrms/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qrms/errors.hpp"

namespace qrms {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& what, double magnitude = 0.0) {
  throw Error(ErrorCode::ValidationError, path + ": " + what, magnitude);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) invalid(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

double parse_real(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  return j.get<double>();
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  invalid(path, "expected a number or [re, im]");
}

Vector parse_vector(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) invalid(path, "expected an array");
  if (j.size() != dim) invalid(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = parse_complex(j[i], join(path, i));
  return v;
}

Matrix parse_matrix(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) invalid(path, "expected an array of rows");
  if (j.size() != dim) invalid(path, "expected " + std::to_string(dim) + " rows, got " + std::to_string(j.size()));
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const Vector row = parse_vector(j[r], join(path, r), dim);
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

std::size_t parse_dim(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) invalid(path, "expected a positive integer");
  return j.get<std::size_t>();
}

json write_complex(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

json write_vector(const Vector& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(write_complex(z));
  return out;
}

json write_matrix(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(write_complex(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

// Re-raises library errors under the field path that produced them.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError && std::string(e.what()).find(": ") != std::string::npos) {
      const std::string what = e.what();
      invalid(path, what.substr(what.find(": ") + 2), e.magnitude());
    }
    const std::string what = e.what();
    invalid(path, what, e.magnitude());
  }
}

}  // namespace

ModelData parse_model_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what(),
                static_cast<double>(e.byte));
  }
  if (!root.is_object()) invalid("$", "expected a JSON object");

  ModelData d;
  d.dim_h = parse_dim(field(root, "dim_h", ""), "dim_h");
  d.observable_a = parse_matrix(field(root, "observable_a", ""), "observable_a", d.dim_h);
  if (auto it = root.find("observable_b"); it != root.end() && !it->is_null()) {
    d.observable_b = parse_matrix(*it, "observable_b", d.dim_h);
  }

  const json& state = field(root, "state", "");
  if (state.is_object()) {
    d.state_density = parse_matrix(field(state, "density", "state"), "state.density", d.dim_h);
  } else {
    d.state_vector = parse_vector(state, "state", d.dim_h);
  }

  const json& source = field(root, "source", "");
  if (!source.is_object() || source.size() != 1) {
    invalid("source", "expected exactly one of \"povm\", \"projective\", \"process\"");
  }
  if (auto it = source.find("povm"); it != source.end()) {
    d.kind = SourceKind::Povm;
    if (!it->is_array() || it->empty()) invalid("source.povm", "expected a nonempty array of effects");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = join("source.povm", i);
      const json& e = (*it)[i];
      d.povm.push_back({parse_real(field(e, "outcome", p), join(p, "outcome")),
                        parse_matrix(field(e, "operator", p), join(p, "operator"), d.dim_h)});
    }
  } else if (auto it2 = source.find("projective"); it2 != source.end()) {
    d.kind = SourceKind::Projective;
    d.projective = parse_matrix(*it2, "source.projective", d.dim_h);
  } else if (auto it3 = source.find("process"); it3 != source.end()) {
    d.kind = SourceKind::Process;
    const std::string p = "source.process";
    const json& pr = *it3;
    d.process.dim_k = parse_dim(field(pr, "dim_k", p), p + ".dim_k");
    const std::size_t n = d.dim_h * d.process.dim_k;
    d.process.xi = parse_vector(field(pr, "xi", p), p + ".xi", d.process.dim_k);
    d.process.meter = parse_matrix(field(pr, "meter", p), p + ".meter", d.process.dim_k);
    const bool has_u = pr.contains("unitary");
    const bool has_h = pr.contains("hamiltonian");
    if (has_u == has_h) invalid(p, "expected exactly one of \"unitary\" or \"hamiltonian\" (with \"tau\")");
    if (has_u) {
      d.process.unitary = parse_matrix(pr["unitary"], p + ".unitary", n);
    } else {
      d.process.hamiltonian = parse_matrix(pr["hamiltonian"], p + ".hamiltonian", n);
      d.process.tau = parse_real(field(pr, "tau", p), p + ".tau");
    }
  } else {
    invalid("source", "expected one of \"povm\", \"projective\", \"process\"");
  }
  return d;
}

ModelData parse_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

DensityOperator LoadedModel::density() const {
  if (is_pure()) return DensityOperator::pure(pure_state());
  return std::get<DensityOperator>(state);
}

LoadedModel load_model(ModelData data, const Tolerances& tol) {
  Observable a = at_path("observable_a", [&] {
    auto obs = spectral_decompose(data.observable_a, tol);
    return obs;
  });
  std::optional<Observable> b;
  if (data.observable_b) b = at_path("observable_b", [&] { return spectral_decompose(*data.observable_b, tol); });

  std::variant<StateVector, DensityOperator> state = [&]() -> std::variant<StateVector, DensityOperator> {
    if (data.state_vector) return at_path("state", [&] { return StateVector(*data.state_vector, tol.state_norm); });
    return at_path("state.density", [&] { return DensityOperator(*data.state_density, tol.density); });
  }();

  auto checked_povm = [&](Povm p, const std::string& path) {
    if (auto v = validate_povm(p, tol); !v.empty()) invalid(path, v.front().check, v.front().magnitude);
    return p;
  };

  switch (data.kind) {
    case SourceKind::Povm: {
      Povm p = checked_povm(Povm(data.povm), "source.povm");
      MeasuringProcess proc = at_path("source.povm", [&] { return naimark_dilation(p, b, tol); });
      return LoadedModel{std::move(data), std::move(a), std::move(b), std::move(state), std::move(p), std::move(proc)};
    }
    case SourceKind::Projective: {
      Povm p = at_path("source.projective", [&] { return projective_povm(spectral_decompose(data.projective, tol)); });
      MeasuringProcess proc = at_path("source.projective", [&] { return naimark_dilation(p, b, tol); });
      return LoadedModel{std::move(data), std::move(a), std::move(b), std::move(state), std::move(p), std::move(proc)};
    }
    case SourceKind::Process: {
      const auto& ps = data.process;
      const std::string path = "source.process";
      Matrix u = ps.unitary ? *ps.unitary
                            : at_path(path + ".hamiltonian", [&] { return unitary_from_hamiltonian(*ps.hamiltonian, ps.tau, tol); });
      Observable meter = at_path(path + ".meter", [&] { return spectral_decompose(ps.meter, tol); });
      StateVector xi = at_path(path + ".xi", [&] { return StateVector(ps.xi, tol.state_norm); });
      MeasuringProcess proc = at_path(path, [&] {
        return MeasuringProcess(data.dim_h, std::move(xi), std::move(u), std::move(meter), b, tol);
      });
      Povm p = checked_povm(povm_from_process(proc), path);
      return LoadedModel{std::move(data), std::move(a), std::move(b), std::move(state), std::move(p), std::move(proc)};
    }
  }
  invalid("source", "unknown source kind");
}

std::string serialize_model(const ModelData& d) {
  json root;
  root["dim_h"] = d.dim_h;
  root["observable_a"] = write_matrix(d.observable_a);
  if (d.observable_b) root["observable_b"] = write_matrix(*d.observable_b);
  if (d.state_vector) {
    root["state"] = write_vector(*d.state_vector);
  } else if (d.state_density) {
    root["state"] = json{{"density", write_matrix(*d.state_density)}};
  }
  json source;
  switch (d.kind) {
    case SourceKind::Povm: {
      json effects = json::array();
      for (const auto& e : d.povm) effects.push_back(json{{"outcome", e.outcome}, {"operator", write_matrix(e.op)}});
      source["povm"] = std::move(effects);
      break;
    }
    case SourceKind::Projective: source["projective"] = write_matrix(d.projective); break;
    case SourceKind::Process: {
      json p;
      p["dim_k"] = d.process.dim_k;
      p["xi"] = write_vector(d.process.xi);
      p["meter"] = write_matrix(d.process.meter);
      if (d.process.unitary) {
        p["unitary"] = write_matrix(*d.process.unitary);
      } else if (d.process.hamiltonian) {
        p["hamiltonian"] = write_matrix(*d.process.hamiltonian);
        p["tau"] = d.process.tau;
      }
      source["process"] = std::move(p);
      break;
    }
  }
  root["source"] = std::move(source);
  return root.dump(2) + "\n";
}

}  // namespace qrms
