#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qrms/commands.hpp"
#include "qrms/errors.hpp"
#include "qrms/model_io.hpp"
#include "qrms/repro.hpp"
#include "qrms/verify.hpp"

using namespace qrms;

namespace {

std::string fixture(const std::string& name) { return std::string(QRMS_FIXTURES) + "/" + name; }

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  REQUIRE_MESSAGE(it != kv.end(), key);
  return std::stod(it->second);
}

std::map<std::string, std::string> analyze(const std::string& path) {
  AnalyzeOptions opts;
  opts.format = OutputFormat::Kv;
  const auto r = cmd_analyze(path, opts);
  REQUIRE(r.exit_code == kExitOk);
  return parse_kv(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("qrms-test-" + name);
  std::ofstream(path) << text;
  return path;
}

ErrorCode load_error(const std::string& text, std::string* message = nullptr) {
  try {
    load_model(parse_model_text(text));
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("model accepted");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("cli-repro") {
  TEST_CASE("counterexample fixture loads") {
    const LoadedModel m = load_model(parse_model_file(fixture("counterexample-2d.json")));
    CHECK(m.data.dim_h == 2);
    CHECK(m.is_pure());
    CHECK(std::abs(m.pure_state()[0] - 1.0) < 1e-15);
    CHECK(m.povm.effects().size() == 2);
    REQUIRE(m.a.values().size() == 2);
    CHECK(std::abs(m.a.values()[0]) < 1e-14);
    CHECK(m.a.values()[1] == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("non-unit state is a validation error naming the field") {
    std::string msg;
    std::ifstream in(fixture("non-unit-state.json"));
    const std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(load_error(text, &msg) == ErrorCode::ValidationError);
    CHECK(msg.find("state") != std::string::npos);
    CHECK(msg.find("state norm 1.2") != std::string::npos);
    const auto r = cmd_analyze(fixture("non-unit-state.json"), {});
    CHECK(r.exit_code == kExitValidation);
  }

  TEST_CASE("malformed json reports a position") {
    try {
      parse_model_text("{\n  \"dim_h\": 2,\n  \"observable_a\": [[1, 0], [0 -1]]\n}");
      FAIL("parsed malformed json");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("invariant violations name their field path") {
    std::string msg;
    const std::string bad_povm = R"({"dim_h": 1, "observable_a": [[1]], "state": [1],
      "source": {"povm": [{"outcome": 0, "operator": [[0.5]]}]}})";
    CHECK(load_error(bad_povm, &msg) == ErrorCode::ValidationError);
    CHECK(msg.find("source.povm") != std::string::npos);
    const std::string bad_a = R"({"dim_h": 2, "observable_a": [[1, 2], [0, 1]], "state": [1, 0],
      "source": {"projective": [[1, 0], [0, 1]]}})";
    CHECK(load_error(bad_a, &msg) == ErrorCode::ValidationError);
    CHECK(msg.find("observable_a") != std::string::npos);
    const std::string two_sources = R"({"dim_h": 1, "observable_a": [[1]], "state": [1],
      "source": {"projective": [[1]], "povm": []}})";
    CHECK(load_error(two_sources) == ErrorCode::ValidationError);
    const std::string short_row = R"({"dim_h": 2, "observable_a": [[1, 0], [0]], "state": [1, 0],
      "source": {"projective": [[1, 0], [0, 1]]}})";
    CHECK(load_error(short_row, &msg) == ErrorCode::ValidationError);
    CHECK(msg.find("observable_a[1]") != std::string::npos);
  }

  TEST_CASE("hamiltonian and unitary variants give the same povm") {
    const LoadedModel h = load_model(parse_model_file(fixture("qubit-hamiltonian.json")));
    const LoadedModel u = load_model(parse_model_file(fixture("qubit-unitary.json")));
    REQUIRE(h.povm.effects().size() == u.povm.effects().size());
    for (std::size_t k = 0; k < h.povm.effects().size(); ++k) {
      CHECK(h.povm.effects()[k].outcome == u.povm.effects()[k].outcome);
      CHECK(max_abs_diff(h.povm.effects()[k].op, u.povm.effects()[k].op) < 1e-9);
    }
  }

  TEST_CASE("serialization round-trips every fixture") {
    for (const auto& entry : std::filesystem::directory_iterator(QRMS_FIXTURES)) {
      if (entry.path().filename() == "non-unit-state.json") continue;
      CAPTURE(entry.path().string());
      const ModelData a = parse_model_file(entry.path());
      const ModelData b = parse_model_text(serialize_model(a));
      CHECK(a.dim_h == b.dim_h);
      CHECK(max_abs_diff(a.observable_a, b.observable_a) < 1e-12);
      CHECK(a.kind == b.kind);
      CHECK(serialize_model(a) == serialize_model(b));
      CHECK_NOTHROW(load_model(b));
    }
  }

  TEST_CASE("reports are stable under key reordering") {
    const auto original = nlohmann::json::parse(std::ifstream(fixture("qubit-hamiltonian.json")));
    // Rebuild with keys inserted in reverse order into an order-preserving object.
    nlohmann::ordered_json reversed;
    std::vector<std::string> keys;
    for (auto it = original.begin(); it != original.end(); ++it) keys.push_back(it.key());
    for (auto k = keys.rbegin(); k != keys.rend(); ++k) reversed[*k] = original[*k];
    const auto path = temp_file("reordered.json", reversed.dump(1));
    AnalyzeOptions opts;
    opts.format = OutputFormat::Kv;
    CHECK(cmd_analyze(path.string(), opts).out == cmd_analyze(fixture("qubit-hamiltonian.json"), opts).out);
    std::filesystem::remove(path);
  }

  TEST_CASE("analyze: counterexample") {
    const auto kv = analyze(fixture("counterexample-2d.json"));
    CHECK(num(kv, "eps_no") < 1e-9);
    CHECK(num(kv, "eps_bar") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(kv.at("accurate") == "false");
    CHECK(num(kv, "w2") > 0.1);
  }

  TEST_CASE("analyze: projective measurement of A") {
    const auto kv = analyze(fixture("projective-a.json"));
    for (const char* key : {"eps_no", "eps_bar", "eps_m", "w2"}) CHECK(num(kv, key) < 1e-7);
    CHECK(kv.at("accurate") == "true");
  }

  TEST_CASE("analyze: independent four-level fixture") {
    const auto kv = analyze(fixture("independent-4d.json"));
    CHECK(num(kv, "eps_no") == doctest::Approx(4.0 / 3).epsilon(1e-9));
    CHECK(num(kv, "w2") < 1e-12);
    CHECK(num(kv, "sigma_a") == doctest::Approx(2.0 * std::numbers::sqrt2 / 3).epsilon(1e-12));
  }

  TEST_CASE("analyze: relation report when B is present") {
    const auto kv = analyze(fixture("qubit-hamiltonian.json"));
    for (const char* m : {"no", "bar"}) {
      CHECK(kv.count(std::string(m) + ".eps_a") == 1);
      CHECK(kv.at(std::string(m) + ".uedr_holds") == "true");
    }
  }

  TEST_CASE("analyze: measure selection") {
    AnalyzeOptions opts;
    opts.format = OutputFormat::Kv;
    opts.measure = "f:gaussian:1";
    const auto kv = parse_kv(cmd_analyze(fixture("counterexample-2d.json"), opts).out);
    // eps_t^2 = 4 sin^2 t averages to 2 (1 - e^{-2}) against N(0, 1).
    CHECK(num(kv, "eps_f") == doctest::Approx(std::sqrt(2.0 * (1.0 - std::exp(-2.0)))).epsilon(1e-12));
    opts.measure = "bogus";
    CHECK(cmd_analyze(fixture("counterexample-2d.json"), opts).exit_code == kExitValidation);
    CHECK(cmd_analyze("/nonexistent/model.json", {}).exit_code == kExitValidation);
  }

  TEST_CASE("analyze: mixed state") {
    const auto kv = analyze(fixture("mixed-state.json"));
    CHECK(kv.at("state") == "mixed");
    CHECK(kv.count("accurate") == 0);
  }

  TEST_CASE("profile: counterexample samples 2|sin t|") {
    const auto r = cmd_profile(fixture("counterexample-2d.json"), 0.0, std::numbers::pi, 5);
    REQUIRE(r.exit_code == kExitOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,eps_t");
    int rows = 0;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      const double t = std::stod(line.substr(0, comma)), e = std::stod(line.substr(comma + 1));
      CHECK(std::abs(e - 2.0 * std::abs(std::sin(t))) < 1e-9);
      ++rows;
    }
    CHECK(rows == 5);
  }

  TEST_CASE("profile: commuting fixture is constant, two steps give endpoints") {
    const auto r = cmd_profile(fixture("commuting.json"), -3.0, 7.0, 2);
    REQUIRE(r.exit_code == kExitOk);
    std::istringstream in(r.out);
    std::string header, first, second, extra;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK_FALSE(static_cast<bool>(std::getline(in, extra)));
    CHECK(first.substr(0, first.find(',')) == "-3");
    CHECK(second.substr(0, second.find(',')) == "7");
    CHECK(std::stod(first.substr(first.find(',') + 1)) ==
          doctest::Approx(std::stod(second.substr(second.find(',') + 1))).epsilon(1e-12));
    CHECK(cmd_profile(fixture("commuting.json"), 0.0, 1.0, 1).exit_code == kExitValidation);
  }

  TEST_CASE("verify: empty and deterministic") {
    VerifyOptions none;
    none.trials = 0;
    CHECK(run_verify(none).empty());
    CHECK(cmd_verify(none).exit_code == kExitOk);
    VerifyOptions a;
    a.trials = 5;
    a.workers = 1;
    VerifyOptions b = a;
    b.workers = 4;
    const auto ra = cmd_verify(a, OutputFormat::Csv), rb = cmd_verify(b, OutputFormat::Csv);
    CHECK(ra.out == rb.out);
    CHECK(ra.exit_code == kExitOk);
  }

  TEST_CASE("repro: filter and machine output") {
    const auto only = run_repro("counterexample-2d");
    REQUIRE(only.size() == 1);
    CHECK(only[0].pass());
    const auto r = cmd_repro("counterexample-2d", 20240611, OutputFormat::Csv);
    CHECK(r.exit_code == kExitOk);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
      if (line.rfind("counterexample-2d,", 0) == 0) ++rows;
    CHECK(rows == static_cast<int>(only[0].checks.size()));
    for (const auto& c : repro_cases()) CHECK_FALSE(c.title.empty());
  }
}
