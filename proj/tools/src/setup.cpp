#include "anholo/cli/setup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "anholo/error.hpp"

namespace anholo::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

Complex parse_complex(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  config_error("expected a number or [re, im], got " + j.dump());
}

CMatrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) config_error("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) config_error("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

CVector parse_vector(const Json& j) {
  if (!j.is_array() || j.empty()) config_error("vector must be a non-empty array");
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = parse_complex(j[i]);
  return v;
}

int single_target(const Json& targets, const std::string& gate) {
  if (targets.size() != 1) config_error("gate '" + gate + "' takes one target");
  return targets[0].get<int>();
}

Gate parse_gate(const Json& j) {
  if (!j.is_object()) config_error("each gate must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "gate" && key != "targets" && key != "phi") config_error("unknown gate field '" + key + "'");
  }
  if (!j.contains("gate") || !j.contains("targets")) config_error("gate needs 'gate' and 'targets'");
  const Json& targets = j["targets"];
  if (!targets.is_array() || targets.empty()) config_error("'targets' must be a non-empty array");
  for (const auto& t : targets) {
    if (!t.is_number_integer()) config_error("gate targets must be integers");
  }
  const Json& g = j["gate"];
  if (g.is_array()) return Gate{parse_matrix(g), targets.get<std::vector<int>>(), "custom"};
  if (!g.is_string()) config_error("'gate' must be a name or a matrix");
  std::string name = g.get<std::string>();
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (name == "x") return gate_x(single_target(targets, name));
  if (name == "h") return gate_h(single_target(targets, name));
  if (name == "phase") {
    if (!j.contains("phi") || !j["phi"].is_number()) config_error("phase gate needs numeric 'phi'");
    return gate_phase(single_target(targets, name), j["phi"].get<double>());
  }
  if (name == "cnot") {
    if (targets.size() != 2) config_error("gate 'cnot' takes [control, target]");
    return gate_cnot(targets[0].get<int>(), targets[1].get<int>());
  }
  config_error("unknown gate '" + name + "'");
}

}  // namespace

ClockCircuit parse_circuit(int n, const Json& gates) {
  if (!gates.is_array()) config_error("'circuit' must be an array of gates");
  ClockCircuit c;
  c.n = n;
  for (const auto& g : gates) c.gates.push_back(parse_gate(g));
  c.validate();
  return c;
}

Json circuit_to_json(const ClockCircuit& circuit) {
  Json gates = Json::array();
  for (const auto& g : circuit.gates) gates.push_back(Json{{"gate", g.name}, {"targets", g.targets}});
  return Json{{"n", circuit.n}, {"steps", circuit.steps()}, {"gates", gates}};
}

std::pair<CMatrix, CVector> load_matrix_file(const std::string& path) {
  if (path.empty()) config_error("model 'custom' needs 'matrix_file'");
  std::ifstream in(path);
  if (!in) config_error("cannot open matrix file '" + path + "'");
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("h0") || !j.contains("v"))
    config_error("matrix file must hold {\"h0\": ..., \"v\": ...}");
  return {parse_matrix(j["h0"]), parse_vector(j["v"])};
}

FairGroverParams fair_params(const Json& config) {
  FairGroverParams p;
  if (config.contains("N")) p.n = get_long(config, "N");
  p.a2 = get_double(config, "a2");
  p.alpha = get_double(config, "alpha");
  p.e_p = get_double(config, "E_P");
  p.period = get_double(config, "T");
  p.theta = get_double(config, "theta");
  p.validate();
  return p;
}

ModelSetup build_model(const Json& config) {
  ModelSetup out;
  out.model = get_string(config, "model");
  const double period = get_double(config, "T");
  if (out.model == "two_level") {
    const double a2 = get_double(config, "a2");
    if (a2 < 0.0 || a2 > 1.0) throw Error(ErrorCode::InvalidArgument, "a2 must lie in [0, 1]");
    const Complex b = std::polar(std::sqrt(1.0 - a2), get_double(config, "theta"));
    out.system = std::make_shared<FloquetSystem>(two_level_system(get_double(config, "E_P"), std::sqrt(a2), b, period));
    out.initial = CVector::basis(2, 0);
    out.target = CVector::basis(2, 1);
  } else if (out.model == "grover_optimal") {
    auto a = full_grover(fair_params(config), 0, 3.0, true);
    out.system = std::make_shared<FloquetSystem>(std::move(a.system));
    out.initial = std::move(a.minus);
    out.target = std::move(a.plus);
  } else if (out.model == "grover_fair") {
    out.system = std::make_shared<FloquetSystem>(fair_grover_effective(fair_params(config)));
    out.initial = CVector::basis(3, 0);
    out.target = CVector::basis(3, 1);
  } else if (out.model == "clocksim") {
    const auto circuit = parse_circuit(static_cast<int>(get_long(config, "n")), config.at("circuit"));
    auto c = compose_circuit_aaqc(circuit, get_double(config, "E_P"), period);
    if (c.dense) out.system = std::make_shared<FloquetSystem>(std::move(*c.dense));
    out.map = c.map;
    out.initial = std::move(c.minus);
    out.target = std::move(c.plus);
  } else if (out.model == "custom") {
    auto [h0, v] = load_matrix_file(get_string(config, "matrix_file"));
    out.system = std::make_shared<FloquetSystem>(std::move(h0), std::move(v), period);
    const auto& e = out.system->h0_eigen();
    if (e.vectors.cols() < 2) throw Error(ErrorCode::InvalidArgument, "custom model needs dimension >= 2");
    out.initial = e.vectors.column(0);
    out.target = e.vectors.column(1);
  } else {
    config_error("unknown model '" + out.model + "'");
  }
  if (!out.map) out.map = out.system;
  return out;
}

}  // namespace anholo::cli
