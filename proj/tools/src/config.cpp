#include "anholo/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "anholo/error.hpp"
#include "anholo/numerics.hpp"

namespace anholo::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

Json model_defaults() {
  return Json{{"model", "grover_optimal"},
              {"N", 100},
              {"a2", 5.0 / 6.0},
              {"alpha", kTwoPi / 3.0},
              {"E_P", kTwoPi / 3.0},
              {"T", 1.0},
              {"theta", 0.0},
              {"n", 1},
              {"circuit", Json::array({Json{{"gate", "x"}, {"targets", {0}}}})},
              {"matrix_file", ""}};
}

// Accepts integral floats (1e6 from --set) where the default is an integer.
bool coerce(Json& value, const Json& like) {
  if (like.is_number_integer()) {
    if (value.is_number_integer()) return true;
    if (value.is_number_float()) {
      const double d = value.get<double>();
      if (std::nearbyint(d) != d || std::abs(d) > 9.0e15) return false;
      value = static_cast<long>(d);
      return true;
    }
    return false;
  }
  if (like.is_number()) {
    if (!value.is_number()) return false;
    value = value.get<double>();
    return true;
  }
  if (like.is_string()) return value.is_string();
  if (like.is_array()) return value.is_array();
  if (like.is_boolean()) return value.is_boolean();
  return false;
}

void assign(Json& config, const std::string& key, Json value, std::set<std::string>& given) {
  if (!config.contains(key)) config_error("unknown key '" + key + "'");
  if (!coerce(value, config[key])) config_error("wrong type for key '" + key + "'");
  config[key] = std::move(value);
  given.insert(key);
}

// Keys whose default depends on the selected model.
void apply_model_defaults(Json& config, const std::set<std::string>& given) {
  if (!config.contains("model") || config["model"] != "clocksim") return;
  if (!given.count("E_P")) config["E_P"] = 0.5;
  if (!given.count("T")) config["T"] = 0.0;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "passage", "gap-scan", "clock-demo", "discretize"};
  return names;
}

Json default_config(const std::string& command) {
  if (command == "spectrum") {
    Json c = model_defaults();
    c["samples"] = 200;
    c["seed"] = 0;
    return c;
  }
  if (command == "passage") {
    Json c = model_defaults();
    c["model"] = "grover_fair";
    c["schedule"] = "both";
    c["epsilon"] = 0.1;
    c["L_values"] = {100, 1000, 10000};
    c["max_steps"] = 1L << 22;
    c["seed"] = 0;
    return c;
  }
  if (command == "gap-scan") {
    return Json{{"model", "grover_fair"},
                {"N_values", {100, 1000, 10000, 100000, 1000000}},
                {"a2", 5.0 / 6.0},
                {"alpha", kTwoPi / 3.0},
                {"E_P", kTwoPi / 3.0},
                {"T", 1.0},
                {"theta", 0.0},
                {"samples", 400},
                {"seed", 0}};
  }
  if (command == "clock-demo") {
    return Json{{"n", 1},
                {"circuit", Json::array({Json{{"gate", "x"}, {"targets", {0}}}})},
                {"E_P", 0.5},
                {"T", 0.0},
                {"L_steps", 4096},
                {"L_values", {64, 256, 1024, 4096}},
                {"seed", 0}};
  }
  if (command == "discretize") {
    return Json{{"model", "landau_zener"},
                {"t_max", 10.0},
                {"L_values", {16, 32, 64, 128, 256, 512, 1024, 2048, 4096}},
                {"L_ref", 8192},
                {"seed", 0}};
  }
  config_error("unknown command '" + command + "'");
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    config_error("cannot parse '" + path + "': " + e.what());
  }
  if (!j.is_object()) config_error("config file must hold a JSON object");
  return j;
}

Json resolve_config(const std::string& command, const Json& file_config,
                    const std::vector<std::string>& overrides) {
  Json config = default_config(command);
  std::set<std::string> given;
  if (!file_config.is_null()) {
    if (!file_config.is_object()) config_error("config must be a JSON object");
    for (const auto& [key, value] : file_config.items()) assign(config, key, value, given);
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) config_error("--set expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    assign(config, key, std::move(value), given);
  }
  apply_model_defaults(config, given);
  return config;
}

double get_double(const Json& config, const char* key) {
  const double v = config.at(key).get<double>();
  if (!std::isfinite(v)) config_error(std::string("key '") + key + "' must be finite");
  return v;
}

long get_long(const Json& config, const char* key) { return config.at(key).get<long>(); }

std::string get_string(const Json& config, const char* key) { return config.at(key).get<std::string>(); }

std::vector<long> get_long_list(const Json& config, const char* key) {
  std::vector<long> out;
  for (const auto& v : config.at(key)) {
    Json copy = v;
    if (!coerce(copy, Json(0))) config_error(std::string("key '") + key + "' must list integers");
    out.push_back(copy.get<long>());
  }
  return out;
}

}  // namespace anholo::cli
