#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace anholo::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

const std::vector<std::string>& command_names();

/// Every key a command accepts, with its default value.
Json default_config(const std::string& command);

/// Parses a JSON config file; the top level must be an object.
Json load_config_file(const std::string& path);

/// defaults <- file <- overrides ("key=value", value parsed as JSON when it
/// parses, else taken as a string). Unknown keys and type mismatches raise
/// ConfigError. With model=clocksim, E_P and T default to 0.5 and 0 (automatic
/// period) unless given explicitly.
Json resolve_config(const std::string& command, const Json& file_config, const std::vector<std::string>& overrides);

double get_double(const Json& config, const char* key);
long get_long(const Json& config, const char* key);
std::string get_string(const Json& config, const char* key);
std::vector<long> get_long_list(const Json& config, const char* key);

}  // namespace anholo::cli
