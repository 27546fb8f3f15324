#include "anholo/cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "anholo/cli/commands.hpp"
#include "anholo/cli/config.hpp"
#include "anholo/error.hpp"

namespace anholo::cli {

namespace {

struct Flags {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  int threads = 1;
};

int default_threads() {
  if (const char* env = std::getenv("ANHOLO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::ConfigError, "write to '" + path + "' failed");
}

int report(std::ostream& err, std::string_view code, const std::string& message, int status) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
  return status;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-1 kicked Floquet simulations: spectra, passages, gap scans and clock circuits.", "anholo"};
  app.require_subcommand(1);
  Flags flags;
  flags.threads = default_threads();
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out_path, "Output path (stdout when omitted)");
    sub->add_option("--set", flags.overrides, "Override a config key, key=value")->allow_extra_args(false);
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "ConfigError", e.what(), kExitConfig);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Json file = flags.config_path.empty() ? Json() : load_config_file(flags.config_path);
    const Json config = resolve_config(command, file, flags.overrides);
    const CommandResult result = run_command(command, config, flags.threads);
    if (flags.out_path.empty()) {
      out << (result.summary.empty() ? result.primary : result.summary);
    } else {
      write_file(flags.out_path, result.primary);
      if (!result.summary.empty()) write_file(flags.out_path + ".json", result.summary);
    }
    return kExitOk;
  } catch (const Error& e) {
    return report(err, to_string(e.code()), e.what(), is_precondition_error(e.code()) ? kExitConfig : kExitNumerical);
  } catch (const nlohmann::json::exception& e) {
    return report(err, "ConfigError", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report(err, "InternalError", e.what(), kExitNumerical);
  }
}

}  // namespace anholo::cli
