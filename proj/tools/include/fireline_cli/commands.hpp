#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fireline::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kInvariantError = 4 };

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  unsigned threads = 1;
  bool verify = false;
};

const std::vector<std::string>& command_names();

// Runs one subcommand in-process. Errors are reported on `err` and mapped to
// exit codes; stage progress goes to `log`. FIRELINE_SEED, when set, replaces
// the config seed.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& log,
                std::ostream& err);

// argv front end used by the fireline executable.
int cli_main(int argc, char** argv);

}  // namespace fireline::cli
