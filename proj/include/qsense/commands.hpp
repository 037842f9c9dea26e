#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsense {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CommandArgs {
  std::string command;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<unsigned> seed;
  std::optional<int> threads;
};

const std::vector<std::string>& command_names();

// Runs one command, writing files under out_dir and a short summary to log.
// Returns the process exit code; errors are reported on err.
int run_command(const CommandArgs& args, std::ostream& log, std::ostream& err);

}  // namespace qsense
