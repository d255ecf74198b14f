#ifndef BEST_TOOLS_CLI_H_
#define BEST_TOOLS_CLI_H_

#include <cstdint>
#include <string>
#include <vector>

namespace best::tools {

// Process exit status of the `best` command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // unexpected internal error
  kExitUsage = 2,    // unknown flag, missing or malformed argument
  kExitIo = 3,       // file cannot be opened, read or written
  kExitParse = 4,    // malformed dump or truth file
  kExitInvalid = 5,  // input violates a precondition or domain
  kExitNoSurvivors = 6,
  kExitInsufficientData = 7,
};

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "BEST_OUTPUT_DIR";

// Comma-separated levels; each item is an integer, "lo:hi" (every integer
// in the closed range) or "lo:hi:step".
std::vector<std::int64_t> ParseLevels(const std::string& text);

int RunCli(int argc, char** argv);

}  // namespace best::tools

#endif  // BEST_TOOLS_CLI_H_
