#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robgxe {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,  ///< bad arguments, config or input files
  kExitRuntime = 3,     ///< sampler failure, I/O failure, too many failed genes
};

/// Entry point of the `robgxe` command line tool. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robgxe
