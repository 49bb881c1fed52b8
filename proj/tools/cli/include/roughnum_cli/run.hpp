#pragma once

#include <cstddef>
#include <iosfwd>

#include "roughnum_cli/config.hpp"
#include "roughnum_cli/output.hpp"

namespace roughnum::cli {

enum ExitCode : int { kExitOk = 0, kExitNumeric = 1, kExitConfig = 2 };

struct Outcome {
  Table table;
  int exit_code = kExitOk;
};

/// Runs one subcommand; throws ConfigError, ValidationError or NumericFailure.
[[nodiscard]] Outcome execute(const RunConfig& config, std::size_t workers = 0);

/// Full command line front end: flags, --config overlay, execution, output.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roughnum::cli
