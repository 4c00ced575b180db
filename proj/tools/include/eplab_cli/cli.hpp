#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eplab::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kIntegrationBudget = 3,
  kSelfCheck = 4,
};

/// Seed used when --seed is absent: $EPLAB_SEED if set, otherwise 42.
inline constexpr const char* kSeedEnvironmentVariable = "EPLAB_SEED";

/// Runs one subcommand. `args` excludes the program name. Reports go to the
/// --output/--csv paths when given and to `out` otherwise; diagnostics go to
/// `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eplab::cli
