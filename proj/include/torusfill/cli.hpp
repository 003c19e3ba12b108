#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torusfill::cli {

inline constexpr const char* kVersion = "0.1.0";

// Environment variable overriding the default enumeration budget.
inline constexpr const char* kBudgetVariable = "TORUSFILL_BUDGET";

enum ExitCode : int { kSuccess = 0, kMathFailure = 1, kUsageError = 2, kResourceError = 3 };

// Runs one subcommand; `args` excludes the program name. The report goes to
// `out`, usage text and error messages to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Argument list that reproduces a JSON report: the command followed by one
// --name=value per echoed parameter.
std::vector<std::string> args_from_report(const std::string& json_report);

}  // namespace torusfill::cli
