#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctmc::cli {

// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kRecoveryHypothesis = 2,
  kUnhedgeable = 3,
};

/// Runs the tool on `args` (without the program name). Tabular results go
/// to `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// start:stop:step, inclusive of stop (within 1e-9 steps). Throws InputError
/// on a malformed or empty grid.
std::vector<double> parse_grid(const std::string& spec);

/// Comma / whitespace separated reals.
std::vector<double> parse_list(const std::string& spec);

/// %.17g
std::string format_double(double v);

}  // namespace ctmc::cli
