#pragma once

#include <iosfwd>

namespace wordpuzzle::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 2, kInvariantError = 3 };

/// Runs the command-line tool. Progress and diagnostics go to `err`,
/// tables and summaries to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wordpuzzle::cli
