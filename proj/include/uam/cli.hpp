#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uam::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParseError = 2;
inline constexpr int kOutOfWorkspace = 3;
inline constexpr int kEvalInput = 4;
inline constexpr int kTimeout = 5;

/// Runs the `uam` command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uam::cli
