#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wpt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

// args excludes the program name. Machine output (the point subcommand's
// JSON) goes to out; diagnostics and progress to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace wpt::cli
