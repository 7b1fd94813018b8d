#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace physarum::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIterationCap = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitNotDominating = 4;
inline constexpr int kExitSizeCap = 5;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace physarum::cli
