#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace truecon::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

inline constexpr const char* kVersion = "0.1.0";

// Entry point behind the executable; `args` excludes the program name.
// `in` feeds the interactive `play` subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

} // namespace truecon::cli
