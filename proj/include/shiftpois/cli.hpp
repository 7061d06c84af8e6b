// Subcommand driver shared by the shiftpois binary and the tests.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shiftpois::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSchedule = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitData = 5;

/// args excludes the program name, e.g. {"simulate", "--config", "c.json"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftpois::cli
