#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bemery::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitInput = 2;

inline constexpr int kReportVersion = 1;

// args excludes the program name. Reports go to out, summaries and
// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bemery::cli
