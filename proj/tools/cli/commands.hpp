#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collapse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDisagreement = 2;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Diagnostics go to `err` at the level named by COLLAPSE_LOG
/// (error|warn|info|debug, default warn); structured results go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collapse::cli
