#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace incomm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs the selected subcommand. Diagnostics go to `err`,
/// summaries (and CSV when no --output is given) to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Subcommands on an already merged config.
int cmd_dos(const RunConfig& config, std::ostream& out);
int cmd_ldos(const RunConfig& config, std::ostream& out);
int cmd_converge(const RunConfig& config, std::ostream& out);
int cmd_equidist(const RunConfig& config, std::ostream& out);

}  // namespace incomm::cli
