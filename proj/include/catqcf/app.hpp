#pragma once

// Experiment driver behind the command-line tool.

#include <iosfwd>

#include "catqcf/config.hpp"

namespace catqcf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
    /// Timestamp and runtime lines in output headers.
    bool wall_clock = true;
};

/// Runs one mode, writing its files under config.output_dir. Progress and
/// selftest results go to `log`, diagnostics to `err`. Returns an exit code.
int run(const RunConfig& config, const RunOptions& options, std::ostream& log, std::ostream& err);

}  // namespace catqcf
