#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqc::cli {

/// Process exit codes.
enum Exit : int {
    kOk = 0,
    kConfigError = 2,
    kIoError = 3,
    kInfeasibleGain = 4,
    kInternalError = 5,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CQC_OUTPUT_DIR";

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqc::cli
