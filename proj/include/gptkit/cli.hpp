#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gptkit/error.hpp"

namespace gptkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 1,
  kExitScaleLimit = 2,
  kExitNumericalFailure = 3,
};

/// Environment variable that overrides the default seed (0).
inline constexpr const char* kSeedEnv = "GPTKIT_SEED";

/// ScaleLimit -> 2, NumericalFailure -> 3, everything else -> 1.
int exit_code_for(ErrorCode code);

/// Runs the tool with `args` excluding the program name. "-" as a file
/// argument reads `in` / writes `out`; errors go to `err` as one JSON line.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gptkit::cli
