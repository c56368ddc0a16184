#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ergodic::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kInputError = 2,
  kNotSatisfied = 3,
  kDegenerate = 4,
};

/// Environment variable naming the directory for outputs when -o is absent.
inline constexpr const char* kOutputDirEnv = "ERGODIC_OUTPUT_DIR";

/// Runs one invocation; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergodic::cli
