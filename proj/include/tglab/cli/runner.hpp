#pragma once

namespace tglab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSchema = 2,
  kExitScenario = 3,
  kExitCheck = 4,
};

/// tglab run --config PATH [--check] [--out DIR] [--seed U64] [--threads N]
/// tglab report DIR
int run_main(int argc, char** argv);

}  // namespace tglab::cli
