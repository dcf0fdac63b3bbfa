#include "tglab/cli/runner.hpp"

int main(int argc, char** argv) { return tglab::cli::run_main(argc, argv); }
