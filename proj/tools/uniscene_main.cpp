// SPDX-License-Identifier: Apache-2.0
#include "uniscene/cli/commands.hpp"

int main(int argc, char** argv) { return uniscene::cli::run_cli(argc, argv); }
