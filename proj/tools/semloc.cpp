// SPDX-License-Identifier: Apache-2.0
#include "semloc/cli/commands.hpp"

int main(int argc, char** argv) { return semloc::cli::run(argc, argv); }
