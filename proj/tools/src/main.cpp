// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt_tools/cli.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  glossmt::tools::CliContext ctx{&std::cout, &std::cerr,
                                 std::filesystem::current_path()};
  return glossmt::tools::run_cli(args, ctx);
}
