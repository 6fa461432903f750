// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "netinv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return netinv::cli::run(args, std::cout, std::cerr);
}
