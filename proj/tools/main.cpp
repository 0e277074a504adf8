//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <string>
#include <vector>

#include "biomol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return biomol::cli::run(args, std::cout, std::cerr);
}
