/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv, argv + argc);
  return skelfit::cli::run(args, std::cout, std::cerr);
}
