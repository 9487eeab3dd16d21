/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace skelfit::cli
{

enum ExitCode : int
{
  kOk = 0,
  kParse = 2,
  kDegenerate = 3,
  kIo = 4,
};

int exit_code_for(ErrorKind kind);

/// Runs one command line (args[0] is the program name). Reports go to out,
/// diagnostics and warnings to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace skelfit::cli
