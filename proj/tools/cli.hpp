// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tcdiff::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumerical = 3,
};

/// Runs one invocation. args excludes the program name, e.g.
/// {"mask", "--acceleration", "4"}. Never throws; failures map to ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines with '#' comments, turned into "--key=value" arguments.
/// Throws ArgumentError on a malformed line.
std::vector<std::string> read_config(const std::string& path);

}  // namespace tcdiff::cli
