// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pickforge::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,  // policy violation or smoke failure
    kUnsat = 2,
    kIoError = 3,
    kUsage = 64,
};

/// Runs one `pickforge` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pickforge::cli
