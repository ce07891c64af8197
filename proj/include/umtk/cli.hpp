// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace umtk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kEvaluationError = 1,
    kUsageError = 2,
    kFormatError = 3,
};

/// Runs the umtk command line. args[0] is the program name. Errors end with
/// a single "error: <Name>: <detail>" line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace umtk::cli
