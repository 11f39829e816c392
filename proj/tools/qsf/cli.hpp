// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace qsf::cli {

// Frozen exit-code table.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // validation errors / bad usage of inputs
inline constexpr int kExitIo = 2;       // input could not be read or written
inline constexpr int kExitGenerate = 3; // code generation failed
inline constexpr int kExitDeploy = 4;   // deployer unreachable or deployment not running

/// Entry point shared by main() and tests. Machine-readable results go to
/// `out`, human diagnostics to `err`. `deployer serve` and `serve` block
/// until SIGINT/SIGTERM.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qsf::cli
