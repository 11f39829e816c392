// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "qsf/circuit.hpp"

namespace qsf {

// Line-oriented CircuitIR text used by the fixture corpus:
//
//   qubits 3
//   H 0
//   X 2 [0,1]
//   X 1 [] [0]
//   SWAP 0,2
//   measured 0,1,2
//
// '#' starts a comment. The `measured` line is omitted when the set is empty.

std::string format_ir(const CircuitIR &circuit);

/// Throws qsf::Error E_IR_SYNTAX.
CircuitIR parse_ir(std::string_view text);

} // namespace qsf
