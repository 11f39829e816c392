// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "qsf/circuit.hpp"

namespace qsf {

/// Parses the supported OpenQASM 2.0 subset: the header, `include "qelib1.inc"`,
/// one qreg, one creg and the gates h x y z s t cx ccx swap plus measure.
/// Single-qubit gates and measure broadcast over whole registers.
///
/// Throws qsf::Error with E_QASM_SYNTAX, E_QASM_UNSUPPORTED, E_QASM_INDEX or
/// E_OP_AFTER_MEASURE; messages start with "line N:".
CircuitIR parse_qasm(std::string_view text);

} // namespace qsf
