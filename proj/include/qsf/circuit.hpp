// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qsf {

using Qubit = std::uint32_t;

/// Simulator ceiling; larger circuits are representable but rejected at execution.
inline constexpr Qubit kMaxSimulatedQubits = 24;

enum class GateKind { H, X, Y, Z, S, T, Swap };

std::string_view gate_name(GateKind kind) noexcept;
/// Inverse of gate_name ("H", ..., "SWAP"); throws qsf::Error E_UNSUPPORTED_GATE.
GateKind gate_from_name(std::string_view name);

/// One (possibly controlled) gate application. Control sets are kept sorted;
/// SWAP targets are kept in ascending order so equal circuits compare equal.
struct GateOp {
	GateKind kind = GateKind::X;
	std::vector<Qubit> targets;
	std::vector<Qubit> pos_controls;
	std::vector<Qubit> neg_controls;

	bool operator==(const GateOp &) const = default;
};

GateOp make_gate(GateKind kind, std::vector<Qubit> targets, std::vector<Qubit> pos_controls = {},
                 std::vector<Qubit> neg_controls = {});

/// Provider-neutral circuit: qubit count, ordered gates, measured-qubit set.
struct CircuitIR {
	Qubit num_qubits = 1;
	std::vector<GateOp> ops;
	std::set<Qubit> measured;

	bool operator==(const CircuitIR &) const = default;
};

/// Checks the structural invariants (index bounds, disjoint target/control sets,
/// arity). Throws qsf::Error E_BAD_CIRCUIT.
void validate_circuit(const CircuitIR &circuit);

/// The measured set a service reports: the explicit one, or every qubit when
/// the circuit measures nothing.
std::vector<Qubit> effective_measured(const CircuitIR &circuit);

} // namespace qsf
