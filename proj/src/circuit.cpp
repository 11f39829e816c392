// SPDX-License-Identifier: Apache-2.0
#include "qsf/circuit.hpp"

#include <algorithm>

#include "qsf/error.hpp"

namespace qsf {

std::string_view gate_name(GateKind kind) noexcept {
	switch (kind) {
	case GateKind::H: return "H";
	case GateKind::X: return "X";
	case GateKind::Y: return "Y";
	case GateKind::Z: return "Z";
	case GateKind::S: return "S";
	case GateKind::T: return "T";
	case GateKind::Swap: return "SWAP";
	}
	return "?";
}

GateKind gate_from_name(std::string_view name) {
	for (auto kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::T, GateKind::Swap}) {
		if (gate_name(kind) == name) {
			return kind;
		}
	}
	throw Error("E_UNSUPPORTED_GATE", "unknown gate '" + std::string(name) + "'");
}

GateOp make_gate(GateKind kind, std::vector<Qubit> targets, std::vector<Qubit> pos_controls,
                 std::vector<Qubit> neg_controls) {
	if (kind == GateKind::Swap) {
		std::sort(targets.begin(), targets.end());
	}
	std::sort(pos_controls.begin(), pos_controls.end());
	std::sort(neg_controls.begin(), neg_controls.end());
	return GateOp{kind, std::move(targets), std::move(pos_controls), std::move(neg_controls)};
}

void validate_circuit(const CircuitIR &circuit) {
	auto fail = [](const std::string &msg) { throw Error("E_BAD_CIRCUIT", msg); };
	if (circuit.num_qubits < 1) {
		fail("circuit must have at least one qubit");
	}
	for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
		const GateOp &op = circuit.ops[i];
		const std::string where = "op " + std::to_string(i) + " (" + std::string(gate_name(op.kind)) + ")";
		const std::size_t arity = op.kind == GateKind::Swap ? 2 : 1;
		if (op.targets.size() != arity) {
			fail(where + ": expected " + std::to_string(arity) + " target(s)");
		}
		std::set<Qubit> seen;
		for (const auto *group : {&op.targets, &op.pos_controls, &op.neg_controls}) {
			for (Qubit q : *group) {
				if (q >= circuit.num_qubits) {
					fail(where + ": qubit " + std::to_string(q) + " out of range");
				}
				if (!seen.insert(q).second) {
					fail(where + ": qubit " + std::to_string(q) + " used twice");
				}
			}
		}
	}
	if (!circuit.measured.empty() && *circuit.measured.rbegin() >= circuit.num_qubits) {
		fail("measured qubit " + std::to_string(*circuit.measured.rbegin()) + " out of range");
	}
}

std::vector<Qubit> effective_measured(const CircuitIR &circuit) {
	if (!circuit.measured.empty()) {
		return {circuit.measured.begin(), circuit.measured.end()};
	}
	std::vector<Qubit> all(circuit.num_qubits);
	for (Qubit q = 0; q < circuit.num_qubits; ++q) {
		all[q] = q;
	}
	return all;
}

} // namespace qsf
