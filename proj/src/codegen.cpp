// SPDX-License-Identifier: Apache-2.0
#include "qsf/codegen.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "qsf/error.hpp"

namespace qsf {

namespace {

std::string qasm_gate(const GateOp &op) {
	if (!op.neg_controls.empty()) {
		throw Error("E_UNREPRESENTABLE", "negative controls have no OpenQASM 2.0 subset form");
	}
	const auto q = [](Qubit i) { return "q[" + std::to_string(i) + "]"; };
	if (op.kind == GateKind::Swap) {
		if (!op.pos_controls.empty()) {
			throw Error("E_UNREPRESENTABLE", "controlled SWAP is outside the emission set");
		}
		return "swap " + q(op.targets[0]) + "," + q(op.targets[1]) + ";";
	}
	if (op.pos_controls.empty()) {
		std::string name(gate_name(op.kind));
		name[0] = static_cast<char>(std::tolower(name[0]));
		return name + " " + q(op.targets[0]) + ";";
	}
	if (op.kind != GateKind::X) {
		throw Error("E_UNREPRESENTABLE", "controlled " + std::string(gate_name(op.kind)) + " is outside the emission set");
	}
	if (op.pos_controls.size() == 1) {
		return "cx " + q(op.pos_controls[0]) + "," + q(op.targets[0]) + ";";
	}
	if (op.pos_controls.size() == 2) {
		return "ccx " + q(op.pos_controls[0]) + "," + q(op.pos_controls[1]) + "," + q(op.targets[0]) + ";";
	}
	throw Error("E_UNREPRESENTABLE", "X with " + std::to_string(op.pos_controls.size()) + " controls");
}

std::string qiskit_gate(const GateOp &op) {
	// Reuses the QASM emission rules so both artifacts accept the same circuits.
	qasm_gate(op);
	if (op.kind == GateKind::Swap) {
		return "qc.swap(" + std::to_string(op.targets[0]) + ", " + std::to_string(op.targets[1]) + ")";
	}
	if (op.pos_controls.empty()) {
		std::string name(gate_name(op.kind));
		name[0] = static_cast<char>(std::tolower(name[0]));
		return "qc." + name + "(" + std::to_string(op.targets[0]) + ")";
	}
	std::string call = op.pos_controls.size() == 1 ? "qc.cx(" : "qc.ccx(";
	for (Qubit c : op.pos_controls) {
		call += std::to_string(c) + ", ";
	}
	return call + std::to_string(op.targets[0]) + ")";
}

std::string python_list(const std::vector<Qubit> &items) {
	std::string out = "[";
	for (std::size_t i = 0; i < items.size(); ++i) {
		out += (i ? ", " : "") + std::to_string(items[i]);
	}
	return out + "]";
}

} // namespace

std::string emit_qasm(const CircuitIR &circuit) {
	validate_circuit(circuit);
	std::ostringstream out;
	out << "OPENQASM 2.0;\n"
	    << "include \"qelib1.inc\";\n"
	    << "qreg q[" << circuit.num_qubits << "];\n"
	    << "creg c[" << circuit.num_qubits << "];\n";
	for (const auto &op : circuit.ops) {
		out << qasm_gate(op) << '\n';
	}
	for (Qubit q : circuit.measured) {
		out << "measure q[" << q << "] -> c[" << q << "];\n";
	}
	return out.str();
}

std::string emit_qiskit(const CircuitIR &circuit, std::string_view operation_id, const QiskitHeader &header) {
	validate_circuit(circuit);
	const std::vector<Qubit> measured = effective_measured(circuit);
	std::vector<Qubit> clbits(measured.size());
	for (std::size_t j = 0; j < clbits.size(); ++j) {
		clbits[j] = static_cast<Qubit>(j);
	}

	std::ostringstream out;
	out << "# Generated by " << header.generator_version << ". Do not edit.\n";
	if (!header.spec_fingerprint.empty()) {
		out << "# spec-fingerprint: sha256:" << header.spec_fingerprint << '\n';
	}
	out << "# Classical bit j holds measured qubit " << python_list(measured)
	    << "[j]; count keys read with bit 0 rightmost.\n"
	    << "from qiskit import QuantumCircuit, transpile\n"
	    << "from qiskit_aer import AerSimulator\n"
	    << "\n\n"
	    << "def " << operation_id << "(shots=" << header.default_shots << "):\n"
	    << "    qc = QuantumCircuit(" << circuit.num_qubits << ", " << measured.size() << ")\n";
	for (const auto &op : circuit.ops) {
		out << "    " << qiskit_gate(op) << '\n';
	}
	out << "    qc.measure(" << python_list(measured) << ", " << python_list(clbits) << ")\n"
	    << "    backend = AerSimulator()\n"
	    << "    result = backend.run(transpile(qc, backend), shots=shots).result()\n"
	    << "    return result.get_counts()\n";
	return out.str();
}

std::string qasm_artifact_name(std::string_view operation_id) {
	return std::string(operation_id) + ".qasm";
}

std::string qiskit_artifact_name(std::string_view operation_id) {
	return std::string(operation_id) + "_qiskit.py.txt";
}

std::string sha256_hex(std::string_view bytes) {
	unsigned char digest[EVP_MAX_MD_SIZE];
	unsigned int len = 0;
	if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
		throw Error("E_HASH", "SHA-256 digest failed");
	}
	std::ostringstream hex;
	for (unsigned int i = 0; i < len; ++i) {
		hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
	}
	return hex.str();
}

BundleResult generate_bundle(const ApiSpec &spec, std::string_view raw_yaml, const Fetcher &fetcher) {
	BundleResult result;
	IngestedSpec ingested = ingest_spec(spec, fetcher);
	result.diagnostics = std::move(ingested.diagnostics);
	if (has_errors(result.diagnostics)) {
		return result;
	}

	ServiceBundle bundle;
	bundle.title = spec.title;
	bundle.version = spec.version;
	bundle.spec_fingerprint = sha256_hex(raw_yaml);
	for (std::size_t i = 0; i < spec.endpoints.size(); ++i) {
		const EndpointDef &e = spec.endpoints[i];
		const CircuitIR &circuit = *ingested.circuits[i];
		const QiskitHeader header{bundle.spec_fingerprint, std::string(kGeneratorVersion), e.binding.default_shots};
		try {
			bundle.emitted[qasm_artifact_name(e.operation_id)] = emit_qasm(circuit);
			bundle.emitted[qiskit_artifact_name(e.operation_id)] = emit_qiskit(circuit, e.operation_id, header);
		} catch (const Error &err) {
			result.diagnostics.push_back(
			    make_error(diag::kEmit, binding_location(e), "E_EMIT: " + err.code() + ": " + err.what()));
			continue;
		}
		bundle.manifest.push_back(
		    {e.path, e.method, e.operation_id, circuit, e.binding.default_shots, e.binding.backend});
	}
	if (has_errors(result.diagnostics)) {
		return result;
	}
	bundle.emitted[std::string(kEffectiveSpecName)] = serialize_spec(spec);
	result.bundle = std::move(bundle);
	return result;
}

BundleResult generate_bundle_from_text(std::string_view raw_yaml, std::optional<std::string> source_url,
                                       const Fetcher &fetcher) {
	SpecParseResult parsed = parse_spec(raw_yaml, std::move(source_url));
	if (!parsed.spec) {
		return {std::nullopt, std::move(parsed.diagnostics)};
	}
	BundleResult result = generate_bundle(*parsed.spec, raw_yaml, fetcher);
	result.diagnostics.insert(result.diagnostics.begin(), parsed.diagnostics.begin(), parsed.diagnostics.end());
	return result;
}

} // namespace qsf
