// SPDX-License-Identifier: Apache-2.0
#include "qsf/backend.hpp"

#include <numeric>

namespace qsf {

namespace {

void check_capacity(const Backend &backend, const CircuitIR &circuit) {
	if (circuit.num_qubits > backend.capabilities().max_qubits) {
		throw BackendError(backend.id() + " supports at most " + std::to_string(backend.capabilities().max_qubits) +
		                   " qubits; circuit has " + std::to_string(circuit.num_qubits));
	}
}

} // namespace

ExecutionResult LocalSimulatorBackend::execute(const CircuitIR &circuit, std::uint64_t shots,
                                               std::uint64_t seed) const {
	check_capacity(*this, circuit);
	try {
		ExecutionResult result = sample_counts(circuit, shots, seed);
		result.backend_id = id_;
		return result;
	} catch (const Error &e) {
		throw BackendError(e.code() + ": " + e.what());
	}
}

ExecutionResult MockRemoteBackend::execute(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed) const {
	if (options_.required_credential && !options_.credential) {
		throw BackendError("authentication failed: missing credential '" + *options_.required_credential + "'");
	}
	if (options_.fail_with) {
		throw BackendError(*options_.fail_with);
	}
	check_capacity(*this, circuit);
	if (options_.canned_counts) {
		const auto total = std::accumulate(options_.canned_counts->begin(), options_.canned_counts->end(),
		                                   std::uint64_t{0}, [](auto acc, const auto &kv) { return acc + kv.second; });
		if (total != shots) {
			throw BackendError("canned response holds " + std::to_string(total) + " shots, " +
			                   std::to_string(shots) + " requested");
		}
		return {*options_.canned_counts, shots, seed, options_.id};
	}
	try {
		ExecutionResult result = sample_counts(circuit, shots, seed);
		result.backend_id = options_.id;
		return result;
	} catch (const Error &e) {
		throw BackendError(e.code() + ": " + e.what());
	}
}

BackendMap default_backends(const Credentials &credentials) {
	MockRemoteOptions mock;
	mock.required_credential = "mock-remote";
	if (auto it = credentials.find("mock-remote"); it != credentials.end()) {
		mock.credential = it->second;
	}
	BackendMap map;
	map["local-simulator"] = std::make_shared<LocalSimulatorBackend>();
	map["mock-remote"] = std::make_shared<MockRemoteBackend>(std::move(mock));
	return map;
}

} // namespace qsf
