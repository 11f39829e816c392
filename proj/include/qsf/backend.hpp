// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "qsf/circuit.hpp"
#include "qsf/error.hpp"
#include "qsf/simulator.hpp"

namespace qsf {

/// Provider id -> secret. Never logged or persisted.
using Credentials = std::map<std::string, std::string>;

struct BackendCapabilities {
	Qubit max_qubits = kMaxSimulatedQubits;
};

/// Raised by Backend::execute; surfaces as HTTP 502.
class BackendError : public Error {
public:
	explicit BackendError(const std::string &message) : Error("E_BACKEND", message) {}
};

/// An execution target. execute() must return counts summing to `shots`
/// and be safe to call concurrently.
class Backend {
public:
	virtual ~Backend() = default;
	virtual const std::string &id() const noexcept = 0;
	virtual BackendCapabilities capabilities() const noexcept = 0;
	virtual ExecutionResult execute(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed) const = 0;
};

class LocalSimulatorBackend final : public Backend {
public:
	const std::string &id() const noexcept override { return id_; }
	BackendCapabilities capabilities() const noexcept override { return {}; }
	ExecutionResult execute(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed) const override;

private:
	std::string id_{"local-simulator"};
};

struct MockRemoteOptions {
	std::string id = "mock-remote";
	/// When set, execute() fails unless `credential` is present.
	std::optional<std::string> required_credential;
	std::optional<std::string> credential;
	/// When set, every execute() fails with this message.
	std::optional<std::string> fail_with;
	/// When set, returned verbatim; must sum to the requested shots.
	std::optional<std::map<std::string, std::uint64_t>> canned_counts;
	Qubit max_qubits = kMaxSimulatedQubits;
};

/// Stand-in for a cloud provider: canned responses, scripted failures,
/// credential checks; otherwise samples like the local simulator.
class MockRemoteBackend final : public Backend {
public:
	explicit MockRemoteBackend(MockRemoteOptions options = {}) : options_(std::move(options)) {}
	const std::string &id() const noexcept override { return options_.id; }
	BackendCapabilities capabilities() const noexcept override { return {options_.max_qubits}; }
	ExecutionResult execute(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed) const override;

private:
	MockRemoteOptions options_;
};

using BackendMap = std::map<std::string, std::shared_ptr<const Backend>, std::less<>>;

/// local-simulator plus mock-remote; mock-remote requires the "mock-remote" credential.
BackendMap default_backends(const Credentials &credentials = {});

} // namespace qsf
