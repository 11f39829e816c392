// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qsf/backend.hpp"
#include "qsf/deployment.hpp"
#include "qsf/fetch.hpp"
#include "qsf/ports.hpp"
#include "qsf/supervisor.hpp"

namespace httplib {
class Server;
}

namespace qsf {

struct DeployerConfig {
	PortRange ports;
	std::optional<std::filesystem::path> state_dir; // no ledger when unset
	std::string advertise_host = "127.0.0.1";
	std::string probe_host = "0.0.0.0";
	bool probe_os_ports = true;
};

struct DeployOutcome {
	DeploymentRecord record;
	std::optional<std::string> error; // E_FETCH, E_INVALID_SPEC, E_NO_PORTS, E_LAUNCH, E_BAD_CREDENTIALS
	std::string message;

	bool ok() const noexcept { return !error.has_value(); }
};

/// Deployment API core: fetch -> parse -> generate -> first free port ->
/// launch. Port allocation and the ledger share one lock; instance launch
/// runs outside it. Records returned are snapshots.
class Deployer {
public:
	Deployer(DeployerConfig config, std::shared_ptr<const Fetcher> fetcher,
	         std::shared_ptr<InstanceSupervisor> supervisor);
	/// Stops every running instance and records it as stopped.
	~Deployer();
	Deployer(const Deployer &) = delete;
	Deployer &operator=(const Deployer &) = delete;

	DeployOutcome deploy(const std::string &spec_url, const Credentials &credentials);

	/// Idempotent. Throws qsf::Error E_NOT_FOUND.
	DeploymentRecord teardown(const std::string &id);

	std::vector<DeploymentRecord> list() const;
	/// Throws qsf::Error E_NOT_FOUND.
	DeploymentRecord get(const std::string &id) const;

	std::set<std::uint16_t> allocated_ports() const { return ports_.allocated(); }
	const DeployerConfig &config() const noexcept { return config_; }

	void shutdown();

private:
	DeploymentRecord commit(DeploymentRecord record);
	DeployOutcome fail(DeploymentRecord record, std::string code, std::string message,
	                   std::vector<Diagnostic> diagnostics);

	DeployerConfig config_;
	std::shared_ptr<const Fetcher> fetcher_;
	std::shared_ptr<InstanceSupervisor> supervisor_;
	PortRegistry ports_;
	std::optional<DeploymentLedger> ledger_;

	mutable std::mutex mutex_;
	std::map<std::string, DeploymentRecord> records_;
	std::map<std::string, std::unique_ptr<Instance>> instances_;
	std::uint64_t next_sequence_ = 1;
};

/// Credential shape check: non-empty ids and secrets. Empty result means OK.
std::optional<std::string> credential_shape_error(const Credentials &credentials);

/// HTTP status used for a failed deploy's error code.
int deploy_error_status(const std::string &code);

/// The HTTP face of a Deployer:
///   POST /deployments, GET /deployments, GET|DELETE /deployments/{id}, GET /health
class DeployerServer {
public:
	/// Throws qsf::Error E_PORT_IN_USE.
	DeployerServer(std::shared_ptr<Deployer> deployer, std::uint16_t port, const std::string &bind_host = "127.0.0.1");
	~DeployerServer();
	DeployerServer(const DeployerServer &) = delete;
	DeployerServer &operator=(const DeployerServer &) = delete;

	void stop();

private:
	std::shared_ptr<Deployer> deployer_;
	std::unique_ptr<httplib::Server> server_;
	std::thread thread_;
};

} // namespace qsf
