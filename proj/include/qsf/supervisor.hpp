// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsf/backend.hpp"
#include "qsf/codegen.hpp"
#include "qsf/runtime.hpp"

namespace qsf {

/// A launched service instance. stop() is idempotent.
class Instance {
public:
	virtual ~Instance() = default;
	virtual void stop() = 0;
};

/// Where generated services run. launch() throws qsf::Error E_LAUNCH.
class InstanceSupervisor {
public:
	virtual ~InstanceSupervisor() = default;
	virtual std::unique_ptr<Instance> launch(const std::string &deployment_id, const ServiceBundle &bundle,
	                                         std::uint16_t port, const Credentials &credentials) = 0;
};

using BackendFactory = std::function<BackendMap(const Credentials &)>;

/// Runs the service on a listener inside the current process.
class InProcessSupervisor final : public InstanceSupervisor {
public:
	explicit InProcessSupervisor(ServeOptions options = {}, BackendFactory factory = default_backends)
		: options_(std::move(options)), factory_(std::move(factory)) {}

	std::unique_ptr<Instance> launch(const std::string &deployment_id, const ServiceBundle &bundle,
	                                 std::uint16_t port, const Credentials &credentials) override;

private:
	ServeOptions options_;
	BackendFactory factory_;
};

/// Template for a container engine: writes `<work_dir>/<id>.bundle.json` and
/// spawns `argv` with `{bundle}`, `{port}` and `{id}` substituted. Credentials
/// reach the child as JSON in QSF_CREDENTIALS_JSON. stop() sends SIGTERM,
/// then SIGKILL after a grace period.
class ExternalCommandSupervisor final : public InstanceSupervisor {
public:
	/// launch() waits up to `ready_timeout` for the child to accept connections on the
	/// port; zero skips the wait.
	ExternalCommandSupervisor(std::vector<std::string> argv, std::filesystem::path work_dir,
	                          std::chrono::milliseconds ready_timeout = std::chrono::seconds(10))
		: argv_(std::move(argv)), work_dir_(std::move(work_dir)), ready_timeout_(ready_timeout) {}

	std::unique_ptr<Instance> launch(const std::string &deployment_id, const ServiceBundle &bundle,
	                                 std::uint16_t port, const Credentials &credentials) override;

private:
	std::vector<std::string> argv_;
	std::filesystem::path work_dir_;
	std::chrono::milliseconds ready_timeout_;
};

} // namespace qsf
