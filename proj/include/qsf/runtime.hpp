// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>

#include "qsf/backend.hpp"
#include "qsf/codegen.hpp"

namespace httplib {
class Server;
}

namespace qsf {

struct RunRequest {
	std::optional<std::uint64_t> shots;
	std::optional<std::uint64_t> seed;
};

/// A request the service refuses; rendered as {code, message, location?}.
struct HttpFailure {
	int status = 400;
	std::string code;
	std::string message;
	std::string location;
	std::string backend; // set for 502s
};

/// Empty body means all defaults. Returns HttpFailure (400) on bad input.
std::variant<RunRequest, HttpFailure> parse_run_request(std::string_view body);

/// Runs one endpoint. Absent shots take the entry's default; an absent seed
/// is drawn fresh and reported. Throws Error E_UNKNOWN_BACKEND or BackendError.
ExecutionResult execute_endpoint(const ManifestEntry &entry, const RunRequest &request, const BackendMap &backends);

/// {"counts":{...},"shots":N,"seed":S,"backend":"id"}; counts keys sorted.
std::string result_to_wire(const ExecutionResult &result);
ExecutionResult result_from_wire(std::string_view body);

std::string failure_to_wire(const HttpFailure &failure);

struct HttpReply {
	int status = 200;
	std::string content_type = "application/json";
	std::string body;
};

/// Transport-independent request handling for a served bundle. Immutable
/// after construction; handle() is safe to call concurrently.
class QuantumService {
public:
	/// Throws Error E_UNKNOWN_BACKEND when a manifest backend is missing.
	QuantumService(ServiceBundle bundle, BackendMap backends);

	HttpReply handle(std::string_view method, std::string_view path, std::string_view body) const;

	const ServiceBundle &bundle() const noexcept { return bundle_; }

private:
	ServiceBundle bundle_;
	BackendMap backends_;
	std::map<std::string, std::size_t, std::less<>> by_path_;
};

/// Drops httplib's SO_REUSEPORT so a second listener on the same port fails.
void use_exclusive_port(httplib::Server &server);

struct ServeOptions {
	std::string bind_host = "127.0.0.1";
};

/// A running HTTP listener. Destruction stops it; stop() lets in-flight
/// requests finish before returning.
class ServiceHandle {
public:
	ServiceHandle(std::shared_ptr<const QuantumService> service, std::uint16_t port, const ServeOptions &options);
	~ServiceHandle();
	ServiceHandle(const ServiceHandle &) = delete;
	ServiceHandle &operator=(const ServiceHandle &) = delete;

	std::uint16_t port() const noexcept { return port_; }
	void stop();

private:
	std::shared_ptr<const QuantumService> service_;
	std::unique_ptr<httplib::Server> server_;
	std::thread thread_;
	std::uint16_t port_;
};

/// Throws Error E_PORT_IN_USE or E_UNKNOWN_BACKEND.
std::unique_ptr<ServiceHandle> serve_bundle(const ServiceBundle &bundle, std::uint16_t port, BackendMap backends,
                                            const ServeOptions &options = {});

} // namespace qsf
