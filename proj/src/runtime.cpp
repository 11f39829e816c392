// SPDX-License-Identifier: Apache-2.0
#include "qsf/runtime.hpp"

#include <random>

#include <httplib.h>
#include <json.hpp>

namespace qsf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::variant<std::uint64_t, HttpFailure> unsigned_field(const json &body, const char *name) {
	const json &v = body.at(name);
	if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
		return HttpFailure{400, "E_BAD_REQUEST", std::string(name) + " must be a non-negative integer",
		                   std::string("body.") + name, {}};
	}
	return v.get<std::uint64_t>();
}

std::uint64_t fresh_seed() {
	std::random_device rd;
	return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

HttpReply reply(const HttpFailure &f) {
	return {f.status, "application/json", failure_to_wire(f)};
}

} // namespace

std::variant<RunRequest, HttpFailure> parse_run_request(std::string_view body) {
	RunRequest req;
	if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
		return req;
	}
	const json j = json::parse(body, nullptr, false);
	if (j.is_discarded() || !j.is_object()) {
		return HttpFailure{400, "E_BAD_REQUEST", "request body must be a JSON object", "body", {}};
	}
	if (j.contains("shots") && !j["shots"].is_null()) {
		auto v = unsigned_field(j, "shots");
		if (auto *f = std::get_if<HttpFailure>(&v)) {
			return *f;
		}
		const auto shots = std::get<std::uint64_t>(v);
		if (shots < 1 || shots > kMaxShots) {
			return HttpFailure{400, "QSF005", "shots must be within [1, 1000000]", "body.shots", {}};
		}
		req.shots = shots;
	}
	if (j.contains("seed") && !j["seed"].is_null()) {
		auto v = unsigned_field(j, "seed");
		if (auto *f = std::get_if<HttpFailure>(&v)) {
			return *f;
		}
		req.seed = std::get<std::uint64_t>(v);
	}
	return req;
}

ExecutionResult execute_endpoint(const ManifestEntry &entry, const RunRequest &request, const BackendMap &backends) {
	auto it = backends.find(entry.backend);
	if (it == backends.end()) {
		throw Error("E_UNKNOWN_BACKEND", "backend '" + entry.backend + "' is not configured");
	}
	const std::uint64_t shots = request.shots.value_or(entry.default_shots);
	const std::uint64_t seed = request.seed ? *request.seed : fresh_seed();
	ExecutionResult result = it->second->execute(entry.circuit, shots, seed);
	std::uint64_t total = 0;
	for (const auto &[key, n] : result.counts) {
		total += n;
	}
	if (total != shots) {
		throw BackendError(entry.backend + " returned " + std::to_string(total) + " shots, expected " +
		                   std::to_string(shots));
	}
	return result;
}

std::string result_to_wire(const ExecutionResult &result) {
	ordered_json counts = ordered_json::object();
	for (const auto &[key, n] : result.counts) {
		counts[key] = n;
	}
	ordered_json out;
	out["counts"] = std::move(counts);
	out["shots"] = result.shots;
	out["seed"] = result.seed;
	out["backend"] = result.backend_id;
	return out.dump();
}

ExecutionResult result_from_wire(std::string_view body) {
	try {
		const json j = json::parse(body);
		return {j.at("counts").get<std::map<std::string, std::uint64_t>>(), j.at("shots").get<std::uint64_t>(),
		        j.at("seed").get<std::uint64_t>(), j.at("backend").get<std::string>()};
	} catch (const json::exception &e) {
		throw Error("E_BAD_RESPONSE", e.what());
	}
}

std::string failure_to_wire(const HttpFailure &failure) {
	ordered_json out;
	out["code"] = failure.code;
	out["message"] = failure.message;
	if (!failure.location.empty()) {
		out["location"] = failure.location;
	}
	if (!failure.backend.empty()) {
		out["backend"] = failure.backend;
	}
	return out.dump();
}

QuantumService::QuantumService(ServiceBundle bundle, BackendMap backends)
	: bundle_(std::move(bundle)), backends_(std::move(backends)) {
	for (std::size_t i = 0; i < bundle_.manifest.size(); ++i) {
		const auto &entry = bundle_.manifest[i];
		if (!backends_.contains(entry.backend)) {
			throw Error("E_UNKNOWN_BACKEND", "endpoint " + entry.path + " uses unknown backend '" + entry.backend + "'");
		}
		by_path_.emplace(entry.path, i);
	}
}

HttpReply QuantumService::handle(std::string_view method, std::string_view path, std::string_view body) const {
	if (method == "GET" && path == "/health") {
		ordered_json out;
		out["status"] = "ok";
		out["endpoints"] = bundle_.manifest.size();
		return {200, "application/json", out.dump()};
	}
	if (method == "GET" && path == "/openapi.yaml") {
		auto it = bundle_.emitted.find(std::string(kEffectiveSpecName));
		if (it == bundle_.emitted.end()) {
			return reply({404, "E_NOT_FOUND", "bundle carries no effective contract", {}, {}});
		}
		return {200, "application/yaml", it->second};
	}
	auto entry_it = by_path_.find(path);
	if (entry_it == by_path_.end()) {
		return reply({404, "E_NOT_FOUND", "no endpoint at " + std::string(path), {}, {}});
	}
	const ManifestEntry &entry = bundle_.manifest[entry_it->second];
	if (method != "POST") {
		return reply({405, "E_METHOD", std::string(method) + " not allowed; use POST", {}, {}});
	}

	auto parsed = parse_run_request(body);
	if (auto *f = std::get_if<HttpFailure>(&parsed)) {
		return reply(*f);
	}
	const std::string location = "paths." + entry.path + "." + entry.method + ".x-quantum";
	try {
		return {200, "application/json", result_to_wire(execute_endpoint(entry, std::get<RunRequest>(parsed), backends_))};
	} catch (const BackendError &e) {
		return reply({502, e.code(), e.what(), location, entry.backend});
	} catch (const Error &e) {
		return reply({502, e.code(), e.what(), location, entry.backend});
	}
}

void use_exclusive_port(httplib::Server &server) {
	server.set_socket_options([](socket_t sock) {
		int yes = 1;
		setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
	});
}

ServiceHandle::ServiceHandle(std::shared_ptr<const QuantumService> service, std::uint16_t port,
                             const ServeOptions &options)
	: service_(std::move(service)), server_(std::make_unique<httplib::Server>()), port_(port) {
	auto dispatch = [svc = service_](const httplib::Request &req, httplib::Response &res) {
		HttpReply r = svc->handle(req.method, req.path, req.body);
		res.status = r.status;
		res.set_content(r.body, r.content_type);
	};
	server_->Get(".*", dispatch);
	server_->Post(".*", dispatch);
	server_->Put(".*", dispatch);
	server_->Delete(".*", dispatch);
	use_exclusive_port(*server_);
	if (!server_->bind_to_port(options.bind_host, port)) {
		throw Error("E_PORT_IN_USE", "cannot listen on " + options.bind_host + ":" + std::to_string(port));
	}
	thread_ = std::thread([srv = server_.get()] { srv->listen_after_bind(); });
	server_->wait_until_ready();
}

ServiceHandle::~ServiceHandle() {
	stop();
}

void ServiceHandle::stop() {
	if (thread_.joinable()) {
		server_->stop();
		thread_.join();
	}
}

std::unique_ptr<ServiceHandle> serve_bundle(const ServiceBundle &bundle, std::uint16_t port, BackendMap backends,
                                            const ServeOptions &options) {
	auto service = std::make_shared<const QuantumService>(bundle, std::move(backends));
	return std::make_unique<ServiceHandle>(std::move(service), port, options);
}

} // namespace qsf
