// SPDX-License-Identifier: Apache-2.0
#include "qsf/deployer.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <random>
#include <sstream>

#include <httplib.h>

#include "qsf/codegen.hpp"
#include "qsf/error.hpp"

namespace qsf {

using nlohmann::json;

namespace {

std::string utc_now() {
	const auto now = std::chrono::system_clock::now();
	const std::time_t secs = std::chrono::system_clock::to_time_t(now);
	const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
	std::tm tm{};
	::gmtime_r(&secs, &tm);
	std::ostringstream out;
	out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
	return out.str();
}

std::string new_id() {
	std::random_device rd;
	std::ostringstream out;
	out << "dep-" << std::hex << std::setfill('0') << std::setw(8) << rd() << std::setw(4) << (rd() & 0xffffU);
	return out.str();
}

} // namespace

std::optional<std::string> credential_shape_error(const Credentials &credentials) {
	for (const auto &[id, secret] : credentials) {
		if (id.empty()) {
			return "credential provider id must not be empty";
		}
		if (secret.empty()) {
			return "credential for '" + id + "' is empty";
		}
	}
	return std::nullopt;
}

int deploy_error_status(const std::string &code) {
	if (code == "E_BAD_CREDENTIALS") return 400;
	if (code == "E_INVALID_SPEC") return 422;
	if (code == "E_FETCH") return 502;
	if (code == "E_NO_PORTS") return 503;
	return 500;
}

Deployer::Deployer(DeployerConfig config, std::shared_ptr<const Fetcher> fetcher,
                   std::shared_ptr<InstanceSupervisor> supervisor)
	: config_(std::move(config)), fetcher_(std::move(fetcher)), supervisor_(std::move(supervisor)),
	  ports_(config_.ports, config_.probe_os_ports
	                            ? PortRegistry::Probe([host = config_.probe_host](std::uint16_t p) {
		                              return os_port_available(host, p);
	                              })
	                            : PortRegistry::Probe{}) {
	if (!config_.state_dir) {
		return;
	}
	ledger_.emplace(*config_.state_dir);
	// Instances of a previous process are gone; never adopted.
	for (DeploymentRecord r : ledger_->load()) {
		if (r.status == DeploymentStatus::Running || r.status == DeploymentStatus::Deploying) {
			r.status = DeploymentStatus::Stopped;
			ledger_->append(r);
		}
		next_sequence_ = std::max(next_sequence_, r.sequence + 1);
		records_[r.id] = std::move(r);
	}
}

Deployer::~Deployer() {
	shutdown();
}

void Deployer::shutdown() {
	std::lock_guard lock(mutex_);
	for (auto &[id, instance] : instances_) {
		instance->stop();
		DeploymentRecord &r = records_.at(id);
		if (r.port) {
			ports_.release(*r.port);
		}
		r.status = DeploymentStatus::Stopped;
		if (ledger_) {
			ledger_->append(r);
		}
	}
	instances_.clear();
}

DeploymentRecord Deployer::commit(DeploymentRecord record) {
	std::lock_guard lock(mutex_);
	records_[record.id] = record;
	if (ledger_) {
		ledger_->append(record);
	}
	return record;
}

DeployOutcome Deployer::fail(DeploymentRecord record, std::string code, std::string message,
                             std::vector<Diagnostic> diagnostics) {
	record.status = DeploymentStatus::Failed;
	record.port.reset();
	record.base_url.reset();
	if (diagnostics.empty()) {
		diagnostics.push_back(make_error(code, "", message));
	}
	record.failure = std::move(diagnostics);
	return {commit(std::move(record)), std::move(code), std::move(message)};
}

DeployOutcome Deployer::deploy(const std::string &spec_url, const Credentials &credentials) {
	DeploymentRecord record;
	record.id = new_id();
	record.spec_url = spec_url;
	record.created_at = utc_now();
	{
		std::lock_guard lock(mutex_);
		record.sequence = next_sequence_++;
	}
	commit(record);

	if (auto err = credential_shape_error(credentials)) {
		return fail(std::move(record), "E_BAD_CREDENTIALS", *err, {});
	}

	FetchResult fetched = fetcher_->fetch(spec_url);
	if (!fetched.ok) {
		return fail(std::move(record), "E_FETCH", fetched.error, {});
	}
	record.spec_fingerprint = sha256_hex(fetched.body);

	BundleResult generated = generate_bundle_from_text(fetched.body, spec_url, *fetcher_);
	if (!generated.bundle) {
		return fail(std::move(record), "E_INVALID_SPEC", "specification failed validation",
		            std::move(generated.diagnostics));
	}
	const ServiceBundle &bundle = *generated.bundle;

	const auto port = ports_.reserve();
	if (!port) {
		return fail(std::move(record), "E_NO_PORTS",
		            "no free port in " + std::to_string(config_.ports.first) + "-" +
		                std::to_string(config_.ports.last),
		            {});
	}

	std::unique_ptr<Instance> instance;
	try {
		instance = supervisor_->launch(record.id, bundle, *port, credentials);
	} catch (const std::exception &e) {
		ports_.release(*port);
		return fail(std::move(record), "E_LAUNCH", e.what(), {});
	}

	record.status = DeploymentStatus::Running;
	record.port = *port;
	record.base_url = "http://" + config_.advertise_host + ":" + std::to_string(*port);
	for (const auto &e : bundle.manifest) {
		record.endpoints.push_back(e.path);
	}
	std::lock_guard lock(mutex_);
	instances_[record.id] = std::move(instance);
	records_[record.id] = record;
	if (ledger_) {
		ledger_->append(record);
	}
	return {record, std::nullopt, {}};
}

DeploymentRecord Deployer::teardown(const std::string &id) {
	std::lock_guard lock(mutex_);
	auto it = records_.find(id);
	if (it == records_.end()) {
		throw Error("E_NOT_FOUND", "no deployment '" + id + "'");
	}
	DeploymentRecord &r = it->second;
	if (r.status != DeploymentStatus::Running) {
		return r;
	}
	if (auto inst = instances_.find(id); inst != instances_.end()) {
		inst->second->stop();
		instances_.erase(inst);
	}
	if (r.port) {
		ports_.release(*r.port);
	}
	r.status = DeploymentStatus::Stopped;
	if (ledger_) {
		ledger_->append(r);
	}
	return r;
}

std::vector<DeploymentRecord> Deployer::list() const {
	std::lock_guard lock(mutex_);
	std::vector<DeploymentRecord> out;
	for (const auto &[id, r] : records_) {
		out.push_back(r);
	}
	std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
		return std::tie(a.created_at, a.sequence) < std::tie(b.created_at, b.sequence);
	});
	return out;
}

DeploymentRecord Deployer::get(const std::string &id) const {
	std::lock_guard lock(mutex_);
	auto it = records_.find(id);
	if (it == records_.end()) {
		throw Error("E_NOT_FOUND", "no deployment '" + id + "'");
	}
	return it->second;
}

namespace {

void send_json(httplib::Response &res, int status, const json &body) {
	res.status = status;
	res.set_content(body.dump(), "application/json");
}

json error_body(const std::string &code, const std::string &message) {
	return {{"code", code}, {"message", message}};
}

} // namespace

DeployerServer::DeployerServer(std::shared_ptr<Deployer> deployer, std::uint16_t port, const std::string &bind_host)
	: deployer_(std::move(deployer)), server_(std::make_unique<httplib::Server>()) {
	auto &srv = *server_;
	Deployer &d = *deployer_;
	use_exclusive_port(srv);

	srv.Get("/health", [&d](const httplib::Request &, httplib::Response &res) {
		std::size_t running = 0;
		for (const auto &r : d.list()) {
			running += r.status == DeploymentStatus::Running;
		}
		send_json(res, 200, {{"status", "ok"}, {"running", running}});
	});

	srv.Post("/deployments", [&d](const httplib::Request &req, httplib::Response &res) {
		const json body = json::parse(req.body, nullptr, false);
		if (body.is_discarded() || !body.is_object() || !body.contains("spec_url") || !body["spec_url"].is_string()) {
			send_json(res, 400, error_body("E_BAD_REQUEST", "body must be {\"spec_url\": \"...\", \"credentials\": {}}"));
			return;
		}
		Credentials creds;
		if (body.contains("credentials") && !body["credentials"].is_null()) {
			const json &c = body["credentials"];
			if (!c.is_object()) {
				send_json(res, 400, error_body("E_BAD_CREDENTIALS", "credentials must be an object of strings"));
				return;
			}
			for (const auto &[k, v] : c.items()) {
				if (!v.is_string()) {
					send_json(res, 400, error_body("E_BAD_CREDENTIALS", "credential '" + k + "' must be a string"));
					return;
				}
				creds[k] = v.get<std::string>();
			}
		}
		DeployOutcome outcome = d.deploy(body["spec_url"].get<std::string>(), creds);
		json out = record_to_json(outcome.record);
		if (outcome.ok()) {
			send_json(res, 201, out);
		} else {
			out["error"] = error_body(*outcome.error, outcome.message);
			send_json(res, deploy_error_status(*outcome.error), out);
		}
	});

	srv.Get("/deployments", [&d](const httplib::Request &, httplib::Response &res) {
		json out = json::array();
		for (const auto &r : d.list()) {
			out.push_back(record_to_json(r));
		}
		send_json(res, 200, out);
	});

	srv.Get(R"(/deployments/([A-Za-z0-9_-]+))", [&d](const httplib::Request &req, httplib::Response &res) {
		try {
			send_json(res, 200, record_to_json(d.get(req.matches[1])));
		} catch (const Error &e) {
			send_json(res, 404, error_body(e.code(), e.what()));
		}
	});

	srv.Delete(R"(/deployments/([A-Za-z0-9_-]+))", [&d](const httplib::Request &req, httplib::Response &res) {
		try {
			send_json(res, 200, record_to_json(d.teardown(req.matches[1])));
		} catch (const Error &e) {
			send_json(res, 404, error_body(e.code(), e.what()));
		}
	});

	if (!srv.bind_to_port(bind_host, port)) {
		throw Error("E_PORT_IN_USE", "cannot listen on " + bind_host + ":" + std::to_string(port));
	}
	thread_ = std::thread([s = server_.get()] { s->listen_after_bind(); });
	server_->wait_until_ready();
}

DeployerServer::~DeployerServer() {
	stop();
}

void DeployerServer::stop() {
	if (thread_.joinable()) {
		server_->stop();
		thread_.join();
	}
}

} // namespace qsf
