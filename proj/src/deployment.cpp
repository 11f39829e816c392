// SPDX-License-Identifier: Apache-2.0
#include "qsf/deployment.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "qsf/error.hpp"

namespace qsf {

using nlohmann::json;

std::string_view status_name(DeploymentStatus s) noexcept {
	switch (s) {
	case DeploymentStatus::Deploying: return "deploying";
	case DeploymentStatus::Running: return "running";
	case DeploymentStatus::Failed: return "failed";
	case DeploymentStatus::Stopped: return "stopped";
	}
	return "?";
}

DeploymentStatus status_from_name(std::string_view name) {
	for (auto s : {DeploymentStatus::Deploying, DeploymentStatus::Running, DeploymentStatus::Failed,
	               DeploymentStatus::Stopped}) {
		if (status_name(s) == name) {
			return s;
		}
	}
	throw Error("E_BAD_RECORD", "unknown status '" + std::string(name) + "'");
}

json diagnostic_to_json(const Diagnostic &d) {
	json j;
	j["code"] = d.code;
	j["severity"] = severity_name(d.severity);
	j["message"] = d.message;
	j["location"] = d.location;
	return j;
}

Diagnostic diagnostic_from_json(const json &j) {
	return {j.at("code").get<std::string>(),
	        j.at("severity").get<std::string>() == "warning" ? Severity::Warning : Severity::Error,
	        j.at("message").get<std::string>(), j.value("location", std::string{})};
}

json record_to_json(const DeploymentRecord &r) {
	json j;
	j["id"] = r.id;
	j["spec_url"] = r.spec_url;
	j["spec_fingerprint"] = r.spec_fingerprint;
	j["port"] = r.port ? json(*r.port) : json(nullptr);
	j["base_url"] = r.base_url ? json(*r.base_url) : json(nullptr);
	j["status"] = status_name(r.status);
	j["created_at"] = r.created_at;
	j["sequence"] = r.sequence;
	j["endpoints"] = r.endpoints;
	json failure = json::array();
	for (const auto &d : r.failure) {
		failure.push_back(diagnostic_to_json(d));
	}
	j["failure"] = std::move(failure);
	return j;
}

DeploymentRecord record_from_json(const json &j) {
	try {
		DeploymentRecord r;
		r.id = j.at("id").get<std::string>();
		r.spec_url = j.at("spec_url").get<std::string>();
		r.spec_fingerprint = j.at("spec_fingerprint").get<std::string>();
		if (!j.at("port").is_null()) {
			r.port = j.at("port").get<std::uint16_t>();
		}
		if (!j.at("base_url").is_null()) {
			r.base_url = j.at("base_url").get<std::string>();
		}
		r.status = status_from_name(j.at("status").get<std::string>());
		r.created_at = j.at("created_at").get<std::string>();
		r.sequence = j.at("sequence").get<std::uint64_t>();
		r.endpoints = j.at("endpoints").get<std::vector<std::string>>();
		for (const auto &d : j.at("failure")) {
			r.failure.push_back(diagnostic_from_json(d));
		}
		return r;
	} catch (const json::exception &e) {
		throw Error("E_BAD_RECORD", e.what());
	}
}

DeploymentLedger::DeploymentLedger(std::filesystem::path state_dir) {
	std::filesystem::create_directories(state_dir);
	path_ = std::move(state_dir) / "deployments.jsonl";
}

void DeploymentLedger::append(const DeploymentRecord &record) {
	std::lock_guard lock(mutex_);
	std::ofstream out(path_, std::ios::app | std::ios::binary);
	out << record_to_json(record).dump() << '\n';
	out.flush();
	if (!out) {
		throw Error("E_IO", "cannot append to " + path_.string());
	}
}

std::vector<DeploymentRecord> DeploymentLedger::load() const {
	std::lock_guard lock(mutex_);
	std::map<std::string, DeploymentRecord> latest;
	std::ifstream in(path_, std::ios::binary);
	for (std::string line; std::getline(in, line);) {
		if (line.empty()) {
			continue;
		}
		const json j = json::parse(line, nullptr, false);
		if (j.is_discarded()) {
			continue;
		}
		try {
			DeploymentRecord r = record_from_json(j);
			latest[r.id] = std::move(r);
		} catch (const Error &) {
			continue;
		}
	}
	std::vector<DeploymentRecord> out;
	for (auto &[id, r] : latest) {
		out.push_back(std::move(r));
	}
	std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.sequence < b.sequence; });
	return out;
}

} // namespace qsf
