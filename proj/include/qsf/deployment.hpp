// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsf/diagnostic.hpp"

namespace qsf {

enum class DeploymentStatus { Deploying, Running, Failed, Stopped };

std::string_view status_name(DeploymentStatus s) noexcept;
DeploymentStatus status_from_name(std::string_view name);

/// Snapshot of one deployment. Never carries credentials.
struct DeploymentRecord {
	std::string id;
	std::string spec_url;
	std::string spec_fingerprint;
	std::optional<std::uint16_t> port;
	std::optional<std::string> base_url;
	DeploymentStatus status = DeploymentStatus::Deploying;
	std::string created_at; // ISO-8601 UTC, millisecond precision
	std::uint64_t sequence = 0;
	std::vector<std::string> endpoints;
	std::vector<Diagnostic> failure;

	bool operator==(const DeploymentRecord &) const = default;
};

nlohmann::json diagnostic_to_json(const Diagnostic &d);
Diagnostic diagnostic_from_json(const nlohmann::json &j);

nlohmann::json record_to_json(const DeploymentRecord &record);
/// Throws qsf::Error E_BAD_RECORD.
DeploymentRecord record_from_json(const nlohmann::json &j);

/// Append-only JSON-lines file `deployments.jsonl`: one full record snapshot
/// per line, the last line for an id wins. A torn final line is ignored.
class DeploymentLedger {
public:
	explicit DeploymentLedger(std::filesystem::path state_dir);

	void append(const DeploymentRecord &record);
	/// Latest snapshot per id, ordered by sequence.
	std::vector<DeploymentRecord> load() const;
	const std::filesystem::path &path() const noexcept { return path_; }

private:
	std::filesystem::path path_;
	mutable std::mutex mutex_;
};

} // namespace qsf
