// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsf/circuit.hpp"
#include "qsf/diagnostic.hpp"
#include "qsf/fetch.hpp"
#include "qsf/spec.hpp"

namespace qsf {

inline constexpr std::string_view kGeneratorVersion = "qsf-codegen 0.1.0";
inline constexpr std::string_view kEffectiveSpecName = "openapi.effective.yaml";

/// OpenQASM 2.0 text; parse_qasm inverts it exactly. Byte-deterministic.
/// Throws qsf::Error E_UNREPRESENTABLE for negative controls, controls on
/// anything but X, or more than two controls.
std::string emit_qasm(const CircuitIR &circuit);

struct QiskitHeader {
	std::string spec_fingerprint;
	std::string generator_version{kGeneratorVersion};
	std::uint64_t default_shots = kDefaultShots;
};

/// Qiskit-flavoured Python text defining `<operation_id>(shots)`. Emitted
/// artifact only. Same E_UNREPRESENTABLE cases as emit_qasm.
std::string emit_qiskit(const CircuitIR &circuit, std::string_view operation_id, const QiskitHeader &header = {});

struct ManifestEntry {
	std::string path;
	std::string method;
	std::string operation_id;
	CircuitIR circuit;
	std::uint64_t default_shots = kDefaultShots;
	std::string backend;

	bool operator==(const ManifestEntry &) const = default;
};

struct ServiceBundle {
	std::string title;
	std::string version;
	std::vector<ManifestEntry> manifest;
	std::map<std::string, std::string> emitted; // artifact name -> text
	std::string spec_fingerprint;               // sha256 hex of the raw YAML

	bool operator==(const ServiceBundle &) const = default;
};

std::string qasm_artifact_name(std::string_view operation_id);
std::string qiskit_artifact_name(std::string_view operation_id);

std::string sha256_hex(std::string_view bytes);

struct BundleResult {
	std::optional<ServiceBundle> bundle;
	std::vector<Diagnostic> diagnostics;
};

/// Validates, ingests every binding and emits artifacts. All-or-nothing:
/// either a complete bundle or diagnostics. `raw_yaml` feeds the fingerprint.
BundleResult generate_bundle(const ApiSpec &spec, std::string_view raw_yaml, const Fetcher &fetcher);

/// Parses `raw_yaml` first, then generate_bundle.
BundleResult generate_bundle_from_text(std::string_view raw_yaml, std::optional<std::string> source_url,
                                       const Fetcher &fetcher);

} // namespace qsf
