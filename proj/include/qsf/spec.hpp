// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsf/circuit.hpp"
#include "qsf/diagnostic.hpp"
#include "qsf/fetch.hpp"

namespace qsf {

inline constexpr std::uint64_t kDefaultShots = 1024;
inline constexpr std::string_view kLocalSimulator = "local-simulator";

enum class CodeFormat { Qasm2, Qiskit };

std::string_view code_format_name(CodeFormat f) noexcept;

struct QuirkSource {
	std::string url;
	bool operator==(const QuirkSource &) const = default;
};

struct CodeSource {
	std::string url;
	CodeFormat format = CodeFormat::Qasm2;
	bool operator==(const CodeSource &) const = default;
};

struct InlineQasmSource {
	std::string text;
	bool operator==(const InlineQasmSource &) const = default;
};

using CircuitSource = std::variant<QuirkSource, CodeSource, InlineQasmSource>;

/// The `x-quantum` object on one operation.
struct QuantumBinding {
	CircuitSource source;
	std::uint64_t default_shots = kDefaultShots;
	std::string backend{kLocalSimulator};

	bool operator==(const QuantumBinding &) const = default;
};

struct EndpointDef {
	std::string path;
	std::string method = "post";
	std::string operation_id;
	QuantumBinding binding;

	bool operator==(const EndpointDef &) const = default;
};

struct ApiSpec {
	std::string openapi_version = "3.0.3";
	std::string title;
	std::string version;
	std::vector<EndpointDef> endpoints;
	std::optional<std::string> source_url;

	bool operator==(const ApiSpec &) const = default;
};

/// `paths.<path>.<method>.x-quantum`
std::string binding_location(const EndpointDef &e);

struct SpecParseResult {
	std::optional<ApiSpec> spec;          // set iff no error diagnostics
	std::vector<Diagnostic> diagnostics;  // all errors and warnings, document order
};

/// Total: never throws on any input text.
SpecParseResult parse_spec(std::string_view yaml_text, std::optional<std::string> source_url = std::nullopt);

/// Canonical YAML of the supported subset, with defaults spelled out and a
/// request/response schema for every operation. parse_spec inverts it.
std::string serialize_spec(const ApiSpec &spec);

/// Resolves and lowers one binding; relative URLs resolve against `base_url`.
/// Throws qsf::Error: E_FETCH when the source cannot be retrieved, otherwise
/// the ingestion error (E_BAD_JSON, E_UNSUPPORTED_GATE, E_QASM_SYNTAX, ...).
CircuitIR ingest_binding(const QuantumBinding &binding, const std::optional<std::string> &base_url,
                         const Fetcher &fetcher);

struct IngestedSpec {
	std::vector<std::optional<CircuitIR>> circuits; // parallel to spec.endpoints
	std::vector<Diagnostic> diagnostics;
};

IngestedSpec ingest_spec(const ApiSpec &spec, const Fetcher &fetcher);

/// Deep validation: duplicate endpoints plus full circuit ingestion.
/// An empty result means deploy-ready.
std::vector<Diagnostic> validate_spec(const ApiSpec &spec, const Fetcher &fetcher);

} // namespace qsf
