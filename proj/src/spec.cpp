// SPDX-License-Identifier: Apache-2.0
#include "qsf/spec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>

#include <yaml-cpp/yaml.h>

#include "qsf/error.hpp"
#include "qsf/qasm.hpp"
#include "qsf/quirk.hpp"

namespace qsf {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array kHttpMethods{"get", "put", "post", "delete", "options", "head", "patch", "trace"};
constexpr std::array kSourceKeys{"quirk-url", "code-url", "inline-qasm"};
constexpr std::array kKnownQuantumKeys{"quirk-url", "code-url", "inline-qasm", "code-format", "default-shots",
                                       "backend"};

template <std::size_t N> bool one_of(std::string_view s, const std::array<const char *, N> &set) {
	return std::find(set.begin(), set.end(), s) != set.end();
}

std::optional<std::string> scalar(const YAML::Node &node) {
	if (!node.IsDefined() || !node.IsScalar()) {
		return std::nullopt;
	}
	return node.Scalar();
}

bool is_identifier(std::string_view s) {
	if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) {
		return false;
	}
	return std::all_of(s.begin(), s.end(),
	                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_backend_id(std::string_view s) {
	return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
		return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
	});
}

bool is_literal_path(std::string_view p) {
	if (p.empty() || p.front() != '/') {
		return false;
	}
	return std::all_of(p.begin(), p.end(), [](char c) {
		return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_' || c == '~' ||
		       c == '/';
	});
}

class DocumentParser {
public:
	DocumentParser(ApiSpec &spec, std::vector<Diagnostic> &diags) : spec_(spec), diags_(diags) {}

	void parse(const YAML::Node &root) {
		if (!root.IsMap()) {
			error(diag::kMissingSection, "", "document root must be a mapping with openapi, info and paths");
			return;
		}
		header(root);
		paths(root["paths"]);
	}

private:
	void error(std::string_view code, std::string loc, std::string msg) {
		diags_.push_back(make_error(code, std::move(loc), std::move(msg)));
	}

	void header(const YAML::Node &root) {
		if (auto v = scalar(root["openapi"])) {
			if (v->rfind("3.", 0) != 0) {
				error(diag::kMissingSection, "openapi", "unsupported OpenAPI version '" + *v + "' (need 3.x)");
			}
			spec_.openapi_version = *v;
		} else {
			error(diag::kMissingSection, "openapi", "missing 'openapi' version field");
		}

		const YAML::Node info = root["info"];
		if (!info.IsDefined() || !info.IsMap()) {
			error(diag::kMissingSection, "info", "missing 'info' object");
		} else {
			auto title = scalar(info["title"]);
			auto version = scalar(info["version"]);
			if (!title) {
				error(diag::kMissingSection, "info.title", "missing 'info.title'");
			}
			if (!version) {
				error(diag::kMissingSection, "info.version", "missing 'info.version'");
			}
			spec_.title = title.value_or("");
			spec_.version = version.value_or("");
		}

		if (auto src = scalar(root["x-source-url"]); src && !spec_.source_url) {
			spec_.source_url = *src;
		}
	}

	void paths(const YAML::Node &node) {
		if (!node.IsDefined() || !node.IsMap() || node.size() == 0) {
			error(diag::kMissingSection, "paths", "missing or empty 'paths' object");
			return;
		}
		for (const auto &entry : node) {
			const std::string path = scalar(entry.first).value_or("");
			const std::string loc = "paths." + path;
			if (path.find_first_of("{}") != std::string::npos) {
				error(diag::kUnsupportedMethod, loc, "path templating is not supported; use a literal path");
				continue;
			}
			if (!is_literal_path(path)) {
				error(diag::kMalformedPath, loc,
				      "path must start with '/' and contain only unreserved URL characters");
				continue;
			}
			if (!entry.second.IsMap()) {
				error(diag::kMissingSection, loc, "path item must be a mapping");
				continue;
			}
			for (const auto &op : entry.second) {
				const std::string method = scalar(op.first).value_or("");
				if (!one_of(method, kHttpMethods)) {
					continue;
				}
				if (method != "post") {
					error(diag::kUnsupportedMethod, loc + "." + method,
					      "HTTP method '" + method + "' is not supported; quantum endpoints use post");
					continue;
				}
				operation(path, op.second, loc + ".post");
			}
		}
	}

	void operation(const std::string &path, const YAML::Node &node, const std::string &loc) {
		if (!node.IsMap()) {
			error(diag::kMissingSection, loc, "operation must be a mapping");
			return;
		}
		EndpointDef endpoint;
		endpoint.path = path;
		bool ok = true;

		if (auto id = scalar(node["operationId"]); id && is_identifier(*id)) {
			if (!operation_ids_.insert(*id).second) {
				error(diag::kOperationId, loc + ".operationId", "duplicate operationId '" + *id + "'");
				ok = false;
			}
			endpoint.operation_id = *id;
		} else {
			error(diag::kOperationId, loc + ".operationId",
			      id ? "operationId '" + *id + "' is not an identifier" : "missing operationId");
			ok = false;
		}

		const YAML::Node quantum = node["x-quantum"];
		if (!quantum.IsDefined()) {
			error(diag::kMissingQuantum, loc, "operation has no x-quantum binding");
			return;
		}
		if (auto binding = parse_binding(quantum, loc + ".x-quantum"); binding && ok) {
			endpoint.binding = std::move(*binding);
			spec_.endpoints.push_back(std::move(endpoint));
		}
	}

	std::optional<QuantumBinding> parse_binding(const YAML::Node &node, const std::string &loc) {
		if (!node.IsMap()) {
			error(diag::kSourceCount, loc, "x-quantum must be a mapping with exactly one circuit source");
			return std::nullopt;
		}
		bool ok = true;
		QuantumBinding binding;

		for (const auto &entry : node) {
			const std::string key = scalar(entry.first).value_or("");
			if (!one_of(key, kKnownQuantumKeys)) {
				diags_.push_back(make_warning(diag::kUnknownKey, loc + "." + key, "unknown x-quantum key ignored"));
			}
		}

		std::vector<std::string> present;
		for (const char *key : kSourceKeys) {
			if (node[key].IsDefined()) {
				present.emplace_back(key);
			}
		}
		if (present.size() != 1) {
			std::string msg = "expected exactly one of quirk-url, code-url, inline-qasm; found ";
			msg += present.empty() ? "none" : std::to_string(present.size());
			error(diag::kSourceCount, loc, msg);
			ok = false;
		} else {
			const std::string &key = present.front();
			auto value = scalar(node[key]);
			if (!value || value->empty()) {
				error(diag::kSourceCount, loc + "." + key, key + " must be a non-empty string");
				ok = false;
			} else if (key == "quirk-url") {
				binding.source = QuirkSource{*value};
			} else if (key == "inline-qasm") {
				binding.source = InlineQasmSource{*value};
			} else {
				CodeSource code{*value, CodeFormat::Qasm2};
				if (node["code-format"].IsDefined()) {
					auto fmt = scalar(node["code-format"]);
					if (fmt == "qasm2") {
						code.format = CodeFormat::Qasm2;
					} else if (fmt == "qiskit") {
						code.format = CodeFormat::Qiskit;
					} else {
						error(diag::kInvalidValue, loc + ".code-format", "code-format must be qasm2 or qiskit");
						ok = false;
					}
				}
				binding.source = code;
			}
		}

		if (const YAML::Node shots = node["default-shots"]; shots.IsDefined()) {
			std::uint64_t value = 0;
			const auto text = scalar(shots);
			bool valid = text && shots.Tag() == "?";
			if (valid) {
				auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
				valid = ec == std::errc{} && ptr == text->data() + text->size();
			}
			if (!valid || value < 1 || value > 1'000'000) {
				error(diag::kInvalidShots, loc + ".default-shots",
				      "default-shots must be an integer in [1, 1000000]" + (text ? ", got '" + *text + "'" : ""));
				ok = false;
			}
			binding.default_shots = value;
		}

		if (const YAML::Node backend = node["backend"]; backend.IsDefined()) {
			auto id = scalar(backend);
			if (!id || !is_backend_id(*id)) {
				error(diag::kInvalidValue, loc + ".backend", "backend must be an identifier such as local-simulator");
				ok = false;
			} else {
				binding.backend = *id;
			}
		}
		return ok ? std::optional(std::move(binding)) : std::nullopt;
	}

	ApiSpec &spec_;
	std::vector<Diagnostic> &diags_;
	std::set<std::string> operation_ids_;
};

void emit_operation_schema(YAML::Emitter &out) {
	out << YAML::Key << "requestBody" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "required" << YAML::Value << false;
	out << YAML::Key << "content" << YAML::Value << YAML::BeginMap << YAML::Key << "application/json" << YAML::Value
	    << YAML::BeginMap << YAML::Key << "schema" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "type" << YAML::Value << "object";
	out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "shots" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value
	    << "integer" << YAML::Key << "minimum" << YAML::Value << 1 << YAML::Key << "maximum" << YAML::Value << 1000000
	    << YAML::EndMap;
	out << YAML::Key << "seed" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value
	    << "integer" << YAML::Key << "minimum" << YAML::Value << 0 << YAML::EndMap;
	out << YAML::EndMap << YAML::EndMap << YAML::EndMap << YAML::EndMap << YAML::EndMap;

	out << YAML::Key << "responses" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << YAML::DoubleQuoted << "200" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "description" << YAML::Value << "Measurement counts";
	out << YAML::Key << "content" << YAML::Value << YAML::BeginMap << YAML::Key << "application/json" << YAML::Value
	    << YAML::BeginMap << YAML::Key << "schema" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "type" << YAML::Value << "object";
	out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "counts" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value
	    << "object" << YAML::Key << "additionalProperties" << YAML::Value << YAML::BeginMap << YAML::Key << "type"
	    << YAML::Value << "integer" << YAML::EndMap << YAML::EndMap;
	for (const char *field : {"shots", "seed"}) {
		out << YAML::Key << field << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value
		    << "integer" << YAML::EndMap;
	}
	out << YAML::Key << "backend" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "type"
	    << YAML::Value << "string" << YAML::EndMap;
	out << YAML::EndMap << YAML::EndMap << YAML::EndMap << YAML::EndMap << YAML::EndMap;
	out << YAML::Key << YAML::DoubleQuoted << "400" << YAML::Value << YAML::BeginMap << YAML::Key << "description" << YAML::Value
	    << "Invalid request" << YAML::EndMap;
	out << YAML::Key << YAML::DoubleQuoted << "502" << YAML::Value << YAML::BeginMap << YAML::Key << "description" << YAML::Value
	    << "Backend failure" << YAML::EndMap;
	out << YAML::EndMap;
}

std::string trim(std::string_view s) {
	const auto b = s.find_first_not_of(" \t\r\n");
	if (b == std::string_view::npos) {
		return {};
	}
	const auto e = s.find_last_not_of(" \t\r\n");
	return std::string(s.substr(b, e - b + 1));
}

CircuitIR fetch_and_parse(const Fetcher &fetcher, const std::string &url, auto &&parse) {
	FetchResult res = fetcher.fetch(url);
	if (!res.ok) {
		throw Error("E_FETCH", res.error);
	}
	return parse(res.body);
}

} // namespace

std::string_view code_format_name(CodeFormat f) noexcept {
	return f == CodeFormat::Qasm2 ? "qasm2" : "qiskit";
}

std::string binding_location(const EndpointDef &e) {
	return "paths." + e.path + "." + e.method + ".x-quantum";
}

SpecParseResult parse_spec(std::string_view yaml_text, std::optional<std::string> source_url) {
	SpecParseResult out;
	ApiSpec spec;
	spec.source_url = std::move(source_url);
	try {
		const YAML::Node root = YAML::Load(std::string(yaml_text));
		DocumentParser(spec, out.diagnostics).parse(root);
	} catch (const YAML::Exception &e) {
		out.diagnostics.push_back(make_error(diag::kInvalidYaml, "", std::string("not valid YAML: ") + e.what()));
	} catch (const std::exception &e) {
		out.diagnostics.push_back(make_error(diag::kInvalidYaml, "", std::string("unreadable document: ") + e.what()));
	}
	if (!has_errors(out.diagnostics)) {
		out.spec = std::move(spec);
	}
	return out;
}

std::string serialize_spec(const ApiSpec &spec) {
	YAML::Emitter out;
	out << YAML::BeginMap;
	out << YAML::Key << "openapi" << YAML::Value << YAML::DoubleQuoted << spec.openapi_version;
	out << YAML::Key << "info" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "title" << YAML::Value << YAML::DoubleQuoted << spec.title;
	out << YAML::Key << "version" << YAML::Value << YAML::DoubleQuoted << spec.version;
	out << YAML::EndMap;
	if (spec.source_url) {
		out << YAML::Key << "x-source-url" << YAML::Value << YAML::DoubleQuoted << *spec.source_url;
	}
	out << YAML::Key << "paths" << YAML::Value << YAML::BeginMap;
	for (const auto &e : spec.endpoints) {
		out << YAML::Key << e.path << YAML::Value << YAML::BeginMap;
		out << YAML::Key << e.method << YAML::Value << YAML::BeginMap;
		out << YAML::Key << "operationId" << YAML::Value << e.operation_id;
		out << YAML::Key << "x-quantum" << YAML::Value << YAML::BeginMap;
		std::visit(overloaded{
		               [&](const QuirkSource &s) {
			               out << YAML::Key << "quirk-url" << YAML::Value << YAML::DoubleQuoted << s.url;
		               },
		               [&](const CodeSource &s) {
			               out << YAML::Key << "code-url" << YAML::Value << YAML::DoubleQuoted << s.url;
			               out << YAML::Key << "code-format" << YAML::Value << std::string(code_format_name(s.format));
		               },
		               [&](const InlineQasmSource &s) {
			               out << YAML::Key << "inline-qasm" << YAML::Value << YAML::DoubleQuoted << s.text;
		               },
		           },
		           e.binding.source);
		out << YAML::Key << "default-shots" << YAML::Value << e.binding.default_shots;
		out << YAML::Key << "backend" << YAML::Value << YAML::DoubleQuoted << e.binding.backend;
		out << YAML::EndMap;
		emit_operation_schema(out);
		out << YAML::EndMap << YAML::EndMap;
	}
	out << YAML::EndMap << YAML::EndMap;
	return std::string(out.c_str()) + "\n";
}

CircuitIR ingest_binding(const QuantumBinding &binding, const std::optional<std::string> &base_url,
                         const Fetcher &fetcher) {
	const std::string base = base_url.value_or("");
	CircuitIR circuit = std::visit(
	    overloaded{
	        [&](const QuirkSource &s) {
		        const std::string url = resolve_url(base, s.url);
		        if (url.find("#circuit=") != std::string::npos) {
			        return lower_quirk(parse_quirk_url(url));
		        }
		        return fetch_and_parse(fetcher, url, [](const std::string &body) {
			        const std::string text = trim(body);
			        return lower_quirk(text.starts_with('{') ? parse_quirk_json(text) : parse_quirk_url(text));
		        });
	        },
	        [&](const CodeSource &s) {
		        return fetch_and_parse(fetcher, resolve_url(base, s.url), [&](const std::string &body) {
			        if (s.format == CodeFormat::Qiskit) {
				        throw Error("E_QASM_UNSUPPORTED", "Qiskit Python source cannot be ingested; export the "
				                                          "circuit as OpenQASM 2.0 and set code-format: qasm2");
			        }
			        return parse_qasm(body);
		        });
	        },
	        [](const InlineQasmSource &s) { return parse_qasm(s.text); },
	    },
	    binding.source);
	if (circuit.num_qubits > kMaxSimulatedQubits) {
		throw Error("E_TOO_LARGE", std::to_string(circuit.num_qubits) + " qubits exceeds the limit of " +
		                               std::to_string(kMaxSimulatedQubits));
	}
	validate_circuit(circuit);
	return circuit;
}

IngestedSpec ingest_spec(const ApiSpec &spec, const Fetcher &fetcher) {
	IngestedSpec out;
	std::set<std::pair<std::string, std::string>> seen;
	for (const auto &e : spec.endpoints) {
		const std::string loc = binding_location(e);
		if (!seen.emplace(e.path, e.method).second) {
			out.diagnostics.push_back(make_error(diag::kDuplicateEndpoint, "paths." + e.path + "." + e.method,
			                                     "duplicate endpoint " + e.method + " " + e.path));
		}
		try {
			out.circuits.emplace_back(ingest_binding(e.binding, spec.source_url, fetcher));
		} catch (const Error &err) {
			const auto code = err.code() == "E_FETCH" ? diag::kUnreachable : diag::kIngestion;
			out.diagnostics.push_back(make_error(code, loc, err.code() + ": " + err.what()));
			out.circuits.emplace_back(std::nullopt);
		} catch (const std::exception &err) {
			out.diagnostics.push_back(make_error(diag::kIngestion, loc, err.what()));
			out.circuits.emplace_back(std::nullopt);
		}
	}
	return out;
}

std::vector<Diagnostic> validate_spec(const ApiSpec &spec, const Fetcher &fetcher) {
	return ingest_spec(spec, fetcher).diagnostics;
}

} // namespace qsf
