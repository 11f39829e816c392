// SPDX-License-Identifier: Apache-2.0
#include "qsf/bundle_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "qsf/error.hpp"

namespace qsf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<Qubit> qubit_list(const json &j, const char *field) {
	if (!j.contains(field)) {
		return {};
	}
	return j.at(field).get<std::vector<Qubit>>();
}

bool keep(const std::string &name, EmitFilter filter) {
	switch (filter) {
	case EmitFilter::Bundle: return true;
	case EmitFilter::Qasm: return name.ends_with(".qasm");
	case EmitFilter::Qiskit: return name.ends_with("_qiskit.py.txt");
	}
	return false;
}

void write_file(const fs::path &path, std::string_view text) {
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	out.write(text.data(), static_cast<std::streamsize>(text.size()));
	if (!out) {
		throw Error("E_IO", "cannot write " + path.string());
	}
}

std::string read_file(const fs::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error("E_IO", "cannot read " + path.string());
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

ManifestEntry entry_from_json(const json &j) {
	return {j.at("path").get<std::string>(),         j.at("method").get<std::string>(),
	        j.at("operation_id").get<std::string>(), circuit_from_json(j.at("circuit")),
	        j.at("default_shots").get<std::uint64_t>(), j.at("backend").get<std::string>()};
}

} // namespace

json circuit_to_json(const CircuitIR &circuit) {
	json ops = json::array();
	for (const auto &op : circuit.ops) {
		json o = {{"gate", gate_name(op.kind)}, {"targets", op.targets}};
		if (!op.pos_controls.empty()) {
			o["controls"] = op.pos_controls;
		}
		if (!op.neg_controls.empty()) {
			o["neg_controls"] = op.neg_controls;
		}
		ops.push_back(std::move(o));
	}
	return {{"num_qubits", circuit.num_qubits},
	        {"ops", std::move(ops)},
	        {"measured", std::vector<Qubit>(circuit.measured.begin(), circuit.measured.end())}};
}

CircuitIR circuit_from_json(const json &j) {
	try {
		CircuitIR circuit;
		circuit.num_qubits = j.at("num_qubits").get<Qubit>();
		for (const auto &o : j.at("ops")) {
			circuit.ops.push_back(make_gate(gate_from_name(o.at("gate").get<std::string>()), qubit_list(o, "targets"),
			                                qubit_list(o, "controls"), qubit_list(o, "neg_controls")));
		}
		for (Qubit q : qubit_list(j, "measured")) {
			circuit.measured.insert(q);
		}
		validate_circuit(circuit);
		return circuit;
	} catch (const json::exception &e) {
		throw Error("E_BAD_BUNDLE", std::string("malformed circuit: ") + e.what());
	} catch (const Error &e) {
		throw Error("E_BAD_BUNDLE", std::string("invalid circuit: ") + e.what());
	}
}

namespace {

/// Plain file names only: no separators, no leading dot.
void check_artifact_name(const std::string &name) {
	const bool ok = !name.empty() && name.front() != '.' && std::all_of(name.begin(), name.end(), [](char c) {
		return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
	});
	if (!ok) {
		throw Error("E_BAD_BUNDLE", "artifact name '" + name + "' is not a plain file name");
	}
}

} // namespace

std::vector<std::string> filtered_artifacts(const ServiceBundle &bundle, EmitFilter filter) {
	std::vector<std::string> names;
	for (const auto &[name, text] : bundle.emitted) {
		if (keep(name, filter)) {
			names.push_back(name);
		}
	}
	return names;
}

json manifest_to_json(const ServiceBundle &bundle, EmitFilter filter) {
	json endpoints = json::array();
	for (const auto &e : bundle.manifest) {
		endpoints.push_back({{"path", e.path},
		                     {"method", e.method},
		                     {"operation_id", e.operation_id},
		                     {"circuit", circuit_to_json(e.circuit)},
		                     {"default_shots", e.default_shots},
		                     {"backend", e.backend}});
	}
	return {{"format", kBundleFormat},
	        {"generator", kGeneratorVersion},
	        {"title", bundle.title},
	        {"version", bundle.version},
	        {"spec_fingerprint", bundle.spec_fingerprint},
	        {"endpoints", std::move(endpoints)},
	        {"artifacts", filtered_artifacts(bundle, filter)}};
}

json bundle_to_json(const ServiceBundle &bundle) {
	return {{"manifest", manifest_to_json(bundle)}, {"artifacts", bundle.emitted}};
}

ServiceBundle bundle_from_json(const json &j) {
	try {
		const json &m = j.at("manifest");
		if (m.at("format").get<std::string>() != kBundleFormat) {
			throw Error("E_BAD_BUNDLE", "unsupported bundle format " + m.at("format").dump());
		}
		ServiceBundle bundle;
		bundle.title = m.at("title").get<std::string>();
		bundle.version = m.at("version").get<std::string>();
		bundle.spec_fingerprint = m.at("spec_fingerprint").get<std::string>();
		for (const auto &e : m.at("endpoints")) {
			bundle.manifest.push_back(entry_from_json(e));
		}
		bundle.emitted = j.at("artifacts").get<std::map<std::string, std::string>>();
		for (const auto &[name, text] : bundle.emitted) {
			check_artifact_name(name);
		}
		return bundle;
	} catch (const json::exception &e) {
		throw Error("E_BAD_BUNDLE", std::string("malformed bundle: ") + e.what());
	}
}

void write_bundle_dir(const ServiceBundle &bundle, const fs::path &dir, EmitFilter filter) {
	const fs::path target = fs::absolute(dir).lexically_normal();
	std::random_device rd;
	const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".tmp" + std::to_string(rd()));
	std::error_code ec;
	try {
		fs::create_directories(staging / "artifacts");
		write_file(staging / "manifest.json", manifest_to_json(bundle, filter).dump(2) + "\n");
		for (const auto &name : filtered_artifacts(bundle, filter)) {
			write_file(staging / "artifacts" / name, bundle.emitted.at(name));
		}
		fs::remove_all(target);
		fs::rename(staging, target);
	} catch (const fs::filesystem_error &e) {
		fs::remove_all(staging, ec);
		throw Error("E_IO", e.what());
	} catch (...) {
		fs::remove_all(staging, ec);
		throw;
	}
}

ServiceBundle read_bundle_dir(const fs::path &dir) {
	json manifest;
	try {
		manifest = json::parse(read_file(dir / "manifest.json"));
	} catch (const json::exception &e) {
		throw Error("E_BAD_BUNDLE", std::string("manifest.json: ") + e.what());
	}
	json doc = {{"manifest", manifest}, {"artifacts", json::object()}};
	if (manifest.contains("artifacts") && manifest["artifacts"].is_array()) {
		for (const auto &name : manifest["artifacts"]) {
			const std::string n = name.is_string() ? name.get<std::string>() : name.dump();
			check_artifact_name(n);
			doc["artifacts"][n] = read_file(dir / "artifacts" / n);
		}
	}
	return bundle_from_json(doc);
}

} // namespace qsf
