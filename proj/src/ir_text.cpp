// SPDX-License-Identifier: Apache-2.0
#include "qsf/ir_text.hpp"

#include <charconv>
#include <sstream>

#include "qsf/error.hpp"

namespace qsf {

namespace {

std::string join(const std::vector<Qubit> &qubits) {
	std::string out;
	for (std::size_t i = 0; i < qubits.size(); ++i) {
		if (i != 0) {
			out += ',';
		}
		out += std::to_string(qubits[i]);
	}
	return out;
}

[[noreturn]] void syntax(std::size_t line, const std::string &msg) {
	throw Error("E_IR_SYNTAX", "line " + std::to_string(line) + ": " + msg);
}

std::vector<Qubit> parse_list(std::string_view text, std::size_t line) {
	std::vector<Qubit> out;
	while (!text.empty()) {
		const auto comma = text.find(',');
		const std::string_view item = text.substr(0, comma);
		Qubit q = 0;
		auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), q);
		if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
			syntax(line, "bad qubit index '" + std::string(item) + "'");
		}
		out.push_back(q);
		if (comma == std::string_view::npos) {
			break;
		}
		text.remove_prefix(comma + 1);
		if (text.empty()) {
			syntax(line, "trailing comma");
		}
	}
	return out;
}

std::vector<Qubit> parse_bracketed(const std::string &word, std::size_t line) {
	if (word.size() < 2 || word.front() != '[' || word.back() != ']') {
		syntax(line, "expected [..] but got '" + word + "'");
	}
	return parse_list(std::string_view(word).substr(1, word.size() - 2), line);
}

} // namespace

std::string format_ir(const CircuitIR &circuit) {
	std::ostringstream out;
	out << "qubits " << circuit.num_qubits << '\n';
	for (const auto &op : circuit.ops) {
		out << gate_name(op.kind) << ' ' << join(op.targets);
		if (!op.pos_controls.empty() || !op.neg_controls.empty()) {
			out << " [" << join(op.pos_controls) << ']';
		}
		if (!op.neg_controls.empty()) {
			out << " [" << join(op.neg_controls) << ']';
		}
		out << '\n';
	}
	if (!circuit.measured.empty()) {
		out << "measured " << join({circuit.measured.begin(), circuit.measured.end()}) << '\n';
	}
	return out.str();
}

CircuitIR parse_ir(std::string_view text) {
	CircuitIR circuit;
	bool have_header = false;
	std::istringstream in{std::string(text)};
	std::string raw;
	std::size_t line_no = 0;
	while (std::getline(in, raw)) {
		++line_no;
		if (auto hash = raw.find('#'); hash != std::string::npos) {
			raw.erase(hash);
		}
		std::istringstream words(raw);
		std::vector<std::string> parts;
		for (std::string w; words >> w;) {
			parts.push_back(w);
		}
		if (parts.empty()) {
			continue;
		}
		if (!have_header) {
			if (parts[0] != "qubits" || parts.size() != 2) {
				syntax(line_no, "expected 'qubits N'");
			}
			const auto n = parse_list(parts[1], line_no);
			if (n.size() != 1 || n[0] == 0) {
				syntax(line_no, "qubit count must be one positive integer");
			}
			circuit.num_qubits = n[0];
			have_header = true;
			continue;
		}
		if (parts[0] == "measured") {
			if (parts.size() != 2) {
				syntax(line_no, "expected 'measured i,j,...'");
			}
			for (Qubit q : parse_list(parts[1], line_no)) {
				circuit.measured.insert(q);
			}
			continue;
		}
		if (parts.size() < 2 || parts.size() > 4) {
			syntax(line_no, "expected 'GATE targets [controls] [negcontrols]'");
		}
		GateKind kind{};
		try {
			kind = gate_from_name(parts[0]);
		} catch (const Error &) {
			syntax(line_no, "unknown gate '" + parts[0] + "'");
		}
		std::vector<Qubit> pos = parts.size() > 2 ? parse_bracketed(parts[2], line_no) : std::vector<Qubit>{};
		std::vector<Qubit> neg = parts.size() > 3 ? parse_bracketed(parts[3], line_no) : std::vector<Qubit>{};
		circuit.ops.push_back(make_gate(kind, parse_list(parts[1], line_no), std::move(pos), std::move(neg)));
	}
	if (!have_header) {
		syntax(line_no, "missing 'qubits N' header");
	}
	try {
		validate_circuit(circuit);
	} catch (const Error &e) {
		syntax(line_no, e.what());
	}
	return circuit;
}

} // namespace qsf
