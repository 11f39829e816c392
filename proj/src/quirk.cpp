// SPDX-License-Identifier: Apache-2.0
#include "qsf/quirk.hpp"

#include <algorithm>
#include <optional>

#include <json.hpp>

#include "qsf/error.hpp"

namespace qsf {

namespace {

int hex_value(char c) {
	if (c >= '0' && c <= '9') return c - '0';
	if (c >= 'a' && c <= 'f') return c - 'a' + 10;
	if (c >= 'A' && c <= 'F') return c - 'A' + 10;
	return -1;
}

std::optional<GateKind> single_qubit_gate(std::string_view token) {
	if (token == "H") return GateKind::H;
	if (token == "X") return GateKind::X;
	if (token == "Y") return GateKind::Y;
	if (token == "Z") return GateKind::Z;
	if (token == "S") return GateKind::S;
	if (token == "T") return GateKind::T;
	return std::nullopt;
}

std::string at(std::size_t col, std::size_t row) {
	return "column " + std::to_string(col) + ", row " + std::to_string(row);
}

} // namespace

std::string percent_decode(std::string_view text) {
	std::string out;
	out.reserve(text.size());
	for (std::size_t i = 0; i < text.size(); ++i) {
		if (text[i] == '%' && i + 2 < text.size()) {
			const int hi = hex_value(text[i + 1]);
			const int lo = hex_value(text[i + 2]);
			if (hi >= 0 && lo >= 0) {
				out += static_cast<char>(hi * 16 + lo);
				i += 2;
				continue;
			}
		}
		out += text[i];
	}
	return out;
}

QuirkDocument parse_quirk_url(std::string_view url) {
	constexpr std::string_view marker = "#circuit=";
	const auto pos = url.find(marker);
	if (pos == std::string_view::npos) {
		throw Error("E_NO_FRAGMENT", "URL has no '#circuit=' fragment");
	}
	return parse_quirk_json(percent_decode(url.substr(pos + marker.size())));
}

QuirkDocument parse_quirk_json(std::string_view json_text) {
	const auto root = nlohmann::json::parse(json_text, nullptr, false);
	if (root.is_discarded()) {
		throw Error("E_BAD_JSON", "circuit fragment is not valid JSON");
	}
	if (!root.is_object() || !root.contains("cols") || !root["cols"].is_array()) {
		throw Error("E_BAD_SHAPE", "expected an object with a 'cols' list");
	}
	QuirkDocument doc;
	for (const auto &col : root["cols"]) {
		if (!col.is_array()) {
			throw Error("E_BAD_SHAPE", "every entry of 'cols' must be a list");
		}
		auto &cells = doc.cols.emplace_back();
		for (const auto &cell : col) {
			if (cell.is_string()) {
				cells.push_back(cell.get<std::string>());
			} else if (cell.is_number() || cell.is_object()) {
				cells.push_back(cell.dump());
			} else {
				throw Error("E_BAD_SHAPE", "unexpected cell value " + cell.dump());
			}
		}
	}
	return doc;
}

CircuitIR lower_quirk(const QuirkDocument &doc) {
	namespace tok = quirk_token;
	CircuitIR circuit;
	for (const auto &col : doc.cols) {
		circuit.num_qubits = std::max<Qubit>(circuit.num_qubits, static_cast<Qubit>(col.size()));
	}

	for (std::size_t c = 0; c < doc.cols.size(); ++c) {
		const auto &col = doc.cols[c];
		std::vector<Qubit> pos, neg, swaps, measures;
		std::vector<std::pair<Qubit, GateKind>> gates;
		for (std::size_t r = 0; r < col.size(); ++r) {
			const std::string &token = col[r];
			const auto q = static_cast<Qubit>(r);
			if (token == tok::kIdentity) {
				continue;
			}
			if (token == tok::kControl) {
				pos.push_back(q);
			} else if (token == tok::kAntiControl) {
				neg.push_back(q);
			} else if (token == tok::kSwap) {
				swaps.push_back(q);
			} else if (token == tok::kMeasure) {
				measures.push_back(q);
			} else if (auto kind = single_qubit_gate(token)) {
				gates.emplace_back(q, *kind);
			} else {
				throw Error("E_UNSUPPORTED_GATE", "unsupported token '" + token + "' at " + at(c, r));
			}
			if (token != tok::kMeasure && circuit.measured.contains(q)) {
				throw Error("E_OP_AFTER_MEASURE", "qubit " + std::to_string(q) + " used after measurement at " + at(c, r));
			}
		}
		if (!swaps.empty() && swaps.size() != 2) {
			throw Error("E_LONELY_SWAP", "column " + std::to_string(c) + " has " + std::to_string(swaps.size()) +
			                                 " Swap token(s); expected exactly 2");
		}
		if ((!pos.empty() || !neg.empty()) && gates.empty() && swaps.empty()) {
			throw Error("E_CONTROL_ONLY_COLUMN", "column " + std::to_string(c) + " has controls but no target gate");
		}

		// Ops follow row order; the swap is placed at its first row.
		auto gate_it = gates.begin();
		bool swap_emitted = swaps.empty();
		while (gate_it != gates.end() || !swap_emitted) {
			if (!swap_emitted && (gate_it == gates.end() || swaps[0] < gate_it->first)) {
				circuit.ops.push_back(make_gate(GateKind::Swap, swaps, pos, neg));
				swap_emitted = true;
			} else {
				circuit.ops.push_back(make_gate(gate_it->second, {gate_it->first}, pos, neg));
				++gate_it;
			}
		}
		circuit.measured.insert(measures.begin(), measures.end());
	}
	return circuit;
}

} // namespace qsf
