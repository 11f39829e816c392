// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qsf/circuit.hpp"

namespace qsf {

/// A Quirk circuit grid: cols[c][r] is the token in column c on wire r.
/// Non-string cells are kept as their JSON text (numeric 1 becomes "1").
struct QuirkDocument {
	std::vector<std::vector<std::string>> cols;

	bool operator==(const QuirkDocument &) const = default;
};

namespace quirk_token {
inline constexpr std::string_view kIdentity = "1";
inline constexpr std::string_view kControl = "•";     // •
inline constexpr std::string_view kAntiControl = "◦"; // ◦
inline constexpr std::string_view kSwap = "Swap";
inline constexpr std::string_view kMeasure = "Measure";
} // namespace quirk_token

/// RFC 3986 percent-decoding; malformed escapes are kept verbatim.
std::string percent_decode(std::string_view text);

/// Decodes the `#circuit=<json>` fragment of a Quirk share URL.
/// Throws qsf::Error E_NO_FRAGMENT, E_BAD_JSON or E_BAD_SHAPE.
QuirkDocument parse_quirk_url(std::string_view url);

/// Parses the JSON document carried in the fragment. Throws E_BAD_JSON / E_BAD_SHAPE.
QuirkDocument parse_quirk_json(std::string_view json_text);

/// Column-by-column lowering. Every gate token in a column becomes one op
/// controlled by all of that column's controls; a Swap pair becomes one SWAP;
/// Measure marks the qubit measured from that column on.
/// Throws E_UNSUPPORTED_GATE, E_LONELY_SWAP, E_CONTROL_ONLY_COLUMN, E_OP_AFTER_MEASURE.
CircuitIR lower_quirk(const QuirkDocument &doc);

} // namespace qsf
