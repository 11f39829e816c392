// SPDX-License-Identifier: Apache-2.0
#include "qsf/diagnostic.hpp"

#include <algorithm>

namespace qsf {

std::string_view severity_name(Severity s) noexcept {
	return s == Severity::Error ? "error" : "warning";
}

Diagnostic make_error(std::string_view code, std::string location, std::string message) {
	return {std::string(code), Severity::Error, std::move(message), std::move(location)};
}

Diagnostic make_warning(std::string_view code, std::string location, std::string message) {
	return {std::string(code), Severity::Warning, std::move(message), std::move(location)};
}

std::string render(const Diagnostic &d) {
	std::string out(severity_name(d.severity));
	out += ' ';
	out += d.code;
	out += ' ';
	out += d.location.empty() ? "document" : d.location;
	out += ": ";
	out += d.message;
	return out;
}

std::string render(const std::vector<Diagnostic> &ds) {
	std::string out;
	for (const auto &d : ds) {
		out += render(d);
		out += '\n';
	}
	return out;
}

bool has_errors(const std::vector<Diagnostic> &ds) noexcept {
	return std::any_of(ds.begin(), ds.end(), [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

} // namespace qsf
