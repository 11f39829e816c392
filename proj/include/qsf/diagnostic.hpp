// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qsf {

enum class Severity { Error, Warning };

std::string_view severity_name(Severity s) noexcept;

// Closed set of contract diagnostic codes.
namespace diag {
inline constexpr std::string_view kInvalidYaml = "QSF001";
inline constexpr std::string_view kMissingSection = "QSF002";
inline constexpr std::string_view kMissingQuantum = "QSF003";
inline constexpr std::string_view kSourceCount = "QSF004";
inline constexpr std::string_view kInvalidShots = "QSF005";
inline constexpr std::string_view kUnsupportedMethod = "QSF006";
inline constexpr std::string_view kUnknownKey = "QSF007"; // warning
inline constexpr std::string_view kMalformedPath = "QSF008";
inline constexpr std::string_view kOperationId = "QSF009";
inline constexpr std::string_view kUnreachable = "QSF010";
inline constexpr std::string_view kIngestion = "QSF011";
inline constexpr std::string_view kDuplicateEndpoint = "QSF012";
inline constexpr std::string_view kInvalidValue = "QSF013";
inline constexpr std::string_view kEmit = "QSF014";
} // namespace diag

struct Diagnostic {
	std::string code;
	Severity severity = Severity::Error;
	std::string message;
	std::string location; // e.g. paths./bell.post.x-quantum

	bool operator==(const Diagnostic &) const = default;
};

Diagnostic make_error(std::string_view code, std::string location, std::string message);
Diagnostic make_warning(std::string_view code, std::string location, std::string message);

/// `SEVERITY CODE location: message`
std::string render(const Diagnostic &d);
std::string render(const std::vector<Diagnostic> &ds);

bool has_errors(const std::vector<Diagnostic> &ds) noexcept;

} // namespace qsf
