// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qsf {

/// Failure carrying a stable error code (E_UNSUPPORTED_GATE, E_TOO_LARGE, ...).
class Error : public std::runtime_error {
public:
	Error(std::string code, const std::string &message)
		: std::runtime_error(message), code_(std::move(code)) {}

	const std::string &code() const noexcept { return code_; }

private:
	std::string code_;
};

} // namespace qsf
