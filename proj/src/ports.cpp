// SPDX-License-Identifier: Apache-2.0
#include "qsf/ports.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>

#include "qsf/error.hpp"

namespace qsf {

PortRange parse_port_range(std::string_view text) {
	const auto dash = text.find('-');
	auto number = [&](std::string_view s) {
		unsigned value = 0;
		auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
		if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || value == 0 || value > 65535) {
			throw Error("E_BAD_CONFIG", "bad port range '" + std::string(text) + "'");
		}
		return static_cast<std::uint16_t>(value);
	};
	if (dash == std::string_view::npos) {
		throw Error("E_BAD_CONFIG", "port range must look like 8000-8999");
	}
	PortRange range{number(text.substr(0, dash)), number(text.substr(dash + 1))};
	if (range.first > range.last) {
		throw Error("E_BAD_CONFIG", "empty port range '" + std::string(text) + "'");
	}
	return range;
}

bool os_port_available(const std::string &host, std::uint16_t port) {
	const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
	if (fd < 0) {
		return false;
	}
	// Same option the HTTP server sets, so TIME_WAIT leftovers do not block reuse.
	int yes = 1;
	::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
	sockaddr_in addr{};
	addr.sin_family = AF_INET;
	addr.sin_port = htons(port);
	if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
		addr.sin_addr.s_addr = htonl(INADDR_ANY);
	}
	const bool ok = ::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) == 0 && ::listen(fd, 1) == 0;
	::close(fd);
	return ok;
}

PortRegistry::PortRegistry(PortRange range, Probe probe) : range_(range), probe_(std::move(probe)) {}

std::optional<std::uint16_t> PortRegistry::reserve() {
	std::lock_guard lock(mutex_);
	for (unsigned p = range_.first; p <= range_.last; ++p) {
		const auto port = static_cast<std::uint16_t>(p);
		if (allocated_.contains(port)) {
			continue;
		}
		if (probe_ && !probe_(port)) {
			continue;
		}
		allocated_.insert(port);
		return port;
	}
	return std::nullopt;
}

void PortRegistry::release(std::uint16_t port) {
	std::lock_guard lock(mutex_);
	allocated_.erase(port);
}

std::set<std::uint16_t> PortRegistry::allocated() const {
	std::lock_guard lock(mutex_);
	return allocated_;
}

} // namespace qsf
