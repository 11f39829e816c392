// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace qsf {

struct PortRange {
	std::uint16_t first = 8000;
	std::uint16_t last = 8999;

	bool contains(std::uint16_t p) const noexcept { return p >= first && p <= last; }
	bool operator==(const PortRange &) const = default;
};

/// "8000-8999". Throws qsf::Error E_BAD_CONFIG.
PortRange parse_port_range(std::string_view text);

/// True when the OS would let us listen on host:port right now.
bool os_port_available(const std::string &host, std::uint16_t port);

/// First-free allocator. reserve() takes the lowest port that is neither
/// allocated nor rejected by the probe; probe-rejected ports stay unreserved.
class PortRegistry {
public:
	using Probe = std::function<bool(std::uint16_t)>;

	explicit PortRegistry(PortRange range, Probe probe = {});

	std::optional<std::uint16_t> reserve();
	void release(std::uint16_t port);
	std::set<std::uint16_t> allocated() const;
	PortRange range() const noexcept { return range_; }

private:
	PortRange range_;
	Probe probe_;
	mutable std::mutex mutex_;
	std::set<std::uint16_t> allocated_;
};

} // namespace qsf
