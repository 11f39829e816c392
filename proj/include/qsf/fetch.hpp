// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace qsf {

struct FetchResult {
	bool ok = false;
	std::string body;  // when ok
	std::string error; // when !ok
};

/// Resolves a URL to its content. Implementations must be safe for concurrent use.
class Fetcher {
public:
	virtual ~Fetcher() = default;
	virtual FetchResult fetch(std::string_view url) const = 0;
};

/// file:// URLs, plain filesystem paths, http:// and https://.
class DefaultFetcher final : public Fetcher {
public:
	explicit DefaultFetcher(std::chrono::milliseconds timeout = std::chrono::seconds(10)) : timeout_(timeout) {}
	FetchResult fetch(std::string_view url) const override;

private:
	std::chrono::milliseconds timeout_;
};

/// Serves a fixed URL -> body table; unknown URLs fail.
class MapFetcher final : public Fetcher {
public:
	MapFetcher() = default;
	explicit MapFetcher(const std::map<std::string, std::string> &table) : table_(table.begin(), table.end()) {}
	void add(std::string url, std::string body) { table_[std::move(url)] = std::move(body); }
	FetchResult fetch(std::string_view url) const override;

private:
	std::map<std::string, std::string, std::less<>> table_;
};

/// "https", "file", ... or empty for a relative reference.
std::string_view url_scheme(std::string_view url) noexcept;

/// Resolves `ref` against `base` when `ref` has no scheme and `base` is set.
/// Only directory-relative resolution is done (no dot-segment removal beyond
/// what the filesystem or server performs).
std::string resolve_url(std::string_view base, std::string_view ref);

std::string file_url(const std::filesystem::path &path);

} // namespace qsf
