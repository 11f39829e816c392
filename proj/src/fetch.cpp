// SPDX-License-Identifier: Apache-2.0
#include "qsf/fetch.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace qsf {

namespace {

std::string_view strip_fragment(std::string_view url) {
	return url.substr(0, url.find('#'));
}

FetchResult read_file(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		return {false, {}, "cannot open " + path.string()};
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return {true, buf.str(), {}};
}

} // namespace

std::string_view url_scheme(std::string_view url) noexcept {
	const auto colon = url.find("://");
	if (colon == std::string_view::npos || colon == 0) {
		return {};
	}
	for (char c : url.substr(0, colon)) {
		if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
			return {};
		}
	}
	return url.substr(0, colon);
}

std::string resolve_url(std::string_view base, std::string_view ref) {
	if (base.empty() || !url_scheme(ref).empty() || ref.empty()) {
		return std::string(ref);
	}
	const std::string_view clean = strip_fragment(base);
	if (ref.front() == '/') {
		if (url_scheme(clean) == "file") {
			return "file://" + std::string(ref);
		}
		const auto authority = clean.find('/', url_scheme(clean).size() + 3);
		return std::string(clean.substr(0, authority)) + std::string(ref);
	}
	const auto slash = clean.rfind('/');
	return std::string(clean.substr(0, slash == std::string_view::npos ? 0 : slash + 1)) + std::string(ref);
}

std::string file_url(const std::filesystem::path &path) {
	return "file://" + std::filesystem::absolute(path).lexically_normal().string();
}

FetchResult DefaultFetcher::fetch(std::string_view url) const {
	const std::string_view scheme = url_scheme(url);
	if (scheme.empty()) {
		return read_file(std::string(strip_fragment(url)));
	}
	if (scheme == "file") {
		return read_file(std::string(strip_fragment(url.substr(7))));
	}
	if (scheme != "http" && scheme != "https") {
		return {false, {}, "unsupported URL scheme '" + std::string(scheme) + "'"};
	}

	const std::string_view rest = strip_fragment(url.substr(scheme.size() + 3));
	const auto slash = rest.find('/');
	const std::string origin = std::string(url.substr(0, scheme.size() + 3)) + std::string(rest.substr(0, slash));
	const std::string target = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));

	httplib::Client client(origin);
	const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
	const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
	client.set_connection_timeout(secs.count(), usecs.count());
	client.set_read_timeout(secs.count(), usecs.count());
	client.set_follow_location(true);
	auto res = client.Get(target);
	if (!res) {
		return {false, {}, "request to " + origin + " failed: " + httplib::to_string(res.error())};
	}
	if (res->status < 200 || res->status >= 300) {
		return {false, {}, "GET " + std::string(url) + " returned HTTP " + std::to_string(res->status)};
	}
	return {true, res->body, {}};
}

FetchResult MapFetcher::fetch(std::string_view url) const {
	if (auto it = table_.find(url); it != table_.end()) {
		return {true, it->second, {}};
	}
	return {false, {}, "no such resource: " + std::string(url)};
}

} // namespace qsf
