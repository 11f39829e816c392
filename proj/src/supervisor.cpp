// SPDX-License-Identifier: Apache-2.0
#include "qsf/supervisor.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <string_view>
#include <thread>

#include "qsf/bundle_io.hpp"

extern char **environ;

namespace qsf {

namespace {

class InProcessInstance final : public Instance {
public:
	explicit InProcessInstance(std::unique_ptr<ServiceHandle> handle) : handle_(std::move(handle)) {}
	void stop() override { handle_->stop(); }

private:
	std::unique_ptr<ServiceHandle> handle_;
};

/// A child leading its own process group; stop() signals the whole group.
class ProcessInstance final : public Instance {
public:
	explicit ProcessInstance(pid_t pid) : pid_(pid), group_(pid) {}
	~ProcessInstance() override { stop(); }

	/// Reaps the child if it has already exited.
	bool exited() {
		if (pid_ > 0 && ::waitpid(pid_, nullptr, WNOHANG) == pid_) {
			pid_ = -1;
		}
		return pid_ <= 0;
	}

	void stop() override {
		if (pid_ > 0) {
			::kill(-group_, SIGTERM);
			for (int i = 0; i < 50 && !exited(); ++i) {
				std::this_thread::sleep_for(std::chrono::milliseconds(100));
			}
		}
		if (group_ > 0) {
			::kill(-group_, SIGKILL);
			group_ = -1;
		}
		if (pid_ > 0) {
			::waitpid(pid_, nullptr, 0);
			pid_ = -1;
		}
	}

private:
	pid_t pid_;
	pid_t group_;
};

bool accepts_connections(std::uint16_t port) {
	const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
	if (fd < 0) {
		return false;
	}
	sockaddr_in addr{};
	addr.sin_family = AF_INET;
	addr.sin_port = htons(port);
	addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
	const bool ok = ::connect(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) == 0;
	::close(fd);
	return ok;
}

std::string substitute(std::string arg, const std::string &key, const std::string &value) {
	for (auto pos = arg.find(key); pos != std::string::npos; pos = arg.find(key, pos + value.size())) {
		arg.replace(pos, key.size(), value);
	}
	return arg;
}

} // namespace

std::unique_ptr<Instance> InProcessSupervisor::launch(const std::string &, const ServiceBundle &bundle,
                                                      std::uint16_t port, const Credentials &credentials) {
	try {
		return std::make_unique<InProcessInstance>(serve_bundle(bundle, port, factory_(credentials), options_));
	} catch (const Error &e) {
		throw Error("E_LAUNCH", e.code() + ": " + e.what());
	}
}

std::unique_ptr<Instance> ExternalCommandSupervisor::launch(const std::string &deployment_id,
                                                            const ServiceBundle &bundle, std::uint16_t port,
                                                            const Credentials &credentials) {
	if (argv_.empty()) {
		throw Error("E_LAUNCH", "no launch command configured");
	}
	std::error_code ec;
	std::filesystem::create_directories(work_dir_, ec);
	const auto bundle_path = work_dir_ / (deployment_id + ".bundle.json");
	{
		std::ofstream out(bundle_path, std::ios::binary | std::ios::trunc);
		out << bundle_to_json(bundle).dump() << '\n';
		if (!out) {
			throw Error("E_LAUNCH", "cannot write " + bundle_path.string());
		}
	}

	std::vector<std::string> args;
	for (const auto &a : argv_) {
		args.push_back(substitute(substitute(substitute(a, "{bundle}", bundle_path.string()), "{port}",
		                                     std::to_string(port)),
		                          "{id}", deployment_id));
	}
	std::vector<char *> cargv;
	for (auto &a : args) {
		cargv.push_back(a.data());
	}
	cargv.push_back(nullptr);

	std::vector<std::string> env_store;
	for (char **e = environ; *e != nullptr; ++e) {
		if (!std::string_view(*e).starts_with("QSF_CREDENTIALS_JSON=")) {
			env_store.emplace_back(*e);
		}
	}
	env_store.push_back("QSF_CREDENTIALS_JSON=" + nlohmann::json(credentials).dump());
	std::vector<char *> cenv;
	for (auto &e : env_store) {
		cenv.push_back(e.data());
	}
	cenv.push_back(nullptr);

	posix_spawn_file_actions_t actions;
	::posix_spawn_file_actions_init(&actions);
	::posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
	posix_spawnattr_t attr;
	::posix_spawnattr_init(&attr);
	::posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
	::posix_spawnattr_setpgroup(&attr, 0);
	pid_t pid = 0;
	const int rc = ::posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(), cenv.data());
	::posix_spawnattr_destroy(&attr);
	::posix_spawn_file_actions_destroy(&actions);
	if (rc != 0) {
		throw Error("E_LAUNCH", "cannot spawn '" + args[0] + "': " + std::strerror(rc));
	}
	auto instance = std::make_unique<ProcessInstance>(pid);
	if (ready_timeout_.count() <= 0) {
		return instance;
	}
	const auto deadline = std::chrono::steady_clock::now() + ready_timeout_;
	while (!accepts_connections(port)) {
		if (instance->exited()) {
			throw Error("E_LAUNCH", "'" + args[0] + "' exited before listening on port " + std::to_string(port));
		}
		if (std::chrono::steady_clock::now() >= deadline) {
			instance->stop();
			throw Error("E_LAUNCH", "'" + args[0] + "' did not listen on port " + std::to_string(port) + " in time");
		}
		std::this_thread::sleep_for(std::chrono::milliseconds(20));
	}
	return instance;
}

} // namespace qsf
