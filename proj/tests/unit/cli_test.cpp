// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "cli.hpp"
#include "qsf/deployer.hpp"
#include "test_support.hpp"

namespace qsf {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
	int code;
	std::string out;
	std::string err;
};

CliResult qsf_cli(std::vector<std::string> args) {
	args.insert(args.begin(), "qsf");
	std::vector<const char *> argv;
	for (const auto &a : args) {
		argv.push_back(a.c_str());
	}
	std::ostringstream out, err;
	const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
	return {code, out.str(), err.str()};
}

std::string spec(const std::string &name) { return test::fixture("specs/" + name + ".yaml").string(); }
std::string invalid(const std::string &name) { return test::fixture("specs/invalid/" + name + ".yaml").string(); }

std::set<std::string> files_under(const fs::path &root) {
	std::set<std::string> names;
	for (const auto &e : fs::recursive_directory_iterator(root)) {
		if (e.is_regular_file()) {
			names.insert(fs::relative(e.path(), root).generic_string());
		}
	}
	return names;
}

TEST(CliValidate, ExitCodes) {
	const auto ok = qsf_cli({"validate", spec("two_endpoints")});
	EXPECT_EQ(ok.code, cli::kExitOk);
	EXPECT_EQ(ok.err, "");
	EXPECT_EQ(ok.out, "");

	const auto bad = qsf_cli({"validate", invalid("04_two_sources")});
	EXPECT_EQ(bad.code, cli::kExitInvalid);
	EXPECT_NE(bad.err.find("QSF004"), std::string::npos);
	EXPECT_EQ(bad.out, "");

	EXPECT_EQ(qsf_cli({"validate", "/no/such/spec.yaml"}).code, cli::kExitIo);
}

TEST(CliValidate, WarningsAreQuietable) {
	test::TempDir dir;
	std::string text = test::read_file(test::fixture("specs/bell.yaml"));
	const auto at = text.find("x-quantum:");
	ASSERT_NE(at, std::string::npos);
	const auto eol = text.find('\n', at);
	const auto indent_end = text.find_first_not_of(' ', eol + 1);
	text.insert(eol + 1, std::string(indent_end - eol - 1, ' ') + "x-colour: blue\n");
	test::write_file(dir / "warn.yaml", text);

	const auto loud = qsf_cli({"validate", (dir / "warn.yaml").string()});
	EXPECT_EQ(loud.code, cli::kExitOk);
	EXPECT_NE(loud.err.find("warning QSF007"), std::string::npos) << loud.err;
	EXPECT_EQ(qsf_cli({"-q", "validate", (dir / "warn.yaml").string()}).err, "");
}

TEST(CliGenerate, WritesBundleAndFilters) {
	test::TempDir dir;
	const auto all = qsf_cli({"generate", spec("bell"), "-o", (dir / "all").string()});
	ASSERT_EQ(all.code, cli::kExitOk) << all.err;
	EXPECT_EQ(all.out, fs::absolute(dir / "all").lexically_normal().string() + "\n");
	EXPECT_EQ(files_under(dir / "all"), (std::set<std::string>{"manifest.json", "artifacts/bell.qasm",
	                                                          "artifacts/bell_qiskit.py.txt",
	                                                          "artifacts/openapi.effective.yaml"}));
	EXPECT_EQ(test::read_file(dir / "all/artifacts/bell.qasm"), test::read_file(test::fixture("golden/bell.qasm")));

	ASSERT_EQ(qsf_cli({"generate", spec("bell"), "-o", (dir / "q").string(), "--emit", "qasm"}).code, 0);
	EXPECT_EQ(files_under(dir / "q"), (std::set<std::string>{"manifest.json", "artifacts/bell.qasm"}));
	ASSERT_EQ(qsf_cli({"generate", spec("bell"), "-o", (dir / "p").string(), "--emit", "qiskit"}).code, 0);
	EXPECT_EQ(files_under(dir / "p"), (std::set<std::string>{"manifest.json", "artifacts/bell_qiskit.py.txt"}));

	EXPECT_NE(qsf_cli({"generate", spec("bell"), "-o", (dir / "z").string(), "--emit", "wasm"}).code, 0);
	EXPECT_FALSE(fs::exists(dir / "z"));
}

TEST(CliGenerate, IsDeterministic) {
	test::TempDir dir;
	ASSERT_EQ(qsf_cli({"generate", spec("two_endpoints"), "-o", (dir / "a").string()}).code, 0);
	ASSERT_EQ(qsf_cli({"generate", spec("two_endpoints"), "-o", (dir / "b").string()}).code, 0);
	const auto names = files_under(dir / "a");
	ASSERT_EQ(names, files_under(dir / "b"));
	for (const auto &n : names) {
		EXPECT_EQ(test::read_file(dir / "a" / n), test::read_file(dir / "b" / n)) << n;
	}
}

TEST(CliGenerate, FailureLeavesNoOutput) {
	test::TempDir dir;
	const auto bad = qsf_cli({"generate", invalid("09_bad_circuits"), "-o", (dir / "out").string()});
	EXPECT_EQ(bad.code, cli::kExitInvalid);
	EXPECT_NE(bad.err.find("QSF011"), std::string::npos);
	EXPECT_FALSE(fs::exists(dir / "out"));

	const auto anti = qsf_cli({"generate", spec("anti_control"), "-o", (dir / "anti").string()});
	EXPECT_EQ(anti.code, cli::kExitInvalid);
	EXPECT_NE(anti.err.find("QSF014"), std::string::npos);
	EXPECT_FALSE(fs::exists(dir / "anti"));

	fs::create_directories(dir / "keep");
	test::write_file(dir / "keep/mine.txt", "untouched");
	EXPECT_EQ(qsf_cli({"generate", spec("anti_control"), "-o", (dir / "keep").string()}).code, cli::kExitInvalid);
	EXPECT_EQ(files_under(dir / "keep"), (std::set<std::string>{"mine.txt"}));
}

TEST(CliSimulate, GoldenAndErrors) {
	const auto bell = qsf_cli({"simulate", spec("bell"), "/bell", "--shots", "10000", "--seed", "7"});
	ASSERT_EQ(bell.code, cli::kExitOk) << bell.err;
	EXPECT_EQ(bell.out, test::read_file(test::fixture("counts/bell.7.json")));

	const auto flip = qsf_cli({"simulate", spec("x_circuit"), "/flip", "--shots", "5"});
	ASSERT_EQ(flip.code, cli::kExitOk);
	const json j = json::parse(flip.out);
	EXPECT_EQ(j["counts"], (json{{"1", 5}}));
	EXPECT_EQ(j["shots"], 5);

	const auto defaults = json::parse(qsf_cli({"simulate", spec("x_circuit"), "/flip"}).out);
	EXPECT_EQ(defaults["shots"], 100);

	const auto missing = qsf_cli({"simulate", spec("two_endpoints"), "/nope"});
	EXPECT_EQ(missing.code, cli::kExitInvalid);
	EXPECT_NE(missing.err.find("/bell"), std::string::npos);
	EXPECT_NE(missing.err.find("/ghz3"), std::string::npos);
	EXPECT_EQ(missing.out, "");

	EXPECT_EQ(qsf_cli({"simulate", spec("bell"), "/bell", "--shots", "0"}).code, cli::kExitInvalid);
	EXPECT_EQ(qsf_cli({"simulate", "/no/such.yaml", "/bell"}).code, cli::kExitIo);
}

TEST(CliSimulate, RemoteBackendNeedsCredentialsFile) {
	test::TempDir dir;
	const auto without = qsf_cli({"simulate", spec("remote"), "/bell", "--shots", "10"});
	EXPECT_NE(without.code, cli::kExitOk);

	test::write_file(dir / "creds.json", R"({"mock-remote":"TOP-SECRET-9"})");
	const auto with = qsf_cli(
	    {"simulate", spec("remote"), "/bell", "--shots", "10", "--seed", "3", "--credentials", (dir / "creds.json").string()});
	ASSERT_EQ(with.code, cli::kExitOk) << with.err;
	EXPECT_EQ(json::parse(with.out)["backend"], "mock-remote");
	EXPECT_EQ((with.out + with.err).find("TOP-SECRET-9"), std::string::npos);

	test::write_file(dir / "bad.json", R"(["not", "an", "object"])");
	EXPECT_EQ(qsf_cli({"simulate", spec("remote"), "/bell", "--credentials", (dir / "bad.json").string()}).code,
	          cli::kExitIo);
	EXPECT_EQ(qsf_cli({"simulate", spec("remote"), "/bell", "--credentials", (dir / "none.json").string()}).code,
	          cli::kExitIo);
}

class CliDeploy : public ::testing::Test {
protected:
	void SetUp() override {
		first_ = test::free_port(18500);
		DeployerConfig config;
		config.ports = {first_, static_cast<std::uint16_t>(first_ + 20)};
		config.probe_host = "127.0.0.1";
		deployer_ = std::make_shared<Deployer>(config, std::make_shared<DefaultFetcher>(),
		                                       std::make_shared<InProcessSupervisor>());
		api_port_ = test::free_port(18540);
		server_ = std::make_unique<DeployerServer>(deployer_, api_port_);
		url_ = "http://127.0.0.1:" + std::to_string(api_port_);
	}

	std::uint16_t first_ = 0;
	std::uint16_t api_port_ = 0;
	std::string url_;
	std::shared_ptr<Deployer> deployer_;
	std::unique_ptr<DeployerServer> server_;
};

TEST_F(CliDeploy, PipelineRunPrintsBaseUrl) {
	const auto r = qsf_cli({"pipeline", "run", spec("two_endpoints"), "--deployer", url_});
	ASSERT_EQ(r.code, cli::kExitOk) << r.err;
	EXPECT_EQ(r.out, "http://127.0.0.1:" + std::to_string(first_) + "\n");
	EXPECT_NE(r.err.find("[3/3]"), std::string::npos);
	EXPECT_EQ(qsf_cli({"-q", "pipeline", "run", spec("bell"), "--deployer", url_}).err, "");
	EXPECT_EQ(deployer_->list().size(), 2u);
}

TEST_F(CliDeploy, StagesHaveDistinctExitCodes) {
	const auto invalid_spec = qsf_cli({"pipeline", "run", invalid("04_two_sources"), "--deployer", url_});
	EXPECT_EQ(invalid_spec.code, cli::kExitInvalid);
	EXPECT_EQ(invalid_spec.err.find("[3/3]"), std::string::npos);

	const auto gen = qsf_cli({"pipeline", "run", spec("anti_control"), "--deployer", url_});
	EXPECT_EQ(gen.code, cli::kExitGenerate);
	EXPECT_NE(gen.err.find("QSF014"), std::string::npos);
	EXPECT_TRUE(deployer_->list().empty());

	const std::string down = "http://127.0.0.1:" + std::to_string(test::free_port(18580));
	EXPECT_EQ(qsf_cli({"pipeline", "run", spec("bell"), "--deployer", down}).code, cli::kExitDeploy);
	EXPECT_EQ(qsf_cli({"deploy", spec("bell"), "--deployer", down}).code, cli::kExitDeploy);
	EXPECT_EQ(qsf_cli({"pipeline", "run", invalid("04_two_sources"), "--deployer", down}).code, cli::kExitInvalid);
}

TEST_F(CliDeploy, DeployerRejectionIsADeployFailure) {
	const auto r = qsf_cli({"deploy", invalid("05_bad_shots"), "--deployer", url_});
	EXPECT_EQ(r.code, cli::kExitDeploy);
	EXPECT_NE(r.err.find("E_INVALID_SPEC"), std::string::npos);
	EXPECT_NE(r.err.find("QSF005"), std::string::npos);
	EXPECT_EQ(r.out, "");
}

TEST_F(CliDeploy, CredentialsTravelByFileOnly) {
	test::TempDir dir;
	test::write_file(dir / "creds.json", R"({"mock-remote":"TOP-SECRET-9"})");
	const auto r = qsf_cli({"deploy", spec("remote"), "--deployer", url_, "--credentials", (dir / "creds.json").string()});
	ASSERT_EQ(r.code, cli::kExitOk) << r.err;
	httplib::Client svc("127.0.0.1", first_);
	auto res = svc.Post("/bell", R"({"shots":40,"seed":2})", "application/json");
	ASSERT_TRUE(res);
	EXPECT_EQ(res->status, 200) << res->body;
	EXPECT_EQ(res->body.find("TOP-SECRET-9"), std::string::npos);
	EXPECT_EQ(httplib::Client(url_).Get("/deployments")->body.find("TOP-SECRET-9"), std::string::npos);
}

} // namespace
} // namespace qsf
