// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "qsf/bundle_io.hpp"
#include "qsf/codegen.hpp"
#include "qsf/deployer.hpp"
#include "qsf/error.hpp"
#include "qsf/runtime.hpp"
#include "qsf/spec.hpp"
#include "qsf/supervisor.hpp"

namespace qsf::cli {

namespace {

using nlohmann::json;

struct Globals {
	double fetch_timeout_s = 10.0;
	bool quiet = false;
};

struct LoadedSpec {
	std::string text;
	std::string url;
};

std::chrono::milliseconds timeout_of(const Globals &g) {
	return std::chrono::milliseconds(static_cast<long long>(g.fetch_timeout_s * 1000));
}

std::optional<LoadedSpec> load_spec(const std::string &arg, const Globals &g, std::ostream &err) {
	const std::string url = url_scheme(arg).empty() ? file_url(arg) : arg;
	FetchResult res = DefaultFetcher(timeout_of(g)).fetch(url);
	if (!res.ok) {
		err << "error: cannot read " << arg << ": " << res.error << '\n';
		return std::nullopt;
	}
	return LoadedSpec{std::move(res.body), url};
}

void print_diagnostics(const std::vector<Diagnostic> &ds, const Globals &g, std::ostream &err) {
	for (const auto &d : ds) {
		if (d.severity == Severity::Warning && g.quiet) {
			continue;
		}
		err << render(d) << '\n';
	}
}

std::optional<Credentials> load_credentials(const std::string &path, std::ostream &err) {
	if (path.empty()) {
		return Credentials{};
	}
	std::ifstream in(path);
	if (!in) {
		err << "error: cannot read credentials file " << path << '\n';
		return std::nullopt;
	}
	const json j = json::parse(in, nullptr, false);
	if (j.is_discarded() || !j.is_object()) {
		err << "error: credentials file must be a JSON object {provider_id: secret}\n";
		return std::nullopt;
	}
	Credentials creds;
	for (const auto &[k, v] : j.items()) {
		if (!v.is_string()) {
			err << "error: credential '" << k << "' must be a string\n";
			return std::nullopt;
		}
		creds[k] = v.get<std::string>();
	}
	return creds;
}

/// Validation half of the pipeline: parse + deep validate.
int check_spec(const LoadedSpec &spec, const Globals &g, std::ostream &err) {
	SpecParseResult parsed = parse_spec(spec.text, spec.url);
	std::vector<Diagnostic> diags = parsed.diagnostics;
	if (parsed.spec) {
		auto deep = validate_spec(*parsed.spec, DefaultFetcher(timeout_of(g)));
		diags.insert(diags.end(), deep.begin(), deep.end());
	}
	print_diagnostics(diags, g, err);
	return has_errors(diags) ? kExitInvalid : kExitOk;
}

int cmd_validate(const std::string &spec_arg, const Globals &g, std::ostream &err) {
	auto spec = load_spec(spec_arg, g, err);
	if (!spec) {
		return kExitIo;
	}
	return check_spec(*spec, g, err);
}

int cmd_generate(const std::string &spec_arg, const std::string &out_dir, const std::string &emit, const Globals &g,
                 std::ostream &out, std::ostream &err) {
	auto spec = load_spec(spec_arg, g, err);
	if (!spec) {
		return kExitIo;
	}
	BundleResult result = generate_bundle_from_text(spec->text, spec->url, DefaultFetcher(timeout_of(g)));
	print_diagnostics(result.diagnostics, g, err);
	if (!result.bundle) {
		return kExitInvalid;
	}
	const EmitFilter filter =
	    emit == "qasm" ? EmitFilter::Qasm : emit == "qiskit" ? EmitFilter::Qiskit : EmitFilter::Bundle;
	try {
		write_bundle_dir(*result.bundle, out_dir, filter);
	} catch (const Error &e) {
		err << "error: " << e.what() << '\n';
		return kExitIo;
	}
	out << std::filesystem::absolute(out_dir).lexically_normal().string() << '\n';
	return kExitOk;
}

int cmd_simulate(const std::string &spec_arg, const std::string &path, std::optional<std::uint64_t> shots,
                 std::optional<std::uint64_t> seed, const std::string &cred_path, const Globals &g, std::ostream &out,
                 std::ostream &err) {
	auto spec = load_spec(spec_arg, g, err);
	if (!spec) {
		return kExitIo;
	}
	auto creds = load_credentials(cred_path, err);
	if (!creds) {
		return kExitIo;
	}
	SpecParseResult parsed = parse_spec(spec->text, spec->url);
	if (!parsed.spec) {
		print_diagnostics(parsed.diagnostics, g, err);
		return kExitInvalid;
	}
	const ApiSpec &api = *parsed.spec;
	auto it = std::find_if(api.endpoints.begin(), api.endpoints.end(), [&](const auto &e) { return e.path == path; });
	if (it == api.endpoints.end()) {
		err << "error: unknown endpoint " << path << "; available:";
		for (const auto &e : api.endpoints) {
			err << ' ' << e.path;
		}
		err << '\n';
		return kExitInvalid;
	}
	if (shots && (*shots < 1 || *shots > kMaxShots)) {
		err << "error: --shots must be within [1, " << kMaxShots << "]\n";
		return kExitInvalid;
	}
	ManifestEntry entry{it->path, it->method, it->operation_id, {}, it->binding.default_shots, it->binding.backend};
	try {
		entry.circuit = ingest_binding(it->binding, api.source_url, DefaultFetcher(timeout_of(g)));
	} catch (const Error &e) {
		const auto code = e.code() == "E_FETCH" ? diag::kUnreachable : diag::kIngestion;
		print_diagnostics({make_error(code, binding_location(*it), e.code() + ": " + e.what())}, g, err);
		return kExitInvalid;
	}
	try {
		out << result_to_wire(execute_endpoint(entry, RunRequest{shots, seed}, default_backends(*creds))) << '\n';
	} catch (const Error &e) {
		err << "error: " << e.code() << ": " << e.what() << '\n';
		return kExitInvalid;
	}
	return kExitOk;
}

/// POSTs to the deployer; prints base_url on success.
int post_deployment(const std::string &deployer_url, const std::string &spec_url, const Credentials &creds,
                    std::ostream &out, std::ostream &err) {
	httplib::Client client(deployer_url);
	client.set_connection_timeout(5, 0);
	client.set_read_timeout(120, 0);
	const json body = {{"spec_url", spec_url}, {"credentials", creds}};
	auto res = client.Post("/deployments", body.dump(), "application/json");
	if (!res) {
		err << "error: deployer at " << deployer_url << " unreachable: " << httplib::to_string(res.error()) << '\n';
		return kExitDeploy;
	}
	const json reply = json::parse(res->body, nullptr, false);
	if (res->status != 201 || reply.is_discarded() || reply.value("status", "") != "running") {
		err << "error: deployment failed (HTTP " << res->status << ")";
		if (!reply.is_discarded() && reply.contains("error")) {
			err << ": " << reply["error"].value("code", "") << " " << reply["error"].value("message", "");
		}
		err << '\n';
		if (!reply.is_discarded() && reply.contains("failure")) {
			for (const auto &d : reply["failure"]) {
				err << render(diagnostic_from_json(d)) << '\n';
			}
		}
		return kExitDeploy;
	}
	out << reply["base_url"].get<std::string>() << '\n';
	return kExitOk;
}

int cmd_deploy(const std::string &spec_arg, const std::string &deployer_url, const std::string &cred_path,
               std::ostream &out, std::ostream &err) {
	auto creds = load_credentials(cred_path, err);
	if (!creds) {
		return kExitIo;
	}
	const std::string url = url_scheme(spec_arg).empty() ? file_url(spec_arg) : spec_arg;
	return post_deployment(deployer_url, url, *creds, out, err);
}

int cmd_pipeline_run(const std::string &spec_arg, const std::string &deployer_url, const std::string &cred_path,
                     const Globals &g, std::ostream &out, std::ostream &err) {
	auto creds = load_credentials(cred_path, err);
	if (!creds) {
		return kExitIo;
	}
	auto spec = load_spec(spec_arg, g, err);
	if (!spec) {
		return kExitIo;
	}
	if (!g.quiet) {
		err << "[1/3] validate " << spec->url << '\n';
	}
	if (check_spec(*spec, g, err) != kExitOk) {
		return kExitInvalid;
	}
	if (!g.quiet) {
		err << "[2/3] generate (dry run)\n";
	}
	BundleResult generated = generate_bundle_from_text(spec->text, spec->url, DefaultFetcher(timeout_of(g)));
	if (!generated.bundle) {
		print_diagnostics(generated.diagnostics, g, err);
		return kExitGenerate;
	}
	if (!g.quiet) {
		err << "[3/3] deploy via " << deployer_url << '\n';
	}
	return post_deployment(deployer_url, spec->url, *creds, out, err);
}

/// Blocks the calling thread until SIGINT or SIGTERM. The signals must be
/// blocked (block_stop_signals) before any server thread starts.
void block_stop_signals() {
	sigset_t set;
	sigemptyset(&set);
	sigaddset(&set, SIGINT);
	sigaddset(&set, SIGTERM);
	pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

int wait_for_stop_signal() {
	sigset_t set;
	sigemptyset(&set);
	sigaddset(&set, SIGINT);
	sigaddset(&set, SIGTERM);
	int sig = 0;
	sigwait(&set, &sig);
	return sig;
}

struct DeployerOptions {
	std::uint16_t port = 9000;
	std::string port_range = "8000-8999";
	std::string state_dir = ".qsf-state";
	std::string advertise_host = "127.0.0.1";
	std::string bind_host = "127.0.0.1";
	std::string listen_host = "127.0.0.1";
	bool isolate = false;
};

std::shared_ptr<InstanceSupervisor> make_supervisor(const DeployerOptions &opts) {
	if (!opts.isolate) {
		return std::make_shared<InProcessSupervisor>(ServeOptions{opts.bind_host});
	}
	const std::string self = std::filesystem::read_symlink("/proc/self/exe").string();
	return std::make_shared<ExternalCommandSupervisor>(
	    std::vector<std::string>{self, "-q", "serve", "--bundle", "{bundle}", "--port", "{port}", "--bind-host",
	                             opts.bind_host},
	    std::filesystem::path(opts.state_dir) / "bundles");
}

int cmd_deployer_serve(const DeployerOptions &opts, const Globals &g, std::ostream &out, std::ostream &err) {
	DeployerConfig config;
	try {
		config.ports = parse_port_range(opts.port_range);
	} catch (const Error &e) {
		err << "error: " << e.what() << '\n';
		return kExitInvalid;
	}
	config.state_dir = opts.state_dir;
	config.advertise_host = opts.advertise_host;
	config.probe_host = opts.bind_host;

	block_stop_signals();
	std::shared_ptr<Deployer> deployer;
	std::unique_ptr<DeployerServer> server;
	try {
		deployer = std::make_shared<Deployer>(config, std::make_shared<DefaultFetcher>(timeout_of(g)),
		                                      make_supervisor(opts));
		server = std::make_unique<DeployerServer>(deployer, opts.port, opts.listen_host);
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return kExitIo;
	}
	out << "http://" << opts.advertise_host << ':' << opts.port << std::endl;
	if (!g.quiet) {
		err << "deployer listening on port " << opts.port << ", services on " << opts.port_range << ", state in "
		    << opts.state_dir << std::endl;
	}
	wait_for_stop_signal();
	server->stop();
	deployer->shutdown();
	return kExitOk;
}

int cmd_serve(const std::string &bundle_path, std::uint16_t port, const std::string &bind_host, std::ostream &out,
              std::ostream &err) {
	ServiceBundle bundle;
	try {
		if (std::filesystem::is_directory(bundle_path)) {
			bundle = read_bundle_dir(bundle_path);
		} else {
			std::ifstream in(bundle_path);
			if (!in) {
				throw Error("E_IO", "cannot read " + bundle_path);
			}
			bundle = bundle_from_json(json::parse(in));
		}
	} catch (const std::exception &e) {
		err << "error: " << e.what() << '\n';
		return kExitIo;
	}
	Credentials creds;
	if (const char *env = std::getenv("QSF_CREDENTIALS_JSON")) {
		const json j = json::parse(env, nullptr, false);
		if (j.is_object()) {
			for (const auto &[k, v] : j.items()) {
				if (v.is_string()) {
					creds[k] = v.get<std::string>();
				}
			}
		}
	}
	block_stop_signals();
	std::unique_ptr<ServiceHandle> handle;
	try {
		handle = serve_bundle(bundle, port, default_backends(creds), ServeOptions{bind_host});
	} catch (const Error &e) {
		err << "error: " << e.code() << ": " << e.what() << '\n';
		return kExitIo;
	}
	out << "http://" << bind_host << ':' << port << std::endl;
	wait_for_stop_signal();
	handle->stop();
	return kExitOk;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
	CLI::App app{"Quantum service toolchain: validate, generate, simulate and deploy x-quantum OpenAPI contracts",
	             "qsf"};
	app.require_subcommand(1);
	Globals g;
	app.add_option("--fetch-timeout", g.fetch_timeout_s, "Seconds to wait for remote resources")
	    ->check(CLI::PositiveNumber)
	    ->envname("QSF_FETCH_TIMEOUT");
	app.add_flag("-q,--quiet", g.quiet, "Suppress warnings and progress output");

	std::string spec_arg, out_dir, emit = "bundle", endpoint, deployer_url = "http://127.0.0.1:9000", cred_path;
	std::optional<std::uint64_t> shots, seed;

	auto *validate = app.add_subcommand("validate", "Parse and deeply validate a contract");
	validate->add_option("spec", spec_arg, "Spec path or URL")->required();

	auto *generate = app.add_subcommand("generate", "Generate a service bundle directory");
	generate->add_option("spec", spec_arg, "Spec path or URL")->required();
	generate->add_option("-o,--out", out_dir, "Output directory")->required();
	generate->add_option("--emit", emit, "Artifacts to write")->check(CLI::IsMember({"qasm", "qiskit", "bundle"}));

	auto *simulate = app.add_subcommand("simulate", "Run one endpoint locally and print its response JSON");
	simulate->add_option("spec", spec_arg, "Spec path or URL")->required();
	simulate->add_option("endpoint", endpoint, "Endpoint path, e.g. /bell")->required();
	simulate->add_option("--shots", shots, "Shots (default: the binding's default-shots)");
	simulate->add_option("--seed", seed, "Sampling seed (default: random)");
	simulate->add_option("--credentials", cred_path, "JSON file {provider_id: secret}");

	auto *deploy = app.add_subcommand("deploy", "Ask a deployer to deploy a contract");
	deploy->add_option("spec", spec_arg, "Spec path or URL")->required();
	deploy->add_option("--deployer", deployer_url, "Deployer base URL")->envname("QSF_DEPLOYER_URL");
	deploy->add_option("--credentials", cred_path, "JSON file {provider_id: secret}");

	auto *pipeline = app.add_subcommand("pipeline", "Continuous-deployment pipeline");
	pipeline->require_subcommand(1);
	auto *pipeline_run = pipeline->add_subcommand("run", "validate, generate, then deploy");
	pipeline_run->add_option("spec", spec_arg, "Spec path or URL")->required();
	pipeline_run->add_option("--deployer", deployer_url, "Deployer base URL")->envname("QSF_DEPLOYER_URL");
	pipeline_run->add_option("--credentials", cred_path, "JSON file {provider_id: secret}");

	DeployerOptions dopts;
	auto *deployer = app.add_subcommand("deployer", "Deployment API");
	deployer->require_subcommand(1);
	auto *deployer_serve = deployer->add_subcommand("serve", "Run the Deployment API");
	deployer_serve->add_option("--port", dopts.port, "Deployer listen port")->envname("QSF_PORT");
	deployer_serve->add_option("--port-range", dopts.port_range, "Service port range")->envname("QSF_PORT_RANGE");
	deployer_serve->add_option("--state-dir", dopts.state_dir, "Ledger directory")->envname("QSF_STATE_DIR");
	deployer_serve->add_option("--advertise-host", dopts.advertise_host, "Host used in returned URLs")
	    ->envname("QSF_ADVERTISE_HOST");
	deployer_serve->add_option("--bind-host", dopts.bind_host, "Interface services listen on")
	    ->envname("QSF_BIND_HOST");
	deployer_serve->add_option("--listen-host", dopts.listen_host, "Interface the deployer listens on")
	    ->envname("QSF_LISTEN_HOST");
	deployer_serve->add_flag("--isolate", dopts.isolate, "Run each service as a child `qsf serve` process");

	std::string bundle_path;
	std::uint16_t serve_port = 8000;
	std::string serve_host = "127.0.0.1";
	auto *serve = app.add_subcommand("serve", "Serve a bundle (JSON file or directory) on one port");
	serve->add_option("--bundle", bundle_path, "Bundle JSON file or bundle directory")->required();
	serve->add_option("--port", serve_port, "Listen port")->required();
	serve->add_option("--bind-host", serve_host, "Listen interface");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? kExitOk : kExitIo;
	}

	if (*validate) return cmd_validate(spec_arg, g, err);
	if (*generate) return cmd_generate(spec_arg, out_dir, emit, g, out, err);
	if (*simulate) return cmd_simulate(spec_arg, endpoint, shots, seed, cred_path, g, out, err);
	if (*deploy) return cmd_deploy(spec_arg, deployer_url, cred_path, out, err);
	if (*pipeline_run) return cmd_pipeline_run(spec_arg, deployer_url, cred_path, g, out, err);
	if (*deployer_serve) return cmd_deployer_serve(dopts, g, out, err);
	if (*serve) return cmd_serve(bundle_path, serve_port, serve_host, out, err);
	return kExitIo;
}

} // namespace qsf::cli
