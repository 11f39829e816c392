// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <json.hpp>

#include "qsf/ports.hpp"

#ifndef QSF_FIXTURES_DIR
#error "QSF_FIXTURES_DIR must point at the fixture corpus"
#endif

namespace qsf::test {

namespace fs = std::filesystem;

fs::path fixtures_dir() { return fs::path(QSF_FIXTURES_DIR); }

fs::path fixture(std::string_view relative) { return fixtures_dir() / fs::path(std::string(relative)); }

std::string read_file(const fs::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw std::runtime_error("cannot read " + path.string());
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

void write_file(const fs::path &path, std::string_view text) {
	if (path.has_parent_path()) {
		fs::create_directories(path.parent_path());
	}
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	out << text;
	if (!out) {
		throw std::runtime_error("cannot write " + path.string());
	}
}

std::vector<std::string> paired_fixture_names() {
	std::vector<std::string> names;
	for (const auto &entry : fs::directory_iterator(fixtures_dir() / "qasm")) {
		const std::string stem = entry.path().stem().string();
		if (fs::exists(fixtures_dir() / "quirk" / (stem + ".url"))) {
			names.push_back(stem);
		}
	}
	std::sort(names.begin(), names.end());
	return names;
}

std::vector<std::string> ir_fixture_names() {
	std::vector<std::string> names;
	for (const auto &entry : fs::directory_iterator(fixtures_dir() / "ir")) {
		names.push_back(entry.path().stem().string());
	}
	std::sort(names.begin(), names.end());
	return names;
}

TempDir::TempDir(std::string_view tag) {
	static std::atomic<unsigned> counter{0};
	path_ = fs::temp_directory_path() /
	        (std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
	fs::remove_all(path_);
	fs::create_directories(path_);
}

TempDir::~TempDir() {
	std::error_code ec;
	fs::remove_all(path_, ec);
}

namespace {

using Mat2 = std::array<Amplitude, 4>; // row-major

const Mat2 kI{1.0, 0.0, 0.0, 1.0};
const Mat2 kP0{1.0, 0.0, 0.0, 0.0};
const Mat2 kP1{0.0, 0.0, 0.0, 1.0};
const Mat2 kPauliX{0.0, 1.0, 1.0, 0.0};
const Mat2 kPauliY{0.0, Amplitude{0.0, -1.0}, Amplitude{0.0, 1.0}, 0.0};
const Mat2 kPauliZ{1.0, 0.0, 0.0, -1.0};

Mat2 textbook_matrix(GateKind kind) {
	const double h = 1.0 / std::sqrt(2.0);
	switch (kind) {
	case GateKind::H: return {h, h, h, -h};
	case GateKind::X: return kPauliX;
	case GateKind::Y: return kPauliY;
	case GateKind::Z: return kPauliZ;
	case GateKind::S: return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 2)};
	case GateKind::T: return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
	case GateKind::Swap: break;
	}
	throw std::logic_error("no single-qubit matrix");
}

Mat2 minus_identity(const Mat2 &m) { return {m[0] - 1.0, m[1], m[2], m[3] - 1.0}; }

DenseMatrix kron(const DenseMatrix &a, const Mat2 &b) {
	const std::size_t n = a.size();
	DenseMatrix out(2 * n, std::vector<Amplitude>(2 * n));
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j) {
			for (std::size_t k = 0; k < 2; ++k) {
				for (std::size_t l = 0; l < 2; ++l) {
					out[2 * i + k][2 * j + l] = a[i][j] * b[2 * k + l];
				}
			}
		}
	}
	return out;
}

/// kron(f[n-1], ..., f[0]): qubit q is bit q of the basis index.
DenseMatrix kron_all(const std::vector<Mat2> &factors) {
	DenseMatrix acc{{Amplitude{1.0}}};
	for (std::size_t q = factors.size(); q-- > 0;) {
		acc = kron(acc, factors[q]);
	}
	return acc;
}

void add_scaled(DenseMatrix &into, const DenseMatrix &term, double scale) {
	for (std::size_t i = 0; i < into.size(); ++i) {
		for (std::size_t j = 0; j < into.size(); ++j) {
			into[i][j] += scale * term[i][j];
		}
	}
}

} // namespace

DenseMatrix dense_gate_matrix(const GateOp &op, Qubit num_qubits) {
	const std::size_t dim = std::size_t{1} << num_qubits;
	DenseMatrix u(dim, std::vector<Amplitude>(dim));
	for (std::size_t i = 0; i < dim; ++i) {
		u[i][i] = 1.0;
	}
	std::vector<Mat2> base(num_qubits, kI);
	for (Qubit c : op.pos_controls) {
		base[c] = kP1;
	}
	for (Qubit c : op.neg_controls) {
		base[c] = kP0;
	}
	if (op.kind == GateKind::Swap) {
		// SWAP - I = (XX + YY + ZZ - II) / 2
		const std::pair<Mat2, double> terms[] = {{kPauliX, 0.5}, {kPauliY, 0.5}, {kPauliZ, 0.5}, {kI, -0.5}};
		for (const auto &[pauli, scale] : terms) {
			std::vector<Mat2> f = base;
			f[op.targets[0]] = pauli;
			f[op.targets[1]] = pauli;
			add_scaled(u, kron_all(f), scale);
		}
		return u;
	}
	std::vector<Mat2> f = base;
	f[op.targets[0]] = minus_identity(textbook_matrix(op.kind));
	add_scaled(u, kron_all(f), 1.0);
	return u;
}

Statevector dense_apply(const DenseMatrix &m, const Statevector &v) {
	Statevector out(v.size());
	for (std::size_t i = 0; i < m.size(); ++i) {
		for (std::size_t j = 0; j < v.size(); ++j) {
			out[i] += m[i][j] * v[j];
		}
	}
	return out;
}

Statevector dense_run(const CircuitIR &circuit) {
	Statevector v(std::size_t{1} << circuit.num_qubits);
	v[0] = 1.0;
	for (const auto &op : circuit.ops) {
		v = dense_apply(dense_gate_matrix(op, circuit.num_qubits), v);
	}
	return v;
}

CircuitIR random_circuit(std::mt19937_64 &rng, Qubit num_qubits, int max_depth) {
	CircuitIR c;
	c.num_qubits = num_qubits;
	std::uniform_int_distribution<int> depth_dist(0, max_depth);
	std::uniform_int_distribution<int> kind_dist(0, 6);
	std::bernoulli_distribution coin(0.5);
	std::uniform_int_distribution<int> role_dist(0, 3);

	const int depth = depth_dist(rng);
	for (int layer = 0; layer < depth; ++layer) {
		std::vector<Qubit> free(num_qubits);
		for (Qubit q = 0; q < num_qubits; ++q) {
			free[q] = q;
		}
		std::shuffle(free.begin(), free.end(), rng);
		while (!free.empty()) {
			auto kind = static_cast<GateKind>(kind_dist(rng));
			if (kind == GateKind::Swap && free.size() < 2) {
				kind = GateKind::H;
			}
			std::vector<Qubit> targets{free.back()};
			free.pop_back();
			if (kind == GateKind::Swap) {
				targets.push_back(free.back());
				free.pop_back();
			}
			std::vector<Qubit> pos, neg;
			while (!free.empty() && coin(rng)) {
				(coin(rng) ? pos : neg).push_back(free.back());
				free.pop_back();
			}
			c.ops.push_back(make_gate(kind, targets, pos, neg));
			if (!free.empty() && role_dist(rng) == 0) {
				free.pop_back(); // leave an idle wire in this layer
			}
		}
	}
	for (Qubit q = 0; q < num_qubits; ++q) {
		if (coin(rng)) {
			c.measured.insert(q);
		}
	}
	return c;
}

QuirkDocument circuit_to_quirk(const CircuitIR &circuit) {
	namespace tok = quirk_token;
	QuirkDocument doc;
	const std::vector<std::string> blank(circuit.num_qubits, std::string(tok::kIdentity));
	for (const auto &op : circuit.ops) {
		std::vector<std::string> col = blank;
		for (Qubit c : op.pos_controls) {
			col[c] = tok::kControl;
		}
		for (Qubit c : op.neg_controls) {
			col[c] = tok::kAntiControl;
		}
		for (Qubit t : op.targets) {
			col[t] = op.kind == GateKind::Swap ? std::string(tok::kSwap) : std::string(gate_name(op.kind));
		}
		doc.cols.push_back(std::move(col));
	}
	if (!circuit.measured.empty()) {
		std::vector<std::string> col = blank;
		for (Qubit q : circuit.measured) {
			col[q] = tok::kMeasure;
		}
		doc.cols.push_back(std::move(col));
	}
	if (doc.cols.empty() && circuit.num_qubits > 1) {
		doc.cols.push_back(blank);
	}
	return doc;
}

std::string render_quirk_url(const QuirkDocument &doc, bool encode) {
	nlohmann::json cols = nlohmann::json::array();
	for (const auto &col : doc.cols) {
		nlohmann::json j = nlohmann::json::array();
		for (const auto &cell : col) {
			if (cell == quirk_token::kIdentity) {
				j.push_back(1);
			} else {
				j.push_back(cell);
			}
		}
		cols.push_back(std::move(j));
	}
	const std::string fragment = nlohmann::json{{"cols", cols}}.dump();
	std::string out = "https://algassert.com/quirk#circuit=";
	if (!encode) {
		return out + fragment;
	}
	static constexpr char kHex[] = "0123456789ABCDEF";
	for (unsigned char ch : fragment) {
		if (std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.' || ch == '~') {
			out += static_cast<char>(ch);
		} else {
			out += '%';
			out += kHex[ch >> 4];
			out += kHex[ch & 0xF];
		}
	}
	return out;
}

std::uint16_t free_port(std::uint16_t from) {
	for (std::uint32_t p = from; p <= 65535; ++p) {
		if (os_port_available("127.0.0.1", static_cast<std::uint16_t>(p))) {
			return static_cast<std::uint16_t>(p);
		}
	}
	throw std::runtime_error("no free port");
}

} // namespace qsf::test
