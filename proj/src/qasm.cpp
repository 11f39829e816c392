// SPDX-License-Identifier: Apache-2.0
#include "qsf/qasm.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "qsf/error.hpp"

namespace qsf {

namespace {

enum class Tok { Ident, Int, Real, String, Symbol, Arrow, End };

struct Token {
	Tok kind = Tok::End;
	std::string text;
	std::size_t line = 0;
};

[[noreturn]] void fail(const char *code, std::size_t line, const std::string &msg) {
	throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

std::vector<Token> tokenize(std::string_view src) {
	std::vector<Token> out;
	std::size_t line = 1;
	std::size_t i = 0;
	while (i < src.size()) {
		const char c = src[i];
		if (c == '\n') {
			++line;
			++i;
		} else if (std::isspace(static_cast<unsigned char>(c))) {
			++i;
		} else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
			while (i < src.size() && src[i] != '\n') {
				++i;
			}
		} else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t j = i;
			while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
				++j;
			}
			out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line});
			i = j;
		} else if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t j = i;
			bool real = false;
			while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) {
				real |= src[j] == '.';
				++j;
			}
			out.push_back({real ? Tok::Real : Tok::Int, std::string(src.substr(i, j - i)), line});
			i = j;
		} else if (c == '"') {
			const std::size_t end = src.find('"', i + 1);
			if (end == std::string_view::npos) {
				fail("E_QASM_SYNTAX", line, "unterminated string");
			}
			out.push_back({Tok::String, std::string(src.substr(i + 1, end - i - 1)), line});
			i = end + 1;
		} else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
			out.push_back({Tok::Arrow, "->", line});
			i += 2;
		} else {
			out.push_back({Tok::Symbol, std::string(1, c), line});
			++i;
		}
	}
	out.push_back({Tok::End, "", line});
	return out;
}

struct Register {
	std::string name;
	Qubit size = 0;
};

/// A qubit or bit argument; `index` empty means the whole register.
struct Arg {
	std::string reg;
	std::optional<Qubit> index;
	std::size_t line = 0;
};

class Parser {
public:
	explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

	CircuitIR run() {
		header();
		while (peek().kind != Tok::End) {
			statement();
		}
		if (!qreg_) {
			fail("E_QASM_SYNTAX", peek().line, "program declares no qreg");
		}
		return std::move(circuit_);
	}

private:
	const Token &peek() const { return toks_[pos_]; }
	const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

	const Token &expect(Tok kind, std::string_view text, const char *what) {
		const Token &t = next();
		if (t.kind != kind || (!text.empty() && t.text != text)) {
			fail("E_QASM_SYNTAX", t.line, std::string("expected ") + what + " but found '" + t.text + "'");
		}
		return t;
	}

	void header() {
		const Token &kw = expect(Tok::Ident, "OPENQASM", "'OPENQASM' header");
		const Token &ver = next();
		if (ver.kind != Tok::Real && ver.kind != Tok::Int) {
			fail("E_QASM_SYNTAX", ver.line, "expected version number");
		}
		if (ver.text != "2.0") {
			fail("E_QASM_UNSUPPORTED", kw.line, "OPENQASM " + ver.text + " (only 2.0 is supported)");
		}
		expect(Tok::Symbol, ";", "';'");
	}

	Qubit index() {
		const Token &t = expect(Tok::Int, "", "integer index");
		Qubit value = 0;
		auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
		if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
			fail("E_QASM_INDEX", t.line, "index '" + t.text + "' out of range");
		}
		return value;
	}

	Arg argument() {
		const Token &name = expect(Tok::Ident, "", "register name");
		Arg arg{name.text, std::nullopt, name.line};
		if (peek().kind == Tok::Symbol && peek().text == "[") {
			next();
			arg.index = index();
			expect(Tok::Symbol, "]", "']'");
		}
		return arg;
	}

	void declare(std::optional<Register> &slot, const Token &kw) {
		if (slot) {
			fail("E_QASM_UNSUPPORTED", kw.line, "multiple " + kw.text + " declarations");
		}
		const Token &name = expect(Tok::Ident, "", "register name");
		expect(Tok::Symbol, "[", "'['");
		const Qubit size = index();
		expect(Tok::Symbol, "]", "']'");
		expect(Tok::Symbol, ";", "';'");
		if (size == 0) {
			fail("E_QASM_SYNTAX", kw.line, "register size must be positive");
		}
		slot = Register{name.text, size};
	}

	std::vector<Qubit> resolve(const Arg &arg, const std::optional<Register> &reg, const char *kind) {
		if (!reg) {
			fail("E_QASM_SYNTAX", arg.line, std::string("no ") + kind + " declared");
		}
		if (arg.reg != reg->name) {
			fail("E_QASM_SYNTAX", arg.line, "unknown register '" + arg.reg + "'");
		}
		if (!arg.index) {
			std::vector<Qubit> all(reg->size);
			for (Qubit q = 0; q < reg->size; ++q) {
				all[q] = q;
			}
			return all;
		}
		if (*arg.index >= reg->size) {
			fail("E_QASM_INDEX", arg.line,
			     arg.reg + "[" + std::to_string(*arg.index) + "] out of range (size " + std::to_string(reg->size) + ")");
		}
		return {*arg.index};
	}

	void check_unmeasured(Qubit q, std::size_t line) {
		if (circuit_.measured.contains(q)) {
			fail("E_OP_AFTER_MEASURE", line, "qubit " + std::to_string(q) + " used after measurement");
		}
	}

	void statement() {
		const Token &kw = next();
		if (kw.kind != Tok::Ident) {
			fail("E_QASM_SYNTAX", kw.line, "unexpected '" + kw.text + "'");
		}
		if (kw.text == "include") {
			const Token &file = expect(Tok::String, "", "include file name");
			if (file.text != "qelib1.inc") {
				fail("E_QASM_UNSUPPORTED", kw.line, "include \"" + file.text + "\"");
			}
			expect(Tok::Symbol, ";", "';'");
			return;
		}
		if (kw.text == "qreg") {
			declare(qreg_, kw);
			circuit_.num_qubits = qreg_->size;
			return;
		}
		if (kw.text == "creg") {
			declare(creg_, kw);
			return;
		}
		if (kw.text == "measure") {
			measure(kw);
			return;
		}
		const std::size_t arity = gate_arity(kw.text);
		if (arity == 0) {
			fail("E_QASM_UNSUPPORTED", kw.line, "'" + kw.text + "' is outside the supported subset");
		}
		if (!qreg_) {
			fail("E_QASM_SYNTAX", kw.line, "gate before qreg declaration");
		}
		std::vector<Arg> args{argument()};
		while (peek().kind == Tok::Symbol && peek().text == ",") {
			next();
			args.push_back(argument());
		}
		expect(Tok::Symbol, ";", "';'");
		if (args.size() != arity) {
			fail("E_QASM_SYNTAX", kw.line,
			     "'" + kw.text + "' takes " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()));
		}
		apply(kw, args);
	}

	static std::size_t gate_arity(const std::string &name) {
		if (name == "h" || name == "x" || name == "y" || name == "z" || name == "s" || name == "t") return 1;
		if (name == "cx" || name == "swap") return 2;
		if (name == "ccx") return 3;
		return 0;
	}

	void apply(const Token &kw, const std::vector<Arg> &args) {
		if (args.size() == 1) {
			const GateKind kind = gate_from_name(std::string(1, static_cast<char>(std::toupper(kw.text[0]))));
			for (Qubit q : resolve(args[0], qreg_, "qreg")) {
				check_unmeasured(q, kw.line);
				circuit_.ops.push_back(make_gate(kind, {q}));
			}
			return;
		}
		std::vector<Qubit> qs;
		for (const auto &arg : args) {
			if (!arg.index) {
				fail("E_QASM_SYNTAX", kw.line, "'" + kw.text + "' needs indexed qubit arguments");
			}
			qs.push_back(resolve(arg, qreg_, "qreg")[0]);
			check_unmeasured(qs.back(), kw.line);
		}
		for (std::size_t i = 0; i < qs.size(); ++i) {
			for (std::size_t j = i + 1; j < qs.size(); ++j) {
				if (qs[i] == qs[j]) {
					fail("E_QASM_SYNTAX", kw.line, "repeated qubit argument in '" + kw.text + "'");
				}
			}
		}
		if (kw.text == "swap") {
			circuit_.ops.push_back(make_gate(GateKind::Swap, {qs[0], qs[1]}));
		} else {
			const Qubit target = qs.back();
			qs.pop_back();
			circuit_.ops.push_back(make_gate(GateKind::X, {target}, qs));
		}
	}

	void measure(const Token &kw) {
		const Arg q = argument();
		expect(Tok::Arrow, "", "'->'");
		const Arg c = argument();
		expect(Tok::Symbol, ";", "';'");
		const auto qubits = resolve(q, qreg_, "qreg");
		const auto bits = resolve(c, creg_, "creg");
		if (qubits.size() != bits.size()) {
			fail("E_QASM_SYNTAX", kw.line, "measure operands differ in size");
		}
		circuit_.measured.insert(qubits.begin(), qubits.end());
	}

	std::vector<Token> toks_;
	std::size_t pos_ = 0;
	std::optional<Register> qreg_;
	std::optional<Register> creg_;
	CircuitIR circuit_;
};

} // namespace

CircuitIR parse_qasm(std::string_view text) {
	return Parser(tokenize(text)).run();
}

} // namespace qsf
