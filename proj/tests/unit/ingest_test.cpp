// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "qsf/codegen.hpp"
#include "qsf/ir_text.hpp"
#include "qsf/qasm.hpp"
#include "qsf/quirk.hpp"
#include "test_support.hpp"

namespace qsf {
namespace {

using test::error_code_of;

std::string trimmed(std::string s) {
	while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) {
		s.pop_back();
	}
	return s;
}

CircuitIR expected_ir(const std::string &name) { return parse_ir(test::read_file(test::fixture("ir/" + name + ".ir"))); }

CircuitIR from_quirk(const std::string &name) {
	return lower_quirk(parse_quirk_url(trimmed(test::read_file(test::fixture("quirk/" + name + ".url")))));
}

CircuitIR from_qasm(const std::string &name) {
	return parse_qasm(test::read_file(test::fixture("qasm/" + name + ".qasm")));
}

// IR text ---------------------------------------------------------------

TEST(IrText, ParsesDocumentedForm) {
	const CircuitIR c = parse_ir("# comment\nqubits 3\nH 0\nX 2 [0,1]\nX 1 [] [0]\nSWAP 0,2\nmeasured 0,2\n");
	EXPECT_EQ(c.num_qubits, 3u);
	ASSERT_EQ(c.ops.size(), 4u);
	EXPECT_EQ(c.ops[1], make_gate(GateKind::X, {2}, {0, 1}));
	EXPECT_EQ(c.ops[2], make_gate(GateKind::X, {1}, {}, {0}));
	EXPECT_EQ(c.ops[3], make_gate(GateKind::Swap, {0, 2}));
	EXPECT_EQ(c.measured, (std::set<Qubit>{0, 2}));
}

TEST(IrText, RandomCircuitsRoundTrip) {
	std::mt19937_64 rng(3);
	for (int trial = 0; trial < 200; ++trial) {
		const CircuitIR c = test::random_circuit(rng, 1 + trial % 5, 6);
		EXPECT_EQ(parse_ir(format_ir(c)), c) << format_ir(c);
	}
}

TEST(IrText, FixturesAreCanonical) {
	for (const auto &name : test::ir_fixture_names()) {
		const CircuitIR c = expected_ir(name);
		EXPECT_EQ(parse_ir(format_ir(c)), c) << name;
	}
}

TEST(IrText, SyntaxErrors) {
	for (const char *bad : {"", "H 0\n", "qubits x\n", "qubits 2\nFOO 0\n", "qubits 2\nH\n", "qubits 2\nH 0 [1\n",
	                        "qubits 2\nH 5\n", "qubits 2\nmeasured a\n"}) {
		const std::string code = error_code_of([&] { parse_ir(bad); });
		EXPECT_TRUE(code == "E_IR_SYNTAX" || code == "E_BAD_CIRCUIT" || code == "E_UNSUPPORTED_GATE")
			<< "'" << bad << "' gave " << code;
	}
}

// Quirk -----------------------------------------------------------------

TEST(Quirk, BellUrlDecodesToTwoColumns) {
	const QuirkDocument doc = parse_quirk_url(R"(https://algassert.com/quirk#circuit={"cols":[["H"],["•","X"]]})");
	ASSERT_EQ(doc.cols.size(), 2u);
	EXPECT_EQ(doc.cols[0], (std::vector<std::string>{"H"}));
	EXPECT_EQ(doc.cols[1], (std::vector<std::string>{"•", "X"}));
	CircuitIR bell;
	bell.num_qubits = 2;
	bell.ops = {make_gate(GateKind::H, {0}), make_gate(GateKind::X, {1}, {0})};
	EXPECT_EQ(lower_quirk(doc), bell);
}

TEST(Quirk, PercentEncodedAndRawFragmentsAgree) {
	const std::string raw = R"(https://algassert.com/quirk#circuit={"cols":[["H"],["•","X"]]})";
	const std::string encoded =
		"https://algassert.com/quirk#circuit=%7B%22cols%22%3A%5B%5B%22H%22%5D%2C%5B%22%E2%80%A2%22%2C%22X%22%5D%5D%7D";
	EXPECT_EQ(parse_quirk_url(raw), parse_quirk_url(encoded));
	EXPECT_EQ(percent_decode("a%20b%2"), "a b%2");
}

TEST(Quirk, FixturesLowerToExpectedIr) {
	for (const auto &name : test::ir_fixture_names()) {
		EXPECT_EQ(from_quirk(name), expected_ir(name)) << name;
	}
}

TEST(Quirk, NumericIdentityCellsAndTrailingRows) {
	const QuirkDocument doc = parse_quirk_json(R"({"cols":[[1,"H"],["X"]]})");
	EXPECT_EQ(doc.cols[0][0], "1");
	const CircuitIR c = lower_quirk(doc);
	EXPECT_EQ(c.num_qubits, 2u);
	EXPECT_EQ(c.ops, (std::vector<GateOp>{make_gate(GateKind::H, {1}), make_gate(GateKind::X, {0})}));
	EXPECT_EQ(lower_quirk(parse_quirk_json(R"({"cols":[["H",1,1]]})")).num_qubits, 3u);
	EXPECT_EQ(lower_quirk(parse_quirk_json(R"({"cols":[]})")).num_qubits, 1u);
}

TEST(Quirk, ColumnControlsApplyToEveryGate) {
	const CircuitIR c = lower_quirk(parse_quirk_json(R"({"cols":[["•","X","◦","Z"]]})"));
	EXPECT_EQ(c.ops, (std::vector<GateOp>{make_gate(GateKind::X, {1}, {0}, {2}), make_gate(GateKind::Z, {3}, {0}, {2})}));
}

TEST(Quirk, Errors) {
	EXPECT_EQ(error_code_of([] { parse_quirk_url("https://algassert.com/quirk"); }), "E_NO_FRAGMENT");
	EXPECT_EQ(error_code_of([] { parse_quirk_json("{\"cols\":[[\"H\""); }), "E_BAD_JSON");
	EXPECT_EQ(error_code_of([] { parse_quirk_json("[1,2]"); }), "E_BAD_SHAPE");
	EXPECT_EQ(error_code_of([] { parse_quirk_json(R"({"cols":["H"]})"); }), "E_BAD_SHAPE");
	EXPECT_EQ(error_code_of([] { parse_quirk_json(R"({"cols":[[true]]})"); }), "E_BAD_SHAPE");
	auto lower = [](const char *json) { return error_code_of([&] { lower_quirk(parse_quirk_json(json)); }); };
	EXPECT_EQ(lower(R"({"cols":[["X^½"]]})"), "E_UNSUPPORTED_GATE");
	EXPECT_EQ(lower(R"({"cols":[["Bloch"]]})"), "E_UNSUPPORTED_GATE");
	EXPECT_EQ(lower(R"({"cols":[[{"id":"~f00"}]]})"), "E_UNSUPPORTED_GATE");
	EXPECT_EQ(lower(R"({"cols":[["Swap","X"]]})"), "E_LONELY_SWAP");
	EXPECT_EQ(lower(R"({"cols":[["Swap","Swap","Swap"]]})"), "E_LONELY_SWAP");
	EXPECT_EQ(lower(R"({"cols":[["•",1,"◦"]]})"), "E_CONTROL_ONLY_COLUMN");
	EXPECT_EQ(lower(R"({"cols":[["Measure"],["X"]]})"), "E_OP_AFTER_MEASURE");
	EXPECT_EQ(lower(R"({"cols":[["Measure","H"],["•","X"]]})"), "E_OP_AFTER_MEASURE");
}

TEST(Quirk, UnsupportedTokenReportsPosition) {
	try {
		lower_quirk(parse_quirk_json(R"({"cols":[["H"],[1,"Y^t"]]})"));
		FAIL() << "expected an error";
	} catch (const Error &e) {
		EXPECT_NE(std::string(e.what()).find("column 1, row 1"), std::string::npos) << e.what();
	}
}

TEST(Quirk, RenderThenParseIsIdentity) {
	std::mt19937_64 rng(8);
	for (int trial = 0; trial < 200; ++trial) {
		const CircuitIR c = test::random_circuit(rng, 1 + trial % 4, 5);
		const QuirkDocument doc = test::circuit_to_quirk(c);
		EXPECT_EQ(parse_quirk_url(test::render_quirk_url(doc, true)), doc);
		EXPECT_EQ(parse_quirk_url(test::render_quirk_url(doc, false)), doc);
		EXPECT_EQ(lower_quirk(doc), c) << format_ir(c);
	}
}

// OpenQASM --------------------------------------------------------------

TEST(Qasm, BellProgram) {
	const CircuitIR c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n"
	                               "h q[0];\ncx q[0],q[1];\nmeasure q -> c;\n");
	EXPECT_EQ(c, expected_ir("bell_measured"));
}

TEST(Qasm, FixturesParseToExpectedIr) {
	for (const auto &name : test::paired_fixture_names()) {
		EXPECT_EQ(from_qasm(name), expected_ir(name)) << name;
	}
}

TEST(Qasm, CommentsAndWhitespaceAreIgnored) {
	const CircuitIR c = parse_qasm("// header\nOPENQASM 2.0; qreg q[3];\n  ccx q[0], q[1], q[2]; // toffoli\n");
	ASSERT_EQ(c.ops.size(), 1u);
	EXPECT_EQ(c.ops[0], make_gate(GateKind::X, {2}, {0, 1}));
}

TEST(Qasm, Errors) {
	auto code = [](const std::string &body) { return error_code_of([&] { parse_qasm(body); }); };
	const std::string head = "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\n";
	EXPECT_EQ(code("OPENQASM 3.0;\nqreg q[1];\n"), "E_QASM_UNSUPPORTED");
	EXPECT_EQ(code("qreg q[1];\n"), "E_QASM_SYNTAX");
	EXPECT_EQ(code("OPENQASM 2.0;\ninclude \"other.inc\";\nqreg q[1];\n"), "E_QASM_UNSUPPORTED");
	EXPECT_EQ(code(head + "rx(0.5) q[0];\n"), "E_QASM_UNSUPPORTED");
	EXPECT_EQ(code(head + "gate foo a { x a; }\n"), "E_QASM_UNSUPPORTED");
	EXPECT_EQ(code(head + "qreg r[1];\n"), "E_QASM_UNSUPPORTED");
	EXPECT_EQ(code(head + "x q[2];\n"), "E_QASM_INDEX");
	EXPECT_EQ(code(head + "x q[0]\n"), "E_QASM_SYNTAX");
	EXPECT_EQ(code(head + "cx q[0],q[0];\n"), "E_QASM_SYNTAX");
	EXPECT_EQ(code(head + "x r[0];\n"), "E_QASM_SYNTAX");
	EXPECT_EQ(code(head + "measure q[0] -> c[0];\nx q[0];\n"), "E_OP_AFTER_MEASURE");
	EXPECT_EQ(code("OPENQASM 2.0;\n"), "E_QASM_SYNTAX");
}

TEST(Qasm, ErrorsCarryLineNumbers) {
	try {
		parse_qasm("OPENQASM 2.0;\nqreg q[1];\n\nrz(1) q[0];\n");
		FAIL() << "expected an error";
	} catch (const Error &e) {
		EXPECT_EQ(std::string(e.what()).rfind("line 4:", 0), 0u) << e.what();
	}
}

// Cross-path ------------------------------------------------------------

TEST(CrossPath, QuirkAndQasmYieldIdenticalIr) {
	const auto names = test::paired_fixture_names();
	ASSERT_GE(names.size(), 8u);
	for (const auto &name : names) {
		EXPECT_EQ(from_quirk(name), from_qasm(name)) << name;
	}
}

TEST(CrossPath, EmittedQasmRoundTrips) {
	for (const auto &name : test::paired_fixture_names()) {
		const CircuitIR c = expected_ir(name);
		EXPECT_EQ(parse_qasm(emit_qasm(c)), c) << name;
	}
}

} // namespace
} // namespace qsf
