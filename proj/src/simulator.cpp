// SPDX-License-Identifier: Apache-2.0
#include "qsf/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qsf/error.hpp"

namespace qsf {

namespace {

using Matrix2 = std::array<Amplitude, 4>;

Matrix2 matrix_for(GateKind kind) {
	constexpr double r = 0.70710678118654752440;
	const Amplitude i{0.0, 1.0};
	switch (kind) {
	case GateKind::H: return {r, r, r, -r};
	case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
	case GateKind::Y: return {0.0, -i, i, 0.0};
	case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
	case GateKind::S: return {1.0, 0.0, 0.0, i};
	case GateKind::T: return {1.0, 0.0, 0.0, Amplitude{r, r}};
	case GateKind::Swap: break;
	}
	throw Error("E_BAD_CIRCUIT", "SWAP has no 2x2 matrix");
}

std::uint64_t mask_of(const std::vector<Qubit> &qubits) {
	std::uint64_t mask = 0;
	for (Qubit q : qubits) {
		mask |= std::uint64_t{1} << q;
	}
	return mask;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t &state) noexcept {
	std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) noexcept {
	for (auto &word : state_) {
		word = splitmix64(seed);
	}
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() noexcept {
	auto &s = state_;
	const std::uint64_t result = std::rotl(s[1] * 5, 7) * 9;
	const std::uint64_t t = s[1] << 17;
	s[2] ^= s[0];
	s[3] ^= s[1];
	s[1] ^= s[2];
	s[0] ^= s[3];
	s[2] ^= t;
	s[3] = std::rotl(s[3], 45);
	return result;
}

double Xoshiro256StarStar::next_unit() noexcept {
	return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

void apply_gate(std::span<Amplitude> state, const GateOp &op) {
	const std::uint64_t pos = mask_of(op.pos_controls);
	const std::uint64_t neg = mask_of(op.neg_controls);
	auto enabled = [&](std::uint64_t i) { return (i & pos) == pos && (i & neg) == 0; };
	const std::uint64_t size = state.size();

	if (op.kind == GateKind::Swap) {
		const std::uint64_t a = std::uint64_t{1} << op.targets[0];
		const std::uint64_t b = std::uint64_t{1} << op.targets[1];
		for (std::uint64_t i = 0; i < size; ++i) {
			if ((i & a) != 0 && (i & b) == 0 && enabled(i)) {
				std::swap(state[i], state[i ^ a ^ b]);
			}
		}
		return;
	}

	const Matrix2 m = matrix_for(op.kind);
	const std::uint64_t t = std::uint64_t{1} << op.targets[0];
	for (std::uint64_t i = 0; i < size; ++i) {
		if ((i & t) != 0 || !enabled(i)) {
			continue;
		}
		const Amplitude a0 = state[i];
		const Amplitude a1 = state[i | t];
		state[i] = m[0] * a0 + m[1] * a1;
		state[i | t] = m[2] * a0 + m[3] * a1;
	}
}

Statevector run_statevector(const CircuitIR &circuit) {
	if (circuit.num_qubits > kMaxSimulatedQubits) {
		throw Error("E_TOO_LARGE", std::to_string(circuit.num_qubits) + " qubits exceeds the simulator limit of " +
		                               std::to_string(kMaxSimulatedQubits));
	}
	validate_circuit(circuit);
	Statevector state(std::size_t{1} << circuit.num_qubits);
	state[0] = 1.0;
	for (const auto &op : circuit.ops) {
		apply_gate(state, op);
	}
	return state;
}

std::vector<double> outcome_probabilities(std::span<const Amplitude> state, std::span<const Qubit> measured) {
	std::vector<double> probs(std::size_t{1} << measured.size(), 0.0);
	for (std::uint64_t i = 0; i < state.size(); ++i) {
		std::uint64_t outcome = 0;
		for (std::size_t j = 0; j < measured.size(); ++j) {
			outcome |= ((i >> measured[j]) & 1U) << j;
		}
		probs[outcome] += std::norm(state[i]);
	}
	return probs;
}

std::string outcome_key(std::uint64_t outcome, std::size_t width) {
	std::string key(width, '0');
	for (std::size_t j = 0; j < width; ++j) {
		if ((outcome >> j) & 1U) {
			key[width - 1 - j] = '1';
		}
	}
	return key;
}

ExecutionResult sample_counts(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed) {
	if (shots < 1 || shots > kMaxShots) {
		throw Error("E_BAD_SHOTS", "shots must be within [1, " + std::to_string(kMaxShots) + "]");
	}
	const Statevector state = run_statevector(circuit);
	const std::vector<Qubit> measured = effective_measured(circuit);
	const std::vector<double> probs = outcome_probabilities(state, measured);

	std::vector<double> cdf(probs.size());
	double acc = 0.0;
	std::size_t last_nonzero = 0;
	for (std::size_t k = 0; k < probs.size(); ++k) {
		acc += probs[k];
		cdf[k] = acc;
		if (probs[k] > 0.0) {
			last_nonzero = k;
		}
	}

	Xoshiro256StarStar rng(seed);
	std::vector<std::uint64_t> tally(probs.size(), 0);
	for (std::uint64_t s = 0; s < shots; ++s) {
		const double u = rng.next_unit();
		auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
		const std::size_t k = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
		++tally[k];
	}

	ExecutionResult result;
	result.shots = shots;
	result.seed = seed;
	result.backend_id = "local-simulator";
	for (std::size_t k = 0; k < tally.size(); ++k) {
		if (tally[k] != 0) {
			result.counts.emplace(outcome_key(k, measured.size()), tally[k]);
		}
	}
	return result;
}

} // namespace qsf
