// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qsf/circuit.hpp"

namespace qsf {

using Amplitude = std::complex<double>;
/// Dense amplitudes; basis index bit q is the value of qubit q.
using Statevector = std::vector<Amplitude>;

inline constexpr std::uint64_t kMaxShots = 1'000'000;

/// splitmix64 step; used to expand a 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t &state) noexcept;

/// xoshiro256** seeded from a single 64-bit value through four splitmix64
/// outputs. Models UniformRandomBitGenerator.
class Xoshiro256StarStar {
public:
	using result_type = std::uint64_t;

	explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

	static constexpr result_type min() noexcept { return 0; }
	static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

	result_type operator()() noexcept;
	/// Uniform double in [0, 1) built from the top 53 bits.
	double next_unit() noexcept;

private:
	std::array<std::uint64_t, 4> state_{};
};

/// Applies one gate in place. Requires every index of `op` < log2(state.size()).
void apply_gate(std::span<Amplitude> state, const GateOp &op);

/// Throws qsf::Error E_TOO_LARGE above kMaxSimulatedQubits.
Statevector run_statevector(const CircuitIR &circuit);

/// Marginal outcome distribution. Outcome index bit j is the value of measured[j].
std::vector<double> outcome_probabilities(std::span<const Amplitude> state, std::span<const Qubit> measured);

/// Bitstring for an outcome index; measured[0] is the rightmost character.
std::string outcome_key(std::uint64_t outcome, std::size_t width);

struct ExecutionResult {
	std::map<std::string, std::uint64_t> counts;
	std::uint64_t shots = 0;
	std::uint64_t seed = 0;
	std::string backend_id;

	bool operator==(const ExecutionResult &) const = default;
};

/// Draws `shots` samples from the measured marginal. Each draw takes
/// u = next_unit() and picks the first outcome whose cumulative probability
/// exceeds u. Pure function of (circuit, shots, seed).
ExecutionResult sample_counts(const CircuitIR &circuit, std::uint64_t shots, std::uint64_t seed);

} // namespace qsf
