// Copyright 2026 The Flying Unicorn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLYUNICORN_QSIM_HPP
#define FLYUNICORN_QSIM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace flyunicorn::qsim {

using amplitude_t = std::complex<double>;

inline constexpr unsigned kMaxQubits = 20;

/// Dense statevector over 2^n computational basis states. Basis index bit i
/// holds the value of qubit i.
class StateVector {
   public:
    /// Ground state |0...0>. Throws std::invalid_argument unless 1 <= n <= 20.
    explicit StateVector(unsigned n_qubits);

    /// Takes ownership of explicit amplitudes; the length must be a power of
    /// two within the qubit range. No normalization is applied.
    static StateVector from_amplitudes(std::vector<amplitude_t> amplitudes);

    unsigned n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const amplitude_t> amplitudes() const noexcept { return amplitudes_; }
    std::span<amplitude_t> amplitudes() noexcept { return amplitudes_; }
    const amplitude_t &operator[](std::size_t index) const { return amplitudes_[index]; }

    /// Sum of |amplitude|^2.
    double norm_squared() const noexcept;

   private:
    StateVector() = default;

    unsigned n_qubits_ = 0;
    std::vector<amplitude_t> amplitudes_;
};

enum class GateKind { X, H, Z, U3, PhaseFlip, Diffusion };

/// One unitary operation. Single-qubit kinds use `target`; PhaseFlip uses
/// `basis_index`; Diffusion acts on the whole register.
struct GateOp {
    GateKind kind = GateKind::X;
    unsigned target = 0;
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    std::uint64_t basis_index = 0;

    static GateOp x(unsigned target) { return {GateKind::X, target}; }
    static GateOp h(unsigned target) { return {GateKind::H, target}; }
    static GateOp z(unsigned target) { return {GateKind::Z, target}; }
    static GateOp u3(unsigned target, double theta, double phi, double lambda) {
        return {GateKind::U3, target, theta, phi, lambda};
    }
    static GateOp phase_flip(std::uint64_t basis_index) {
        GateOp op{GateKind::PhaseFlip};
        op.basis_index = basis_index;
        return op;
    }
    static GateOp diffusion() { return {GateKind::Diffusion}; }
};

/// Row-major 2x2 unitary.
using Matrix2 = std::array<amplitude_t, 4>;

/// U3(theta, phi, lambda) =
///   [ cos(t/2)            -e^{i l} sin(t/2)      ]
///   [ e^{i p} sin(t/2)     e^{i(p+l)} cos(t/2)   ]
Matrix2 u3_matrix(double theta, double phi, double lambda);

/// 2x2 matrix of a single-qubit gate kind. Throws for register-wide kinds.
Matrix2 single_qubit_matrix(const GateOp &op);

/// Readout error: each measured bit is flipped independently with
/// probability `readout_flip_prob`.
struct NoiseModel {
    double readout_flip_prob = 0.0;

    NoiseModel() = default;
    /// Throws std::invalid_argument outside [0, 1].
    explicit NoiseModel(double flip_prob);

    static NoiseModel ideal() { return NoiseModel{}; }
    bool is_ideal() const noexcept { return readout_flip_prob == 0.0; }
};

/// Histogram of measured bitstrings. Keys are n_qubits characters wide and
/// read with the highest-index qubit leftmost, so "1011" is basis value 11.
/// Outcomes that never occurred are not stored.
class MeasurementCounts {
   public:
    MeasurementCounts() = default;
    MeasurementCounts(unsigned n_qubits, std::map<std::string, std::uint64_t> counts);

    /// Builds from counts indexed by basis value.
    static MeasurementCounts from_values(unsigned n_qubits, const std::map<std::uint64_t, std::uint64_t> &by_value);

    unsigned n_qubits() const noexcept { return n_qubits_; }
    std::uint64_t shots() const noexcept { return shots_; }
    const std::map<std::string, std::uint64_t> &items() const noexcept { return counts_; }

    std::uint64_t count(std::string_view bitstring) const;
    std::uint64_t count_of(std::uint64_t basis_value) const;

    /// All 2^n counts ordered by basis value, zeros included.
    std::vector<std::uint64_t> dense() const;

    /// Python-dict style rendering: {'0': 944, '1': 56}
    std::string to_display_string() const;

    /// JSON object keyed by bitstring. With `include_zeros` every basis
    /// state appears.
    nlohmann::json to_json(bool include_zeros = false) const;

    bool operator==(const MeasurementCounts &) const = default;

   private:
    unsigned n_qubits_ = 0;
    std::uint64_t shots_ = 0;
    std::map<std::string, std::uint64_t> counts_;
};

std::string to_bitstring(std::uint64_t value, unsigned width);
std::uint64_t from_bitstring(std::string_view bits);

StateVector new_state(unsigned n_qubits);

/// Applies the gate's unitary. Throws std::invalid_argument when the target
/// or basis index is out of range or an angle is not finite.
StateVector apply_gate(StateVector state, const GateOp &op);

/// In-place variant of apply_gate.
void apply_gate_in_place(StateVector &state, const GateOp &op);

/// |amplitude[basis_index]|^2.
double probability(const StateVector &state, std::uint64_t basis_index);

/// Per-basis-state probabilities.
std::vector<double> probabilities(const StateVector &state);

/// Samples `shots` outcomes by inverse CDF, then flips each bit of each
/// outcome with the noise model's readout probability. Deterministic in
/// (state, shots, noise, seed).
MeasurementCounts measure(const StateVector &state, std::uint64_t shots, const NoiseModel &noise, std::uint64_t seed);

}  // namespace flyunicorn::qsim

#endif
