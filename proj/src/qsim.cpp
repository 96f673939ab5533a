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

#include "flyunicorn/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "flyunicorn/random.hpp"

namespace flyunicorn::qsim {

namespace {

void check_qubit_count(unsigned n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument(
            fmt::format("qubit count must be in [1, {}], got {}", kMaxQubits, n_qubits));
    }
}

void apply_single_qubit(std::span<amplitude_t> amps, unsigned target, const Matrix2 &m) {
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const amplitude_t a = amps[i];
            const amplitude_t b = amps[i + stride];
            amps[i] = m[0] * a + m[1] * b;
            amps[i + stride] = m[2] * a + m[3] * b;
        }
    }
}

}  // namespace

StateVector::StateVector(unsigned n_qubits) {
    check_qubit_count(n_qubits);
    n_qubits_ = n_qubits;
    amplitudes_.assign(std::size_t{1} << n_qubits, amplitude_t{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<amplitude_t> amplitudes) {
    const std::size_t size = amplitudes.size();
    if (size < 2 || !std::has_single_bit(size)) {
        throw std::invalid_argument(fmt::format("amplitude count must be a power of two >= 2, got {}", size));
    }
    const auto n = static_cast<unsigned>(std::countr_zero(size));
    check_qubit_count(n);
    StateVector out;
    out.n_qubits_ = n;
    out.amplitudes_ = std::move(amplitudes);
    return out;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

Matrix2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {
        amplitude_t{c, 0.0},
        -std::polar(s, lambda),
        std::polar(s, phi),
        std::polar(c, phi + lambda),
    };
}

Matrix2 single_qubit_matrix(const GateOp &op) {
    constexpr double r = 1.0 / std::numbers::sqrt2;
    switch (op.kind) {
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::H:
            return {r, r, r, -r};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::U3:
            return u3_matrix(op.theta, op.phi, op.lambda);
        case GateKind::PhaseFlip:
        case GateKind::Diffusion:
            break;
    }
    throw std::invalid_argument("gate kind has no single-qubit matrix");
}

NoiseModel::NoiseModel(double flip_prob) : readout_flip_prob(flip_prob) {
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
        throw std::invalid_argument(fmt::format("readout flip probability must be in [0, 1], got {}", flip_prob));
    }
}

std::string to_bitstring(std::uint64_t value, unsigned width) {
    std::string out(width, '0');
    for (unsigned i = 0; i < width; ++i) {
        if ((value >> i) & 1U) {
            out[width - 1 - i] = '1';
        }
    }
    return out;
}

std::uint64_t from_bitstring(std::string_view bits) {
    if (bits.empty() || bits.size() > 64) {
        throw std::invalid_argument(fmt::format("bitstring length must be in [1, 64], got {}", bits.size()));
    }
    std::uint64_t value = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(fmt::format("bitstring '{}' contains a non-binary character", bits));
        }
        value = (value << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return value;
}

MeasurementCounts::MeasurementCounts(unsigned n_qubits, std::map<std::string, std::uint64_t> counts)
    : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    for (auto it = counts.begin(); it != counts.end();) {
        if (it->first.size() != n_qubits) {
            throw std::invalid_argument(
                fmt::format("outcome '{}' does not have {} characters", it->first, n_qubits));
        }
        from_bitstring(it->first);
        shots_ += it->second;
        it = it->second == 0 ? counts.erase(it) : std::next(it);
    }
    counts_ = std::move(counts);
}

MeasurementCounts MeasurementCounts::from_values(unsigned n_qubits,
                                                 const std::map<std::uint64_t, std::uint64_t> &by_value) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto &[value, count] : by_value) {
        if (n_qubits < 64 && value >> n_qubits) {
            throw std::invalid_argument(fmt::format("outcome {} out of range for {} qubits", value, n_qubits));
        }
        counts[to_bitstring(value, n_qubits)] += count;
    }
    return MeasurementCounts(n_qubits, std::move(counts));
}

std::uint64_t MeasurementCounts::count(std::string_view bitstring) const {
    const auto it = counts_.find(std::string(bitstring));
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t MeasurementCounts::count_of(std::uint64_t basis_value) const {
    return count(to_bitstring(basis_value, n_qubits_));
}

std::vector<std::uint64_t> MeasurementCounts::dense() const {
    std::vector<std::uint64_t> out(std::size_t{1} << n_qubits_, 0);
    for (const auto &[key, count] : counts_) {
        out[from_bitstring(key)] = count;
    }
    return out;
}

std::string MeasurementCounts::to_display_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto &[key, count] : counts_) {
        out += fmt::format("{}'{}': {}", first ? "" : ", ", key, count);
        first = false;
    }
    return out + "}";
}

nlohmann::json MeasurementCounts::to_json(bool include_zeros) const {
    auto out = nlohmann::json::object();
    if (include_zeros) {
        const auto all = dense();
        for (std::size_t v = 0; v < all.size(); ++v) {
            out[to_bitstring(v, n_qubits_)] = all[v];
        }
    } else {
        for (const auto &[key, count] : counts_) {
            out[key] = count;
        }
    }
    return out;
}

StateVector new_state(unsigned n_qubits) { return StateVector(n_qubits); }

void apply_gate_in_place(StateVector &state, const GateOp &op) {
    auto amps = state.amplitudes();
    switch (op.kind) {
        case GateKind::X:
        case GateKind::H:
        case GateKind::Z:
        case GateKind::U3: {
            if (op.target >= state.n_qubits()) {
                throw std::invalid_argument(
                    fmt::format("target qubit {} out of range for {} qubits", op.target, state.n_qubits()));
            }
            if (!std::isfinite(op.theta) || !std::isfinite(op.phi) || !std::isfinite(op.lambda)) {
                throw std::invalid_argument("gate angles must be finite");
            }
            apply_single_qubit(amps, op.target, single_qubit_matrix(op));
            return;
        }
        case GateKind::PhaseFlip: {
            if (op.basis_index >= amps.size()) {
                throw std::invalid_argument(
                    fmt::format("basis index {} out of range for dimension {}", op.basis_index, amps.size()));
            }
            amps[op.basis_index] = -amps[op.basis_index];
            return;
        }
        case GateKind::Diffusion: {
            // 2|s><s| - I: reflect every amplitude about the mean.
            amplitude_t mean{0.0, 0.0};
            for (const auto &a : amps) {
                mean += a;
            }
            mean /= static_cast<double>(amps.size());
            for (auto &a : amps) {
                a = 2.0 * mean - a;
            }
            return;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

StateVector apply_gate(StateVector state, const GateOp &op) {
    apply_gate_in_place(state, op);
    return state;
}

double probability(const StateVector &state, std::uint64_t basis_index) {
    if (basis_index >= state.dimension()) {
        throw std::invalid_argument(
            fmt::format("basis index {} out of range for dimension {}", basis_index, state.dimension()));
    }
    return std::norm(state[basis_index]);
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> out;
    out.reserve(state.dimension());
    for (const auto &a : state.amplitudes()) {
        out.push_back(std::norm(a));
    }
    return out;
}

MeasurementCounts measure(const StateVector &state, std::uint64_t shots, const NoiseModel &noise, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    std::vector<double> cdf = probabilities(state);
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    const double total = cdf.back();

    Rng rng(seed);
    const unsigned n = state.n_qubits();
    const double flip = noise.readout_flip_prob;
    std::map<std::uint64_t, std::uint64_t> tally;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // Skip zero-probability tail entries that rounding could select.
        if (it == cdf.end()) {
            it = std::lower_bound(cdf.begin(), cdf.end(), total);
        }
        auto outcome = static_cast<std::uint64_t>(it - cdf.begin());
        if (flip > 0.0) {
            for (unsigned bit = 0; bit < n; ++bit) {
                if (rng.bernoulli(flip)) {
                    outcome ^= std::uint64_t{1} << bit;
                }
            }
        }
        ++tally[outcome];
    }
    return MeasurementCounts::from_values(n, tally);
}

}  // namespace flyunicorn::qsim
