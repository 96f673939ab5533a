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

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace flyunicorn::qsim;

namespace {

constexpr double kPi = std::numbers::pi;

// Random unit-norm state of n qubits.
StateVector random_state(unsigned n, std::mt19937_64 &gen) {
    std::normal_distribution<double> g;
    std::vector<amplitude_t> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = {g(gen), g(gen)};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(amps);
}

GateOp random_gate(unsigned n, std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    std::uniform_int_distribution<unsigned> target(0, n - 1);
    std::uniform_int_distribution<std::uint64_t> basis(0, (std::uint64_t{1} << n) - 1);
    switch (gen() % 6) {
        case 0:
            return GateOp::x(target(gen));
        case 1:
            return GateOp::h(target(gen));
        case 2:
            return GateOp::z(target(gen));
        case 3:
            return GateOp::u3(target(gen), angle(gen), angle(gen), angle(gen));
        case 4:
            return GateOp::phase_flip(basis(gen));
        default:
            return GateOp::diffusion();
    }
}

oracle::Matrix oracle_for(const GateOp &op, unsigned n) {
    const std::size_t dim = std::size_t{1} << n;
    switch (op.kind) {
        case GateKind::X:
            return oracle::lift(oracle::pauli_x(), op.target, n);
        case GateKind::H:
            return oracle::lift(oracle::hadamard(), op.target, n);
        case GateKind::Z:
            return oracle::lift(oracle::pauli_z(), op.target, n);
        case GateKind::U3:
            return oracle::lift(oracle::u3(op.theta, op.phi, op.lambda), op.target, n);
        case GateKind::PhaseFlip:
            return oracle::phase_oracle(dim, op.basis_index);
        case GateKind::Diffusion:
            return oracle::diffusion(dim);
    }
    return oracle::Matrix::identity(dim);
}

std::vector<oracle::cplx> as_vector(const StateVector &s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

}  // namespace

TEST(qsim, new_state_is_all_zero_basis) {
    auto s = new_state(3);
    ASSERT_EQ(s.dimension(), 8u);
    ASSERT_EQ(s[0], amplitude_t(1.0));
    for (std::size_t i = 1; i < 8; ++i) {
        ASSERT_EQ(s[i], amplitude_t(0.0));
    }
}

TEST(qsim, qubit_count_bounds) {
    ASSERT_THROW(StateVector(0), std::invalid_argument);
    ASSERT_THROW(StateVector(21), std::invalid_argument);
    ASSERT_NO_THROW(StateVector(1));
}

TEST(qsim, from_amplitudes_validates) {
    ASSERT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
    ASSERT_THROW(StateVector::from_amplitudes({1.0}), std::invalid_argument);
}

TEST(qsim, gate_validation) {
    auto s = new_state(2);
    ASSERT_THROW(apply_gate(s, GateOp::x(2)), std::invalid_argument);
    ASSERT_THROW(apply_gate(s, GateOp::phase_flip(4)), std::invalid_argument);
    ASSERT_THROW(apply_gate(s, GateOp::u3(0, std::nan(""), 0, 0)), std::invalid_argument);
    ASSERT_THROW(apply_gate(s, GateOp::u3(0, INFINITY, 0, 0)), std::invalid_argument);
}

TEST(qsim, hadamard_gives_half) {
    auto s = apply_gate(new_state(1), GateOp::h(0));
    ASSERT_NEAR(probability(s, 0), 0.5, 1e-12);
    ASSERT_NEAR(probability(s, 1), 0.5, 1e-12);
}

TEST(qsim, x_flips) {
    auto s = apply_gate(new_state(1), GateOp::x(0));
    ASSERT_NEAR(probability(s, 1), 1.0, 1e-15);
}

TEST(qsim, u3_half_pi_is_half) {
    auto s = apply_gate(new_state(1), GateOp::u3(0, kPi / 2, 0, 0));
    ASSERT_NEAR(probability(s, 1), 0.5, 1e-12);
}

TEST(qsim, bitstring_round_trip) {
    ASSERT_EQ(to_bitstring(11, 4), "1011");
    ASSERT_EQ(from_bitstring("1011"), 11u);
    ASSERT_EQ(to_bitstring(1, 3), "001");
    ASSERT_THROW(from_bitstring("10a"), std::invalid_argument);
    for (std::uint64_t v = 0; v < 64; ++v) {
        ASSERT_EQ(from_bitstring(to_bitstring(v, 6)), v);
    }
}

TEST(qsim, measure_zero_shots_throws) {
    ASSERT_THROW(measure(new_state(1), 0, {}, 1), std::invalid_argument);
}

TEST(qsim, noise_model_validates) {
    ASSERT_THROW(NoiseModel(-0.1), std::invalid_argument);
    ASSERT_THROW(NoiseModel(1.1), std::invalid_argument);
    ASSERT_NO_THROW(NoiseModel(1.0));
}

TEST(qsim, display_string_format) {
    MeasurementCounts counts(1, {{"0", 944}, {"1", 56}});
    ASSERT_EQ(counts.to_display_string(), "{'0': 944, '1': 56}");
    ASSERT_EQ(counts.shots(), 1000u);
}

TEST(qsim, counts_drop_zeros_and_dense) {
    auto counts = MeasurementCounts::from_values(2, {{0, 3}, {2, 0}, {3, 7}});
    ASSERT_EQ(counts.items().size(), 2u);
    ASSERT_EQ(counts.count("11"), 7u);
    ASSERT_EQ(counts.count_of(2), 0u);
    ASSERT_EQ(counts.dense(), (std::vector<std::uint64_t>{3, 0, 0, 7}));
    ASSERT_EQ(counts.to_json(true).size(), 4u);
    ASSERT_EQ(counts.to_json(false).size(), 2u);
}

TEST(qsim_property, gates_match_matrix_oracle) {
    std::mt19937_64 gen(12345);
    for (int trial = 0; trial < 300; ++trial) {
        unsigned n = 1 + gen() % 3;
        auto state = random_state(n, gen);
        auto op = random_gate(n, gen);
        auto got = apply_gate(state, op);
        auto want = oracle::apply(oracle_for(op, n), as_vector(state));
        for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_NEAR(std::abs(got[i] - want[i]), 0.0, 1e-12) << "trial " << trial << " index " << i;
        }
    }
}

TEST(qsim_property, gates_preserve_norm) {
    std::mt19937_64 gen(777);
    for (int trial = 0; trial < 200; ++trial) {
        unsigned n = 1 + gen() % 8;
        auto state = random_state(n, gen);
        for (int k = 0; k < 20; ++k) {
            apply_gate_in_place(state, random_gate(n, gen));
        }
        ASSERT_NEAR(state.norm_squared(), 1.0, 1e-10);
    }
}

TEST(qsim_property, u3_probability_law) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> angle(-4 * kPi, 4 * kPi);
    for (int trial = 0; trial < 500; ++trial) {
        double theta = angle(gen);
        auto s = apply_gate(new_state(1), GateOp::u3(0, theta, angle(gen), angle(gen)));
        double expect = std::pow(std::sin(theta / 2), 2);
        ASSERT_NEAR(probability(s, 1), expect, 1e-12);
    }
}

TEST(qsim_property, u3_pi_equals_x_up_to_phase) {
    for (unsigned n = 1; n <= 3; ++n) {
        for (unsigned t = 0; t < n; ++t) {
            auto a = apply_gate(new_state(n), GateOp::u3(t, kPi, 0, 0));
            auto b = apply_gate(new_state(n), GateOp::x(t));
            auto pa = probabilities(a);
            auto pb = probabilities(b);
            for (std::size_t i = 0; i < pa.size(); ++i) {
                ASSERT_NEAR(pa[i], pb[i], 1e-15);
            }
        }
    }
}

TEST(qsim_property, probabilities_sum_to_one) {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 100; ++trial) {
        unsigned n = 1 + gen() % 6;
        auto p = probabilities(random_state(n, gen));
        double sum = 0.0;
        for (double v : p) {
            ASSERT_GE(v, 0.0);
            sum += v;
        }
        ASSERT_NEAR(sum, 1.0, 1e-10);
    }
}

TEST(qsim_property, counts_sum_to_shots) {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 50; ++trial) {
        unsigned n = 1 + gen() % 5;
        std::uint64_t shots = 1 + gen() % 3000;
        double p = static_cast<double>(gen() % 100) / 100.0;
        auto counts = measure(random_state(n, gen), shots, NoiseModel(p), gen());
        std::uint64_t total = 0;
        for (const auto &[bits, c] : counts.items()) {
            ASSERT_EQ(bits.size(), n);
            ASSERT_GT(c, 0u);
            total += c;
        }
        ASSERT_EQ(total, shots);
        ASSERT_EQ(counts.shots(), shots);
    }
}

TEST(qsim_property, sampling_within_four_sigma) {
    std::mt19937_64 gen(99);
    const std::uint64_t shots = 20000;
    for (int trial = 0; trial < 20; ++trial) {
        unsigned n = 1 + gen() % 3;
        auto state = random_state(n, gen);
        auto p = probabilities(state);
        auto counts = measure(state, shots, {}, gen());
        for (std::size_t i = 0; i < p.size(); ++i) {
            double freq = static_cast<double>(counts.count_of(i)) / shots;
            double sigma = oracle::frequency_sigma(p[i], shots);
            ASSERT_LE(std::abs(freq - p[i]), 4 * sigma + 1e-12) << "outcome " << i;
        }
    }
}

TEST(qsim_property, readout_noise_law) {
    // Each bit flips independently, so a pure basis state |b> is read as b'
    // with probability p^d (1-p)^(n-d), d the Hamming distance.
    const std::uint64_t shots = 40000;
    const unsigned n = 3;
    for (double p : {0.05, 0.2, 0.5}) {
        auto s = apply_gate(apply_gate(new_state(n), GateOp::x(0)), GateOp::x(2));  // |101>
        auto counts = measure(s, shots, NoiseModel(p), 17);
        for (std::uint64_t v = 0; v < 8; ++v) {
            int d = std::popcount(v ^ 5u);
            double expect = std::pow(p, d) * std::pow(1 - p, n - d);
            double freq = static_cast<double>(counts.count_of(v)) / shots;
            ASSERT_LE(std::abs(freq - expect), 4 * oracle::frequency_sigma(expect, shots) + 1e-12);
        }
    }
}

TEST(qsim_property, full_flip_noise_inverts) {
    auto counts = measure(new_state(2), 100, NoiseModel(1.0), 3);
    ASSERT_EQ(counts.count("11"), 100u);
}

TEST(qsim_property, measurement_deterministic_per_seed) {
    auto s = apply_gate(new_state(2), GateOp::h(0));
    s = apply_gate(s, GateOp::h(1));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ASSERT_EQ(measure(s, 500, NoiseModel(0.1), seed), measure(s, 500, NoiseModel(0.1), seed));
    }
    ASSERT_NE(measure(s, 500, {}, 1), measure(s, 500, {}, 2));
}
