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

#ifndef FLYUNICORN_GROVER_HPP
#define FLYUNICORN_GROVER_HPP

#include <cstdint>
#include <vector>

#include "flyunicorn/qsim.hpp"

namespace flyunicorn::grover {

struct GroverConfig {
    unsigned n_qubits = 4;
    std::uint64_t secret = 0;
    unsigned iterations = 1;
    std::uint64_t shots = 100;

    /// Throws std::invalid_argument when the secret is outside [0, 2^n) or
    /// a size is out of range.
    void validate() const;
};

struct GroverResult {
    qsim::MeasurementCounts counts;
    std::uint64_t argmax = 0;
    bool success = false;
};

/// Uniform superposition followed by `iterations` rounds of oracle phase
/// flip on the secret and diffusion. No measurement.
qsim::StateVector grover_state(const GroverConfig &cfg);

GroverResult grover_search(const GroverConfig &cfg, const qsim::NoiseModel &noise, std::uint64_t seed);

/// Most frequent outcome; ties go to the smallest basis value.
std::uint64_t argmax_outcome(const qsim::MeasurementCounts &counts);

/// sin^2((2k + 1) * asin(1 / sqrt(N))).
double theoretical_success_prob(std::uint64_t n_states, unsigned iterations);

struct SweepRow {
    double flip_prob = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

/// For each flip probability, runs `trials` searches with distinct seeds and
/// records how often the argmax equals the secret. Rows follow the input order.
std::vector<SweepRow> noise_sweep(const GroverConfig &cfg, const std::vector<double> &flip_probs,
                                  std::uint64_t trials, std::uint64_t seed);

}  // namespace flyunicorn::grover

#endif
