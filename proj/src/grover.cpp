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

#include "flyunicorn/grover.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "flyunicorn/random.hpp"

namespace flyunicorn::grover {

namespace {
constexpr std::uint64_t kSweepStream = 11;
}

void GroverConfig::validate() const {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) {
        throw std::invalid_argument(
            fmt::format("grover qubit count must be in [1, {}], got {}", qsim::kMaxQubits, n_qubits));
    }
    if (secret >= (std::uint64_t{1} << n_qubits)) {
        throw std::invalid_argument(
            fmt::format("secret {} outside [0, {})", secret, std::uint64_t{1} << n_qubits));
    }
    if (shots < 1) {
        throw std::invalid_argument("shots must be at least 1");
    }
}

qsim::StateVector grover_state(const GroverConfig &cfg) {
    cfg.validate();
    qsim::StateVector state(cfg.n_qubits);
    for (unsigned q = 0; q < cfg.n_qubits; ++q) {
        qsim::apply_gate_in_place(state, qsim::GateOp::h(q));
    }
    const auto oracle = qsim::GateOp::phase_flip(cfg.secret);
    const auto diffusion = qsim::GateOp::diffusion();
    for (unsigned k = 0; k < cfg.iterations; ++k) {
        qsim::apply_gate_in_place(state, oracle);
        qsim::apply_gate_in_place(state, diffusion);
    }
    return state;
}

std::uint64_t argmax_outcome(const qsim::MeasurementCounts &counts) {
    // items() is ordered by bitstring, which is ascending basis value.
    std::uint64_t best_value = 0;
    std::uint64_t best_count = 0;
    bool any = false;
    for (const auto &[key, count] : counts.items()) {
        if (!any || count > best_count) {
            best_value = qsim::from_bitstring(key);
            best_count = count;
            any = true;
        }
    }
    return best_value;
}

GroverResult grover_search(const GroverConfig &cfg, const qsim::NoiseModel &noise, std::uint64_t seed) {
    GroverResult result;
    result.counts = qsim::measure(grover_state(cfg), cfg.shots, noise, seed);
    result.argmax = argmax_outcome(result.counts);
    result.success = result.argmax == cfg.secret;
    return result;
}

double theoretical_success_prob(std::uint64_t n_states, unsigned iterations) {
    if (n_states < 2) {
        throw std::invalid_argument(fmt::format("search space needs at least 2 states, got {}", n_states));
    }
    const double angle = std::asin(1.0 / std::sqrt(static_cast<double>(n_states)));
    const double s = std::sin((2.0 * iterations + 1.0) * angle);
    return s * s;
}

std::vector<SweepRow> noise_sweep(const GroverConfig &cfg, const std::vector<double> &flip_probs,
                                  std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    // The pre-measurement state does not depend on noise.
    const auto state = grover_state(cfg);
    std::vector<SweepRow> rows;
    rows.reserve(flip_probs.size());
    for (std::size_t row = 0; row < flip_probs.size(); ++row) {
        const qsim::NoiseModel noise(flip_probs[row]);
        SweepRow out{flip_probs[row], trials, 0};
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto counts = qsim::measure(state, cfg.shots, noise, derive_seed(seed, kSweepStream + row, t));
            out.successes += argmax_outcome(counts) == cfg.secret;
        }
        rows.push_back(out);
    }
    return rows;
}

}  // namespace flyunicorn::grover
