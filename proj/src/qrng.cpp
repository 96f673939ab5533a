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

#include "flyunicorn/qrng.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

#include "flyunicorn/random.hpp"

namespace flyunicorn::qrng {

namespace {

enum Stream : std::uint64_t {
    kOneQubitBit = 1,
    kRangeAttempt = 2,
    kNameDraw = 3,
    kBiasTrial = 4,
};

constexpr std::uint64_t kMaxRejectionAttempts = 1'000'000;

qsim::StateVector uniform_superposition(unsigned n_qubits) {
    qsim::StateVector state(n_qubits);
    for (unsigned q = 0; q < n_qubits; ++q) {
        qsim::apply_gate_in_place(state, qsim::GateOp::h(q));
    }
    return state;
}

std::vector<std::uint8_t> bits_of(std::uint64_t value, unsigned width) {
    std::vector<std::uint8_t> bits(width);
    for (unsigned i = 0; i < width; ++i) {
        bits[i] = static_cast<std::uint8_t>((value >> i) & 1U);
    }
    return bits;
}

}  // namespace

RngMethod RngMethod::probabilistic(unsigned q, std::uint64_t shots) {
    RngMethod method{RngMethodKind::ProbabilisticMeasurement, q, shots};
    method.validate();
    return method;
}

void RngMethod::validate() const {
    if (kind != RngMethodKind::ProbabilisticMeasurement) {
        return;
    }
    if (qubits < 1 || qubits > qsim::kMaxQubits) {
        throw std::invalid_argument(fmt::format("q must be in [1, {}], got {}", qsim::kMaxQubits, qubits));
    }
    if (shots < (std::uint64_t{1} << qubits)) {
        throw std::invalid_argument(
            fmt::format("shots must be at least 2^q = {}, got {}", std::uint64_t{1} << qubits, shots));
    }
}

std::string_view to_string(RngMethodKind kind) {
    switch (kind) {
        case RngMethodKind::OneQubitPerBit:
            return "one_qubit";
        case RngMethodKind::MultiQubitSingleShot:
            return "multi_qubit";
        case RngMethodKind::ProbabilisticMeasurement:
            return "probabilistic";
    }
    return "unknown";
}

RngMethodKind parse_method_kind(std::string_view text) {
    if (text == "one_qubit" || text == "one") {
        return RngMethodKind::OneQubitPerBit;
    }
    if (text == "multi_qubit" || text == "multi") {
        return RngMethodKind::MultiQubitSingleShot;
    }
    if (text == "probabilistic") {
        return RngMethodKind::ProbabilisticMeasurement;
    }
    throw std::invalid_argument(
        fmt::format("unknown rng method '{}' (expected one_qubit, multi_qubit or probabilistic)", text));
}

RandomInteger::RandomInteger(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::size_t i = bits_.size(); i-- > 0;) {
        if (bits_[i] > 1) {
            throw std::invalid_argument("random integer bits must be 0 or 1");
        }
        value_ <<= 1;
        value_ += bits_[i];
    }
}

std::uint64_t RandomInteger::to_u64() const {
    if (boost::multiprecision::msb(value_ | 1) >= 64) {
        throw std::overflow_error(fmt::format("random integer with {} bits does not fit in 64 bits", bits_.size()));
    }
    return value_.convert_to<std::uint64_t>();
}

RandomInteger random_bits_one_qubit(std::uint64_t n_bits, const qsim::NoiseModel &noise, std::uint64_t seed) {
    if (n_bits < 1) {
        throw std::invalid_argument("n_bits must be at least 1");
    }
    const auto program = uniform_superposition(1);
    std::vector<std::uint8_t> bits(n_bits);
    for (std::uint64_t i = 0; i < n_bits; ++i) {
        const auto counts = qsim::measure(program, 1, noise, derive_seed(seed, kOneQubitBit, i));
        bits[i] = static_cast<std::uint8_t>(counts.count("1"));
    }
    return RandomInteger(std::move(bits));
}

RandomInteger random_bits_multi_qubit(unsigned n_bits, const qsim::NoiseModel &noise, std::uint64_t seed) {
    if (n_bits < 1 || n_bits > qsim::kMaxQubits) {
        throw std::invalid_argument(
            fmt::format("n_bits must be in [1, {}] for the multi-qubit method, got {}", qsim::kMaxQubits, n_bits));
    }
    const auto counts = qsim::measure(uniform_superposition(n_bits), 1, noise, seed);
    const auto outcome = qsim::from_bitstring(counts.items().begin()->first);
    return RandomInteger(bits_of(outcome, n_bits));
}

RandomInteger bits_from_counts(const qsim::MeasurementCounts &counts, ThresholdRule rule) {
    const std::size_t outcomes = std::size_t{1} << counts.n_qubits();
    const double average = static_cast<double>(counts.shots()) / static_cast<double>(outcomes);
    const auto dense = counts.dense();
    std::vector<std::uint8_t> bits(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        const auto c = static_cast<double>(dense[k]);
        bits[k] = static_cast<std::uint8_t>(rule == ThresholdRule::StrictlyGreater ? c > average : c >= average);
    }
    return RandomInteger(std::move(bits));
}

ProbabilisticDraw probabilistic_draw(unsigned q, std::uint64_t shots, const qsim::NoiseModel &noise,
                                     std::uint64_t seed, ThresholdRule rule) {
    RngMethod::probabilistic(q, shots);
    ProbabilisticDraw draw;
    draw.counts = qsim::measure(uniform_superposition(q), shots, noise, seed);
    draw.average = static_cast<double>(shots) / static_cast<double>(std::uint64_t{1} << q);
    draw.value = bits_from_counts(draw.counts, rule);
    return draw;
}

RandomInteger random_int_probabilistic(unsigned q, std::uint64_t shots, const qsim::NoiseModel &noise,
                                       std::uint64_t seed) {
    return probabilistic_draw(q, shots, noise, seed).value;
}

RandomInteger random_integer(const RngMethod &method, std::uint64_t n_bits, const qsim::NoiseModel &noise,
                             std::uint64_t seed) {
    switch (method.kind) {
        case RngMethodKind::OneQubitPerBit:
            return random_bits_one_qubit(n_bits, noise, seed);
        case RngMethodKind::MultiQubitSingleShot:
            if (n_bits > qsim::kMaxQubits) {
                throw std::invalid_argument(fmt::format(
                    "n_bits must be in [1, {}] for the multi-qubit method, got {}", qsim::kMaxQubits, n_bits));
            }
            return random_bits_multi_qubit(static_cast<unsigned>(n_bits), noise, seed);
        case RngMethodKind::ProbabilisticMeasurement:
            method.validate();
            return random_int_probabilistic(method.qubits, method.shots, noise, seed);
    }
    throw std::invalid_argument("unknown rng method");
}

std::int64_t random_in_range(std::int64_t lo, std::int64_t hi, const RngMethod &method,
                             const qsim::NoiseModel &noise, std::uint64_t seed) {
    if (lo > hi) {
        throw std::invalid_argument(fmt::format("empty range [{}, {}]", lo, hi));
    }
    method.validate();
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == 0) {
        return lo;
    }

    if (method.kind == RngMethodKind::ProbabilisticMeasurement) {
        const auto raw = random_integer(method, 0, noise, seed).value();
        BigUint reduced;
        if (span == UINT64_MAX) {
            reduced = raw & BigUint(UINT64_MAX);
        } else {
            reduced = raw % (BigUint(span) + 1);
        }
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + reduced.convert_to<std::uint64_t>());
    }

    const auto width = static_cast<std::uint64_t>(std::bit_width(span));
    for (std::uint64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        const auto candidate = random_integer(method, width, noise, derive_seed(seed, kRangeAttempt, attempt)).to_u64();
        if (candidate <= span) {
            return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + candidate);
        }
    }
    throw std::runtime_error("rejection sampling did not produce an in-range value");
}

NameFragments::NameFragments()
    : fragments_{"Pixel",  "Twilight", "Sparkle", "Stardust", "Moonbeam", "Rainbow", "Glitter", "Velvet",
                 "Comet",  "Aurora",   "Blossom", "Crystal",  "Nimbus",   "Shimmer", "Dazzle",  "Celeste"} {}

NameFragments::NameFragments(std::vector<std::string> fragments) {
    if (fragments.size() != kNameFragmentCount) {
        throw std::invalid_argument(
            fmt::format("exactly {} name fragments are required, got {}", kNameFragmentCount, fragments.size()));
    }
    std::move(fragments.begin(), fragments.end(), fragments_.begin());
}

const std::string &NameFragments::at(std::size_t one_based) const {
    if (one_based < 1 || one_based > kNameFragmentCount) {
        throw std::out_of_range(fmt::format("name fragment index {} outside [1, {}]", one_based, kNameFragmentCount));
    }
    return fragments_[one_based - 1];
}

std::pair<std::int64_t, std::int64_t> player_name_draws(const qsim::NoiseModel &noise, std::uint64_t seed,
                                                        const RngMethod &method) {
    const auto first = random_in_range(1, kNameFragmentCount, method, noise, derive_seed(seed, kNameDraw, 0));
    const auto last = random_in_range(1, kNameFragmentCount, method, noise, derive_seed(seed, kNameDraw, 1));
    return {first, last};
}

std::string generate_player_name(const NameFragments &fragments, const qsim::NoiseModel &noise, std::uint64_t seed,
                                 const RngMethod &method) {
    const auto [first, last] = player_name_draws(noise, seed, method);
    return fragments.at(static_cast<std::size_t>(first)) + " " + fragments.at(static_cast<std::size_t>(last));
}

std::map<std::uint64_t, double> bias_report(unsigned q, std::uint64_t shots, std::uint64_t trials, std::uint64_t seed,
                                            const qsim::NoiseModel &noise, ThresholdRule rule) {
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (q > 6) {
        throw std::invalid_argument(fmt::format("bias_report supports q <= 6 (64-bit values), got {}", q));
    }
    std::map<std::uint64_t, std::uint64_t> tally;
    for (std::uint64_t t = 0; t < trials; ++t) {
        ++tally[probabilistic_draw(q, shots, noise, derive_seed(seed, kBiasTrial, t), rule).value.to_u64()];
    }
    std::map<std::uint64_t, double> freq;
    for (const auto &[value, count] : tally) {
        freq[value] = static_cast<double>(count) / static_cast<double>(trials);
    }
    return freq;
}

}  // namespace flyunicorn::qrng
