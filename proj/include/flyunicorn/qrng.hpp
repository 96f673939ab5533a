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

#ifndef FLYUNICORN_QRNG_HPP
#define FLYUNICORN_QRNG_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flyunicorn/qsim.hpp"

namespace flyunicorn::qrng {

using BigUint = boost::multiprecision::cpp_int;

enum class RngMethodKind { OneQubitPerBit, MultiQubitSingleShot, ProbabilisticMeasurement };

/// Strategy for turning measurements into random integers.
///
/// OneQubitPerBit runs one single-qubit program per bit. MultiQubitSingleShot
/// puts every bit on its own qubit and measures once. ProbabilisticMeasurement
/// measures `qubits` qubits `shots` times and derives one bit per outcome
/// from whether its count beats the average.
struct RngMethod {
    RngMethodKind kind = RngMethodKind::OneQubitPerBit;
    unsigned qubits = 0;
    std::uint64_t shots = 0;

    static RngMethod one_qubit_per_bit() { return {RngMethodKind::OneQubitPerBit}; }
    static RngMethod multi_qubit_single_shot() { return {RngMethodKind::MultiQubitSingleShot}; }
    /// Throws std::invalid_argument unless 1 <= q <= 20 and shots >= 2^q.
    static RngMethod probabilistic(unsigned q, std::uint64_t shots);

    void validate() const;
};

std::string_view to_string(RngMethodKind kind);
/// Accepts "one_qubit", "multi_qubit", "probabilistic".
RngMethodKind parse_method_kind(std::string_view text);

/// Random integer with its bits kept LSB first.
class RandomInteger {
   public:
    RandomInteger() = default;
    explicit RandomInteger(std::vector<std::uint8_t> bits);

    const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }
    const BigUint &value() const noexcept { return value_; }
    std::size_t bit_count() const noexcept { return bits_.size(); }

    /// Throws std::overflow_error when the value needs more than 64 bits.
    std::uint64_t to_u64() const;
    std::string to_decimal() const { return value_.str(); }

   private:
    std::vector<std::uint8_t> bits_;
    BigUint value_;
};

/// Bit rule for the probabilistic method.
enum class ThresholdRule { StrictlyGreater, GreaterOrEqual };

/// Full result of one probabilistic draw.
struct ProbabilisticDraw {
    qsim::MeasurementCounts counts;
    double average = 0.0;
    RandomInteger value;
};

RandomInteger random_bits_one_qubit(std::uint64_t n_bits, const qsim::NoiseModel &noise, std::uint64_t seed);

/// Throws std::invalid_argument when n_bits is outside [1, 20].
RandomInteger random_bits_multi_qubit(unsigned n_bits, const qsim::NoiseModel &noise, std::uint64_t seed);

/// Outcome k (its bitstring read as binary) supplies bit k of the result, so
/// the result always has exactly 2^q bits.
RandomInteger random_int_probabilistic(unsigned q, std::uint64_t shots, const qsim::NoiseModel &noise,
                                       std::uint64_t seed);

ProbabilisticDraw probabilistic_draw(unsigned q, std::uint64_t shots, const qsim::NoiseModel &noise,
                                     std::uint64_t seed, ThresholdRule rule = ThresholdRule::StrictlyGreater);

/// Bits from an existing histogram. Exposed so that the bit rule can be
/// checked against hand-written counts.
RandomInteger bits_from_counts(const qsim::MeasurementCounts &counts,
                               ThresholdRule rule = ThresholdRule::StrictlyGreater);

/// Draws from the method's native generator with `n_bits` bits (ignored for
/// the probabilistic method, which always yields 2^q bits).
RandomInteger random_integer(const RngMethod &method, std::uint64_t n_bits, const qsim::NoiseModel &noise,
                             std::uint64_t seed);

/// Integer in [lo, hi]. Unbiased methods rejection-sample over the smallest
/// covering bit width; the probabilistic method reduces modulo the range size.
std::int64_t random_in_range(std::int64_t lo, std::int64_t hi, const RngMethod &method,
                             const qsim::NoiseModel &noise, std::uint64_t seed);

inline constexpr std::size_t kNameFragmentCount = 16;

/// The sixteen name fragments used for player names.
class NameFragments {
   public:
    /// Default unicorn-themed list.
    NameFragments();
    /// Throws std::invalid_argument unless exactly 16 fragments are given.
    explicit NameFragments(std::vector<std::string> fragments);

    /// 1-indexed lookup.
    const std::string &at(std::size_t one_based) const;
    const std::array<std::string, kNameFragmentCount> &all() const noexcept { return fragments_; }

   private:
    std::array<std::string, kNameFragmentCount> fragments_;
};

/// "First Last" from two independent draws in [1, 16].
std::string generate_player_name(const NameFragments &fragments, const qsim::NoiseModel &noise, std::uint64_t seed,
                                 const RngMethod &method = RngMethod::one_qubit_per_bit());

/// The two 1-based fragment indices generate_player_name would use.
std::pair<std::int64_t, std::int64_t> player_name_draws(const qsim::NoiseModel &noise, std::uint64_t seed,
                                                        const RngMethod &method = RngMethod::one_qubit_per_bit());

/// Empirical frequency of each value produced by `trials` probabilistic
/// draws. Values need 2^q bits, so q is limited to 6 here.
std::map<std::uint64_t, double> bias_report(unsigned q, std::uint64_t shots, std::uint64_t trials, std::uint64_t seed,
                                            const qsim::NoiseModel &noise = {},
                                            ThresholdRule rule = ThresholdRule::StrictlyGreater);

}  // namespace flyunicorn::qrng

#endif
