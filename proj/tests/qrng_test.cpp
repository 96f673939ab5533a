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

#include "flyunicorn/random.hpp"

#include <map>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace flyunicorn;
using namespace flyunicorn::qrng;

namespace {

// Exact distribution of the probabilistic method's output for q=2, by
// enumerating every multinomial split of the shots over four outcomes.
std::map<std::uint64_t, double> exact_probabilistic_distribution(std::uint64_t shots, bool strict) {
    std::vector<double> log_fact(shots + 1, 0.0);
    for (std::uint64_t k = 1; k <= shots; ++k) {
        log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));
    }
    const double avg = static_cast<double>(shots) / 4.0;
    std::map<std::uint64_t, double> dist;
    for (std::uint64_t a = 0; a <= shots; ++a) {
        for (std::uint64_t b = 0; a + b <= shots; ++b) {
            for (std::uint64_t c = 0; a + b + c <= shots; ++c) {
                std::uint64_t d = shots - a - b - c;
                double lp = log_fact[shots] - log_fact[a] - log_fact[b] - log_fact[c] - log_fact[d] -
                            static_cast<double>(shots) * std::log(4.0);
                std::uint64_t counts[4] = {a, b, c, d};
                std::uint64_t value = 0;
                for (int k = 0; k < 4; ++k) {
                    double ck = static_cast<double>(counts[k]);
                    if (strict ? ck > avg : ck >= avg) {
                        value |= std::uint64_t{1} << k;
                    }
                }
                dist[value] += std::exp(lp);
            }
        }
    }
    return dist;
}

}  // namespace

TEST(qrng, method_validation) {
    ASSERT_THROW(RngMethod::probabilistic(0, 10), std::invalid_argument);
    ASSERT_THROW(RngMethod::probabilistic(21, 1 << 22), std::invalid_argument);
    ASSERT_THROW(RngMethod::probabilistic(3, 7), std::invalid_argument);
    ASSERT_NO_THROW(RngMethod::probabilistic(2, 100));
}

TEST(qrng, parse_method_kind) {
    ASSERT_EQ(parse_method_kind("one_qubit"), RngMethodKind::OneQubitPerBit);
    ASSERT_EQ(parse_method_kind("multi"), RngMethodKind::MultiQubitSingleShot);
    ASSERT_EQ(parse_method_kind("probabilistic"), RngMethodKind::ProbabilisticMeasurement);
    ASSERT_THROW(parse_method_kind("dice"), std::invalid_argument);
}

TEST(qrng, random_integer_bits_are_lsb_first) {
    RandomInteger r({1, 1, 0, 1});
    ASSERT_EQ(r.to_u64(), 11u);
    ASSERT_EQ(r.to_decimal(), "11");
    ASSERT_THROW(RandomInteger({2}), std::invalid_argument);
    ASSERT_THROW(RandomInteger(std::vector<std::uint8_t>(65, 1)).to_u64(), std::overflow_error);
}

TEST(qrng, bits_from_counts_example) {
    // q=2, 100 shots: average 25. Outcome 00 and 11 above average.
    auto counts = qsim::MeasurementCounts::from_values(2, {{0, 30}, {1, 20}, {2, 25}, {3, 25}});
    auto strict = bits_from_counts(counts, ThresholdRule::StrictlyGreater);
    ASSERT_EQ(strict.bits(), (std::vector<std::uint8_t>{1, 0, 0, 0}));
    ASSERT_EQ(strict.to_u64(), 1u);
    auto loose = bits_from_counts(counts, ThresholdRule::GreaterOrEqual);
    ASSERT_EQ(loose.to_u64(), 13u);
}

TEST(qrng, probabilistic_draw_reports_average) {
    auto draw = probabilistic_draw(2, 100, {}, 5);
    ASSERT_DOUBLE_EQ(draw.average, 25.0);
    ASSERT_EQ(draw.counts.shots(), 100u);
    ASSERT_EQ(draw.value.bit_count(), 4u);
}

TEST(qrng, multi_qubit_width_bounds) {
    ASSERT_THROW(random_bits_multi_qubit(0, {}, 1), std::invalid_argument);
    ASSERT_THROW(random_bits_multi_qubit(21, {}, 1), std::invalid_argument);
    ASSERT_EQ(random_bits_multi_qubit(20, {}, 1).bit_count(), 20u);
}

TEST(qrng, one_qubit_handles_wide_integers) {
    auto r = random_bits_one_qubit(200, {}, 3);
    ASSERT_EQ(r.bit_count(), 200u);
    ASSERT_LT(r.value(), BigUint(1) << 200);
}

TEST(qrng, range_validation) {
    ASSERT_THROW(random_in_range(5, 4, RngMethod::one_qubit_per_bit(), {}, 1), std::invalid_argument);
    ASSERT_EQ(random_in_range(7, 7, RngMethod::one_qubit_per_bit(), {}, 1), 7);
}

TEST(qrng, name_fragments) {
    NameFragments names;
    ASSERT_EQ(names.at(1), "Pixel");
    ASSERT_EQ(names.at(16), "Celeste");
    ASSERT_THROW(names.at(0), std::out_of_range);
    ASSERT_THROW(names.at(17), std::out_of_range);
    ASSERT_THROW(NameFragments(std::vector<std::string>(15, "x")), std::invalid_argument);
}

TEST(qrng, player_name_is_two_fragments) {
    NameFragments names;
    auto name = generate_player_name(names, {}, 99);
    auto [a, b] = player_name_draws({}, 99);
    ASSERT_EQ(name, names.at(a) + " " + names.at(b));
}

TEST(qrng, bias_report_limits) {
    ASSERT_THROW(bias_report(7, 200, 1, 1), std::invalid_argument);
    ASSERT_THROW(bias_report(2, 100, 0, 1), std::invalid_argument);
}

TEST(qrng_property, all_ones_impossible_under_strict_rule) {
    // If every count exceeded shots/2^q the counts would sum past shots.
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 2000; ++trial) {
        unsigned q = 1 + gen() % 4;
        std::uint64_t states = std::uint64_t{1} << q;
        std::uint64_t shots = states + gen() % 500;
        std::map<std::uint64_t, std::uint64_t> by_value;
        std::uint64_t left = shots;
        for (std::uint64_t v = 0; v + 1 < states; ++v) {
            std::uint64_t c = left ? gen() % (left + 1) : 0;
            by_value[v] = c;
            left -= c;
        }
        by_value[states - 1] = left;
        auto counts = qsim::MeasurementCounts::from_values(q, by_value);
        auto strict = bits_from_counts(counts, ThresholdRule::StrictlyGreater);
        for (auto b : strict.bits()) {
            if (b == 0) {
                goto next;
            }
        }
        FAIL() << "all-ones output from strict rule";
    next:
        auto loose = bits_from_counts(counts, ThresholdRule::GreaterOrEqual);
        bool any = false;
        for (auto b : loose.bits()) {
            any = any || b;
        }
        ASSERT_TRUE(any) << "all-zero output from >= rule";
    }
}

TEST(qrng_property, output_width_matches_request) {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t n = 1 + gen() % 20;
        ASSERT_EQ(random_bits_one_qubit(n, {}, gen()).bit_count(), n);
        ASSERT_EQ(random_bits_multi_qubit(static_cast<unsigned>(n), {}, gen()).bit_count(), n);
        unsigned q = 1 + gen() % 4;
        std::uint64_t shots = (std::uint64_t{1} << q) + gen() % 100;
        ASSERT_EQ(random_int_probabilistic(q, shots, {}, gen()).bit_count(), std::uint64_t{1} << q);
    }
}

TEST(qrng_property, range_always_in_bounds) {
    std::mt19937_64 gen(3);
    std::vector<RngMethod> methods = {RngMethod::one_qubit_per_bit(), RngMethod::multi_qubit_single_shot(),
                                      RngMethod::probabilistic(2, 100)};
    for (int trial = 0; trial < 300; ++trial) {
        std::int64_t lo = static_cast<std::int64_t>(gen() % 2000) - 1000;
        std::int64_t hi = lo + static_cast<std::int64_t>(gen() % 1000);
        for (const auto &m : methods) {
            auto v = random_in_range(lo, hi, m, {}, gen());
            ASSERT_GE(v, lo);
            ASSERT_LE(v, hi);
        }
    }
}

TEST(qrng_property, deterministic_per_seed) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        ASSERT_EQ(random_bits_one_qubit(16, {}, seed).value(), random_bits_one_qubit(16, {}, seed).value());
        ASSERT_EQ(random_in_range(1, 16, RngMethod::one_qubit_per_bit(), {}, seed),
                  random_in_range(1, 16, RngMethod::one_qubit_per_bit(), {}, seed));
        ASSERT_EQ(generate_player_name(NameFragments(), {}, seed), generate_player_name(NameFragments(), {}, seed));
    }
}

TEST(qrng_statistics, one_qubit_method_uniform_chi_squared) {
    std::vector<std::uint64_t> hist(16, 0);
    for (std::uint64_t t = 0; t < 16000; ++t) {
        ++hist[random_bits_one_qubit(4, {}, derive_seed(123, 0, t)).to_u64()];
    }
    ASSERT_LT(oracle::chi_squared_uniform(hist), oracle::chi_squared_critical(15, 0.001));
}

TEST(qrng_statistics, multi_qubit_method_uniform_chi_squared) {
    std::vector<std::uint64_t> hist(16, 0);
    for (std::uint64_t t = 0; t < 16000; ++t) {
        ++hist[random_bits_multi_qubit(4, {}, derive_seed(321, 0, t)).to_u64()];
    }
    ASSERT_LT(oracle::chi_squared_uniform(hist), oracle::chi_squared_critical(15, 0.001));
}

TEST(qrng_statistics, range_uniform_chi_squared) {
    std::vector<std::uint64_t> hist(16, 0);
    for (std::uint64_t t = 0; t < 16000; ++t) {
        ++hist[random_in_range(1, 16, RngMethod::one_qubit_per_bit(), {}, derive_seed(5, 0, t)) - 1];
    }
    ASSERT_LT(oracle::chi_squared_uniform(hist), oracle::chi_squared_critical(15, 0.001));
}

TEST(qrng_statistics, name_draws_independent_and_uniform) {
    std::vector<std::uint64_t> joint(256, 0);
    for (std::uint64_t t = 0; t < 25600; ++t) {
        auto [a, b] = player_name_draws({}, derive_seed(77, 0, t));
        ++joint[static_cast<std::size_t>((a - 1) * 16 + (b - 1))];
    }
    ASSERT_LT(oracle::chi_squared_uniform(joint), oracle::chi_squared_critical(255, 0.001));
}

TEST(qrng_statistics, probabilistic_frequencies_match_exact_enumeration) {
    const std::uint64_t trials = 10000;
    for (auto rule : {ThresholdRule::StrictlyGreater, ThresholdRule::GreaterOrEqual}) {
        auto exact = exact_probabilistic_distribution(100, rule == ThresholdRule::StrictlyGreater);
        auto freq = bias_report(2, 100, trials, 2024, {}, rule);
        for (std::uint64_t v = 0; v < 16; ++v) {
            double p = exact.count(v) ? exact[v] : 0.0;
            double f = freq.count(v) ? freq[v] : 0.0;
            ASSERT_LE(std::abs(f - p), 4 * oracle::frequency_sigma(p, trials) + 1e-12) << "value " << v;
        }
    }
}

TEST(qrng_statistics, two_bit_values_individually_more_likely_than_one_bit_values) {
    auto exact = exact_probabilistic_distribution(100, true);
    ASSERT_EQ(exact.count(15), 0u);
    for (std::uint64_t two : {3, 5, 6, 9, 10, 12}) {
        for (std::uint64_t one : {1, 2, 4, 8}) {
            ASSERT_GT(exact[two], exact[one]);
        }
    }
    auto freq = bias_report(2, 100, 10000, 31, {});
    ASSERT_GT((freq[5] + freq[10]) / 2, (freq[1] + freq[2] + freq[4] + freq[8]) / 4);
}

TEST(qrng_statistics, duality_between_rules) {
    // Under >= the all-zero value plays the role all-ones plays under >.
    auto strict = exact_probabilistic_distribution(100, true);
    auto loose = exact_probabilistic_distribution(100, false);
    ASSERT_EQ(loose.count(0), 0u);
    ASSERT_GT(loose[15], 0.0);
    ASSERT_GT(strict[0], 0.0);
}
