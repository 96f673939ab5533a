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

#ifndef FLYUNICORN_BENCH_HPP
#define FLYUNICORN_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace flyunicorn::bench {

/// Wall-clock seconds per program execution.
struct TimingReport {
    std::uint64_t runs = 0;
    double min_s = 0.0;
    double mean_s = 0.0;
    double median_s = 0.0;
    double max_s = 0.0;
};

TimingReport summarize(std::vector<double> samples);

/// Times `runs` executions of a one-qubit U3 program measured with `shots` shots.
TimingReport time_simulator(std::uint64_t runs, std::uint64_t shots = 1024);

/// Times `runs` executions of a 4-qubit, one-iteration Grover program.
TimingReport time_grover(std::uint64_t runs, std::uint64_t shots = 1024);

/// P(Binomial(n, p) >= k), summed in log space.
double binomial_tail(std::uint64_t n, double p, std::uint64_t k);

/// Probability of reading the secret in one noisy shot of a Grover search:
/// the ideal distribution pushed through independent bit flips.
double noisy_secret_probability(unsigned n_qubits, unsigned iterations, double flip_prob);

struct ReportOptions {
    std::uint64_t seed = 0;
    std::uint64_t u3_shots = 100'000;
    std::uint64_t grover_trials = 1000;
    std::uint64_t bias_trials = 10'000;
    std::uint64_t error_buffer_trials = 10'000;
    std::uint64_t minigame_games = 10'000;
    std::uint64_t timing_runs = 175;
    bool include_timing = true;
};

/// One table of the report.
struct Section {
    std::string name;
    std::string description;
    bool deterministic = true;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;

    nlohmann::json to_json() const;
};

struct Report {
    std::uint64_t seed = 0;
    std::vector<Section> sections;

    const Section *find(std::string_view name) const;
    nlohmann::json to_json() const;
    /// Long format: section,row,column,value
    std::string to_csv() const;
};

Section u3_curve_section(const ReportOptions &options);
Section grover_sweep_section(const ReportOptions &options);
Section qrng_bias_section(const ReportOptions &options);
Section error_buffer_section(const ReportOptions &options);
Section minigame_section(const ReportOptions &options);
Section timing_section(const ReportOptions &options);
Section reference_timing_section();

/// Builds every section. Sections are computed concurrently and assembled
/// in a fixed order.
Report run_full_report(const ReportOptions &options);

/// Writes report.json and report.csv into `directory`, creating it if needed.
/// Throws std::runtime_error naming the path on failure.
void write_report(const Report &report, const std::filesystem::path &directory);

}  // namespace flyunicorn::bench

#endif
