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

#include "flyunicorn/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "flyunicorn/game.hpp"
#include "flyunicorn/grover.hpp"
#include "flyunicorn/qrng.hpp"
#include "flyunicorn/qsim.hpp"
#include "flyunicorn/random.hpp"

namespace flyunicorn::bench {

namespace {

enum Stream : std::uint64_t {
    kU3 = 31,
    kGrover = 32,
    kBias = 33,
    kErrorBuffer = 34,
    kMinigame = 35,
    kTiming = 36,
};

using Clock = std::chrono::steady_clock;

template <typename Program>
TimingReport time_program(std::uint64_t runs, Program &&program) {
    if (runs < 1) {
        throw std::invalid_argument("runs must be at least 1");
    }
    std::vector<double> samples;
    samples.reserve(runs);
    for (std::uint64_t r = 0; r < runs; ++r) {
        const auto start = Clock::now();
        program(r);
        samples.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    return summarize(std::move(samples));
}

std::string csv_cell(const nlohmann::json &value) {
    if (value.is_null()) {
        return "";
    }
    if (value.is_string()) {
        auto text = value.get<std::string>();
        if (text.find_first_of(",\"\n") == std::string::npos) {
            return text;
        }
        std::string quoted = "\"";
        for (char c : text) {
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return quoted + "\"";
    }
    return value.dump();
}

double fraction(std::uint64_t part, std::uint64_t whole) {
    return static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

TimingReport summarize(std::vector<double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("no timing samples");
    }
    TimingReport report;
    report.runs = samples.size();
    std::sort(samples.begin(), samples.end());
    report.min_s = samples.front();
    report.max_s = samples.back();
    report.mean_s = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    const auto mid = samples.size() / 2;
    report.median_s = samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2.0;
    // Guard min <= mean <= max against summation rounding.
    report.mean_s = std::clamp(report.mean_s, report.min_s, report.max_s);
    return report;
}

TimingReport time_simulator(std::uint64_t runs, std::uint64_t shots) {
    return time_program(runs, [shots](std::uint64_t r) {
        auto state = qsim::apply_gate(qsim::new_state(1), qsim::GateOp::u3(0, std::numbers::pi / 2.0, 0.0, 0.0));
        auto counts = qsim::measure(state, shots, qsim::NoiseModel{}, derive_seed(0, kTiming, r));
        if (counts.shots() != shots) {
            throw std::logic_error("shot count mismatch");
        }
    });
}

TimingReport time_grover(std::uint64_t runs, std::uint64_t shots) {
    return time_program(runs, [shots](std::uint64_t r) {
        grover::GroverConfig cfg;
        cfg.secret = 11;
        cfg.shots = shots;
        auto result = grover::grover_search(cfg, qsim::NoiseModel{}, derive_seed(1, kTiming, r));
        if (result.counts.shots() != shots) {
            throw std::logic_error("shot count mismatch");
        }
    });
}

double binomial_tail(std::uint64_t n, double p, std::uint64_t k) {
    if (k == 0) {
        return 1.0;
    }
    if (k > n) {
        return 0.0;
    }
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return 1.0;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double ln_fact_n = std::lgamma(static_cast<double>(n) + 1.0);
    double total = 0.0;
    for (std::uint64_t i = k; i <= n; ++i) {
        const double x = static_cast<double>(i);
        total += std::exp(ln_fact_n - std::lgamma(x + 1.0) - std::lgamma(static_cast<double>(n - i) + 1.0) + x * lp +
                          static_cast<double>(n - i) * lq);
    }
    return std::min(total, 1.0);
}

double noisy_secret_probability(unsigned n_qubits, unsigned iterations, double flip_prob) {
    grover::GroverConfig cfg;
    cfg.n_qubits = n_qubits;
    cfg.iterations = iterations;
    cfg.secret = 0;
    const auto ideal = qsim::probabilities(grover::grover_state(cfg));
    double total = 0.0;
    for (std::size_t y = 0; y < ideal.size(); ++y) {
        const auto distance = static_cast<int>(std::popcount(y ^ cfg.secret));
        total += ideal[y] * std::pow(flip_prob, distance) * std::pow(1.0 - flip_prob, n_qubits - distance);
    }
    return total;
}

nlohmann::json Section::to_json() const {
    auto out_rows = nlohmann::json::array();
    for (const auto &row : rows) {
        out_rows.push_back(row);
    }
    return {
        {"name", name},
        {"description", description},
        {"deterministic", deterministic},
        {"columns", columns},
        {"rows", out_rows},
    };
}

const Section *Report::find(std::string_view name) const {
    for (const auto &s : sections) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

nlohmann::json Report::to_json() const {
    auto out = nlohmann::json::array();
    for (const auto &s : sections) {
        out.push_back(s.to_json());
    }
    return {{"seed", seed}, {"sections", out}};
}

std::string Report::to_csv() const {
    std::string out = "section,row,column,value\n";
    for (const auto &s : sections) {
        for (std::size_t r = 0; r < s.rows.size(); ++r) {
            for (std::size_t c = 0; c < s.columns.size() && c < s.rows[r].size(); ++c) {
                out += fmt::format("{},{},{},{}\n", s.name, r, s.columns[c], csv_cell(s.rows[r][c]));
            }
        }
    }
    return out;
}

Section u3_curve_section(const ReportOptions &options) {
    Section s;
    s.name = "u3_probability_curve";
    s.description = "P(1) after U3(theta,0,0) on |0>: analytic sin^2(theta/2) vs sampled, for both inversion modes";
    s.columns = {"frac",        "theta_raw",        "analytic_raw",    "empirical_raw",
                 "theta_linear", "analytic_linear", "empirical_linear", "shots"};
    const std::vector<double> fracs = {0.0, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9, 1.0};
    for (std::size_t i = 0; i < fracs.size(); ++i) {
        const double frac = fracs[i];
        std::vector<nlohmann::json> row{frac};
        for (const auto mode : {game::InversionMode::RawTheta, game::InversionMode::LinearProbability}) {
            const double theta = game::inversion_angle(frac, mode);
            const auto state = qsim::apply_gate(qsim::new_state(1), qsim::GateOp::u3(0, theta, 0.0, 0.0));
            const auto counts = qsim::measure(state, options.u3_shots, qsim::NoiseModel{},
                                              derive_seed(options.seed, kU3, 2 * i + static_cast<std::size_t>(mode)));
            const double analytic = std::pow(std::sin(theta / 2.0), 2);
            row.insert(row.end(), {theta, analytic, fraction(counts.count("1"), options.u3_shots)});
        }
        row.emplace_back(options.u3_shots);
        s.rows.push_back(std::move(row));
    }
    return s;
}

Section grover_sweep_section(const ReportOptions &options) {
    Section s;
    s.name = "grover_noise_sweep";
    s.description = "Argmax success rate of a 4-qubit, 1-iteration Grover search (secret 11, 100 shots) vs readout flip probability";
    s.columns = {"flip_prob", "trials", "shots", "success_rate", "noisy_single_shot_prob", "ideal_single_shot_prob"};
    grover::GroverConfig cfg;
    cfg.secret = 11;
    const std::vector<double> probs = {0.0, 0.05, 0.1, 0.25, 0.3, 0.5};
    const auto rows = grover::noise_sweep(cfg, probs, options.grover_trials, derive_seed(options.seed, kGrover));
    const double ideal = grover::theoretical_success_prob(16, cfg.iterations);
    for (const auto &row : rows) {
        s.rows.push_back({row.flip_prob, row.trials, cfg.shots, row.success_rate(),
                          noisy_secret_probability(cfg.n_qubits, cfg.iterations, row.flip_prob), ideal});
    }
    return s;
}

Section qrng_bias_section(const ReportOptions &options) {
    Section s;
    s.name = "qrng_bias";
    s.description = "Frequency of each 4-bit value from the probabilistic method (q=2, 100 shots) under both threshold rules";
    s.columns = {"value", "binary", "set_bits", "frequency_strict", "frequency_ge"};
    const auto strict = qrng::bias_report(2, 100, options.bias_trials, derive_seed(options.seed, kBias, 0));
    const auto ge = qrng::bias_report(2, 100, options.bias_trials, derive_seed(options.seed, kBias, 1), {},
                                      qrng::ThresholdRule::GreaterOrEqual);
    const auto lookup = [](const std::map<std::uint64_t, double> &m, std::uint64_t v) {
        const auto it = m.find(v);
        return it == m.end() ? 0.0 : it->second;
    };
    for (std::uint64_t v = 0; v < 16; ++v) {
        s.rows.push_back({v, qsim::to_bitstring(v, 4), std::popcount(v), lookup(strict, v), lookup(ge, v)});
    }
    return s;
}

Section error_buffer_section(const ReportOptions &options) {
    Section s;
    s.name = "error_buffer_win_rate";
    s.description = "Win probability of a full inversion (X, 1024 shots) under readout error, by error buffer";
    s.columns = {"error_buffer", "goal", "flip_prob", "trials", "empirical_win_rate", "exact_win_prob", "mean_altitude"};
    const std::uint64_t shots = 1024;
    const auto inverted = qsim::apply_gate(qsim::new_state(1), qsim::GateOp::x(0));
    std::uint64_t row_index = 0;
    for (const double p : {0.0, 54.0 / 1024.0, 0.05}) {
        const qsim::NoiseModel noise(p);
        for (const std::int64_t buffer : {0, 25, 50, 75, 100}) {
            const auto goal = static_cast<std::uint64_t>(1024 - buffer);
            std::uint64_t wins = 0;
            double altitude_sum = 0.0;
            for (std::uint64_t t = 0; t < options.error_buffer_trials; ++t) {
                const auto ones = qsim::measure(inverted, shots, noise, derive_seed(options.seed, kErrorBuffer + row_index, t))
                                      .count("1");
                wins += ones >= goal;
                altitude_sum += static_cast<double>(ones);
            }
            s.rows.push_back({buffer, goal, p, options.error_buffer_trials, fraction(wins, options.error_buffer_trials),
                              binomial_tail(shots, 1.0 - p, goal),
                              altitude_sum / static_cast<double>(options.error_buffer_trials)});
            ++row_index;
        }
    }
    return s;
}

Section minigame_section(const ReportOptions &options) {
    Section s;
    s.name = "minigame_rounds";
    s.description =
        "Jewel mini-game: rounds until decided with a player guessing uniformly among options it has not ruled out";
    s.columns = {"variant", "mode", "games", "mean_rounds", "max_rounds", "player_win_rate", "computer_win_rate",
                 "computer_first_round_rate"};
    struct Setup {
        game::Variant variant;
        game::DeviceMode mode;
    };
    const Setup setups[] = {{game::Variant::Classical, game::DeviceMode::Simulator},
                            {game::Variant::Quantum, game::DeviceMode::Simulator},
                            {game::Variant::Quantum, game::DeviceMode::HardwareEmulation}};
    for (std::size_t k = 0; k < std::size(setups); ++k) {
        const auto cfg = game::GameConfig::for_mode(setups[k].mode, setups[k].variant);
        std::uint64_t rounds_total = 0;
        std::uint64_t rounds_max = 0;
        std::uint64_t player_wins = 0;
        std::uint64_t computer_wins = 0;
        std::uint64_t computer_first = 0;
        for (std::uint64_t g = 0; g < options.minigame_games; ++g) {
            const auto game_seed = derive_seed(options.seed, kMinigame + k, g);
            auto round = game::open_jewel_round(cfg, derive_seed(game_seed, 0));
            Rng player(derive_seed(game_seed, 1));
            std::vector<std::size_t> player_options;
            for (std::size_t i = 0; i < round.choices().size(); ++i) {
                player_options.push_back(i);
            }
            while (round.outcome == game::RoundOutcome::Ongoing) {
                const auto pick_at = player.below(player_options.size());
                const auto pick = player_options[pick_at];
                const auto round_seed = derive_seed(game_seed, 2, round.round);
                if (cfg.variant == game::Variant::Classical) {
                    round = game::jewel_round_classical(std::move(round), pick, round_seed);
                } else {
                    round = game::jewel_round_quantum(std::move(round), game::kQuantumJewels[pick], cfg.noise(),
                                                      round_seed, cfg.grover_shots);
                }
                player_options.erase(player_options.begin() + static_cast<std::ptrdiff_t>(pick_at));
                if (cfg.variant == game::Variant::Classical && round.outcome == game::RoundOutcome::Ongoing) {
                    // The computer's miss is public, so the player can skip it too.
                    const auto &missed = *round.history.back().computer_guess;
                    std::erase_if(player_options,
                                  [&](std::size_t i) { return game::kClassicalJewels[i] == missed; });
                }
            }
            const auto decided_in = round.history.size();
            rounds_total += decided_in;
            rounds_max = std::max<std::uint64_t>(rounds_max, decided_in);
            player_wins += round.outcome == game::RoundOutcome::PlayerWon;
            computer_wins += round.outcome == game::RoundOutcome::ComputerWon;
            computer_first += round.outcome == game::RoundOutcome::ComputerWon && decided_in == 1;
        }
        s.rows.push_back({game::to_string(cfg.variant), game::to_string(cfg.device_mode), options.minigame_games,
                          fraction(rounds_total, options.minigame_games), rounds_max,
                          fraction(player_wins, options.minigame_games),
                          fraction(computer_wins, options.minigame_games),
                          fraction(computer_first, options.minigame_games)});
    }
    return s;
}

Section timing_section(const ReportOptions &options) {
    Section s;
    s.name = "execution_speed_measured";
    s.description = "Measured wall-clock seconds per program execution on this machine (1024 shots)";
    s.deterministic = false;
    s.columns = {"program", "runs", "min_s", "mean_s", "median_s", "max_s"};
    const auto one = time_simulator(options.timing_runs);
    const auto four = time_grover(options.timing_runs);
    s.rows.push_back({"simulator_1q_u3", one.runs, one.min_s, one.mean_s, one.median_s, one.max_s});
    s.rows.push_back({"simulator_4q_grover", four.runs, four.min_s, four.mean_s, four.median_s, four.max_s});
    return s;
}

Section reference_timing_section() {
    Section s;
    s.name = "execution_speed_reference";
    s.description = "Published reference timings, seconds per program execution; static values, not measured here";
    s.columns = {"type", "runs", "min_s", "mean_s", "max_s", "source"};
    const char *source = "published reference, not measured";
    s.rows.push_back({"simulator", 175, 0.06, 0.13, 0.25, source});
    s.rows.push_back({"ibmqx4", 94, 53.81, 58.22, 90.23, source});
    s.rows.push_back({"ibmq_16_melbourne", 33, 59.87, 141.43, 627.30, source});
    s.rows.push_back({"IBMQ", 127, 53.81, 79.84, 627.30, source});
    return s;
}

Report run_full_report(const ReportOptions &options) {
    std::vector<std::function<Section()>> builders = {
        [&] { return u3_curve_section(options); },      [&] { return grover_sweep_section(options); },
        [&] { return qrng_bias_section(options); },     [&] { return error_buffer_section(options); },
        [&] { return minigame_section(options); },      [] { return reference_timing_section(); },
    };
    std::vector<std::future<Section>> pending;
    pending.reserve(builders.size());
    for (auto &build : builders) {
        pending.push_back(std::async(std::launch::async, build));
    }
    Report report;
    report.seed = options.seed;
    for (auto &f : pending) {
        report.sections.push_back(f.get());
    }
    // Timing runs alone so that the other sections do not skew it.
    if (options.include_timing) {
        report.sections.push_back(timing_section(options));
    }
    return report;
}

void write_report(const Report &report, const std::filesystem::path &directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw std::runtime_error(fmt::format("cannot create directory {}: {}", directory.string(), ec.message()));
    }
    const auto write = [](const std::filesystem::path &path, const std::string &text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
        }
        out << text;
        if (!out.flush()) {
            throw std::runtime_error(fmt::format("failed writing {}", path.string()));
        }
    };
    write(directory / "report.json", report.to_json().dump(2) + "\n");
    write(directory / "report.csv", report.to_csv());
}

}  // namespace flyunicorn::bench
