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

// Acceptance runner. Each criterion prints exactly one PASS/FAIL line; the
// exit status is non-zero when any selected criterion fails.
//
//   acceptance                 run everything
//   acceptance --only <id>     run one criterion
//   acceptance --list          print the ids

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "flyunicorn/bench.hpp"
#include "flyunicorn/game.hpp"
#include "flyunicorn/grover.hpp"
#include "flyunicorn/qrng.hpp"
#include "flyunicorn/qsim.hpp"
#include "flyunicorn/random.hpp"
#include "oracles.hpp"

using namespace flyunicorn;

namespace {

constexpr std::uint64_t kSeed = 20190801;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    double time_limit_s;
    std::function<Outcome()> run;
};

double one_frequency(const qsim::StateVector &state, std::uint64_t shots, const qsim::NoiseModel &noise,
                     std::uint64_t seed) {
    auto counts = qsim::measure(state, shots, noise, seed);
    return static_cast<double>(counts.count("1")) / static_cast<double>(shots);
}

Outcome u3_probability_law() {
    const std::uint64_t shots = 100'000;
    bool pass = true;
    std::string detail;
    std::uint64_t k = 0;
    for (double frac : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        auto s = qsim::apply_gate(qsim::new_state(1),
                                  qsim::GateOp::u3(0, game::inversion_angle(frac, game::InversionMode::RawTheta), 0, 0));
        double f = one_frequency(s, shots, {}, derive_seed(kSeed, 1, k++));
        double expect = std::pow(std::sin(frac * std::numbers::pi / 2), 2);
        pass = pass && std::abs(f - expect) <= 0.01;
        detail += fmt::format("{}:{:.4f}/{:.4f} ", frac, f, expect);
    }
    return {pass, detail};
}

Outcome linear_probability_calibration() {
    const std::uint64_t shots = 100'000;
    double theta = game::inversion_angle(0.25, game::InversionMode::LinearProbability);
    double oracle_theta = 2 * std::asin(std::sqrt(0.25));
    auto s = qsim::apply_gate(qsim::new_state(1), qsim::GateOp::u3(0, theta, 0, 0));
    double f = one_frequency(s, shots, {}, derive_seed(kSeed, 2));
    bool pass = std::abs(theta - oracle_theta) < 1e-12 && std::abs(f - 0.25) <= 0.01;
    return {pass, fmt::format("theta={:.6f} P(1)={:.4f} target 0.25+-0.01", theta, f)};
}

Outcome error_rate_emulation() {
    const qsim::NoiseModel noise(54.0 / 1024.0);
    auto s = qsim::apply_gate(qsim::new_state(1), qsim::GateOp::x(0));
    double total = 0.0;
    const int runs = 1000;
    for (int r = 0; r < runs; ++r) {
        total += static_cast<double>(qsim::measure(s, 1024, noise, derive_seed(kSeed, 3, r)).count("1"));
    }
    double mean = total / runs;
    return {std::abs(mean - 970.0) <= 5.0, fmt::format("mean '1' count {:.2f} target 970+-5", mean)};
}

Outcome error_buffer_win_guarantee() {
    auto cfg = game::GameConfig::for_mode(game::DeviceMode::HardwareEmulation);
    cfg.encounter_prob = 0.0;
    auto state = game::new_game(cfg, kSeed);
    state.altitude = cfg.goal();  // any altitude with frac >= 1 applies a full X
    const int trials = 10'000;
    int wins = 0;
    for (int t = 0; t < trials; ++t) {
        auto rec = game::quantum_turn(state, cfg, game::Action::Up, cfg.noise(), derive_seed(kSeed, 4, t));
        if (rec.gate != "x") {
            return {false, "full inversion did not apply X"};
        }
        wins += rec.altitude_after >= cfg.goal();
    }
    double rate = static_cast<double>(wins) / trials;
    double exact = oracle::binomial_at_least(1024, 1.0 - cfg.readout_flip_prob, static_cast<std::uint64_t>(cfg.goal()));
    return {rate >= 0.99 && exact >= 0.99,
            fmt::format("goal {} win rate {:.4f} exact P(Bin(1024,0.95)>=949)={:.5f}", cfg.goal(), rate, exact)};
}

Outcome grover_amplitude_law() {
    const double law = std::pow(std::sin(3 * std::asin(0.25)), 2);
    const std::size_t dim = 16;
    double worst = 0.0;
    for (std::uint64_t secret = 0; secret < dim; ++secret) {
        grover::GroverConfig cfg;
        cfg.secret = secret;
        auto state = grover::grover_state(cfg);

        std::vector<oracle::cplx> v(dim, 0.0);
        v[0] = 1.0;
        for (unsigned q = 0; q < 4; ++q) {
            v = oracle::apply(oracle::lift(oracle::hadamard(), q, 4), v);
        }
        v = oracle::apply(oracle::multiply(oracle::diffusion(dim), oracle::phase_oracle(dim, secret)), v);

        worst = std::max(worst, std::abs(qsim::probability(state, secret) - law));
        worst = std::max(worst, std::abs(qsim::probability(state, secret) - std::norm(v[secret])));
        for (std::size_t i = 0; i < dim; ++i) {
            worst = std::max(worst, std::abs(state[i] - v[i]));
        }
    }
    grover::GroverConfig cfg;
    cfg.secret = 11;
    auto result = grover::grover_search(cfg, {}, derive_seed(kSeed, 5));
    const double sigma = std::sqrt(100 * law * (1 - law));
    const double observed = static_cast<double>(result.counts.count_of(11));
    bool paper_ok = std::abs(43.0 - 100 * law) <= 4 * sigma;
    bool ours_ok = std::abs(observed - 100 * law) <= 4 * sigma;
    return {worst <= 1e-9 && paper_ok && ours_ok,
            fmt::format("law {:.8f} max deviation {:.2e}; secret count {} vs 43 (mean {:.1f}, 4sigma {:.1f})", law, worst,
                        observed, 100 * law, 4 * sigma)};
}

Outcome grover_noise_degradation() {
    grover::GroverConfig cfg;
    cfg.secret = 11;
    auto rows = grover::noise_sweep(cfg, {0.0, 0.1, 0.25, 0.5}, 1000, derive_seed(kSeed, 6));
    bool monotone = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += fmt::format("p={}:{:.3f} ", rows[i].flip_prob, rows[i].success_rate());
        if (i > 0 && rows[i].success_rate() > rows[i - 1].success_rate()) {
            monotone = false;
        }
    }
    bool chance = std::abs(rows.back().success_rate() - 1.0 / 16.0) <= 0.03;
    return {monotone && chance, detail};
}

Outcome rng_impossibility() {
    auto strict = qrng::bias_report(2, 100, 10'000, derive_seed(kSeed, 7), {}, qrng::ThresholdRule::StrictlyGreater);
    auto loose = qrng::bias_report(2, 100, 10'000, derive_seed(kSeed, 8), {}, qrng::ThresholdRule::GreaterOrEqual);
    bool pass = strict.count(15) == 0 && loose.count(0) == 0;
    return {pass, fmt::format("freq(15) under > = {}, freq(0) under >= = {}", strict.count(15) ? strict.at(15) : 0.0,
                              loose.count(0) ? loose.at(0) : 0.0)};
}

Outcome rng_bias_ordering() {
    auto f = qrng::bias_report(2, 100, 10'000, derive_seed(kSeed, 9));
    auto get = [&f](std::uint64_t v) { return f.count(v) ? f.at(v) : 0.0; };
    double pair = get(5) + get(10);
    double singles = get(1) + get(2) + get(4) + get(8);
    return {pair > singles, fmt::format("freq(0101)+freq(1010)={:.4f} freq(0001,0010,0100,1000)={:.4f} (per value {:.4f} vs {:.4f})",
                                        pair, singles, pair / 2, singles / 4)};
}

Outcome simulator_execution_time() {
    auto t = bench::time_simulator(175, 1024);
    return {t.mean_s <= 0.13, fmt::format("mean {:.6f}s over {} runs (limit 0.13s)", t.mean_s, t.runs)};
}

Outcome classical_variant_properties() {
    auto cfg = game::GameConfig::for_mode(game::DeviceMode::Simulator, game::Variant::Classical);
    Rng player(derive_seed(kSeed, 10));
    std::size_t longest = 0;
    for (std::uint64_t g = 0; g < 10'000; ++g) {
        auto round = game::open_jewel_round(cfg, derive_seed(kSeed, 11, g));
        std::set<std::string> guessed;
        while (round.outcome == game::RoundOutcome::Ongoing) {
            if (round.history.size() >= game::kClassicalJewels.size()) {
                return {false, fmt::format("game {} exceeded {} rounds", g, game::kClassicalJewels.size())};
            }
            round = game::jewel_round_classical(round, player.below(game::kClassicalJewels.size()),
                                                derive_seed(kSeed, 12 + g, round.round));
            const auto &rec = round.history.back();
            if (rec.computer_guess && !guessed.insert(*rec.computer_guess).second) {
                return {false, fmt::format("game {} repeated computer guess {}", g, *rec.computer_guess)};
            }
        }
        longest = std::max(longest, round.history.size());
    }
    return {true, fmt::format("10000 games, longest {} rounds, no repeated computer guess", longest)};
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string run_play(const std::string &mode, const std::string &variant, const std::filesystem::path &script,
                     const std::filesystem::path &transcript) {
    const auto cmd = fmt::format("'{}' play --seed 2019 --mode {} --variant {} --output '{}' < '{}'", FLYUNICORN_BINARY,
                                 mode, variant, transcript.string(), script.string());
    std::string out;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, n);
    }
    int status = pclose(pipe);
    if (status != 0) {
        out += fmt::format("\n<exit status {}>", status);
    }
    return out;
}

Outcome golden_transcripts() {
    const auto dir = std::filesystem::temp_directory_path() / "flyunicorn_acceptance_golden";
    std::filesystem::create_directories(dir);
    const auto script = dir / "script.txt";
    {
        std::ofstream s(script);
        for (int k = 0; k < 30; ++k) {
            s << (k % 5 == 4 ? "down\n" : "up\n") << "jade\n";
        }
        s << "quit\n";
    }
    const auto golden_dir = std::filesystem::path(FLYUNICORN_GOLDEN_DIR);
    std::string detail;
    bool pass = true;
    for (const std::string mode : {"simulator", "hardware"}) {
        for (const std::string variant : {"quantum", "classical"}) {
            const auto name = mode + "_" + variant;
            const auto t1 = dir / (name + "_1.jsonl");
            const auto t2 = dir / (name + "_2.jsonl");
            const auto out1 = run_play(mode, variant, script, t1);
            const auto out2 = run_play(mode, variant, script, t2);
            const auto j1 = read_file(t1);
            const auto j2 = read_file(t2);
            bool same = !out1.empty() && !j1.empty() && out1 == out2 && j1 == j2 &&
                        out1.find("<exit status") == std::string::npos;
            // Checked-in transcripts pin the output across builds as well.
            const auto golden = golden_dir / (name + ".jsonl");
            bool golden_ok = true;
            if (std::filesystem::exists(golden)) {
                golden_ok = read_file(golden) == j1;
            }
            pass = pass && same && golden_ok;
            detail += fmt::format("{}:{}{} ", name, same ? "identical" : "DIFFERENT",
                                  golden_ok ? "" : "(golden mismatch)");
        }
    }
    return {pass, detail};
}

std::vector<Criterion> criteria() {
    return {
        {"u3_probability_law", 5, u3_probability_law},
        {"linear_probability_calibration", 5, linear_probability_calibration},
        {"error_rate_emulation", 30, error_rate_emulation},
        {"error_buffer_win_guarantee", 60, error_buffer_win_guarantee},
        {"grover_amplitude_law", 5, grover_amplitude_law},
        {"grover_noise_degradation", 60, grover_noise_degradation},
        {"rng_impossibility", 60, rng_impossibility},
        {"rng_bias_ordering", 60, rng_bias_ordering},
        {"simulator_execution_time", 60, simulator_execution_time},
        {"classical_variant_properties", 10, classical_variant_properties},
        {"golden_transcripts", 10, golden_transcripts},
    };
}

}  // namespace

int main(int argc, char **argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--list") {
            for (const auto &c : criteria()) {
                std::cout << c.id << "\n";
            }
            return 0;
        }
        if (arg == "--only" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--list] [--only <id>]\n";
            return 2;
        }
    }

    int selected = 0;
    int failed = 0;
    for (const auto &c : criteria()) {
        if (!only.empty() && c.id != only) {
            continue;
        }
        ++selected;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < c.time_limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << fmt::format("{} {} ({:.2f}s / {:.0f}s{}) {}\n", pass ? "PASS" : "FAIL", c.id, elapsed,
                                 c.time_limit_s, in_time ? "" : ", too slow", o.detail)
                  << std::flush;
    }
    if (selected == 0) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return failed == 0 ? 0 : 1;
}
