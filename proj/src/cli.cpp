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

#include "flyunicorn/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <pthread.h>
#include <unistd.h>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"

#include "flyunicorn/api.hpp"
#include "flyunicorn/bench.hpp"
#include "flyunicorn/grover.hpp"
#include "flyunicorn/qrng.hpp"
#include "flyunicorn/random.hpp"

namespace flyunicorn::cli {

namespace {

constexpr std::string_view kRule = "=====================";

enum class Reply { Line, EndOfInput };

Reply read_line(std::istream &in, std::ostream &out, bool echo, std::string &line) {
    if (!std::getline(in, line)) {
        out << "\n";
        return Reply::EndOfInput;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto first = line.find_first_not_of(" \t");
    const auto last = line.find_last_not_of(" \t");
    line = first == std::string::npos ? "" : line.substr(first, last - first + 1);
    if (echo) {
        out << line << "\n";
    }
    return Reply::Line;
}

void print_banner(std::ostream &out, const game::Game &g) {
    const auto &state = g.state();
    out << "\n" << kRule << "\n";
    out << fmt::format("-[ Altitude {} feet ]-\n", state.altitude);
    out << game::status_message(state.altitude, g.config().goal(), state.player_name) << "\n";
}

std::string choice_prompt(const game::JewelRound &round) {
    return fmt::format("[{}]: ", fmt::join(round.choices(), ","));
}

/// Runs the pending encounter to completion. Returns false when the player
/// quits or input ends.
bool play_encounter(std::istream &in, std::ostream &out, bool echo, game::Game &g) {
    const bool quantum = g.config().variant == game::Variant::Quantum;
    out << "A mischievous cloud challenges you to find the secret jewel first!\n";
    if (quantum) {
        out << fmt::format("Hint: the jewel is one of {}.\n", fmt::join(game::kQuantumJewels, ", "));
    }
    std::string line;
    while (g.state().pending_encounter) {
        out << choice_prompt(*g.state().pending_encounter);
        if (read_line(in, out, echo, line) == Reply::EndOfInput) {
            return false;
        }
        if (line == "q" || line == "quit") {
            return false;
        }
        const game::JewelRound *round = nullptr;
        try {
            round = &g.guess(line);
        } catch (const std::invalid_argument &) {
            out << "That is not one of the jewels.\n";
            continue;
        }
        const auto &last = round->history.back();
        if (last.player_correct) {
            out << fmt::format("You found the {}! +{} feet.\n", round->secret_jewel(), g.config().encounter_bonus);
            break;
        }
        out << "Not quite.\n";
        if (last.grover_counts) {
            out << fmt::format("Measurements after 1 iteration of Grover search:\n{}\n",
                               last.grover_counts->to_display_string());
            out << fmt::format("Maximum outcome: {} ({})\n", qsim::to_bitstring(*last.grover_argmax, 4),
                               *last.grover_argmax);
        }
        out << fmt::format("The mischievous cloud guesses {}.\n", *last.computer_guess);
        if (last.computer_correct) {
            out << fmt::format("The cloud found the {} first! -{} feet.\n", round->secret_jewel(),
                               g.config().encounter_bonus);
            break;
        }
        out << "The cloud missed too. Guess again.\n";
    }
    return true;
}

}  // namespace

int play_loop(std::istream &in, std::ostream &out, const PlayOptions &options) {
    game::Game g(options.config, options.seed);
    const bool quantum = options.config.variant == game::Variant::Quantum;
    const auto write_transcript = [&]() {
        if (options.transcript_path.empty()) {
            return true;
        }
        std::ofstream file(options.transcript_path, std::ios::binary);
        file << game::transcript_jsonl(g.state());
        return static_cast<bool>(file.flush());
    };

    out << fmt::format("Your unicorn, {}, is ready for flight!\n", g.state().player_name);
    out << fmt::format("Use the keyboard to fly up/down on a {} computer,\n", quantum ? "quantum" : "classical");
    out << "as you ascend your way into the castle.\n";
    out << fmt::format("Seed: {}\n", options.seed);

    std::string line;
    while (g.state().status == game::Status::InProgress) {
        print_banner(out, g);
        out << "[up,down,quit]: ";
        if (read_line(in, out, options.echo_input, line) == Reply::EndOfInput) {
            g.quit();
            break;
        }
        std::string lowered(line);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
        if (lowered == "q" || lowered == "quit") {
            g.quit();
            break;
        }
        const auto action = game::parse_action(line);
        if (!action) {
            out << "Please enter up, down, or quit.\n";
            continue;
        }
        const auto &record = g.act(*action);
        out << (*action == game::Action::Up ? "You soar into the sky.\n" : "You swoop toward the ground.\n");
        if (record.counts) {
            out << (options.config.device_mode == game::DeviceMode::Simulator ? "Running on the simulator.\n"
                                                                               : "Running on the hardware emulator.\n");
            out << record.counts->to_display_string() << "\n";
        } else {
            out << fmt::format("The wind adds {} feet.\n", *record.roll);
        }
        if (g.state().pending_encounter && !play_encounter(in, out, options.echo_input, g)) {
            g.quit();
            break;
        }
    }

    if (g.state().status == game::Status::Won) {
        print_banner(out, g);
        out << fmt::format("You win in {} turns!\n", g.state().turn);
    } else {
        out << "Goodbye.\n";
    }
    if (!write_transcript()) {
        std::cerr << fmt::format("error: cannot write transcript to {}\n", options.transcript_path);
        return kExitRuntimeError;
    }
    return kExitOk;
}

namespace {

void write_json_file(const std::string &path, const nlohmann::json &doc) {
    if (path.empty()) {
        return;
    }
    std::ofstream file(path, std::ios::binary);
    file << doc.dump(2) << "\n";
    if (!file.flush()) {
        throw std::runtime_error(fmt::format("cannot write {}", path));
    }
}

int run_rng(std::ostream &out, const std::string &method_name, std::uint64_t n_bits, unsigned q, std::uint64_t shots,
            double noise_p, std::uint64_t seed, const std::string &output) {
    const auto method = qrng::parse_method_kind(method_name);
    const qsim::NoiseModel noise(noise_p);
    out << fmt::format("Seed: {}\n", seed);
    nlohmann::json doc{{"method", qrng::to_string(method)}, {"seed", seed}, {"noise_p", noise_p}};
    qrng::RandomInteger value;
    switch (method) {
        case qrng::RngMethodKind::OneQubitPerBit:
            value = qrng::random_bits_one_qubit(n_bits, noise, seed);
            break;
        case qrng::RngMethodKind::MultiQubitSingleShot:
            if (n_bits > qsim::kMaxQubits) {
                throw std::invalid_argument(
                    fmt::format("n_bits must be in [1, {}] for the multi-qubit method", qsim::kMaxQubits));
            }
            value = qrng::random_bits_multi_qubit(static_cast<unsigned>(n_bits), noise, seed);
            break;
        case qrng::RngMethodKind::ProbabilisticMeasurement: {
            auto draw = qrng::probabilistic_draw(q, shots, noise, seed);
            out << "Qubit measurements:\n" << draw.counts.to_display_string() << "\n";
            out << fmt::format("Average probability: {}\n", draw.average);
            doc["counts"] = draw.counts.to_json(true);
            doc["average"] = draw.average;
            doc["q"] = q;
            doc["shots"] = shots;
            value = std::move(draw.value);
            break;
        }
    }
    if (value.bit_count() <= 64) {
        out << fmt::format("Bits: [{}]\n", fmt::join(value.bits(), ", "));
    } else {
        out << fmt::format("Bits: {} bits (LSB first)\n", value.bit_count());
    }
    out << fmt::format("Integer: {}\n", value.to_decimal());
    doc["bits"] = value.bits();
    doc["bit_count"] = value.bit_count();
    doc["value"] = value.to_decimal();
    write_json_file(output, doc);
    return kExitOk;
}

int run_grover(std::ostream &out, std::uint64_t secret, unsigned iterations, std::uint64_t shots, double noise_p,
               std::uint64_t seed, const std::string &output) {
    grover::GroverConfig cfg;
    cfg.secret = secret;
    cfg.iterations = iterations;
    cfg.shots = shots;
    const auto result = grover::grover_search(cfg, qsim::NoiseModel(noise_p), seed);
    const double theory = grover::theoretical_success_prob(16, iterations);
    out << fmt::format("Seed: {}\n", seed);
    out << fmt::format("Measurements after {} iteration{} of Grover search:\n", iterations, iterations == 1 ? "" : "s");
    out << result.counts.to_display_string() << "\n";
    out << fmt::format("Maximum outcome: {} ({})\n", qsim::to_bitstring(result.argmax, 4), result.argmax);
    out << fmt::format("Secret: {} ({}), {}\n", qsim::to_bitstring(secret, 4), secret,
                       result.success ? "found" : "missed");
    out << fmt::format("Theoretical single-shot success probability: {:.6f}\n", theory);
    write_json_file(output, {{"secret", secret},
                             {"iterations", iterations},
                             {"shots", shots},
                             {"noise_p", noise_p},
                             {"seed", seed},
                             {"counts", result.counts.to_json(true)},
                             {"argmax", result.argmax},
                             {"success", result.success},
                             {"theoretical_success_prob", theory}});
    return kExitOk;
}

int run_bench(std::ostream &out, std::uint64_t seed, std::uint64_t runs, bool quick, bool no_timing,
              const std::string &output) {
    bench::ReportOptions options;
    options.seed = seed;
    options.timing_runs = runs;
    options.include_timing = !no_timing;
    if (quick) {
        options.u3_shots = 10'000;
        options.grover_trials = 200;
        options.bias_trials = 2000;
        options.error_buffer_trials = 500;
        options.minigame_games = 1000;
    }
    const auto report = bench::run_full_report(options);
    const std::string dir = output.empty() ? "." : output;
    bench::write_report(report, dir);
    out << fmt::format("Seed: {}\n", seed);
    for (const auto &section : report.sections) {
        out << fmt::format("{}: {} rows\n", section.name, section.rows.size());
    }
    if (const auto *timing = report.find("execution_speed_measured")) {
        for (const auto &row : timing->rows) {
            out << fmt::format("{}: runs {} min {:.6f}s mean {:.6f}s max {:.6f}s\n", row[0].get<std::string>(),
                               row[1].get<std::uint64_t>(), row[2].get<double>(), row[3].get<double>(),
                               row[5].get<double>());
        }
    }
    out << fmt::format("Wrote {}/report.json and {}/report.csv\n", dir, dir);
    return kExitOk;
}

int run_serve(std::ostream &out, std::ostream &err, const std::string &host, int port, const std::string &mode,
              std::uint64_t idle_minutes, const std::string &busy, const std::string &cors,
              std::optional<std::uint64_t> seed, const std::string &output) {
    api::ServiceOptions options;
    options.default_mode = game::parse_device_mode(mode);
    options.idle_timeout = std::chrono::minutes(idle_minutes);
    options.cors_origin = cors;
    options.seed = seed;
    if (busy == "queue") {
        options.busy_policy = api::BusyPolicy::Queue;
    } else if (busy == "reject") {
        options.busy_policy = api::BusyPolicy::Reject;
    } else {
        throw std::invalid_argument(fmt::format("unknown busy policy '{}' (expected queue or reject)", busy));
    }

    // Route SIGINT/SIGTERM to a watcher thread; the server threads inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    api::GameService service(options);
    api::HttpServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
        err << fmt::format("error: cannot listen on {}:{} (address in use or unavailable)\n", host, port);
        return kExitRuntimeError;
    }
    const auto url = fmt::format("http://{}:{}", host, bound);
    out << fmt::format("Listening on {} (default mode {})\n", url, game::to_string(options.default_mode))
        << std::flush;
    if (!output.empty()) {
        std::ofstream(output) << url << "\n";
    }

    std::atomic<bool> signalled{false};
    std::thread watcher([&] {
        int received = 0;
        sigwait(&signals, &received);
        signalled = true;
        server.stop();
    });
    const bool ok = server.listen();
    if (!signalled) {
        kill(getpid(), SIGTERM);  // releases the watcher if listen() returned on its own
    }
    watcher.join();
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    out << "Server stopped.\n";
    return ok ? kExitOk : kExitRuntimeError;
}

}  // namespace

int run(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err) {
    CLI::App app{"Flying Unicorn: a quantum altitude game on a from-scratch statevector simulator"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string output;
    const auto add_common = [&](CLI::App *sub) {
        sub->add_option("--seed", seed, "Seed for every random draw (printed for replay when omitted)");
        sub->add_option("--output,-o", output, "Output path");
    };

    auto *play = app.add_subcommand("play", "Play the game in the terminal");
    std::string mode = "simulator";
    std::string variant = "quantum";
    std::string inversion = "raw";
    double encounter_prob = 0.2;
    play->add_option("--mode", mode, "simulator or hardware")->check(CLI::IsMember({"simulator", "hardware"}));
    play->add_option("--variant", variant, "quantum or classical")->check(CLI::IsMember({"quantum", "classical"}));
    play->add_option("--inversion", inversion, "raw (theta = frac*pi) or linear (P(1) = frac)")
        ->check(CLI::IsMember({"raw", "linear"}));
    play->add_option("--encounter-prob", encounter_prob, "Chance of a jewel encounter per turn")
        ->check(CLI::Range(0.0, 1.0));
    add_common(play);

    auto *rng = app.add_subcommand("rng", "Generate a quantum random number");
    std::string method = "probabilistic";
    std::uint64_t n_bits = 4;
    unsigned q = 2;
    std::uint64_t shots = 100;
    double noise_p = 0.0;
    rng->add_option("--method", method, "one_qubit, multi_qubit or probabilistic")
        ->check(CLI::IsMember({"one_qubit", "multi_qubit", "probabilistic"}));
    rng->add_option("--bits", n_bits, "Bits for the one_qubit and multi_qubit methods")->check(CLI::PositiveNumber);
    rng->add_option("--q", q, "Qubits for the probabilistic method");
    rng->add_option("--shots", shots, "Shots for the probabilistic method")->check(CLI::PositiveNumber);
    rng->add_option("--noise", noise_p, "Readout flip probability")->check(CLI::Range(0.0, 1.0));
    add_common(rng);

    auto *grv = app.add_subcommand("grover", "Run the 4-qubit Grover search demo");
    std::uint64_t secret = 11;
    unsigned iterations = 1;
    std::uint64_t grover_shots = 100;
    grv->add_option("--secret", secret, "Marked value in [0, 16)")->check(CLI::Range(0, 15));
    grv->add_option("--iterations", iterations, "Oracle + diffusion rounds");
    grv->add_option("--shots", grover_shots, "Measurement shots")->check(CLI::PositiveNumber);
    grv->add_option("--noise", noise_p, "Readout flip probability")->check(CLI::Range(0.0, 1.0));
    add_common(grv);

    auto *bch = app.add_subcommand("bench", "Write report.json and report.csv");
    std::uint64_t runs = 175;
    bool quick = false;
    bool no_timing = false;
    bch->add_option("--runs", runs, "Timed program executions")->check(CLI::PositiveNumber);
    bch->add_flag("--quick", quick, "Smaller trial counts");
    bch->add_flag("--no-timing", no_timing, "Skip the wall-clock section");
    add_common(bch);

    auto *srv = app.add_subcommand("serve", "Start the JSON-over-HTTP game service");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::uint64_t idle_minutes = 30;
    std::string busy = "queue";
    std::string cors = "*";
    srv->add_option("--host", host, "Bind address");
    srv->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    srv->add_option("--mode", mode, "Default mode for new games")->check(CLI::IsMember({"simulator", "hardware"}));
    srv->add_option("--idle-timeout", idle_minutes, "Session idle timeout in minutes");
    srv->add_option("--busy-policy", busy, "queue or reject concurrent requests to one session")
        ->check(CLI::IsMember({"queue", "reject"}));
    srv->add_option("--cors-origin", cors, "Access-Control-Allow-Origin value");
    add_common(srv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (play->parsed()) {
            PlayOptions options;
            options.config = game::GameConfig::for_mode(game::parse_device_mode(mode), game::parse_variant(variant));
            options.config.inversion_mode = game::parse_inversion_mode(inversion);
            options.config.encounter_prob = encounter_prob;
            options.seed = seed.value_or(entropy_seed());
            options.echo_input = &in != &std::cin || !isatty(STDIN_FILENO);
            options.transcript_path = output;
            return play_loop(in, out, options);
        }
        if (rng->parsed()) {
            return run_rng(out, method, n_bits, q, shots, noise_p, seed.value_or(entropy_seed()), output);
        }
        if (grv->parsed()) {
            return run_grover(out, secret, iterations, grover_shots, noise_p, seed.value_or(entropy_seed()), output);
        }
        if (bch->parsed()) {
            return run_bench(out, seed.value_or(entropy_seed()), runs, quick, no_timing, output);
        }
        if (srv->parsed()) {
            return run_serve(out, err, host, port, mode, idle_minutes, busy, cors, seed, output);
        }
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitUsage;
}

}  // namespace flyunicorn::cli
