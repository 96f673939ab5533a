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

#include "flyunicorn/game.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "flyunicorn/grover.hpp"
#include "flyunicorn/random.hpp"

namespace flyunicorn::game {

namespace {

enum Stream : std::uint64_t {
    kName = 21,
    kTurn = 22,
    kGuess = 23,
    kEncounterRoll = 24,
    kEncounterSecret = 25,
    kMeasure = 26,
    kRoll = 27,
};

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void require_playable(const GameState &state) {
    if (state.status != Status::InProgress) {
        throw InvalidStateError(fmt::format("game is over (status {})", to_string(state.status)));
    }
    if (state.pending_encounter) {
        throw InvalidStateError("an encounter is pending; answer it with a guess first");
    }
}

std::optional<JewelRound> roll_encounter(const GameConfig &cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, kEncounterRoll));
    if (!rng.bernoulli(cfg.encounter_prob)) {
        return std::nullopt;
    }
    return open_jewel_round(cfg, derive_seed(seed, kEncounterSecret));
}

std::string classical_player_name(const qrng::NameFragments &fragments, std::uint64_t seed) {
    Rng rng(seed);
    const auto first = rng.between(1, qrng::kNameFragmentCount);
    const auto last = rng.between(1, qrng::kNameFragmentCount);
    return fragments.at(static_cast<std::size_t>(first)) + " " + fragments.at(static_cast<std::size_t>(last));
}

}  // namespace

std::string_view to_string(DeviceMode mode) {
    return mode == DeviceMode::Simulator ? "simulator" : "hardware";
}

std::string_view to_string(Variant variant) { return variant == Variant::Quantum ? "quantum" : "classical"; }

std::string_view to_string(InversionMode mode) { return mode == InversionMode::RawTheta ? "raw" : "linear"; }

std::string_view to_string(Action action) { return action == Action::Up ? "up" : "down"; }

std::string_view to_string(Status status) {
    switch (status) {
        case Status::InProgress:
            return "in_progress";
        case Status::Won:
            return "won";
        case Status::Quit:
            return "quit";
    }
    return "unknown";
}

std::string_view to_string(RoundOutcome outcome) {
    switch (outcome) {
        case RoundOutcome::Ongoing:
            return "ongoing";
        case RoundOutcome::PlayerWon:
            return "player_won";
        case RoundOutcome::ComputerWon:
            return "computer_won";
    }
    return "unknown";
}

DeviceMode parse_device_mode(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "simulator") {
        return DeviceMode::Simulator;
    }
    if (t == "hardware") {
        return DeviceMode::HardwareEmulation;
    }
    throw std::invalid_argument(fmt::format("unknown mode '{}' (expected simulator or hardware)", text));
}

Variant parse_variant(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "quantum") {
        return Variant::Quantum;
    }
    if (t == "classical") {
        return Variant::Classical;
    }
    throw std::invalid_argument(fmt::format("unknown variant '{}' (expected quantum or classical)", text));
}

InversionMode parse_inversion_mode(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "raw") {
        return InversionMode::RawTheta;
    }
    if (t == "linear") {
        return InversionMode::LinearProbability;
    }
    throw std::invalid_argument(fmt::format("unknown inversion mode '{}' (expected raw or linear)", text));
}

std::optional<Action> parse_action(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "u" || t == "up") {
        return Action::Up;
    }
    if (t == "d" || t == "down") {
        return Action::Down;
    }
    return std::nullopt;
}

GameConfig GameConfig::for_mode(DeviceMode mode, Variant variant) {
    GameConfig cfg;
    cfg.device_mode = mode;
    cfg.variant = variant;
    if (mode == DeviceMode::HardwareEmulation && variant == Variant::Quantum) {
        cfg.error_buffer = kHardwareErrorBuffer;
        cfg.readout_flip_prob = kHardwareFlipProb;
    }
    return cfg;
}

void GameConfig::validate() const {
    if (base_shots < 1) {
        throw std::invalid_argument("base_shots must be positive");
    }
    if (error_buffer < 0 || error_buffer >= base_shots) {
        throw std::invalid_argument(
            fmt::format("error buffer must be in [0, {}), got {}", base_shots, error_buffer));
    }
    if (modifier_up <= 0 || modifier_down >= 0) {
        throw std::invalid_argument("modifier_up must be positive and modifier_down negative");
    }
    if (!(encounter_prob >= 0.0 && encounter_prob <= 1.0)) {
        throw std::invalid_argument("encounter probability must be in [0, 1]");
    }
    if (encounter_bonus < 0) {
        throw std::invalid_argument("encounter bonus must be non-negative");
    }
    if (grover_shots < 1) {
        throw std::invalid_argument("grover shots must be positive");
    }
    qsim::NoiseModel{readout_flip_prob};
    rng_method.validate();
}

std::string_view JewelRound::secret_jewel() const {
    return variant == Variant::Quantum ? kQuantumJewels[secret / 4] : kClassicalJewels[secret];
}

std::vector<std::string_view> JewelRound::choices() const {
    if (variant == Variant::Quantum) {
        return {kQuantumJewels.begin(), kQuantumJewels.end()};
    }
    return {kClassicalJewels.begin(), kClassicalJewels.end()};
}

GameState new_game(const GameConfig &cfg, std::uint64_t seed, const qrng::NameFragments &fragments) {
    cfg.validate();
    GameState state;
    const auto name_seed = derive_seed(seed, kName);
    state.player_name = cfg.variant == Variant::Quantum
                            ? qrng::generate_player_name(fragments, cfg.noise(), name_seed, cfg.rng_method)
                            : classical_player_name(fragments, name_seed);
    return state;
}

double inversion_angle(double frac, InversionMode mode) {
    if (mode == InversionMode::RawTheta) {
        return frac * std::numbers::pi;
    }
    return 2.0 * std::asin(std::sqrt(std::clamp(frac, 0.0, 1.0)));
}

double one_probability(double frac, InversionMode mode) {
    if (frac >= 1.0) {
        return 1.0;
    }
    if (frac <= 0.0) {
        return 0.0;
    }
    const double s = std::sin(inversion_angle(frac, mode) / 2.0);
    return s * s;
}

TurnRecord quantum_turn(const GameState &state, const GameConfig &cfg, Action action, const qsim::NoiseModel &noise,
                        std::uint64_t seed) {
    require_playable(state);
    TurnRecord record;
    record.turn = state.turn + 1;
    record.action = action;
    record.modifier = cfg.modifier(action);
    record.altitude_before = state.altitude;
    record.frac = std::max(0.0, static_cast<double>(state.altitude + record.modifier) /
                                    static_cast<double>(cfg.goal()));
    record.encounter = roll_encounter(cfg, seed);

    qsim::StateVector unicorn(1);
    if (record.frac >= 1.0) {
        record.gate = "x";
        qsim::apply_gate_in_place(unicorn, qsim::GateOp::x(0));
    } else if (record.frac > 0.0) {
        record.gate = "u3";
        record.theta = inversion_angle(record.frac, cfg.inversion_mode);
        qsim::apply_gate_in_place(unicorn, qsim::GateOp::u3(0, *record.theta, 0.0, 0.0));
    } else {
        record.gate = "none";
    }
    record.counts = qsim::measure(unicorn, static_cast<std::uint64_t>(cfg.shots()), noise, derive_seed(seed, kMeasure));
    record.altitude_after = static_cast<std::int64_t>(record.counts->count("1"));
    record.message = status_message(record.altitude_after, cfg.goal(), state.player_name);
    if (record.altitude_after >= cfg.goal()) {
        record.encounter.reset();
    }
    return record;
}

TurnRecord classical_turn(const GameState &state, const GameConfig &cfg, Action action, std::uint64_t seed) {
    require_playable(state);
    TurnRecord record;
    record.turn = state.turn + 1;
    record.action = action;
    record.modifier = cfg.modifier(action);
    record.altitude_before = state.altitude;
    record.frac = std::max(0.0, static_cast<double>(state.altitude + record.modifier) /
                                    static_cast<double>(cfg.goal()));
    record.gate = "classical";
    record.encounter = roll_encounter(cfg, seed);
    Rng rng(derive_seed(seed, kRoll));
    record.roll = rng.between(1, 50);
    record.altitude_after = std::clamp<std::int64_t>(state.altitude + record.modifier + *record.roll, 0, cfg.base_shots);
    record.message = status_message(record.altitude_after, cfg.goal(), state.player_name);
    if (record.altitude_after >= cfg.goal()) {
        record.encounter.reset();
    }
    return record;
}

GameState apply_turn(GameState state, const GameConfig &cfg, TurnRecord record) {
    require_playable(state);
    if (record.turn != state.turn + 1) {
        throw InvalidStateError(fmt::format("turn {} does not follow turn {}", record.turn, state.turn));
    }
    state.turn = record.turn;
    state.altitude = std::clamp<std::int64_t>(record.altitude_after, 0, cfg.base_shots);
    if (state.altitude >= cfg.goal()) {
        state.status = Status::Won;
    }
    state.pending_encounter = record.encounter;
    state.transcript.push_back(std::move(record));
    return state;
}

std::string status_message(std::int64_t altitude, std::int64_t goal, std::string_view player_name) {
    if (altitude >= goal) {
        return fmt::format("{} has reached the castle!", player_name);
    }
    if (altitude <= 0) {
        return fmt::format("{} is waiting for you on the ground.", player_name);
    }
    if (altitude < 100) {
        return fmt::format("{} is floating gently above the ground.", player_name);
    }
    if (altitude < 500) {
        return fmt::format("{} is soaring through the sky.", player_name);
    }
    return fmt::format("{} is approaching the castle.", player_name);
}

JewelRound open_jewel_round(const GameConfig &cfg, std::uint64_t seed) {
    JewelRound round;
    round.variant = cfg.variant;
    if (cfg.variant == Variant::Quantum) {
        round.secret = static_cast<std::uint64_t>(qrng::random_in_range(0, 15, cfg.rng_method, cfg.noise(), seed));
    } else {
        Rng rng(seed);
        round.secret = rng.below(kClassicalJewels.size());
        round.computer_memory.resize(kClassicalJewels.size());
        for (std::size_t i = 0; i < kClassicalJewels.size(); ++i) {
            round.computer_memory[i] = i;
        }
    }
    return round;
}

JewelRound jewel_round_quantum(JewelRound round, std::string_view player_guess, const qsim::NoiseModel &noise,
                               std::uint64_t seed, std::uint64_t grover_shots) {
    if (round.variant != Variant::Quantum) {
        throw std::invalid_argument("not a quantum jewel round");
    }
    if (round.outcome != RoundOutcome::Ongoing) {
        throw InvalidStateError("jewel round is already decided");
    }
    const auto guess = lowercase(player_guess);
    if (std::find(kQuantumJewels.begin(), kQuantumJewels.end(), guess) == kQuantumJewels.end()) {
        throw std::invalid_argument(fmt::format("'{}' is not one of amethyst, sapphire, emerald, jade", player_guess));
    }

    GuessRecord record;
    record.round = round.round;
    record.player_guess = guess;
    record.player_correct = guess == round.secret_jewel();
    if (record.player_correct) {
        round.outcome = RoundOutcome::PlayerWon;
    } else {
        grover::GroverConfig cfg;
        cfg.secret = round.secret;
        cfg.shots = grover_shots;
        auto result = grover::grover_search(cfg, noise, seed);
        record.computer_guess = std::string(kQuantumJewels[result.argmax / 4]);
        record.computer_correct = *record.computer_guess == round.secret_jewel();
        record.grover_counts = std::move(result.counts);
        record.grover_argmax = result.argmax;
        if (record.computer_correct) {
            round.outcome = RoundOutcome::ComputerWon;
        } else {
            ++round.round;
        }
    }
    round.history.push_back(std::move(record));
    return round;
}

JewelRound jewel_round_classical(JewelRound round, std::size_t player_guess, std::uint64_t seed) {
    if (round.variant != Variant::Classical) {
        throw std::invalid_argument("not a classical jewel round");
    }
    if (round.outcome != RoundOutcome::Ongoing) {
        throw InvalidStateError("jewel round is already decided");
    }
    if (player_guess >= kClassicalJewels.size()) {
        throw std::invalid_argument(
            fmt::format("jewel index {} outside [0, {})", player_guess, kClassicalJewels.size()));
    }
    auto &memory = round.computer_memory;
    const auto forget = [&memory](std::size_t jewel) {
        memory.erase(std::remove(memory.begin(), memory.end(), jewel), memory.end());
    };

    GuessRecord record;
    record.round = round.round;
    record.player_guess = std::string(kClassicalJewels[player_guess]);
    record.player_correct = player_guess == round.secret;
    if (record.player_correct) {
        round.outcome = RoundOutcome::PlayerWon;
    } else {
        forget(player_guess);
        Rng rng(seed);
        const auto pick = memory[rng.below(memory.size())];
        record.computer_guess = std::string(kClassicalJewels[pick]);
        record.computer_correct = pick == round.secret;
        if (record.computer_correct) {
            round.outcome = RoundOutcome::ComputerWon;
        } else {
            forget(pick);
            ++round.round;
        }
    }
    round.history.push_back(std::move(record));
    return round;
}

GameState apply_encounter_result(GameState state, const GameConfig &cfg, RoundOutcome outcome) {
    if (outcome == RoundOutcome::PlayerWon) {
        state.altitude = std::min(state.altitude + cfg.encounter_bonus, cfg.base_shots);
    } else if (outcome == RoundOutcome::ComputerWon) {
        state.altitude = std::max<std::int64_t>(state.altitude - cfg.encounter_bonus, 0);
    }
    return state;
}

Game::Game(GameConfig cfg, std::uint64_t seed, const qrng::NameFragments &fragments)
    : cfg_(std::move(cfg)), seed_(seed), state_(new_game(cfg_, seed_, fragments)) {}

const TurnRecord &Game::act(Action action) {
    const auto turn_seed = derive_seed(seed_, kTurn, state_.turn + 1);
    auto record = cfg_.variant == Variant::Quantum ? quantum_turn(state_, cfg_, action, cfg_.noise(), turn_seed)
                                                   : classical_turn(state_, cfg_, action, turn_seed);
    state_ = apply_turn(std::move(state_), cfg_, std::move(record));
    return state_.transcript.back();
}

const JewelRound &Game::guess(std::string_view jewel) {
    if (state_.status != Status::InProgress) {
        throw InvalidStateError(fmt::format("game is over (status {})", to_string(state_.status)));
    }
    if (!state_.pending_encounter) {
        throw InvalidStateError("no encounter is pending");
    }
    auto &round = *state_.pending_encounter;
    const auto guess_seed = derive_seed(derive_seed(seed_, kGuess, state_.turn), round.round);
    if (round.variant == Variant::Quantum) {
        round = jewel_round_quantum(std::move(round), jewel, cfg_.noise(), guess_seed, cfg_.grover_shots);
    } else {
        const auto name = lowercase(jewel);
        const auto it = std::find(kClassicalJewels.begin(), kClassicalJewels.end(), name);
        if (it == kClassicalJewels.end()) {
            throw std::invalid_argument(fmt::format("'{}' is not one of the {} jewels", jewel, kClassicalJewels.size()));
        }
        round = jewel_round_classical(std::move(round),
                                      static_cast<std::size_t>(it - kClassicalJewels.begin()), guess_seed);
    }

    auto &record = state_.transcript.back();
    record.encounter = round;
    if (round.outcome != RoundOutcome::Ongoing) {
        state_ = apply_encounter_result(std::move(state_), cfg_, round.outcome);
        state_.transcript.back().altitude_after_encounter = state_.altitude;
        state_.pending_encounter.reset();
    }
    return *state_.transcript.back().encounter;
}

void Game::quit() {
    if (state_.status == Status::InProgress) {
        state_.status = Status::Quit;
        state_.pending_encounter.reset();
    }
}

nlohmann::json to_json(const qsim::MeasurementCounts &counts) { return counts.to_json(); }

nlohmann::json to_json(const GuessRecord &record) {
    nlohmann::json out{
        {"round", record.round},
        {"player_guess", record.player_guess},
        {"player_correct", record.player_correct},
        {"computer_guess", record.computer_guess ? nlohmann::json(*record.computer_guess) : nlohmann::json()},
        {"computer_correct", record.computer_correct},
    };
    if (record.grover_counts) {
        out["grover_counts"] = record.grover_counts->to_json(true);
        out["grover_argmax"] = *record.grover_argmax;
    }
    return out;
}

nlohmann::json to_json(const JewelRound &round) {
    auto history = nlohmann::json::array();
    for (const auto &h : round.history) {
        history.push_back(to_json(h));
    }
    auto choices = nlohmann::json::array();
    for (const auto c : round.choices()) {
        choices.push_back(c);
    }
    nlohmann::json out{
        {"variant", to_string(round.variant)},
        {"round", round.round},
        {"outcome", to_string(round.outcome)},
        {"choices", choices},
        {"history", history},
    };
    // The secret stays hidden until the round is decided.
    if (round.outcome != RoundOutcome::Ongoing) {
        out["secret"] = round.secret;
        out["secret_jewel"] = round.secret_jewel();
    }
    if (round.variant == Variant::Classical) {
        auto remaining = nlohmann::json::array();
        for (const auto i : round.computer_memory) {
            remaining.push_back(kClassicalJewels[i]);
        }
        out["computer_memory"] = remaining;
    }
    return out;
}

nlohmann::json to_json(const TurnRecord &record) {
    nlohmann::json out{
        {"turn", record.turn},
        {"action", to_string(record.action)},
        {"modifier", record.modifier},
        {"frac", record.frac},
        {"gate", record.gate},
        {"altitude_before", record.altitude_before},
        {"altitude_after", record.altitude_after},
        {"message", record.message},
    };
    out["theta"] = record.theta ? nlohmann::json(*record.theta) : nlohmann::json();
    out["counts"] = record.counts ? record.counts->to_json() : nlohmann::json();
    out["roll"] = record.roll ? nlohmann::json(*record.roll) : nlohmann::json();
    out["encounter"] = record.encounter ? to_json(*record.encounter) : nlohmann::json();
    out["altitude_after_encounter"] =
        record.altitude_after_encounter ? nlohmann::json(*record.altitude_after_encounter) : nlohmann::json();
    return out;
}

nlohmann::json to_json(const GameConfig &cfg) {
    return {
        {"mode", to_string(cfg.device_mode)},
        {"variant", to_string(cfg.variant)},
        {"inversion", to_string(cfg.inversion_mode)},
        {"base_shots", cfg.base_shots},
        {"error_buffer", cfg.error_buffer},
        {"goal", cfg.goal()},
        {"shots", cfg.shots()},
        {"modifier_up", cfg.modifier_up},
        {"modifier_down", cfg.modifier_down},
        {"encounter_prob", cfg.encounter_prob},
        {"encounter_bonus", cfg.encounter_bonus},
        {"readout_flip_prob", cfg.readout_flip_prob},
    };
}

nlohmann::json to_json(const GameState &state, const GameConfig &cfg) {
    return {
        {"player_name", state.player_name},
        {"altitude", state.altitude},
        {"goal", cfg.goal()},
        {"shots", cfg.shots()},
        {"error_buffer", cfg.error_buffer},
        {"turn", state.turn},
        {"status", to_string(state.status)},
        {"message", status_message(state.altitude, cfg.goal(), state.player_name)},
        {"pending_encounter", state.pending_encounter ? to_json(*state.pending_encounter) : nlohmann::json()},
    };
}

std::string transcript_jsonl(const GameState &state) {
    std::string out;
    for (const auto &record : state.transcript) {
        out += to_json(record).dump();
        out += '\n';
    }
    return out;
}

}  // namespace flyunicorn::game
