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

#ifndef FLYUNICORN_GAME_HPP
#define FLYUNICORN_GAME_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "flyunicorn/qrng.hpp"
#include "flyunicorn/qsim.hpp"

namespace flyunicorn::game {

/// Raised when an action is not legal in the current game state, e.g. a turn
/// after the game ended or while an encounter is waiting for a guess.
class InvalidStateError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

enum class DeviceMode { Simulator, HardwareEmulation };
enum class Variant { Quantum, Classical };
/// How the altitude fraction becomes a rotation angle. RawTheta uses
/// theta = frac * pi; LinearProbability uses theta = 2 * asin(sqrt(frac)) so
/// that P(1) equals frac.
enum class InversionMode { RawTheta, LinearProbability };
enum class Action { Up, Down };
enum class Status { InProgress, Won, Quit };
enum class RoundOutcome { Ongoing, PlayerWon, ComputerWon };

std::string_view to_string(DeviceMode mode);
std::string_view to_string(Variant variant);
std::string_view to_string(InversionMode mode);
std::string_view to_string(Action action);
std::string_view to_string(Status status);
std::string_view to_string(RoundOutcome outcome);

/// "simulator" | "hardware"
DeviceMode parse_device_mode(std::string_view text);
/// "quantum" | "classical"
Variant parse_variant(std::string_view text);
/// "raw" | "linear"
InversionMode parse_inversion_mode(std::string_view text);
/// "u", "up", "d", "down" in any case.
std::optional<Action> parse_action(std::string_view text);

inline constexpr std::int64_t kHardwareErrorBuffer = 75;
inline constexpr double kHardwareFlipProb = 0.05;

struct GameConfig {
    DeviceMode device_mode = DeviceMode::Simulator;
    Variant variant = Variant::Quantum;
    InversionMode inversion_mode = InversionMode::RawTheta;
    std::int64_t base_shots = 1024;
    std::int64_t error_buffer = 0;
    std::int64_t modifier_up = 150;
    std::int64_t modifier_down = -150;
    double encounter_prob = 0.2;
    std::int64_t encounter_bonus = 100;
    double readout_flip_prob = 0.0;
    std::uint64_t grover_shots = 100;
    qrng::RngMethod rng_method = qrng::RngMethod::one_qubit_per_bit();

    /// Defaults for a device mode: hardware emulation gets a 75-count error
    /// buffer and 5% readout error. The classical variant never uses a buffer.
    static GameConfig for_mode(DeviceMode mode, Variant variant = Variant::Quantum);

    std::int64_t goal() const noexcept { return base_shots - error_buffer; }
    std::int64_t shots() const noexcept { return base_shots; }
    qsim::NoiseModel noise() const { return qsim::NoiseModel(readout_flip_prob); }
    std::int64_t modifier(Action action) const noexcept {
        return action == Action::Up ? modifier_up : modifier_down;
    }

    void validate() const;
};

inline constexpr std::array<std::string_view, 4> kQuantumJewels = {"amethyst", "sapphire", "emerald", "jade"};
inline constexpr std::array<std::string_view, 14> kClassicalJewels = {
    "amethyst", "sapphire", "emerald", "jade",   "ruby",      "diamond", "topaz",
    "opal",     "pearl",    "garnet",  "onyx",   "turquoise", "citrine", "peridot"};

/// One exchange inside a jewel round.
struct GuessRecord {
    std::uint64_t round = 0;
    std::string player_guess;
    bool player_correct = false;
    std::optional<std::string> computer_guess;
    bool computer_correct = false;
    std::optional<qsim::MeasurementCounts> grover_counts;
    std::optional<std::uint64_t> grover_argmax;
};

/// State of the jewel guessing mini-game.
///
/// Quantum rounds hide a value in [0, 16) and name it by groups of four
/// (value / 4 indexes kQuantumJewels). Classical rounds hide one of the 14
/// classical jewels and the computer keeps an elimination list.
struct JewelRound {
    Variant variant = Variant::Quantum;
    std::uint64_t secret = 0;
    std::uint64_t round = 1;
    RoundOutcome outcome = RoundOutcome::Ongoing;
    /// Classical only: indices the computer has not yet ruled out.
    std::vector<std::size_t> computer_memory;
    std::vector<GuessRecord> history;

    std::string_view secret_jewel() const;
    /// Names the player may guess from. For quantum rounds this is the
    /// four-value hint list.
    std::vector<std::string_view> choices() const;
};

struct TurnRecord {
    std::uint64_t turn = 0;
    Action action = Action::Up;
    std::int64_t modifier = 0;
    double frac = 0.0;
    /// "none", "u3" or "x" for quantum turns; "classical" otherwise.
    std::string gate;
    std::optional<double> theta;
    std::optional<qsim::MeasurementCounts> counts;
    std::optional<std::int64_t> roll;
    std::int64_t altitude_before = 0;
    std::int64_t altitude_after = 0;
    std::string message;
    std::optional<JewelRound> encounter;
    std::optional<std::int64_t> altitude_after_encounter;
};

struct GameState {
    std::int64_t altitude = 0;
    std::uint64_t turn = 0;
    std::string player_name;
    Status status = Status::InProgress;
    std::vector<TurnRecord> transcript;
    std::optional<JewelRound> pending_encounter;
};

GameState new_game(const GameConfig &cfg, std::uint64_t seed,
                   const qrng::NameFragments &fragments = qrng::NameFragments());

/// Rotation angle for an altitude fraction in (0, 1).
double inversion_angle(double frac, InversionMode mode);

/// Analytic probability of measuring 1 for a fraction, including the
/// frac <= 0 and frac >= 1 cases.
double one_probability(double frac, InversionMode mode);

/// Resolves one quantum turn without touching `state`. Throws
/// InvalidStateError when the game is over or an encounter is pending.
TurnRecord quantum_turn(const GameState &state, const GameConfig &cfg, Action action,
                        const qsim::NoiseModel &noise, std::uint64_t seed);

TurnRecord classical_turn(const GameState &state, const GameConfig &cfg, Action action, std::uint64_t seed);

/// Commits a resolved turn: altitude, turn counter, status, transcript and
/// pending encounter.
GameState apply_turn(GameState state, const GameConfig &cfg, TurnRecord record);

/// "<name> is floating gently above the ground." and similar, by altitude band.
std::string status_message(std::int64_t altitude, std::int64_t goal, std::string_view player_name);

JewelRound open_jewel_round(const GameConfig &cfg, std::uint64_t seed);

/// Player guesses first; on a miss the computer guesses the jewel of the
/// Grover argmax.
JewelRound jewel_round_quantum(JewelRound round, std::string_view player_guess, const qsim::NoiseModel &noise,
                               std::uint64_t seed, std::uint64_t grover_shots = 100);

/// Player guesses an index into kClassicalJewels; wrong guesses by either side
/// leave the computer's memory and the computer picks uniformly from the rest.
JewelRound jewel_round_classical(JewelRound round, std::size_t player_guess, std::uint64_t seed);

/// Bonus on PlayerWon (capped at base_shots), penalty on ComputerWon (floored at 0).
GameState apply_encounter_result(GameState state, const GameConfig &cfg, RoundOutcome outcome);

/// A single game session: owns config, state and the seed schedule.
class Game {
   public:
    Game(GameConfig cfg, std::uint64_t seed, const qrng::NameFragments &fragments = qrng::NameFragments());

    const TurnRecord &act(Action action);
    /// Answers the pending encounter with a jewel name.
    const JewelRound &guess(std::string_view jewel);
    void quit();

    const GameConfig &config() const noexcept { return cfg_; }
    const GameState &state() const noexcept { return state_; }
    std::uint64_t seed() const noexcept { return seed_; }

   private:
    GameConfig cfg_;
    std::uint64_t seed_;
    GameState state_;
};

nlohmann::json to_json(const qsim::MeasurementCounts &counts);
nlohmann::json to_json(const GuessRecord &record);
nlohmann::json to_json(const JewelRound &round);
nlohmann::json to_json(const TurnRecord &record);
nlohmann::json to_json(const GameConfig &cfg);
/// Summary without the transcript.
nlohmann::json to_json(const GameState &state, const GameConfig &cfg);

/// One compact JSON object per turn, newline terminated.
std::string transcript_jsonl(const GameState &state);

}  // namespace flyunicorn::game

#endif
