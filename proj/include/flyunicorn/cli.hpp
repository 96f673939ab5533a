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

#ifndef FLYUNICORN_CLI_HPP
#define FLYUNICORN_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "flyunicorn/game.hpp"

namespace flyunicorn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

struct PlayOptions {
    game::GameConfig config;
    std::uint64_t seed = 0;
    /// Echo each line read from the input, for scripted (non-terminal) runs.
    bool echo_input = false;
    /// JSON-lines transcript destination; empty disables it.
    std::string transcript_path;
};

/// Interactive game loop over arbitrary streams. Returns an exit status.
int play_loop(std::istream &in, std::ostream &out, const PlayOptions &options);

/// Full command line entry point: play, rng, grover, bench, serve.
int run(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err);

}  // namespace flyunicorn::cli

#endif
