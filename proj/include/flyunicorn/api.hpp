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

#ifndef FLYUNICORN_API_HPP
#define FLYUNICORN_API_HPP

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

#include "flyunicorn/game.hpp"

namespace httplib {
class Server;
}

namespace flyunicorn::api {

inline constexpr std::string_view kVersion = "0.1.0";

struct Response {
    int status = 200;
    nlohmann::json body;
};

using Query = std::map<std::string, std::string>;
using Clock = std::chrono::steady_clock;

/// What a request does when another request for the same session is in flight.
enum class BusyPolicy { Queue, Reject };

struct ServiceOptions {
    game::DeviceMode default_mode = game::DeviceMode::Simulator;
    std::chrono::seconds idle_timeout{30 * 60};
    BusyPolicy busy_policy = BusyPolicy::Queue;
    std::string cors_origin = "*";
    /// When set, requests without an explicit seed draw seeds from this one
    /// in arrival order instead of from OS entropy.
    std::optional<std::uint64_t> seed;
};

/// Session store plus request handlers. Handlers never throw; failures come
/// back as {"error", "code"} bodies with a 4xx status.
class GameService {
   public:
    explicit GameService(ServiceOptions options = {}, std::function<Clock::time_point()> clock = Clock::now);

    Response health() const;
    Response create_game(std::string_view body);
    Response get_game(const std::string &session_id);
    Response post_action(const std::string &session_id, std::string_view body);
    Response post_guess(const std::string &session_id, std::string_view body);
    Response get_rng(const Query &query) const;
    Response get_grover(const Query &query) const;

    /// Drops sessions idle longer than the timeout. Returns how many went.
    std::size_t evict_idle();
    std::size_t session_count() const;
    const ServiceOptions &options() const noexcept { return options_; }

   private:
    struct Session {
        Session(std::string session_id, game::Game g, Clock::time_point now)
            : id(std::move(session_id)), game(std::move(g)), created_at(now), last_active(now) {}

        std::mutex mutex;
        std::string id;
        game::Game game;
        Clock::time_point created_at;
        Clock::time_point last_active;
    };

    std::shared_ptr<Session> find(const std::string &session_id);
    std::string new_session_id();
    std::uint64_t next_seed() const;

    template <typename Handler>
    Response with_session(const std::string &session_id, Handler &&handler);

    ServiceOptions options_;
    std::function<Clock::time_point()> clock_;
    mutable std::mutex store_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 id_source_;
    mutable std::atomic<std::uint64_t> seed_counter_{0};
};

Response error_response(int status, std::string_view code, std::string_view message);

/// Registers every endpoint on `server`, plus CORS headers and preflight.
void bind_routes(httplib::Server &server, GameService &service);

/// Owns an HTTP server bound to a GameService.
class HttpServer {
   public:
    explicit HttpServer(GameService &service);
    ~HttpServer();
    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    /// Binds without serving. Port 0 picks a free port. Returns the bound
    /// port or -1 when the address is unavailable.
    int bind(const std::string &host, int port);
    /// Serves on the bound socket until stop(). Returns false on failure.
    bool listen();
    void stop();
    void wait_until_ready() const;

   private:
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace flyunicorn::api

#endif
