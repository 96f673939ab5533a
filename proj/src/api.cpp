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

#include "flyunicorn/api.hpp"

#include <charconv>
#include <optional>

#include <fmt/format.h>

#include "httplib.h"

#include "flyunicorn/grover.hpp"
#include "flyunicorn/qrng.hpp"
#include "flyunicorn/random.hpp"

namespace flyunicorn::api {

namespace {

constexpr std::uint64_t kMaxOneQubitBits = 4096;
constexpr std::uint64_t kMaxDemoShots = 10'000'000;

/// Thrown by query parsing; mapped to 400.
struct BadRequest : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::optional<std::string> query_value(const Query &query, const std::string &key) {
    const auto it = query.find(key);
    if (it == query.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::uint64_t parse_u64(const std::string &key, const std::string &text) {
    std::uint64_t value = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw BadRequest(fmt::format("parameter '{}' must be a non-negative integer, got '{}'", key, text));
    }
    return value;
}

double parse_double(const std::string &key, const std::string &text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used == text.size()) {
            return value;
        }
    } catch (const std::exception &) {
    }
    throw BadRequest(fmt::format("parameter '{}' must be a number, got '{}'", key, text));
}

std::uint64_t u64_or(const Query &query, const std::string &key, std::uint64_t fallback) {
    const auto text = query_value(query, key);
    return text ? parse_u64(key, *text) : fallback;
}

std::optional<std::uint64_t> explicit_seed(const Query &query) {
    const auto text = query_value(query, "seed");
    return text ? std::optional(parse_u64("seed", *text)) : std::nullopt;
}

nlohmann::json parse_body(std::string_view body) {
    if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        return nlohmann::json::object();
    }
    auto parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw BadRequest("request body must be a JSON object");
    }
    return parsed;
}

std::string string_field(const nlohmann::json &body, const char *key) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw BadRequest(fmt::format("field '{}' must be a string", key));
    }
    return it->get<std::string>();
}

nlohmann::json game_payload(const std::string &id, const game::Game &g) {
    auto out = game::to_json(g.state(), g.config());
    out["session_id"] = id;
    out["seed"] = g.seed();
    out["mode"] = game::to_string(g.config().device_mode);
    out["variant"] = game::to_string(g.config().variant);
    return out;
}

}  // namespace

Response error_response(int status, std::string_view code, std::string_view message) {
    return {status, {{"error", message}, {"code", code}}};
}

GameService::GameService(ServiceOptions options, std::function<Clock::time_point()> clock)
    : options_(std::move(options)), clock_(std::move(clock)), id_source_(entropy_seed()) {}

std::uint64_t GameService::next_seed() const {
    if (options_.seed) {
        return derive_seed(*options_.seed, 41, seed_counter_.fetch_add(1));
    }
    return entropy_seed();
}

Response GameService::health() const {
    return {200, {{"status", "ok"}, {"version", kVersion}}};
}

std::string GameService::new_session_id() {
    // Caller holds store_mutex_.
    std::string id;
    do {
        id = fmt::format("{:016x}{:016x}", id_source_(), id_source_());
    } while (sessions_.contains(id));
    return id;
}

std::shared_ptr<GameService::Session> GameService::find(const std::string &session_id) {
    std::lock_guard lock(store_mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        return nullptr;
    }
    if (clock_() - it->second->last_active > options_.idle_timeout) {
        sessions_.erase(it);
        return nullptr;
    }
    return it->second;
}

std::size_t GameService::evict_idle() {
    std::lock_guard lock(store_mutex_);
    const auto now = clock_();
    return std::erase_if(sessions_, [&](const auto &entry) {
        return now - entry.second->last_active > options_.idle_timeout;
    });
}

std::size_t GameService::session_count() const {
    std::lock_guard lock(store_mutex_);
    return sessions_.size();
}

Response GameService::create_game(std::string_view body) {
    try {
        const auto request = parse_body(body);
        auto mode = options_.default_mode;
        auto variant = game::Variant::Quantum;
        auto inversion = game::InversionMode::RawTheta;
        if (request.contains("mode")) {
            mode = game::parse_device_mode(string_field(request, "mode"));
        }
        if (request.contains("variant")) {
            variant = game::parse_variant(string_field(request, "variant"));
        }
        if (request.contains("inversion")) {
            inversion = game::parse_inversion_mode(string_field(request, "inversion"));
        }
        std::uint64_t seed = 0;
        if (const auto it = request.find("seed"); it != request.end() && !it->is_null()) {
            if (!it->is_number_unsigned()) {
                throw BadRequest("field 'seed' must be a non-negative integer");
            }
            seed = it->get<std::uint64_t>();
        } else {
            seed = next_seed();
        }
        auto cfg = game::GameConfig::for_mode(mode, variant);
        cfg.inversion_mode = inversion;

        evict_idle();
        game::Game g(cfg, seed);
        std::lock_guard lock(store_mutex_);
        auto id = new_session_id();
        auto session = std::make_shared<Session>(id, std::move(g), clock_());
        auto payload = game_payload(id, session->game);
        sessions_.emplace(std::move(id), std::move(session));
        return {201, std::move(payload)};
    } catch (const std::invalid_argument &e) {
        return error_response(400, "bad_request", e.what());
    }
}

template <typename Handler>
Response GameService::with_session(const std::string &session_id, Handler &&handler) {
    const auto session = find(session_id);
    if (!session) {
        return error_response(404, "not_found", fmt::format("no session '{}'", session_id));
    }
    std::unique_lock lock(session->mutex, std::defer_lock);
    if (options_.busy_policy == BusyPolicy::Queue) {
        lock.lock();
    } else if (!lock.try_lock()) {
        return error_response(409, "busy", "another request for this session is in progress");
    }
    session->last_active = clock_();
    try {
        return handler(*session);
    } catch (const BadRequest &e) {
        return error_response(400, "bad_request", e.what());
    } catch (const game::InvalidStateError &e) {
        const bool pending = session->game.state().pending_encounter.has_value() &&
                             session->game.state().status == game::Status::InProgress;
        return error_response(409, pending ? "encounter_pending" : "invalid_state", e.what());
    } catch (const std::invalid_argument &e) {
        return error_response(400, "bad_request", e.what());
    }
}

Response GameService::get_game(const std::string &session_id) {
    return with_session(session_id, [](Session &s) {
        auto payload = game_payload(s.id, s.game);
        auto transcript = nlohmann::json::array();
        for (const auto &record : s.game.state().transcript) {
            transcript.push_back(game::to_json(record));
        }
        payload["transcript"] = std::move(transcript);
        return Response{200, std::move(payload)};
    });
}

Response GameService::post_action(const std::string &session_id, std::string_view body) {
    return with_session(session_id, [&](Session &s) {
        const auto request = parse_body(body);
        const auto text = string_field(request, "action");
        const auto action = game::parse_action(text);
        if (!action) {
            throw BadRequest(fmt::format("action must be 'up' or 'down', got '{}'", text));
        }
        if (s.game.state().status != game::Status::InProgress) {
            return error_response(409, "game_over", "the game has ended");
        }
        const auto &record = s.game.act(*action);
        auto payload = game::to_json(record);
        payload["game"] = game_payload(s.id, s.game);
        return Response{200, std::move(payload)};
    });
}

Response GameService::post_guess(const std::string &session_id, std::string_view body) {
    return with_session(session_id, [&](Session &s) {
        const auto request = parse_body(body);
        const auto jewel = string_field(request, "jewel");
        if (s.game.state().status != game::Status::InProgress || !s.game.state().pending_encounter) {
            return error_response(409, "no_encounter", "no encounter is pending");
        }
        const auto &round = s.game.guess(jewel);
        auto payload = game::to_json(round);
        payload["game"] = game_payload(s.id, s.game);
        return Response{200, std::move(payload)};
    });
}

Response GameService::get_rng(const Query &query) const {
    try {
        const auto method = qrng::parse_method_kind(query_value(query, "method").value_or("probabilistic"));
        const auto seed = explicit_seed(query).value_or(next_seed());
        const qsim::NoiseModel noise(query_value(query, "noise_p") ? parse_double("noise_p", query.at("noise_p")) : 0.0);
        nlohmann::json out{{"method", qrng::to_string(method)}, {"seed", seed}, {"noise_p", noise.readout_flip_prob}};
        qrng::RandomInteger value;
        switch (method) {
            case qrng::RngMethodKind::OneQubitPerBit: {
                const auto n_bits = u64_or(query, "n_bits", 4);
                if (n_bits < 1 || n_bits > kMaxOneQubitBits) {
                    throw BadRequest(fmt::format("n_bits must be in [1, {}], got {}", kMaxOneQubitBits, n_bits));
                }
                value = qrng::random_bits_one_qubit(n_bits, noise, seed);
                break;
            }
            case qrng::RngMethodKind::MultiQubitSingleShot: {
                const auto n_bits = u64_or(query, "n_bits", 4);
                if (n_bits > qsim::kMaxQubits) {
                    throw BadRequest(fmt::format("n_bits must be in [1, {}] for the multi-qubit method, got {}",
                                                 qsim::kMaxQubits, n_bits));
                }
                value = qrng::random_bits_multi_qubit(static_cast<unsigned>(n_bits), noise, seed);
                break;
            }
            case qrng::RngMethodKind::ProbabilisticMeasurement: {
                const auto q = u64_or(query, "q", 2);
                const auto shots = u64_or(query, "shots", 100);
                if (q < 1 || q > qsim::kMaxQubits) {
                    throw BadRequest(fmt::format("q must be in [1, {}], got {}", qsim::kMaxQubits, q));
                }
                if (shots > kMaxDemoShots) {
                    throw BadRequest(fmt::format("shots must be at most {}", kMaxDemoShots));
                }
                auto draw = qrng::probabilistic_draw(static_cast<unsigned>(q), shots, noise, seed);
                out["q"] = q;
                out["shots"] = shots;
                out["average"] = draw.average;
                out["counts"] = draw.counts.to_json(true);
                value = std::move(draw.value);
                break;
            }
        }
        out["bits"] = value.bits();
        out["bit_count"] = value.bit_count();
        out["value"] = value.to_decimal();
        return {200, std::move(out)};
    } catch (const std::invalid_argument &e) {
        return error_response(400, "bad_request", e.what());
    }
}

Response GameService::get_grover(const Query &query) const {
    try {
        grover::GroverConfig cfg;
        const auto n_qubits = u64_or(query, "n_qubits", 4);
        if (n_qubits < 1 || n_qubits > 12) {
            throw BadRequest(fmt::format("n_qubits must be in [1, 12], got {}", n_qubits));
        }
        cfg.n_qubits = static_cast<unsigned>(n_qubits);
        cfg.secret = u64_or(query, "secret", 11);
        const auto iterations = u64_or(query, "iterations", 1);
        if (iterations > 1000) {
            throw BadRequest("iterations must be at most 1000");
        }
        cfg.iterations = static_cast<unsigned>(iterations);
        cfg.shots = u64_or(query, "shots", 100);
        if (cfg.shots > kMaxDemoShots) {
            throw BadRequest(fmt::format("shots must be at most {}", kMaxDemoShots));
        }
        const qsim::NoiseModel noise(query_value(query, "noise_p") ? parse_double("noise_p", query.at("noise_p")) : 0.0);
        const auto seed = explicit_seed(query).value_or(next_seed());
        const auto result = grover::grover_search(cfg, noise, seed);
        nlohmann::json out{
            {"n_qubits", cfg.n_qubits},
            {"secret", cfg.secret},
            {"iterations", cfg.iterations},
            {"shots", cfg.shots},
            {"noise_p", noise.readout_flip_prob},
            {"seed", seed},
            {"counts", result.counts.to_json(true)},
            {"argmax", result.argmax},
            {"argmax_bits", qsim::to_bitstring(result.argmax, cfg.n_qubits)},
            {"success", result.success},
            {"theoretical_success_prob", grover::theoretical_success_prob(std::uint64_t{1} << cfg.n_qubits, cfg.iterations)},
        };
        if (cfg.n_qubits == 4) {
            out["jewel"] = game::kQuantumJewels[result.argmax / 4];
        }
        return {200, std::move(out)};
    } catch (const std::invalid_argument &e) {
        return error_response(400, "bad_request", e.what());
    }
}

namespace {

void reply(httplib::Response &res, const Response &r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

Query to_query(const httplib::Request &req) {
    Query q;
    for (const auto &[key, value] : req.params) {
        q.emplace(key, value);
    }
    return q;
}

}  // namespace

void bind_routes(httplib::Server &server, GameService &service) {
    const auto origin = service.options().cors_origin;
    server.set_default_headers({
        {"Access-Control-Allow-Origin", origin},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"},
    });
    server.Options(".*", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
    server.Get("/health", [&service](const httplib::Request &, httplib::Response &res) { reply(res, service.health()); });
    server.Post("/games", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.create_game(req.body));
    });
    server.Get(R"(/games/([^/]+))", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.get_game(req.matches[1]));
    });
    server.Post(R"(/games/([^/]+)/action)", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.post_action(req.matches[1], req.body));
    });
    server.Post(R"(/games/([^/]+)/guess)", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.post_guess(req.matches[1], req.body));
    });
    server.Get("/rng", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.get_rng(to_query(req)));
    });
    server.Get("/grover", [&service](const httplib::Request &req, httplib::Response &res) {
        reply(res, service.get_grover(to_query(req)));
    });
    server.set_error_handler([](const httplib::Request &, httplib::Response &res) {
        if (res.body.empty()) {
            const auto r = error_response(res.status, res.status == 404 ? "not_found" : "http_error",
                                          httplib::status_message(res.status));
            res.set_content(r.body.dump(), "application/json");
        }
    });
    server.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception &e) {
            what = e.what();
        } catch (...) {
        }
        const auto r = error_response(500, "internal", what);
        res.status = 500;
        res.set_content(r.body.dump(), "application/json");
    });
}

HttpServer::HttpServer(GameService &service) : server_(std::make_unique<httplib::Server>()) {
    // The library default also sets SO_REUSEPORT, which lets a second server
    // silently share an occupied port.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    bind_routes(*server_, service);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string &host, int port) {
    if (port == 0) {
        return server_->bind_to_any_port(host);
    }
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_->is_running()) {
        server_->stop();
    }
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace flyunicorn::api
