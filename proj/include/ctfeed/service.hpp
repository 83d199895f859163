#pragma once

// Per-game snapshot store and transport-independent request routing.
//
// Readers take a shared_ptr to a complete snapshot; writers build the replacement outside the
// lock and swap it in, so a reader never observes a half-ingested game.

#include <charconv>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctfeed/snapshot.hpp"
#include "ctfeed/views.hpp"

namespace ctfeed {

class store_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ingest_result {
  std::uint64_t revision = 0;
  std::vector<diagnostic> diagnostics;
};

class game_store {
 public:
  /// Definition and log replace the game in one step.
  ingest_result ingest(const std::string& game_id, std::string_view definition_text,
                       std::string_view log_text, parse_mode mode) {
    auto def = load_game_definition(definition_text);
    return publish(
        std::make_shared<game_snapshot>(make_snapshot(game_id, std::move(def), log_text, mode)));
  }

  /// Replaces the game with a definition and no sessions.
  ingest_result put_definition(const std::string& game_id, std::string_view definition_text) {
    auto snap = std::make_shared<game_snapshot>();
    snap->game_id = game_id;
    snap->definition = load_game_definition(definition_text);
    return publish(std::move(snap));
  }

  /// Replaces the game's events, keeping its current definition.
  ingest_result put_events(const std::string& game_id, std::string_view log_text, parse_mode mode) {
    auto current = snapshot(game_id);
    if (!current) throw store_error("game " + game_id + " has no definition");
    return publish(std::make_shared<game_snapshot>(
        make_snapshot(game_id, current->definition, log_text, mode)));
  }

  std::shared_ptr<const game_snapshot> snapshot(const std::string& game_id) const {
    std::lock_guard lock{mu_};
    auto it = games_.find(game_id);
    return it == games_.end() ? nullptr : it->second;
  }

 private:
  ingest_result publish(std::shared_ptr<game_snapshot> snap) {
    std::lock_guard lock{mu_};
    auto& slot = games_[snap->game_id];
    snap->revision = (slot ? slot->revision : 0) + 1;
    ingest_result result{snap->revision, snap->diagnostics};
    slot = std::move(snap);
    return result;
  }

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const game_snapshot>> games_;
};

struct api_request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct api_response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

namespace detail {

inline api_response json_error(int status, std::string_view code, const std::string& message,
                               const std::vector<diagnostic>& diags = {}) {
  nlohmann::json j = {{"error", code}, {"message", message}, {"diagnostics", to_json(diags)}};
  return {status, dump_payload(j)};
}

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    auto part =
        path.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    if (!part.empty()) parts.emplace_back(part);
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return parts;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<std::vector<double>> parse_fractions(std::string_view s) {
  std::vector<double> out;
  std::stringstream ss{std::string{s}};
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) return std::nullopt;
      out.push_back(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace detail

inline constexpr std::string_view default_dispersion_fractions = "0.1,0.25,0.5";

/// Routes:
///   POST /games/{id}/definition
///   POST /games/{id}/events?mode=strict|lenient
///   GET  /games/{id}/views/clustering | /views/timeline
///   GET  /games/{id}/players/{pid}/feedback | /neighbors?k=K | /dispersion?fractions=..&scope=..
///   GET  /games/{id}/scoreboard
///   GET  /games/{id}/analytics/pareto
class api_router {
 public:
  explicit api_router(game_store& store) : store_(store) {}

  api_response handle(const api_request& req) const {
    try {
      return dispatch(req);
    } catch (const definition_error& e) {
      return detail::json_error(
          400, "invalid_definition", e.what(),
          {{severity::error, diagnostic_code::malformed_line, 0, {}, e.field() + ": " + e.what()}});
    } catch (const log_error& e) {
      return detail::json_error(400, "invalid_log", e.what(), e.diagnostics());
    } catch (const view_error& e) {
      return detail::json_error(409, "no_sessions", e.what());
    } catch (const store_error& e) {
      return detail::json_error(409, "no_definition", e.what());
    } catch (const analytics_error& e) {
      return detail::json_error(404, "not_found", e.what());
    }
  }

 private:
  api_response dispatch(const api_request& req) const {
    auto parts = detail::split_path(req.path);
    if (parts.size() < 3 || parts[0] != "games")
      return detail::json_error(404, "not_found", "no route for " + req.path);
    const std::string& game = parts[1];

    if (req.method == "POST") {
      if (parts.size() == 3 && parts[2] == "definition") {
        auto r = store_.put_definition(game, req.body);
        return {200, dump_payload({{"game_id", game}, {"revision", r.revision}})};
      }
      if (parts.size() == 3 && parts[2] == "events") {
        parse_mode mode = parse_mode::lenient;
        if (auto it = req.query.find("mode"); it != req.query.end()) {
          if (it->second == "strict")
            mode = parse_mode::strict;
          else if (it->second != "lenient")
            return detail::json_error(400, "bad_request", "mode must be strict or lenient");
        }
        auto r = store_.put_events(game, req.body, mode);
        return {200, dump_payload({{"game_id", game},
                                   {"revision", r.revision},
                                   {"diagnostics", to_json(r.diagnostics)}})};
      }
      return detail::json_error(404, "not_found", "no route for " + req.path);
    }
    if (req.method != "GET") return detail::json_error(405, "method_not_allowed", req.method);

    auto snap = store_.snapshot(game);
    if (!snap) return detail::json_error(404, "unknown_game", "unknown game " + game);
    auto query = [&](const char* key) -> std::optional<std::string> {
      auto it = req.query.find(key);
      return it == req.query.end() ? std::nullopt : std::optional{it->second};
    };

    if (parts.size() == 4 && parts[2] == "views") {
      auto view = parse_view_request(parts[3]);
      if (!view || view->which == view_request::kind::feedback)
        return detail::json_error(404, "not_found", "unknown view " + parts[3]);
      return {200, render_view(*snap, *view)};
    }
    if (parts.size() == 3 && parts[2] == "scoreboard") {
      detail::require_snapshot_sessions(*snap);
      return {200, dump_payload(to_json(scoreboard(snap->sessions)))};
    }
    if (parts.size() == 4 && parts[2] == "analytics" && parts[3] == "pareto") {
      detail::require_snapshot_sessions(*snap);
      return {200, dump_payload({{"view", "pareto"}, {"front", pareto_front(snap->sessions)}})};
    }
    if (parts.size() == 5 && parts[2] == "players") {
      auto pid = detail::parse_number<player_id>(parts[3]);
      if (!pid) return detail::json_error(400, "bad_request", "player id must be numeric");
      detail::require_snapshot_sessions(*snap);
      if (parts[4] == "feedback")
        return {200, render_view(*snap, {view_request::kind::feedback, *pid})};
      if (parts[4] == "neighbors") {
        auto k = detail::parse_number<int>(query("k").value_or("1"));
        if (!k || *k < 1) return detail::json_error(400, "bad_request", "k must be >= 1");
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nearest_by_score(snap->sessions, *pid, *k))
          arr.push_back({{"player_id", n.player}, {"score_gap", n.gap}});
        return {200, dump_payload({{"view", "neighbors"},
                                   {"player_id", *pid},
                                   {"k", *k},
                                   {"neighbors", std::move(arr)}})};
      }
      if (parts[4] == "dispersion") {
        auto fractions = detail::parse_fractions(
            query("fractions").value_or(std::string{default_dispersion_fractions}));
        if (!fractions) return detail::json_error(400, "bad_request", "bad fractions list");
        int scope = 0;
        if (auto s = query("scope"); s && *s != "overall") {
          auto level = detail::parse_number<int>(*s);
          if (!level)
            return detail::json_error(400, "bad_request", "scope must be overall or a level");
          scope = *level;
        }
        std::vector<dispersion_band> bands;
        try {
          bands = dispersion_neighbors(snap->sessions, snap->definition, *pid, scope, *fractions);
        } catch (const analytics_error& e) {
          if (find_session(snap->sessions, *pid) == nullptr) throw;
          return detail::json_error(400, "bad_request", e.what());
        }
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : bands)
          arr.push_back({{"fraction", b.fraction}, {"players", b.players}});
        return {200, dump_payload({{"view", "dispersion"},
                                   {"player_id", *pid},
                                   {"scope", scope == 0 ? std::string{"overall"}
                                                        : "level-" + std::to_string(scope)},
                                   {"bands", std::move(arr)}})};
      }
    }
    return detail::json_error(404, "not_found", "no route for " + req.path);
  }

  game_store& store_;
};

}  // namespace ctfeed
