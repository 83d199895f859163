#pragma once

// Chart-ready payloads for the clustering and timeline views plus the analytics endpoints.
// Units are raw seconds and points; pixel mapping belongs to the client.

#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctfeed/analytics.hpp"
#include "ctfeed/snapshot.hpp"

namespace ctfeed {

struct bar_spec {
  std::string scope;  // "overall" or "level-K"
  scope_stats stats;
};

struct clustering_view {
  std::string game_id;
  bar_spec overall;
  std::vector<bar_spec> per_level;
};

struct estimated_stripe {
  int level = 1;
  seconds start{0};
  seconds end{0};
};

struct timeline_row {
  player_id player = 0;
  int rank = 1;
  std::vector<points> level_earned;  // one entry per game level
  points final_score = 0;
  seconds total_duration{0};
  seconds level_time_sum{0};
  bool finished = true;
};

struct timeline_view {
  std::string game_id;
  std::vector<points> cumulative_maxima;
  std::vector<estimated_stripe> estimated_stripes;
  std::vector<score_timeline> scorelines;
  std::vector<timeline_row> table;  // scoreboard order
};

class view_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_snapshot_sessions(const game_snapshot& snap) {
  if (!snap.has_sessions()) throw view_error("no sessions ingested for game " + snap.game_id);
}

inline seconds level_time_sum(const player_session& s) {
  seconds sum{0};
  for (const auto& rec : s.levels) sum += rec.duration;
  return sum;
}

}  // namespace detail

inline clustering_view clustering_payload(const game_snapshot& snap) {
  detail::require_snapshot_sessions(snap);
  clustering_view view;
  view.game_id = snap.definition.game_id;
  view.overall = {"overall", game_statistics(snap.sessions)};
  for (auto& stats : level_statistics(snap.sessions, snap.definition))
    view.per_level.push_back({"level-" + std::to_string(stats.level), std::move(stats)});
  return view;
}

inline std::vector<estimated_stripe> estimated_stripes(const game_definition& def) {
  std::vector<estimated_stripe> out;
  seconds at{0};
  for (const auto& level : def.levels) {
    out.push_back({level.order, at, at + level.estimated_duration});
    at += level.estimated_duration;
  }
  return out;
}

inline timeline_view timeline_payload(const game_snapshot& snap) {
  detail::require_snapshot_sessions(snap);
  const auto& def = snap.definition;
  timeline_view view;
  view.game_id = def.game_id;
  view.cumulative_maxima = cumulative_maxima(def);
  view.estimated_stripes = estimated_stripes(def);
  for (const auto& s : snap.sessions) view.scorelines.push_back(build_scoreline(s, def));
  for (const auto& row : scoreboard(snap.sessions)) {
    const auto& s = *find_session(snap.sessions, row.player);
    timeline_row r;
    r.player = s.player;
    r.rank = row.rank;
    for (const auto& level : def.levels) {
      const auto* rec = s.find_level(level.order);
      r.level_earned.push_back(rec ? rec->earned : 0);
    }
    r.final_score = s.final_score;
    r.total_duration = s.total_duration;
    r.level_time_sum = detail::level_time_sum(s);
    r.finished = s.finished();
    view.table.push_back(std::move(r));
  }
  return view;
}

// JSON encoding. Object keys come out sorted (nlohmann's default map), so equal payloads
// always serialize to equal bytes.

inline nlohmann::json to_json(const diagnostic& d) {
  nlohmann::json j = {{"severity", to_string(d.severity)},
                      {"code", to_string(d.code)},
                      {"line", d.line},
                      {"message", d.message}};
  if (d.player) j["player_id"] = *d.player;
  return j;
}

inline nlohmann::json to_json(const std::vector<diagnostic>& diags) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : diags) arr.push_back(to_json(d));
  return arr;
}

inline nlohmann::json to_json(const bar_spec& bar) {
  nlohmann::json dots = nlohmann::json::array();
  for (const auto& d : bar.stats.dots)
    dots.push_back({{"player_id", d.player},
                    {"duration_s", d.duration.count()},
                    {"score", d.score},
                    {"finished", d.finished}});
  nlohmann::json j = {{"scope", bar.scope},
                      {"max_duration_s", bar.stats.max_duration.count()},
                      {"mean_duration_s", bar.stats.mean_duration},
                      {"score_min", bar.stats.score_min},
                      {"score_max", bar.stats.score_max},
                      {"dots", std::move(dots)}};
  if (bar.stats.level > 0) j["level"] = bar.stats.level;
  return j;
}

inline nlohmann::json to_json(const clustering_view& view) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& bar : view.per_level) levels.push_back(to_json(bar));
  return {{"view", "clustering"},
          {"game_id", view.game_id},
          {"overall", to_json(view.overall)},
          {"per_level", std::move(levels)}};
}

inline nlohmann::json to_json(const score_point& p) {
  nlohmann::json j = {{"elapsed_s", p.elapsed.count()}, {"score", p.score}};
  if (p.mark) {
    nlohmann::json mark = {
        {"kind", kind_name(p.mark->kind)}, {"level", p.mark->level}, {"penalty", p.mark->penalty}};
    if (p.mark->kind == event_kind::hint_taken) mark["hint"] = p.mark->hint;
    j["mark"] = std::move(mark);
  }
  return j;
}

inline nlohmann::json to_json(const timeline_view& view) {
  nlohmann::json stripes = nlohmann::json::array();
  for (const auto& s : view.estimated_stripes)
    stripes.push_back({{"level", s.level}, {"start_s", s.start.count()}, {"end_s", s.end.count()}});
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& line : view.scorelines) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : line.points) pts.push_back(to_json(p));
    lines.push_back({{"player_id", line.player}, {"points", std::move(pts)}});
  }
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : view.table)
    table.push_back({{"player_id", r.player},
                     {"rank", r.rank},
                     {"level_scores", r.level_earned},
                     {"final_score", r.final_score},
                     {"total_duration_s", r.total_duration.count()},
                     {"level_time_sum_s", r.level_time_sum.count()},
                     {"finished", r.finished}});
  return {{"view", "timeline"},
          {"game_id", view.game_id},
          {"cumulative_maxima", view.cumulative_maxima},
          {"estimated_stripes", std::move(stripes)},
          {"scorelines", std::move(lines)},
          {"table", std::move(table)}};
}

inline nlohmann::json optional_instant(const std::optional<instant>& t) {
  return t ? nlohmann::json(format_instant(*t)) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const personal_feedback& fb) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : fb.levels) {
    nlohmann::json j = {{"level", l.level},
                        {"entered", l.entered},
                        {"duration_s", l.duration.count()},
                        {"earned", l.earned},
                        {"lost", l.lost}};
    j["outcome"] = l.outcome ? nlohmann::json(to_string(*l.outcome)) : nlohmann::json(nullptr);
    levels.push_back(std::move(j));
  }
  nlohmann::json transitions = nlohmann::json::array();
  for (const auto& t : fb.transitions)
    transitions.push_back({{"from", t.from}, {"to", t.to}, {"at", format_instant(t.at)}});
  auto peers = [](const std::vector<peer>& ps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : ps)
      arr.push_back({{"player_id", p.player},
                     {"final_score", p.final_score},
                     {"total_duration_s", p.total_duration.count()}});
    return arr;
  };
  return {{"view", "feedback"},
          {"player_id", fb.player},
          {"started_at", format_instant(fb.started_at)},
          {"finished_at", optional_instant(fb.finished_at)},
          {"total_duration_s", fb.total_duration.count()},
          {"final_score", fb.final_score},
          {"rank", fb.rank},
          {"levels", std::move(levels)},
          {"lowest_score_levels", fb.lowest_score_levels},
          {"most_lost_levels", fb.most_lost_levels},
          {"transitions", std::move(transitions)},
          {"top_better", peers(fb.better)},
          {"top_worse", peers(fb.worse)}};
}

inline nlohmann::json to_json(const std::vector<standing>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"player_id", r.player},
                   {"rank", r.rank},
                   {"final_score", r.final_score},
                   {"total_duration_s", r.total_duration.count()},
                   {"finished", r.finished}});
  return {{"view", "scoreboard"}, {"standings", std::move(arr)}};
}

inline std::string dump_payload(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// What `export --view` and the GET view endpoints produce.
struct view_request {
  enum class kind { clustering, timeline, feedback } which = kind::clustering;
  player_id player = 0;
};

/// Accepts `clustering`, `timeline` and `feedback:<player_id>`.
inline std::optional<view_request> parse_view_request(std::string_view text) {
  if (text == "clustering") return view_request{view_request::kind::clustering, 0};
  if (text == "timeline") return view_request{view_request::kind::timeline, 0};
  constexpr std::string_view prefix = "feedback:";
  if (text.starts_with(prefix)) {
    auto digits = text.substr(prefix.size());
    player_id pid = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), pid);
    if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size())
      return view_request{view_request::kind::feedback, pid};
  }
  return std::nullopt;
}

inline nlohmann::json feedback_json(const game_snapshot& snap, player_id pid) {
  detail::require_snapshot_sessions(snap);
  auto j = to_json(personal_summary(snap.sessions, snap.definition, pid));
  if (snap.sessions.size() >= 2) {
    auto rel = relative_standing(snap.sessions, pid);
    j["relative"] = {{"score_percentile", rel.score_percentile},
                     {"time_percentile", rel.time_percentile},
                     {"score_band", rel.score_band},
                     {"time_band", rel.time_band}};
  } else {
    j["relative"] = nullptr;
  }
  return j;
}

/// Throws view_error when nothing was ingested and analytics_error for unknown players.
inline std::string render_view(const game_snapshot& snap, const view_request& req) {
  switch (req.which) {
    case view_request::kind::clustering: return dump_payload(to_json(clustering_payload(snap)));
    case view_request::kind::timeline: return dump_payload(to_json(timeline_payload(snap)));
    case view_request::kind::feedback: return dump_payload(feedback_json(snap, req.player));
  }
  return {};
}

}  // namespace ctfeed
