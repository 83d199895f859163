#pragma once

// Comparative and overview statistics over reconstructed sessions.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctfeed/game_model.hpp"
#include "ctfeed/session.hpp"

namespace ctfeed {

struct stat_dot {
  player_id player = 0;
  seconds duration{0};
  points score = 0;
  bool finished = true;

  bool operator==(const stat_dot&) const = default;
};

/// Aggregate over one scope: a level (level >= 1) or the whole game (level == 0).
struct scope_stats {
  int level = 0;
  seconds max_duration{0};
  double mean_duration = 0.0;
  points score_min = 0;
  points score_max = 0;
  std::vector<stat_dot> dots;  // ascending player id

  bool operator==(const scope_stats&) const = default;
};

using level_stats = scope_stats;

struct game_stats : scope_stats {
  std::size_t player_count = 0;
  std::size_t finish_count = 0;
};

struct standing {
  player_id player = 0;
  int rank = 1;
  points final_score = 0;
  seconds total_duration{0};
  bool finished = true;

  bool operator==(const standing&) const = default;
};

struct score_neighbor {
  player_id player = 0;
  points gap = 0;

  bool operator==(const score_neighbor&) const = default;
};

struct relative_position {
  double score_percentile = 0.0;
  double time_percentile = 0.0;
  int score_band = 1;
  int time_band = 1;
};

struct dispersion_band {
  double fraction = 0.0;
  std::vector<player_id> players;  // ascending
};

class analytics_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_sessions(const std::vector<player_session>& sessions, const char* op) {
  if (sessions.empty()) throw analytics_error(std::string{op} + ": no sessions");
}

inline const player_session& require_player(const std::vector<player_session>& sessions,
                                            player_id pid) {
  const auto* s = find_session(sessions, pid);
  if (s == nullptr) throw analytics_error("unknown player " + std::to_string(pid));
  return *s;
}

inline scope_stats summarize(int level, std::vector<stat_dot> dots) {
  std::sort(dots.begin(), dots.end(),
            [](const auto& a, const auto& b) { return a.player < b.player; });
  scope_stats out;
  out.level = level;
  if (dots.empty()) return out;
  std::int64_t total = 0;
  out.score_min = out.score_max = dots.front().score;
  for (const auto& d : dots) {
    out.max_duration = std::max(out.max_duration, d.duration);
    total += d.duration.count();
    out.score_min = std::min(out.score_min, d.score);
    out.score_max = std::max(out.score_max, d.score);
  }
  out.mean_duration = static_cast<double>(total) / static_cast<double>(dots.size());
  out.dots = std::move(dots);
  return out;
}

/// Quintile label from a [0,1] fraction: 1 below 0.2 ... 5 at or above 0.8.
inline int band_of(double percentile) {
  constexpr double thresholds[] = {0.2, 0.4, 0.6, 0.8};
  int band = 1;
  for (double t : thresholds)
    if (percentile >= t) ++band;
  return band;
}

}  // namespace detail

/// One entry per level somebody entered; non-entrants are absent from that level's dots.
inline std::vector<level_stats> level_statistics(const std::vector<player_session>& sessions,
                                                 const game_definition& def) {
  detail::require_sessions(sessions, "level_statistics");
  std::vector<level_stats> out;
  for (const auto& level : def.levels) {
    std::vector<stat_dot> dots;
    for (const auto& s : sessions)
      if (const auto* rec = s.find_level(level.order))
        dots.push_back(
            {s.player, rec->duration, rec->earned, rec->outcome != level_outcome::unfinished});
    if (!dots.empty()) out.push_back(detail::summarize(level.order, std::move(dots)));
  }
  return out;
}

inline game_stats game_statistics(const std::vector<player_session>& sessions) {
  detail::require_sessions(sessions, "game_statistics");
  std::vector<stat_dot> dots;
  game_stats out;
  for (const auto& s : sessions) {
    dots.push_back({s.player, s.total_duration, s.final_score, s.finished()});
    if (s.finished()) ++out.finish_count;
  }
  static_cast<scope_stats&>(out) = detail::summarize(0, std::move(dots));
  out.player_count = sessions.size();
  return out;
}

/// Ordered by (score desc, duration asc, id asc); equal (score, duration) share a rank.
inline std::vector<standing> scoreboard(const std::vector<player_session>& sessions) {
  detail::require_sessions(sessions, "scoreboard");
  std::vector<standing> rows;
  for (const auto& s : sessions)
    rows.push_back({s.player, 1, s.final_score, s.total_duration, s.finished()});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.final_score != b.final_score) return a.final_score > b.final_score;
    if (a.total_duration != b.total_duration) return a.total_duration < b.total_duration;
    return a.player < b.player;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool tied = i > 0 && rows[i].final_score == rows[i - 1].final_score &&
                rows[i].total_duration == rows[i - 1].total_duration;
    rows[i].rank = tied ? rows[i - 1].rank : static_cast<int>(i) + 1;
  }
  return rows;
}

/// The k closest final scores (self excluded). Ties with the k-th gap are all returned.
inline std::vector<score_neighbor> nearest_by_score(const std::vector<player_session>& sessions,
                                                    player_id pid, int k) {
  if (k < 1) throw analytics_error("nearest_by_score: k must be >= 1");
  const auto& me = detail::require_player(sessions, pid);
  struct candidate {
    points gap;
    seconds duration;
    player_id player;
  };
  std::vector<candidate> all;
  for (const auto& s : sessions)
    if (s.player != pid)
      all.push_back({s.final_score > me.final_score ? s.final_score - me.final_score
                                                    : me.final_score - s.final_score,
                     s.total_duration, s.player});
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.gap != b.gap) return a.gap < b.gap;
    if (a.duration != b.duration) return a.duration < b.duration;
    return a.player < b.player;
  });
  std::vector<score_neighbor> out;
  for (const auto& c : all) {
    if (static_cast<int>(out.size()) >= k && c.gap != out.back().gap) break;
    out.push_back({c.player, c.gap});
  }
  return out;
}

/// Percentile = share of the other players strictly worse (lower score / longer time).
inline relative_position relative_standing(const std::vector<player_session>& sessions,
                                           player_id pid) {
  if (sessions.size() < 2) throw analytics_error("relative_standing: needs at least 2 players");
  const auto& me = detail::require_player(sessions, pid);
  std::size_t lower_score = 0, slower = 0;
  for (const auto& s : sessions) {
    if (s.player == pid) continue;
    if (s.final_score < me.final_score) ++lower_score;
    if (s.total_duration > me.total_duration) ++slower;
  }
  const auto others = static_cast<double>(sessions.size() - 1);
  relative_position out;
  out.score_percentile = static_cast<double>(lower_score) / others;
  out.time_percentile = static_cast<double>(slower) / others;
  out.score_band = detail::band_of(out.score_percentile);
  out.time_band = detail::band_of(out.time_percentile);
  return out;
}

/// Players not dominated in (higher score, shorter total time). Ascending ids.
inline std::vector<player_id> pareto_front(const std::vector<player_session>& sessions) {
  detail::require_sessions(sessions, "pareto_front");
  std::vector<const player_session*> order;
  for (const auto& s : sessions) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->final_score != b->final_score) return a->final_score > b->final_score;
    return a->total_duration < b->total_duration;
  });
  // Sweep by descending score: survivors have no higher scorer at least as fast and no equal
  // scorer strictly faster.
  std::vector<player_id> front;
  std::optional<seconds> best_faster_group;  // fastest time among strictly higher scores
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && order[j]->final_score == order[i]->final_score) ++j;
    const seconds group_best = order[i]->total_duration;
    for (std::size_t m = i; m < j; ++m) {
      const auto t = order[m]->total_duration;
      bool dominated = (best_faster_group && *best_faster_group <= t) || t > group_best;
      if (!dominated) front.push_back(order[m]->player);
    }
    if (!best_faster_group || group_best < *best_faster_group) best_faster_group = group_best;
    i = j;
  }
  std::sort(front.begin(), front.end());
  return front;
}

/// Scope level 0 means the whole game.
inline std::vector<dispersion_band> dispersion_neighbors(
    const std::vector<player_session>& sessions, const game_definition& def, player_id pid,
    int scope, const std::vector<double>& fractions) {
  detail::require_player(sessions, pid);
  if (scope < 0 || scope > def.level_count())
    throw analytics_error("unknown scope " + std::to_string(scope));
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0))
      throw analytics_error("fractions must lie in (0, 1]");
    if (i > 0 && !(fractions[i] > fractions[i - 1]))
      throw analytics_error("fractions must be strictly increasing");
  }

  std::vector<stat_dot> dots;
  points span = 0;
  if (scope == 0) {
    dots = game_statistics(sessions).dots;
    span = def.total_max;
  } else {
    for (const auto& s : sessions)
      if (const auto* rec = s.find_level(scope))
        dots.push_back({s.player, rec->duration, rec->earned, true});
    span = def.find_level(scope)->max_points;
  }
  auto me = std::find_if(dots.begin(), dots.end(), [&](const auto& d) { return d.player == pid; });
  if (me == dots.end())
    throw analytics_error("player " + std::to_string(pid) + " did not enter level " +
                          std::to_string(scope));
  seconds max_duration{0};
  for (const auto& d : dots) max_duration = std::max(max_duration, d.duration);

  std::vector<dispersion_band> out;
  for (double f : fractions) {
    dispersion_band band{f, {}};
    const double time_radius = f * static_cast<double>(max_duration.count());
    const double score_radius = f * static_cast<double>(span);
    for (const auto& d : dots) {
      if (d.player == pid) continue;
      auto dt = static_cast<double>(std::abs((d.duration - me->duration).count()));
      auto ds =
          static_cast<double>(d.score > me->score ? d.score - me->score : me->score - d.score);
      if (dt <= time_radius && ds <= score_radius) band.players.push_back(d.player);
    }
    std::sort(band.players.begin(), band.players.end());
    out.push_back(std::move(band));
  }
  return out;
}

struct level_summary {
  int level = 1;
  bool entered = false;
  seconds duration{0};
  points earned = 0;
  points lost = 0;
  std::optional<level_outcome> outcome;
};

struct level_transition {
  int from = 1;
  int to = 2;
  instant at{};
};

struct peer {
  player_id player = 0;
  points final_score = 0;
  seconds total_duration{0};
};

struct personal_feedback {
  player_id player = 0;
  instant started_at{};
  std::optional<instant> finished_at;
  seconds total_duration{0};
  points final_score = 0;
  int rank = 1;
  std::vector<level_summary> levels;  // every level of the game
  std::vector<int> lowest_score_levels;
  std::vector<int> most_lost_levels;
  std::vector<level_transition> transitions;
  std::vector<peer> better;  // up to 3, closest first
  std::vector<peer> worse;   // up to 3, closest first
};

inline constexpr std::size_t peer_count = 3;

inline personal_feedback personal_summary(const std::vector<player_session>& sessions,
                                          const game_definition& def, player_id pid) {
  const auto& me = detail::require_player(sessions, pid);
  personal_feedback fb;
  fb.player = pid;
  fb.started_at = me.started_at;
  fb.finished_at = me.finished_at;
  fb.total_duration = me.total_duration;
  fb.final_score = me.final_score;
  for (const auto& row : scoreboard(sessions))
    if (row.player == pid) fb.rank = row.rank;

  for (const auto& level : def.levels) {
    level_summary ls;
    ls.level = level.order;
    if (const auto* rec = me.find_level(level.order)) {
      ls.entered = true;
      ls.duration = rec->duration;
      ls.earned = rec->earned;
      ls.outcome = rec->outcome;
    }
    ls.lost = level.max_points - ls.earned;
    fb.levels.push_back(ls);
  }
  points min_earned = fb.levels.front().earned;
  points max_lost = 0;
  for (const auto& l : fb.levels) {
    min_earned = std::min(min_earned, l.earned);
    max_lost = std::max(max_lost, l.lost);
  }
  for (const auto& l : fb.levels) {
    if (l.earned == min_earned) fb.lowest_score_levels.push_back(l.level);
    if (l.lost == max_lost) fb.most_lost_levels.push_back(l.level);
  }
  for (std::size_t i = 1; i < me.levels.size(); ++i)
    fb.transitions.push_back({me.levels[i - 1].level, me.levels[i].level, me.levels[i].entered_at});

  std::vector<peer> better, worse;
  for (const auto& s : sessions) {
    if (s.player == pid) continue;
    if (s.final_score > me.final_score)
      better.push_back({s.player, s.final_score, s.total_duration});
    if (s.final_score < me.final_score)
      worse.push_back({s.player, s.final_score, s.total_duration});
  }
  auto closest = [&](const peer& a, const peer& b) {
    auto ga = a.final_score > me.final_score ? a.final_score - me.final_score
                                             : me.final_score - a.final_score;
    auto gb = b.final_score > me.final_score ? b.final_score - me.final_score
                                             : me.final_score - b.final_score;
    if (ga != gb) return ga < gb;
    if (a.total_duration != b.total_duration) return a.total_duration < b.total_duration;
    return a.player < b.player;
  };
  std::sort(better.begin(), better.end(), closest);
  std::sort(worse.begin(), worse.end(), closest);
  if (better.size() > peer_count) better.resize(peer_count);
  if (worse.size() > peer_count) worse.resize(peer_count);
  fb.better = std::move(better);
  fb.worse = std::move(worse);
  return fb;
}

}  // namespace ctfeed
