#pragma once

// Per-player reconstruction of level records, final score and scoreline from an event stream.
//
// Scoring: entering a level credits its max_points provisionally. Each distinct hint costs its
// penalty once, each wrong flag costs the game-wide wrong-flag penalty, and a displayed solution
// or a skip forfeits the level. Settled earned points are floored at 0. All durations come from
// absolute timestamps; logical_time never enters arithmetic.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctfeed/event_log.hpp"
#include "ctfeed/game_model.hpp"

namespace ctfeed {

enum class level_outcome { completed, skipped, unfinished };

inline std::string_view to_string(level_outcome o) {
  switch (o) {
    case level_outcome::completed: return "completed";
    case level_outcome::skipped: return "skipped";
    case level_outcome::unfinished: return "unfinished";
  }
  return "unknown";
}

struct level_record {
  int level = 1;
  instant entered_at{};
  std::optional<instant> exited_at;
  seconds duration{0};
  level_outcome outcome = level_outcome::unfinished;
  bool solution_displayed = false;
  std::set<int> hints_taken;
  int wrong_flag_count = 0;
  points penalty_total = 0;
  points earned = 0;

  bool operator==(const level_record&) const = default;
};

/// Event annotation on a scoreline point. `penalty` is the score the event removed.
struct score_mark {
  event_kind kind = event_kind::game_started;
  int level = 1;
  int hint = 0;
  points penalty = 0;

  bool operator==(const score_mark&) const = default;
};

struct score_point {
  seconds elapsed{0};
  points score = 0;
  std::optional<score_mark> mark;

  bool operator==(const score_point&) const = default;
};

struct score_timeline {
  player_id player = 0;
  std::vector<score_point> points;

  bool operator==(const score_timeline&) const = default;
};

struct player_session {
  player_id player = 0;
  instant started_at{};
  std::optional<instant> finished_at;
  seconds total_duration{0};
  std::vector<level_record> levels;  // entered levels, in entry order
  points final_score = 0;
  std::vector<diagnostic> repairs;
  std::vector<score_point> scoreline;

  bool finished() const { return finished_at.has_value(); }

  const level_record* find_level(int level) const {
    for (const auto& r : levels)
      if (r.level == level) return &r;
    return nullptr;
  }

  bool operator==(const player_session&) const = default;
};

struct repaired_log {
  event_log log;
  std::vector<diagnostic> diagnostics;
};

/// Inserts inferable missing events, each with a warning:
///  - Game started at the player's earliest event when absent;
///  - Level started(k) at level k-1's terminal event, or at the first level-k event when
///    level k-1 never ended;
///  - Game ended at the final level's terminal event when absent.
/// Level 1 is entered at Game started by convention and is never synthesized.
inline repaired_log repair_log(const event_log& log, const game_definition& def) {
  struct insertion {
    std::size_t anchor;
    bool after;
    game_event event;
  };
  std::vector<insertion> inserts;
  repaired_log out;

  for (const auto& [pid, indices] : events_by_player(log)) {
    auto note = [&, pid = pid](diagnostic_code code, std::size_t line, std::string msg) {
      out.diagnostics.push_back({severity::warning, code, line, pid, std::move(msg)});
    };
    const auto& first = log.events[indices.front()];
    bool has_start = false, has_end = false;
    for (std::size_t i : indices) {
      has_start |= log.events[i].kind == event_kind::game_started;
      has_end |= log.events[i].kind == event_kind::game_ended;
    }
    if (!has_start) {
      inserts.push_back({indices.front(),
                         false,
                         {pid, first.timestamp, seconds{0}, 1, event_kind::game_started, 0, 0}});
      note(diagnostic_code::inserted_game_started, first.source_line,
           "inserted Game started at " + format_instant(first.timestamp));
    }

    std::set<int> announced{1};
    std::map<int, std::size_t> last_terminal;
    std::map<int, instant> level_start;
    for (std::size_t i : indices) {
      const auto& e = log.events[i];
      if (e.kind == event_kind::level_started) {
        announced.insert(e.level);
        level_start[e.level] = e.timestamp;
      } else if (!is_game_scoped(e.kind) && !announced.contains(e.level)) {
        auto prev = last_terminal.find(e.level - 1);
        std::size_t anchor = prev != last_terminal.end() ? prev->second : i;
        instant at = log.events[anchor].timestamp;
        inserts.push_back({anchor,
                           prev != last_terminal.end(),
                           {pid, at, seconds{0}, e.level, event_kind::level_started, 0, 0}});
        note(diagnostic_code::inserted_level_started, log.events[anchor].source_line,
             "inserted Level started for level " + std::to_string(e.level) + " at " +
                 format_instant(at));
        announced.insert(e.level);
        level_start[e.level] = at;
      }
      if (is_level_terminal(e.kind)) last_terminal[e.level] = i;
    }

    const int final_level = def.level_count();
    if (auto t = last_terminal.find(final_level); !has_end && t != last_terminal.end()) {
      const auto& term = log.events[t->second];
      auto ls = level_start.find(final_level);
      seconds logical = ls != level_start.end() ? term.timestamp - ls->second : seconds{0};
      inserts.push_back(
          {t->second,
           true,
           {pid, term.timestamp, logical, final_level, event_kind::game_ended, 0, 0}});
      note(diagnostic_code::inserted_game_ended, term.source_line,
           "inserted Game ended at " + format_instant(term.timestamp));
    }
  }

  std::stable_sort(inserts.begin(), inserts.end(),
                   [](const auto& a, const auto& b) { return a.anchor < b.anchor; });
  out.log.source_diagnostics = log.source_diagnostics;
  out.log.events.reserve(log.events.size() + inserts.size());
  auto next = inserts.begin();
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    for (auto it = next; it != inserts.end() && it->anchor == i; ++it)
      if (!it->after) out.log.events.push_back(it->event);
    out.log.events.push_back(log.events[i]);
    for (; next != inserts.end() && next->anchor == i; ++next)
      if (next->after) out.log.events.push_back(next->event);
  }
  return out;
}

namespace detail {

class session_builder {
 public:
  session_builder(const game_definition& def, player_id pid) : def_(def) { s_.player = pid; }

  player_session run(const std::vector<const game_event*>& events) {
    if (events.empty()) return std::move(s_);
    explicit_first_level_ = std::any_of(events.begin(), events.end(), [](const game_event* e) {
      return e->kind == event_kind::level_started && e->level == 1;
    });
    // Events are time-ordered, so this is never later than the first Game started.
    s_.started_at = events.front()->timestamp;
    s_.scoreline.push_back({seconds{0}, 0, score_mark{event_kind::game_started, 1, 0, 0}});

    for (const auto* e : events) step(*e);

    instant last = events.back()->timestamp;
    if (open_) {
      auto& rec = s_.levels[*open_];
      rec.outcome = level_outcome::unfinished;
      rec.duration = last - rec.entered_at;
      open_.reset();
    }
    instant end = s_.finished_at.value_or(last);
    s_.total_duration = end - s_.started_at;
    seconds end_elapsed = end - s_.started_at;
    if (end_elapsed > s_.scoreline.back().elapsed) {
      std::optional<score_mark> mark;
      if (s_.finished_at) mark = score_mark{event_kind::game_ended, last_level(), 0, 0};
      s_.scoreline.push_back({end_elapsed, running_, mark});
    }
    s_.final_score = 0;
    for (const auto& rec : s_.levels) s_.final_score += rec.earned;
    return std::move(s_);
  }

 private:
  int last_level() const { return s_.levels.empty() ? 1 : s_.levels.back().level; }

  points provisional(const level_record& rec) const {
    if (rec.solution_displayed || rec.outcome == level_outcome::skipped) return 0;
    return std::max<points>(0, def_.find_level(rec.level)->max_points - rec.penalty_total);
  }

  void ignore(const game_event& e, diagnostic_code code, const std::string& why) {
    s_.repairs.push_back({severity::warning, code, e.source_line, s_.player,
                          "ignored " + canonical_event_string(e.kind, e.hint) + " (level " +
                              std::to_string(e.level) + "): " + why});
  }

  void push_point(const game_event& e, score_mark mark) {
    score_point p{e.timestamp - s_.started_at, running_, mark};
    auto& back = s_.scoreline.back();
    // The start point and a simultaneous level-1 entry are one point.
    bool entry = mark.kind == event_kind::game_started || mark.kind == event_kind::level_started;
    if (entry && back.elapsed == p.elapsed && back.mark &&
        back.mark->kind == event_kind::game_started)
      back = p;
    else
      s_.scoreline.push_back(p);
  }

  void enter(int level, instant at) {
    level_record rec;
    rec.level = level;
    rec.entered_at = at;
    s_.levels.push_back(rec);
    open_ = s_.levels.size() - 1;
    running_ = settled_ + provisional(s_.levels.back());
  }

  void close(level_outcome outcome, instant at) {
    auto& rec = s_.levels[*open_];
    rec.outcome = outcome;
    rec.exited_at = at;
    rec.duration = at - rec.entered_at;
    if (outcome == level_outcome::completed && !rec.solution_displayed)
      rec.earned = provisional(rec);
    settled_ += rec.earned;
    running_ = settled_;
    open_.reset();
  }

  level_record* open_level_for(const game_event& e) {
    if (!open_) {
      ignore(e, diagnostic_code::ignored_event, "no level in progress");
      return nullptr;
    }
    auto& rec = s_.levels[*open_];
    if (rec.level != e.level) {
      ignore(e, diagnostic_code::level_regression,
             "level " + std::to_string(rec.level) + " is in progress");
      return nullptr;
    }
    return &rec;
  }

  void step(const game_event& e) {
    if (s_.finished_at && e.kind != event_kind::game_ended) {
      ignore(e, diagnostic_code::event_after_game_ended, "game already ended");
      return;
    }
    switch (e.kind) {
      case event_kind::game_started:
        if (started_) {
          ignore(e, diagnostic_code::duplicate_game_started, "duplicate");
          return;
        }
        started_ = true;
        if (!explicit_first_level_ && s_.levels.empty()) enter(1, e.timestamp);
        push_point(e, {event_kind::game_started, 1, 0, 0});
        return;
      case event_kind::game_ended:
        if (!s_.finished_at) s_.finished_at = e.timestamp;
        return;
      case event_kind::level_started: {
        if (s_.find_level(e.level) != nullptr) {
          ignore(e, diagnostic_code::ignored_event, "level already entered");
          return;
        }
        if (!s_.levels.empty() && e.level < s_.levels.back().level) {
          ignore(e, diagnostic_code::level_regression, "a later level was already entered");
          return;
        }
        if (open_) close(level_outcome::unfinished, e.timestamp);
        enter(e.level, e.timestamp);
        push_point(e, {event_kind::level_started, e.level, 0, 0});
        return;
      }
      default: break;
    }
    if (!open_ && e.level == 1 && s_.levels.empty()) enter(1, e.timestamp);
    auto* rec = open_level_for(e);
    if (rec == nullptr) return;
    const points before = running_;
    switch (e.kind) {
      case event_kind::hint_taken: {
        points cost = 0;
        if (rec->hints_taken.insert(e.hint).second) {
          if (const auto* h = def_.find_level(e.level)->find_hint(e.hint)) cost = h->penalty;
          rec->penalty_total += cost;
        }
        running_ = settled_ + provisional(*rec);
        push_point(e, {e.kind, e.level, e.hint, before - running_});
        return;
      }
      case event_kind::wrong_flag:
        ++rec->wrong_flag_count;
        rec->penalty_total += def_.wrong_flag_penalty;
        running_ = settled_ + provisional(*rec);
        push_point(e, {e.kind, e.level, 0, before - running_});
        return;
      case event_kind::solution_displayed:
        rec->solution_displayed = true;
        running_ = settled_ + provisional(*rec);
        push_point(e, {e.kind, e.level, 0, before - running_});
        return;
      case event_kind::level_skipped:
        close(level_outcome::skipped, e.timestamp);
        push_point(e, {e.kind, e.level, 0, before - running_});
        return;
      case event_kind::correct_flag: close(level_outcome::completed, e.timestamp); return;
      default: return;
    }
  }

  const game_definition& def_;
  player_session s_;
  bool explicit_first_level_ = false;
  bool started_ = false;
  std::optional<std::size_t> open_;
  points settled_ = 0;
  points running_ = 0;
};

}  // namespace detail

/// Replays one player's already-repaired events (time-ordered).
inline player_session replay_player(const std::vector<const game_event*>& events,
                                    const game_definition& def, player_id pid) {
  return detail::session_builder{def, pid}.run(events);
}

/// One session per distinct player, ascending by player id. Repairs the log first; repair and
/// replay anomalies land in each session's `repairs`.
inline std::vector<player_session> reconstruct_sessions(const event_log& log,
                                                        const game_definition& def) {
  auto repaired = repair_log(log, def);
  std::map<player_id, std::vector<diagnostic>> repair_notes;
  for (auto& d : repaired.diagnostics) repair_notes[*d.player].push_back(std::move(d));

  std::vector<player_session> sessions;
  for (const auto& [pid, indices] : events_by_player(repaired.log)) {
    std::vector<const game_event*> events;
    events.reserve(indices.size());
    for (std::size_t i : indices) events.push_back(&repaired.log.events[i]);
    auto session = replay_player(events, def, pid);
    auto& notes = repair_notes[pid];
    session.repairs.insert(session.repairs.begin(), notes.begin(), notes.end());
    sessions.push_back(std::move(session));
  }
  return sessions;
}

inline score_timeline build_scoreline(const player_session& session, const game_definition&) {
  return {session.player, session.scoreline};
}

inline const player_session* find_session(const std::vector<player_session>& sessions,
                                          player_id pid) {
  auto it = std::find_if(sessions.begin(), sessions.end(),
                         [pid](const player_session& s) { return s.player == pid; });
  return it != sessions.end() ? &*it : nullptr;
}

}  // namespace ctfeed
