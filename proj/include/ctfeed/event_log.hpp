#pragma once

// Five-field CSV gameplay logs: player_id,timestamp,logical_time,level,event

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctfeed/diagnostic.hpp"
#include "ctfeed/game_model.hpp"
#include "ctfeed/time.hpp"

namespace ctfeed {

enum class event_kind {
  game_started,
  game_ended,
  level_started,
  level_skipped,
  correct_flag,
  wrong_flag,
  hint_taken,
  solution_displayed,
};

inline constexpr event_kind all_event_kinds[] = {
    event_kind::game_started,  event_kind::game_ended,         event_kind::level_started,
    event_kind::level_skipped, event_kind::correct_flag,       event_kind::wrong_flag,
    event_kind::hint_taken,    event_kind::solution_displayed,
};

/// Stable identifier used in payloads.
inline std::string_view kind_name(event_kind k) {
  switch (k) {
    case event_kind::game_started: return "game_started";
    case event_kind::game_ended: return "game_ended";
    case event_kind::level_started: return "level_started";
    case event_kind::level_skipped: return "level_skipped";
    case event_kind::correct_flag: return "correct_flag";
    case event_kind::wrong_flag: return "wrong_flag";
    case event_kind::hint_taken: return "hint_taken";
    case event_kind::solution_displayed: return "solution_displayed";
  }
  return "unknown";
}

inline bool is_game_scoped(event_kind k) {
  return k == event_kind::game_started || k == event_kind::game_ended;
}

inline bool is_level_terminal(event_kind k) {
  return k == event_kind::correct_flag || k == event_kind::level_skipped;
}

struct game_event {
  player_id player = 0;
  instant timestamp{};
  seconds logical_time{0};
  int level = 1;
  event_kind kind = event_kind::game_started;
  int hint = 0;                 // hint number for hint_taken, 0 otherwise
  std::size_t source_line = 0;  // 0 when synthesized

  // Source position is provenance, not content.
  bool operator==(const game_event& o) const {
    return player == o.player && timestamp == o.timestamp && logical_time == o.logical_time &&
           level == o.level && kind == o.kind && hint == o.hint;
  }
};

struct event_log {
  std::vector<game_event> events;
  std::vector<diagnostic> source_diagnostics;
};

enum class parse_mode { strict, lenient };

inline std::string canonical_event_string(event_kind k, int hint = 0) {
  switch (k) {
    case event_kind::game_started: return "Game started";
    case event_kind::game_ended: return "Game ended";
    case event_kind::level_started: return "Level started";
    case event_kind::level_skipped: return "Level skipped";
    case event_kind::correct_flag: return "Correct flag submitted";
    case event_kind::wrong_flag: return "Wrong flag submitted";
    case event_kind::hint_taken: return "Hint " + std::to_string(hint) + " taken";
    case event_kind::solution_displayed: return "Solution displayed";
  }
  return {};
}

struct parsed_kind {
  event_kind kind;
  int hint = 0;
};

namespace detail {

inline std::string lowercase_trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

inline std::optional<int> parse_positive(std::string_view s) {
  auto v = parse_digits(s);
  if (!v || *v < 1) return std::nullopt;
  return v;
}

inline std::optional<parsed_kind> match_canonical(const std::string& lowered) {
  static const std::pair<std::string_view, event_kind> fixed[] = {
      {"game started", event_kind::game_started},
      {"game ended", event_kind::game_ended},
      {"level started", event_kind::level_started},
      {"level skipped", event_kind::level_skipped},
      {"correct flag submitted", event_kind::correct_flag},
      {"wrong flag submitted", event_kind::wrong_flag},
      {"solution displayed", event_kind::solution_displayed},
  };
  for (const auto& [text, kind] : fixed)
    if (lowered == text) return parsed_kind{kind};
  constexpr std::string_view prefix = "hint ", suffix = " taken";
  if (lowered.size() > prefix.size() + suffix.size() && lowered.starts_with(prefix) &&
      lowered.ends_with(suffix)) {
    auto middle = std::string_view{lowered}.substr(prefix.size(),
                                                   lowered.size() - prefix.size() - suffix.size());
    if (auto n = parse_positive(middle)) return parsed_kind{event_kind::hint_taken, *n};
  }
  return std::nullopt;
}

}  // namespace detail

/// Case-insensitive match against the canonical strings, then the definition's aliases.
inline std::optional<parsed_kind> parse_event_string(std::string_view text,
                                                     const game_definition& def) {
  std::string lowered = detail::lowercase_trimmed(text);
  if (auto k = detail::match_canonical(lowered)) return k;
  for (const auto& [alias, canonical] : def.event_aliases) {
    std::string key = detail::lowercase_trimmed(alias);
    auto placeholder = key.find("{n}");
    if (placeholder == std::string::npos) {
      if (lowered == key) return detail::match_canonical(detail::lowercase_trimmed(canonical));
      continue;
    }
    std::string_view pre = std::string_view{key}.substr(0, placeholder);
    std::string_view post = std::string_view{key}.substr(placeholder + 3);
    if (lowered.size() <= pre.size() + post.size() || !lowered.starts_with(pre) ||
        !lowered.ends_with(post))
      continue;
    auto digits =
        std::string_view{lowered}.substr(pre.size(), lowered.size() - pre.size() - post.size());
    if (!detail::parse_positive(digits)) continue;
    std::string target = detail::lowercase_trimmed(canonical);
    if (auto at = target.find("{n}"); at != std::string::npos)
      target.replace(at, 3, std::string{digits});
    if (auto k = detail::match_canonical(target)) return k;
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

inline void sort_events(std::vector<game_event>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
}

}  // namespace detail

/// Parses CSV text. Strict mode throws log_error listing every error; lenient mode drops bad
/// lines with warnings. Events come back in stable timestamp order.
inline event_log parse_event_log(std::string_view text, const game_definition& def,
                                 parse_mode mode) {
  event_log log;
  std::vector<diagnostic> errors;
  const severity bad = mode == parse_mode::strict ? severity::error : severity::warning;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::is_blank(line)) continue;
    if (line_no == 1 && detail::lowercase_trimmed(line).starts_with("player_id")) continue;

    auto report = [&](diagnostic_code code, std::string msg, std::optional<player_id> who = {}) {
      diagnostic d{bad, code, line_no, who, std::move(msg)};
      if (bad == severity::error) errors.push_back(d);
      log.source_diagnostics.push_back(std::move(d));
    };

    auto fields = detail::split_fields(line);
    if (fields.size() != 5) {
      report(diagnostic_code::malformed_line,
             "expected 5 comma-separated fields, found " + std::to_string(fields.size()));
      continue;
    }
    game_event ev;
    ev.source_line = line_no;
    {
      auto f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), ev.player);
      if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        report(diagnostic_code::bad_player_id, "player_id '" + std::string{f} + "' is not numeric");
        continue;
      }
    }
    auto ts = parse_instant(fields[1]);
    if (!ts) {
      report(diagnostic_code::malformed_timestamp,
             "timestamp '" + std::string{fields[1]} + "' is not YYYY-MM-DD HH:MM:SS", ev.player);
      continue;
    }
    ev.timestamp = *ts;
    auto lt = parse_duration(fields[2]);
    if (!lt) {
      report(diagnostic_code::malformed_logical_time,
             "logical time '" + std::string{fields[2]} + "' is not HH:MM:SS", ev.player);
      continue;
    }
    ev.logical_time = *lt;
    auto level = detail::parse_digits(fields[3]);
    if (!level) {
      report(diagnostic_code::bad_level, "level '" + std::string{fields[3]} + "' is not a number",
             ev.player);
      continue;
    }
    ev.level = *level;
    auto kind = parse_event_string(fields[4], def);
    if (!kind) {
      report(diagnostic_code::unknown_event, "unknown event '" + std::string{fields[4]} + "'",
             ev.player);
      continue;
    }
    ev.kind = kind->kind;
    ev.hint = kind->hint;
    int lowest = is_game_scoped(ev.kind) ? 0 : 1;
    if (ev.level < lowest || ev.level > def.level_count()) {
      report(
          diagnostic_code::bad_level,
          "level " + std::to_string(ev.level) + " outside 1.." + std::to_string(def.level_count()),
          ev.player);
      continue;
    }
    if (ev.kind == event_kind::hint_taken &&
        def.find_level(ev.level)->find_hint(ev.hint) == nullptr) {
      std::string msg =
          "level " + std::to_string(ev.level) + " has no hint " + std::to_string(ev.hint);
      if (mode == parse_mode::strict) {
        report(diagnostic_code::unknown_hint, msg, ev.player);
        continue;
      }
      log.source_diagnostics.push_back({severity::warning, diagnostic_code::unknown_hint, line_no,
                                        ev.player, msg + "; penalty counted as 0"});
    }
    log.events.push_back(ev);
  }
  if (!errors.empty()) throw log_error(std::move(errors));
  detail::sort_events(log.events);
  return log;
}

inline std::string serialize_event(const game_event& ev) {
  std::string line = std::to_string(ev.player);
  line += ',';
  line += format_instant(ev.timestamp);
  line += ',';
  line += format_duration(ev.logical_time);
  line += ',';
  line += std::to_string(ev.level);
  line += ',';
  line += canonical_event_string(ev.kind, ev.hint);
  return line;
}

inline std::string serialize_event_log(const event_log& log) {
  std::string out;
  for (const auto& ev : log.events) {
    out += serialize_event(ev);
    out += '\n';
  }
  return out;
}

/// Player ids in ascending order, each with the indices of its events in log order.
inline std::map<player_id, std::vector<std::size_t>> events_by_player(const event_log& log) {
  std::map<player_id, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < log.events.size(); ++i) out[log.events[i].player].push_back(i);
  return out;
}

/// Missing/duplicate lifecycle events and unannounced level entries.
inline bool is_structural(diagnostic_code c) {
  return c == diagnostic_code::missing_game_started || c == diagnostic_code::missing_game_ended ||
         c == diagnostic_code::duplicate_game_started || c == diagnostic_code::level_not_started;
}

inline constexpr seconds logical_time_tolerance{1};

/// Consistency checks over a parsed log. Findings are warnings; the log is not modified.
inline std::vector<diagnostic> validate_log(const event_log& log, const game_definition& def) {
  std::vector<diagnostic> out;
  for (const auto& [pid, indices] : events_by_player(log)) {
    auto warn = [&, pid = pid](diagnostic_code code, std::size_t line, std::string msg) {
      out.push_back({severity::warning, code, line, pid, std::move(msg)});
    };
    bool explicit_first_level = std::any_of(indices.begin(), indices.end(), [&](std::size_t i) {
      const auto& e = log.events[i];
      return e.kind == event_kind::level_started && e.level == 1;
    });
    int starts = 0;
    bool ended = false;
    int current = 0;
    std::map<int, instant> level_start;
    std::set<int> unannounced;

    for (std::size_t i : indices) {
      const auto& e = log.events[i];
      if (e.level > def.level_count() || (e.level < 1 && !is_game_scoped(e.kind)))
        warn(diagnostic_code::bad_level, e.source_line,
             "level " + std::to_string(e.level) + " outside 1.." +
                 std::to_string(def.level_count()));
      if (ended && e.kind != event_kind::game_ended)
        warn(diagnostic_code::event_after_game_ended, e.source_line,
             canonical_event_string(e.kind, e.hint) + " after Game ended");
      switch (e.kind) {
        case event_kind::game_started:
          if (++starts > 1) {
            warn(diagnostic_code::duplicate_game_started, e.source_line, "duplicate Game started");
          } else if (!explicit_first_level) {
            level_start[1] = e.timestamp;
            current = std::max(current, 1);
          }
          break;
        case event_kind::game_ended: ended = true; break;
        case event_kind::level_started:
          if (e.level < current)
            warn(diagnostic_code::level_regression, e.source_line,
                 "level " + std::to_string(e.level) + " started after level " +
                     std::to_string(current));
          level_start[e.level] = e.timestamp;
          current = e.level;
          break;
        default:
          if (e.level < current)
            warn(diagnostic_code::level_regression, e.source_line,
                 "event for level " + std::to_string(e.level) + " while in level " +
                     std::to_string(current));
          if (!level_start.contains(e.level)) {
            if (unannounced.insert(e.level).second)
              warn(diagnostic_code::level_not_started, e.source_line,
                   "level " + std::to_string(e.level) + " entered without Level started");
          } else {
            current = std::max(current, e.level);
          }
          break;
      }
      if (!is_game_scoped(e.kind)) {
        if (auto it = level_start.find(e.level); it != level_start.end()) {
          seconds derived = e.timestamp - it->second;
          seconds delta = e.logical_time - derived;
          if (delta < -logical_time_tolerance || delta > logical_time_tolerance)
            warn(diagnostic_code::logical_time_mismatch, e.source_line,
                 "logical time " + format_duration(e.logical_time) +
                     " disagrees with timestamp-derived " + format_duration(derived));
        }
      }
    }
    if (starts == 0) warn(diagnostic_code::missing_game_started, 0, "no Game started event");
    if (!ended) warn(diagnostic_code::missing_game_ended, 0, "no Game ended event");
  }
  return out;
}

}  // namespace ctfeed
