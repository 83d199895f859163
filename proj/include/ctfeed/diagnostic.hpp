#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctfeed {

using player_id = std::uint64_t;

enum class severity { warning, error };

enum class diagnostic_code {
  malformed_line,
  malformed_timestamp,
  malformed_logical_time,
  bad_player_id,
  bad_level,
  unknown_event,
  unknown_hint,
  logical_time_mismatch,
  missing_game_started,
  missing_game_ended,
  duplicate_game_started,
  level_not_started,
  event_after_game_ended,
  level_regression,
  ignored_event,
  inserted_game_started,
  inserted_level_started,
  inserted_game_ended,
};

inline std::string_view to_string(severity s) { return s == severity::error ? "error" : "warning"; }

inline std::string_view to_string(diagnostic_code c) {
  switch (c) {
    case diagnostic_code::malformed_line: return "malformed_line";
    case diagnostic_code::malformed_timestamp: return "malformed_timestamp";
    case diagnostic_code::malformed_logical_time: return "malformed_logical_time";
    case diagnostic_code::bad_player_id: return "bad_player_id";
    case diagnostic_code::bad_level: return "bad_level";
    case diagnostic_code::unknown_event: return "unknown_event";
    case diagnostic_code::unknown_hint: return "unknown_hint";
    case diagnostic_code::logical_time_mismatch: return "logical_time_mismatch";
    case diagnostic_code::missing_game_started: return "missing_game_started";
    case diagnostic_code::missing_game_ended: return "missing_game_ended";
    case diagnostic_code::duplicate_game_started: return "duplicate_game_started";
    case diagnostic_code::level_not_started: return "level_not_started";
    case diagnostic_code::event_after_game_ended: return "event_after_game_ended";
    case diagnostic_code::level_regression: return "level_regression";
    case diagnostic_code::ignored_event: return "ignored_event";
    case diagnostic_code::inserted_game_started: return "inserted_game_started";
    case diagnostic_code::inserted_level_started: return "inserted_level_started";
    case diagnostic_code::inserted_game_ended: return "inserted_game_ended";
  }
  return "unknown";
}

/// A finding about one source line (line 0 when not tied to a line).
struct diagnostic {
  ctfeed::severity severity = severity::warning;
  diagnostic_code code = diagnostic_code::malformed_line;
  std::size_t line = 0;
  std::optional<player_id> player;
  std::string message;

  bool operator==(const diagnostic&) const = default;
};

inline std::string describe(const diagnostic& d) {
  std::string out{to_string(d.severity)};
  if (d.line != 0) out += " line " + std::to_string(d.line);
  if (d.player) out += " player " + std::to_string(*d.player);
  out += " [";
  out += to_string(d.code);
  out += "]: ";
  out += d.message;
  return out;
}

inline bool has_errors(const std::vector<diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == severity::error) return true;
  return false;
}

/// Rejected game-definition document; `field` names the offending path.
class definition_error : public std::runtime_error {
 public:
  definition_error(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Strict-mode log rejection carrying every error found.
class log_error : public std::runtime_error {
 public:
  explicit log_error(std::vector<diagnostic> diags)
      : std::runtime_error(summary(diags)), diagnostics_(std::move(diags)) {}

  const std::vector<diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string summary(const std::vector<diagnostic>& diags) {
    if (diags.empty()) return "event log rejected";
    std::string s = describe(diags.front());
    if (diags.size() > 1) s += " (+" + std::to_string(diags.size() - 1) + " more)";
    return s;
  }

  std::vector<diagnostic> diagnostics_;
};

}  // namespace ctfeed
