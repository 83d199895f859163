#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ctfeed/event_log.hpp"
#include "ctfeed/game_model.hpp"
#include "ctfeed/session.hpp"

namespace ctfeed {

/// Everything derived from one (definition, log) pair. Immutable once published.
struct game_snapshot {
  std::string game_id;
  game_definition definition;
  event_log log;  // repaired
  std::vector<player_session> sessions;
  std::vector<diagnostic> diagnostics;  // parse + repair + validation findings
  std::uint64_t revision = 0;

  bool has_sessions() const { return !sessions.empty(); }
};

inline game_snapshot make_snapshot(std::string game_id, game_definition def,
                                   std::string_view log_text, parse_mode mode) {
  game_snapshot snap;
  snap.game_id = std::move(game_id);
  auto parsed = parse_event_log(log_text, def, mode);
  auto repaired = repair_log(parsed, def);
  snap.diagnostics = parsed.source_diagnostics;
  snap.diagnostics.insert(snap.diagnostics.end(), repaired.diagnostics.begin(),
                          repaired.diagnostics.end());
  auto checks = validate_log(repaired.log, def);
  snap.diagnostics.insert(snap.diagnostics.end(), checks.begin(), checks.end());
  snap.sessions = reconstruct_sessions(repaired.log, def);
  snap.log = std::move(repaired.log);
  snap.definition = std::move(def);
  return snap;
}

}  // namespace ctfeed
