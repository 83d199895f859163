// Loads the bundled two-level game and its two-player log, then prints each player's
// scoreline and the scoreboard.

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "ctfeed/ctfeed.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in{path, std::ios::binary};
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

}  // namespace

int main() {
  const std::string dir = CTFEED_SAMPLES_DIR;
  auto def = ctfeed::load_game_definition(slurp(dir + "/fixture-game.json"));
  auto log =
      ctfeed::parse_event_log(slurp(dir + "/fixture-a.csv"), def, ctfeed::parse_mode::strict);
  auto sessions = ctfeed::reconstruct_sessions(log, def);

  for (const auto& s : sessions) {
    std::cout << "player " << s.player << " scoreline:";
    for (const auto& p : ctfeed::build_scoreline(s, def).points)
      std::cout << " (" << p.elapsed.count() << "," << p.score << ")";
    std::cout << '\n';
  }
  for (const auto& row : ctfeed::scoreboard(sessions))
    std::cout << "#" << row.rank << " " << row.player << " " << row.final_score << " pts in "
              << ctfeed::format_duration(row.total_duration) << '\n';
  return sessions.size() == 2 ? 0 : 1;
}
