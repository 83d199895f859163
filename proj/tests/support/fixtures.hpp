#pragma once

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "ctfeed/ctfeed.hpp"

#ifndef CTFEED_SAMPLES_DIR
#error "CTFEED_SAMPLES_DIR must point at the samples/ directory"
#endif

namespace ctfeed::support {

inline std::string read_sample(const std::string& name) {
  std::ifstream in{std::string{CTFEED_SAMPLES_DIR} + "/" + name, std::ios::binary};
  if (!in) throw std::runtime_error("missing sample " + name);
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

// Two levels (max 10, 20), hint 1 of level 1 costs 2, wrong flags cost 1.
inline const std::string& fixture_game_text() {
  static const std::string text = read_sample("fixture-game.json");
  return text;
}

inline const game_definition& fixture_game() {
  static const game_definition def = load_game_definition(fixture_game_text());
  return def;
}

// Players 9001 and 9002 on the fixture game.
inline const std::string& fixture_a_text() {
  static const std::string text = read_sample("fixture-a.csv");
  return text;
}

inline const std::string& four_level_text() {
  static const std::string text = read_sample("four-level-game.json");
  return text;
}

// Level maxima 16/22/26/36.
inline const game_definition& four_level_game() {
  static const game_definition def = load_game_definition(four_level_text());
  return def;
}

inline instant at(const char* text) { return *parse_instant(text); }

}  // namespace ctfeed::support
