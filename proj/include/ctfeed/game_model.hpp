#pragma once

// Static structure of a multi-level CTF game and its JSON definition document.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctfeed/diagnostic.hpp"
#include "ctfeed/time.hpp"

namespace ctfeed {

using points = std::int64_t;

struct hint_definition {
  int number = 1;
  std::string title;
  points penalty = 0;

  bool operator==(const hint_definition&) const = default;
};

struct level_definition {
  int order = 1;
  std::string name;
  points max_points = 0;
  std::vector<hint_definition> hints;
  seconds estimated_duration{0};

  const hint_definition* find_hint(int number) const {
    if (number < 1 || number > static_cast<int>(hints.size())) return nullptr;
    return &hints[static_cast<std::size_t>(number - 1)];
  }

  bool operator==(const level_definition&) const = default;
};

/// Immutable once loaded. Levels are stored in order, so `levels[k-1].order == k`.
struct game_definition {
  std::string game_id;
  std::string title;
  std::vector<level_definition> levels;
  points wrong_flag_penalty = 0;
  points total_max = 0;
  // Alternative event spellings -> canonical spelling; `{n}` stands for a hint number.
  std::map<std::string, std::string> event_aliases;

  int level_count() const { return static_cast<int>(levels.size()); }

  const level_definition* find_level(int order) const {
    if (order < 1 || order > level_count()) return nullptr;
    return &levels[static_cast<std::size_t>(order - 1)];
  }

  bool operator==(const game_definition&) const = default;
};

/// Element k is the most a player can hold after finishing levels 1..k+1.
inline std::vector<points> cumulative_maxima(const game_definition& def) {
  std::vector<points> out;
  out.reserve(def.levels.size());
  points running = 0;
  for (const auto& level : def.levels) {
    running += level.max_points;
    out.push_back(running);
  }
  return out;
}

namespace detail {

template <class T>
T require_field(const nlohmann::json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw definition_error(path + "." + key, "missing required field");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw definition_error(path + "." + key, "wrong type");
  }
}

template <class T>
T optional_field(const nlohmann::json& obj, const char* key, const std::string& path, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw definition_error(path + "." + key, "wrong type");
  }
}

inline const nlohmann::json& require_array(const nlohmann::json& obj, const char* key,
                                           const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw definition_error(path + "." + key, "missing required field");
  if (!it->is_array()) throw definition_error(path + "." + key, "expected an array");
  return *it;
}

inline level_definition parse_level(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw definition_error(path, "expected an object");
  level_definition level;
  level.order = require_field<int>(j, "order", path);
  level.name = optional_field<std::string>(j, "name", path, "");
  level.max_points = require_field<points>(j, "max_points", path);
  level.estimated_duration = seconds{require_field<std::int64_t>(j, "estimated_duration_s", path)};
  std::string label = "level " + std::to_string(level.order);
  if (level.max_points <= 0)
    throw definition_error(path + ".max_points", label + ": max_points must be > 0");
  if (level.estimated_duration.count() <= 0)
    throw definition_error(path + ".estimated_duration_s",
                           label + ": estimated duration must be > 0");

  auto hints_it = j.find("hints");
  if (hints_it != j.end() && !hints_it->is_null()) {
    if (!hints_it->is_array()) throw definition_error(path + ".hints", "expected an array");
    for (std::size_t i = 0; i < hints_it->size(); ++i) {
      const auto& h = (*hints_it)[i];
      std::string hpath = path + ".hints[" + std::to_string(i) + "]";
      if (!h.is_object()) throw definition_error(hpath, "expected an object");
      hint_definition hint;
      hint.number = require_field<int>(h, "number", hpath);
      hint.title = optional_field<std::string>(h, "title", hpath, "");
      hint.penalty = require_field<points>(h, "penalty", hpath);
      if (hint.penalty < 0)
        throw definition_error(hpath + ".penalty", label + ": hint penalty must be >= 0");
      if (hint.penalty > level.max_points)
        throw definition_error(hpath + ".penalty", label + ": hint penalty exceeds max_points");
      level.hints.push_back(std::move(hint));
    }
  }
  std::sort(level.hints.begin(), level.hints.end(),
            [](const auto& a, const auto& b) { return a.number < b.number; });
  for (std::size_t i = 0; i < level.hints.size(); ++i)
    if (level.hints[i].number != static_cast<int>(i) + 1)
      throw definition_error(path + ".hints", label + ": hints must be numbered 1.." +
                                                  std::to_string(level.hints.size()) +
                                                  " contiguously");
  points penalty_sum = 0;
  for (const auto& h : level.hints) penalty_sum += h.penalty;
  if (penalty_sum > level.max_points)
    throw definition_error(path + ".hints",
                           label + ": hint penalties sum to " + std::to_string(penalty_sum) +
                               ", exceeding max_points " + std::to_string(level.max_points));
  return level;
}

}  // namespace detail

/// Parses and validates a definition document. Throws definition_error naming the field.
inline game_definition load_game_definition(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw definition_error("document", std::string{"syntax error: "} + e.what());
  }
  if (!doc.is_object()) throw definition_error("document", "expected a top-level object");

  const std::string root = "$";
  game_definition def;
  def.game_id = detail::require_field<std::string>(doc, "game_id", root);
  def.title = detail::optional_field<std::string>(doc, "title", root, "");
  def.wrong_flag_penalty = detail::optional_field<points>(doc, "wrong_flag_penalty", root, 0);
  if (def.wrong_flag_penalty < 0) throw definition_error("$.wrong_flag_penalty", "must be >= 0");

  const auto& levels = detail::require_array(doc, "levels", root);
  if (levels.empty()) throw definition_error("$.levels", "a game needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i)
    def.levels.push_back(detail::parse_level(levels[i], "$.levels[" + std::to_string(i) + "]"));
  std::stable_sort(def.levels.begin(), def.levels.end(),
                   [](const auto& a, const auto& b) { return a.order < b.order; });
  for (std::size_t i = 0; i < def.levels.size(); ++i)
    if (def.levels[i].order != static_cast<int>(i) + 1)
      throw definition_error("$.levels", "levels must be numbered 1.." +
                                             std::to_string(def.levels.size()) +
                                             " contiguously (found order " +
                                             std::to_string(def.levels[i].order) + ")");

  points sum = 0;
  for (const auto& level : def.levels) sum += level.max_points;
  def.total_max = detail::optional_field<points>(doc, "total_max", root, sum);
  if (def.total_max != sum)
    throw definition_error("$.total_max", "total_max " + std::to_string(def.total_max) +
                                              " does not equal the sum of level maxima " +
                                              std::to_string(sum));

  if (auto it = doc.find("event_aliases"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw definition_error("$.event_aliases", "expected an object");
    for (const auto& [alias, canonical] : it->items()) {
      if (!canonical.is_string())
        throw definition_error("$.event_aliases." + alias, "expected a string");
      def.event_aliases.emplace(alias, canonical.get<std::string>());
    }
  }
  return def;
}

inline nlohmann::json to_json(const game_definition& def) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : def.levels) {
    nlohmann::json hints = nlohmann::json::array();
    for (const auto& h : level.hints)
      hints.push_back({{"number", h.number}, {"title", h.title}, {"penalty", h.penalty}});
    levels.push_back({{"order", level.order},
                      {"name", level.name},
                      {"max_points", level.max_points},
                      {"estimated_duration_s", level.estimated_duration.count()},
                      {"hints", std::move(hints)}});
  }
  nlohmann::json doc = {{"game_id", def.game_id},
                        {"title", def.title},
                        {"wrong_flag_penalty", def.wrong_flag_penalty},
                        {"total_max", def.total_max},
                        {"levels", std::move(levels)}};
  if (!def.event_aliases.empty()) doc["event_aliases"] = def.event_aliases;
  return doc;
}

inline std::string save_game_definition(const game_definition& def) {
  return to_json(def).dump(2) + "\n";
}

}  // namespace ctfeed
