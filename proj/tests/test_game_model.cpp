#include <gtest/gtest.h>

#include <json.hpp>

#include "ctfeed/game_model.hpp"
#include "support/fixtures.hpp"

using namespace ctfeed;
using nlohmann::json;

namespace {

json level(int order, points max, json hints = json::array(), std::int64_t est = 600) {
  return {{"order", order},
          {"name", "L" + std::to_string(order)},
          {"max_points", max},
          {"estimated_duration_s", est},
          {"hints", std::move(hints)}};
}

json game(json levels, std::optional<points> total = std::nullopt) {
  json doc = {{"game_id", "g"}, {"title", "t"}, {"levels", std::move(levels)}};
  if (total) doc["total_max"] = *total;
  return doc;
}

std::string field_of(const json& doc) {
  try {
    load_game_definition(doc.dump());
  } catch (const definition_error& e) {
    return e.field() + " | " + e.what();
  }
  return "accepted";
}

}  // namespace

TEST(GameModel, FourLevelCumulativeMaxima) {
  const auto& def = support::four_level_game();
  ASSERT_EQ(def.level_count(), 4);
  EXPECT_EQ(def.total_max, 100);
  EXPECT_EQ(cumulative_maxima(def), (std::vector<points>{16, 38, 64, 100}));
}

TEST(GameModel, MinimalGame) {
  auto def = load_game_definition(game(json::array({level(1, 10)}), 10).dump());
  EXPECT_EQ(def.level_count(), 1);
  EXPECT_EQ(def.wrong_flag_penalty, 0);
  EXPECT_EQ(cumulative_maxima(def), (std::vector<points>{10}));
}

TEST(GameModel, PrefixSums) {
  auto def = load_game_definition(game(json::array({level(1, 10), level(2, 20)})).dump());
  EXPECT_EQ(def.total_max, 30);
  EXPECT_EQ(cumulative_maxima(def), (std::vector<points>{10, 30}));
}

TEST(GameModel, HintPenaltiesExceedingMaximumNameTheLevel) {
  json hints = json::array({{{"number", 1}, {"title", "a"}, {"penalty", 8}},
                            {{"number", 2}, {"title", "b"}, {"penalty", 8}}});
  auto msg = field_of(game(json::array({level(1, 10), level(2, 10, hints)})));
  EXPECT_NE(msg.find("$.levels[1].hints"), std::string::npos) << msg;
  EXPECT_NE(msg.find("level 2"), std::string::npos) << msg;
}

TEST(GameModel, SemanticErrors) {
  EXPECT_NE(field_of(game(json::array({level(1, 10), level(3, 10)}))).find("$.levels |"),
            std::string::npos);
  EXPECT_NE(field_of(game(json::array({level(1, 10)}), 11)).find("$.total_max"), std::string::npos);
  EXPECT_NE(field_of(game(json::array({level(1, 0)}))).find("max_points"), std::string::npos);
  EXPECT_NE(field_of(game(json::array({level(1, 10, json::array(), 0)}))).find("estimated"),
            std::string::npos);
  EXPECT_NE(field_of(game(json::array())).find("$.levels"), std::string::npos);
  json gap_hints = json::array({{{"number", 2}, {"title", "x"}, {"penalty", 1}}});
  EXPECT_NE(field_of(game(json::array({level(1, 10, gap_hints)}))).find("hints"),
            std::string::npos);
  json neg = json::array({{{"number", 1}, {"title", "x"}, {"penalty", -1}}});
  EXPECT_NE(field_of(game(json::array({level(1, 10, neg)}))).find("penalty"), std::string::npos);
  auto doc = game(json::array({level(1, 10)}));
  doc["wrong_flag_penalty"] = -2;
  EXPECT_NE(field_of(doc).find("wrong_flag_penalty"), std::string::npos);
  doc = game(json::array({level(1, 10)}));
  doc.erase("game_id");
  EXPECT_NE(field_of(doc).find("$.game_id"), std::string::npos);
  doc = game(json::array({level(1, 10)}));
  doc["levels"][0]["max_points"] = "ten";
  EXPECT_NE(field_of(doc).find("wrong type"), std::string::npos);
}

TEST(GameModel, SyntaxError) {
  try {
    load_game_definition("{\"game_id\": ");
    FAIL();
  } catch (const definition_error& e) {
    EXPECT_EQ(e.field(), "document");
    EXPECT_NE(std::string{e.what()}.find("syntax"), std::string::npos);
  }
}

TEST(GameModel, LevelsMayBeListedOutOfOrder) {
  auto def = load_game_definition(game(json::array({level(2, 20), level(1, 10)})).dump());
  EXPECT_EQ(def.levels[0].max_points, 10);
  EXPECT_EQ(def.levels[1].order, 2);
}

TEST(GameModel, RoundTripIsStructurallyIdentical) {
  for (const auto* text : {&support::fixture_game_text(), &support::four_level_text()}) {
    auto def = load_game_definition(*text);
    auto again = load_game_definition(save_game_definition(def));
    EXPECT_EQ(def, again);
    EXPECT_EQ(save_game_definition(def), save_game_definition(again));
  }
  auto doc = game(json::array({level(1, 10)}));
  doc["event_aliases"] = {{"Hint {n} used", "Hint {n} taken"}};
  auto def = load_game_definition(doc.dump());
  EXPECT_EQ(load_game_definition(save_game_definition(def)), def);
}

// Property: for random valid definitions, maxima strictly increase and end at total_max.
TEST(GameModel, CumulativeMaximaProperty) {
  synth_rng rng{42};
  for (int trial = 0; trial < 300; ++trial) {
    json levels = json::array();
    auto n = rng.between(1, 8);
    for (int k = 1; k <= n; ++k) levels.push_back(level(k, rng.between(1, 50)));
    auto def = load_game_definition(game(levels).dump());
    auto maxima = cumulative_maxima(def);
    ASSERT_EQ(static_cast<int>(maxima.size()), def.level_count());
    for (std::size_t i = 1; i < maxima.size(); ++i) EXPECT_GT(maxima[i], maxima[i - 1]);
    EXPECT_EQ(maxima.back(), def.total_max);
  }
}
