#include <gtest/gtest.h>

#include <string>
#include <utility>
#include <vector>

#include "ctfeed/ctfeed.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace ctfeed;
using support::at;

namespace {

std::vector<player_session> fixture_sessions() {
  const auto& def = support::fixture_game();
  return reconstruct_sessions(parse_event_log(support::fixture_a_text(), def, parse_mode::strict),
                              def);
}

std::vector<std::pair<std::int64_t, points>> coords(const std::vector<score_point>& line) {
  std::vector<std::pair<std::int64_t, points>> out;
  for (const auto& p : line) out.emplace_back(p.elapsed.count(), p.score);
  return out;
}

event_log parse(const std::string& text, const game_definition& def) {
  return parse_event_log(text, def, parse_mode::strict);
}

}  // namespace

TEST(Session, FixtureAPlayerOne) {
  auto sessions = fixture_sessions();
  ASSERT_EQ(sessions.size(), 2u);
  const auto& s = sessions[0];
  EXPECT_EQ(s.player, 9001u);
  ASSERT_EQ(s.levels.size(), 2u);
  EXPECT_EQ(s.levels[0].earned, 8);
  EXPECT_EQ(s.levels[0].duration.count(), 300);
  EXPECT_EQ(s.levels[0].outcome, level_outcome::completed);
  EXPECT_EQ(s.levels[1].earned, 19);
  EXPECT_EQ(s.levels[1].wrong_flag_count, 1);
  EXPECT_EQ(s.final_score, 27);
  EXPECT_EQ(s.total_duration.count(), 600);
  EXPECT_EQ(s.started_at, at("2018-08-24 10:00:00"));
  EXPECT_EQ(s.finished_at, at("2018-08-24 10:10:00"));
  EXPECT_TRUE(s.repairs.empty());
  using P = std::pair<std::int64_t, points>;
  EXPECT_EQ(coords(s.scoreline),
            (std::vector<P>{{0, 10}, {180, 8}, {300, 28}, {360, 27}, {600, 27}}));
  ASSERT_TRUE(s.scoreline[1].mark);
  EXPECT_EQ(s.scoreline[1].mark->kind, event_kind::hint_taken);
  EXPECT_EQ(s.scoreline[1].mark->penalty, 2);
}

TEST(Session, FixtureAPlayerTwo) {
  auto sessions = fixture_sessions();
  const auto& s = sessions[1];
  EXPECT_EQ(s.player, 9002u);
  EXPECT_EQ(s.levels[0].earned, 10);
  EXPECT_EQ(s.levels[1].earned, 0);
  EXPECT_TRUE(s.levels[1].solution_displayed);
  EXPECT_EQ(s.levels[1].outcome, level_outcome::completed);
  EXPECT_EQ(s.final_score, 10);
  EXPECT_EQ(s.total_duration.count(), 720);
  using P = std::pair<std::int64_t, points>;
  EXPECT_EQ(coords(s.scoreline), (std::vector<P>{{0, 10}, {240, 30}, {420, 10}, {720, 10}}));
  EXPECT_EQ(s.scoreline[2].mark->penalty, 20);
}

TEST(Session, GameStartedOnly) {
  const auto& def = support::fixture_game();
  auto sessions =
      reconstruct_sessions(parse("7,2018-08-24 10:00:00,00:00:00,1,Game started\n", def), def);
  ASSERT_EQ(sessions.size(), 1u);
  const auto& s = sessions[0];
  EXPECT_EQ(s.final_score, 0);
  EXPECT_FALSE(s.finished());
  EXPECT_EQ(s.total_duration.count(), 0);
  ASSERT_EQ(s.levels.size(), 1u);
  EXPECT_EQ(s.levels[0].outcome, level_outcome::unfinished);
  ASSERT_EQ(s.scoreline.size(), 1u);
  EXPECT_EQ(s.scoreline[0].elapsed.count(), 0);
  EXPECT_EQ(s.scoreline[0].score, 10);
}

TEST(Session, SkipZeroesLevel) {
  const auto& def = support::fixture_game();
  auto s = reconstruct_sessions(parse("7,2018-08-24 10:00:00,00:00:00,1,Game started\n"
                                      "7,2018-08-24 10:01:00,00:01:00,1,Hint 1 taken\n"
                                      "7,2018-08-24 10:02:00,00:02:00,1,Level skipped\n"
                                      "7,2018-08-24 10:02:00,00:00:00,2,Level started\n"
                                      "7,2018-08-24 10:03:00,00:01:00,2,Correct flag submitted\n"
                                      "7,2018-08-24 10:03:00,00:01:00,2,Game ended\n",
                                      def),
                                def)[0];
  EXPECT_EQ(s.levels[0].outcome, level_outcome::skipped);
  EXPECT_EQ(s.levels[0].earned, 0);
  EXPECT_EQ(s.final_score, 20);
  using P = std::pair<std::int64_t, points>;
  EXPECT_EQ(coords(s.scoreline),
            (std::vector<P>{{0, 10}, {60, 8}, {120, 0}, {120, 20}, {180, 20}}));
}

TEST(Session, RepeatedHintChargedOnceAndScoreFloorsAtZero) {
  const auto& def = support::fixture_game();
  std::string text = "7,2018-08-24 10:00:00,00:00:00,1,Game started\n";
  text += "7,2018-08-24 10:00:10,00:00:10,1,Hint 1 taken\n";
  text += "7,2018-08-24 10:00:20,00:00:20,1,Hint 1 taken\n";
  for (int i = 0; i < 12; ++i) text += "7,2018-08-24 10:00:30,00:00:30,1,Wrong flag submitted\n";
  text += "7,2018-08-24 10:01:00,00:01:00,1,Correct flag submitted\n";
  auto s = reconstruct_sessions(parse(text, def), def)[0];
  EXPECT_EQ(s.levels[0].hints_taken.size(), 1u);
  EXPECT_EQ(s.levels[0].penalty_total, 14);
  EXPECT_EQ(s.levels[0].earned, 0);
  for (const auto& p : s.scoreline) EXPECT_GE(p.score, 0);
}

TEST(Repair, ReinsertsDeletedLevelStart) {
  const auto& def = support::fixture_game();
  auto log = parse(support::fixture_a_text(), def);
  const auto original = log.events;
  // Drop 9001's Level started(2).
  auto it = std::find_if(log.events.begin(), log.events.end(), [](const game_event& e) {
    return e.player == 9001 && e.kind == event_kind::level_started && e.level == 2;
  });
  ASSERT_NE(it, log.events.end());
  log.events.erase(it);
  auto repaired = repair_log(log, def);
  ASSERT_EQ(repaired.diagnostics.size(), 1u);
  EXPECT_EQ(repaired.diagnostics[0].code, diagnostic_code::inserted_level_started);
  EXPECT_EQ(repaired.log.events, original);
  auto again = reconstruct_sessions(log, def);
  EXPECT_EQ(again[0].final_score, 27);
  EXPECT_EQ(again[0].levels[1].entered_at, at("2018-08-24 10:05:00"));
}

TEST(Repair, CompleteLogIsFixedPoint) {
  const auto& def = support::fixture_game();
  auto log = parse(support::fixture_a_text(), def);
  auto repaired = repair_log(log, def);
  EXPECT_TRUE(repaired.diagnostics.empty());
  EXPECT_EQ(repaired.log.events, log.events);
}

TEST(Repair, StoppedMidLevelGetsNoGameEnded) {
  const auto& def = support::four_level_game();
  auto log = parse(
      "3,2018-08-24 10:00:00,00:00:00,1,Game started\n"
      "3,2018-08-24 10:01:00,00:01:00,1,Correct flag submitted\n"
      "3,2018-08-24 10:01:00,00:00:00,2,Level started\n"
      "3,2018-08-24 10:02:00,00:01:00,2,Correct flag submitted\n"
      "3,2018-08-24 10:03:00,00:01:00,3,Hint 1 taken\n",
      def);
  auto repaired = repair_log(log, def);
  ASSERT_EQ(repaired.diagnostics.size(), 1u);
  EXPECT_EQ(repaired.diagnostics[0].code, diagnostic_code::inserted_level_started);
  for (const auto& e : repaired.log.events) EXPECT_NE(e.kind, event_kind::game_ended);
  auto s = reconstruct_sessions(log, def)[0];
  EXPECT_FALSE(s.finished());
  EXPECT_EQ(s.levels.back().outcome, level_outcome::unfinished);
  EXPECT_EQ(s.levels.back().entered_at, at("2018-08-24 10:02:00"));
}

TEST(Repair, MissingGameStartedAndEnded) {
  const auto& def = support::fixture_game();
  auto log = parse(
      "3,2018-08-24 10:00:05,00:00:00,1,Correct flag submitted\n"
      "3,2018-08-24 10:00:05,00:00:00,2,Level started\n"
      "3,2018-08-24 10:01:00,00:00:55,2,Correct flag submitted\n",
      def);
  auto repaired = repair_log(log, def);
  ASSERT_EQ(repaired.diagnostics.size(), 2u);
  EXPECT_EQ(repaired.log.events.front().kind, event_kind::game_started);
  EXPECT_EQ(repaired.log.events.back().kind, event_kind::game_ended);
  EXPECT_TRUE(validate_log(repaired.log, def).empty());
  auto s = reconstruct_sessions(log, def)[0];
  EXPECT_EQ(s.final_score, 30);
  EXPECT_EQ(s.repairs.size(), 2u);
}

// Property: the incremental builder agrees with the from-scratch oracle on every player.
TEST(SessionProperty, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto& def = seed % 2 ? support::four_level_game() : support::fixture_game();
    auto log = generate_synthetic_log(def, 8, seed);
    auto sessions = reconstruct_sessions(log, def);
    auto by_player = support::repaired_events_by_player(log, def);
    for (const auto& s : sessions)
      ASSERT_TRUE(support::matches_oracle(s, support::oracle_replay(by_player.at(s.player), def)))
          << "seed " << seed << " player " << s.player;
  }
}

// Property: oracle agreement survives arbitrary single-event deletions.
TEST(SessionProperty, MatchesOracleOnDamagedLogs) {
  synth_rng rng{2024};
  const auto& def = support::four_level_game();
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto log = generate_synthetic_log(def, 3, seed);
    for (int d = 0; d < 3 && !log.events.empty(); ++d)
      log.events.erase(log.events.begin() +
                       rng.between(0, static_cast<std::int64_t>(log.events.size()) - 1));
    auto by_player = support::repaired_events_by_player(log, def);
    for (const auto& s : reconstruct_sessions(log, def))
      ASSERT_TRUE(support::matches_oracle(s, support::oracle_replay(by_player.at(s.player), def)))
          << "seed " << seed << " player " << s.player;
  }
}

// Property: scoreline elapsed is non-decreasing, score only rises at level entry, and stays
// within [0, total_max].
TEST(SessionProperty, ScorelineMonotoneAndBounded) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto& def = support::four_level_game();
    for (const auto& s : reconstruct_sessions(generate_synthetic_log(def, 6, seed), def)) {
      for (std::size_t i = 1; i < s.scoreline.size(); ++i) {
        const auto& p = s.scoreline[i];
        ASSERT_LE(s.scoreline[i - 1].elapsed, p.elapsed);
        bool entry = p.mark && p.mark->kind == event_kind::level_started;
        if (!entry) {
          ASSERT_LE(p.score, s.scoreline[i - 1].score);
        }
      }
      for (const auto& p : s.scoreline) {
        ASSERT_GE(p.score, 0);
        ASSERT_LE(p.score, def.total_max);
      }
      ASSERT_LE(s.final_score, def.total_max);
    }
  }
}

// Property: with no unfinished levels, the last scoreline point equals the final score, which
// equals the sum of per-level earnings.
TEST(SessionProperty, Conservation) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto& def = support::four_level_game();
    for (const auto& s : reconstruct_sessions(generate_synthetic_log(def, 6, seed), def)) {
      points sum = 0;
      bool unfinished = false;
      for (const auto& l : s.levels) {
        sum += l.earned;
        unfinished |= l.outcome == level_outcome::unfinished;
      }
      ASSERT_EQ(sum, s.final_score);
      if (!unfinished) {
        ASSERT_EQ(s.scoreline.back().score, s.final_score);
      }
    }
  }
}

// Property: repair is idempotent.
TEST(SessionProperty, RepairIdempotent) {
  synth_rng rng{77};
  const auto& def = support::four_level_game();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto log = generate_synthetic_log(def, 2, seed);
    log.events.erase(log.events.begin() +
                     rng.between(0, static_cast<std::int64_t>(log.events.size()) - 1));
    auto once = repair_log(log, def);
    auto twice = repair_log(once.log, def);
    ASSERT_EQ(twice.log.events, once.log.events) << "seed " << seed;
    ASSERT_TRUE(twice.diagnostics.empty());
  }
}

// Property: corrupting logical_time changes no session.
TEST(SessionProperty, LogicalTimeIsIgnored) {
  synth_rng rng{5};
  const auto& def = support::fixture_game();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto log = generate_synthetic_log(def, 4, seed);
    auto expected = reconstruct_sessions(log, def);
    for (auto& e : log.events) e.logical_time = seconds{rng.between(0, 99999)};
    ASSERT_EQ(reconstruct_sessions(log, def), expected);
  }
}

TEST(Session, FindSession) {
  auto sessions = fixture_sessions();
  ASSERT_NE(find_session(sessions, 9002), nullptr);
  EXPECT_EQ(find_session(sessions, 9002)->final_score, 10);
  EXPECT_EQ(find_session(sessions, 1), nullptr);
}
