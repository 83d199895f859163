#pragma once

// Seeded generator of structurally complete gameplay logs, used for fixtures and property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "ctfeed/event_log.hpp"
#include "ctfeed/game_model.hpp"

namespace ctfeed {

/// Deterministic across platforms: only the raw mt19937_64 stream is used, never the
/// implementation-defined standard distributions.
class synth_rng {
 public:
  explicit synth_rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

struct synth_options {
  double hint_probability = 0.35;
  double repeat_hint_probability = 0.1;
  int max_wrong_flags = 3;
  double solution_probability = 0.08;
  double skip_probability = 0.1;
  double min_duration_factor = 0.2;
  double max_duration_factor = 3.0;
  std::int64_t max_level_gap_s = 5;
};

inline event_log generate_synthetic_log(const game_definition& def, int players, std::uint64_t seed,
                                        const synth_options& opt = {}) {
  if (players < 1) throw std::invalid_argument("generate_synthetic_log: players must be >= 1");
  synth_rng rng{seed};

  std::set<player_id> used;
  const instant base = *parse_instant("2018-08-24 09:00:00");
  std::vector<game_event> events;

  for (int p = 0; p < players; ++p) {
    player_id pid;
    do {
      pid = 9000000 + static_cast<player_id>(rng.between(0, 999999));
    } while (!used.insert(pid).second);

    instant t = base + seconds{rng.between(0, 300)};
    auto emit = [&](instant at, instant level_start, int level, event_kind kind, int hint = 0) {
      events.push_back({pid, at, at - level_start, level, kind, hint, 0});
    };
    emit(t, t, 1, event_kind::game_started);

    instant level_start = t;
    for (const auto& level : def.levels) {
      level_start = t;
      emit(t, level_start, level.order, event_kind::level_started);

      const auto est = level.estimated_duration.count();
      auto lo = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil(opt.min_duration_factor * est)));
      auto hi = std::max<std::int64_t>(
          lo, static_cast<std::int64_t>(std::floor(opt.max_duration_factor * est)));
      const std::int64_t duration = rng.between(lo, hi);

      struct pending {
        event_kind kind;
        int hint;
      };
      std::vector<pending> inner;
      for (const auto& h : level.hints) {
        if (!rng.chance(opt.hint_probability)) continue;
        inner.push_back({event_kind::hint_taken, h.number});
        if (rng.chance(opt.repeat_hint_probability))
          inner.push_back({event_kind::hint_taken, h.number});
      }
      for (auto n = rng.between(0, opt.max_wrong_flags); n > 0; --n)
        inner.push_back({event_kind::wrong_flag, 0});
      if (rng.chance(opt.solution_probability))
        inner.push_back({event_kind::solution_displayed, 0});
      for (std::size_t i = inner.size(); i > 1; --i)
        std::swap(
            inner[i - 1],
            inner[static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(i) - 1))]);

      std::vector<std::int64_t> offsets;
      for (std::size_t i = 0; i < inner.size(); ++i) offsets.push_back(rng.between(0, duration));
      std::sort(offsets.begin(), offsets.end());
      for (std::size_t i = 0; i < inner.size(); ++i)
        emit(level_start + seconds{offsets[i]}, level_start, level.order, inner[i].kind,
             inner[i].hint);

      t = level_start + seconds{duration};
      emit(t, level_start, level.order,
           rng.chance(opt.skip_probability) ? event_kind::level_skipped : event_kind::correct_flag);
      if (level.order < def.level_count() && rng.chance(0.5))
        t += seconds{rng.between(1, opt.max_level_gap_s)};
    }
    emit(t, level_start, def.level_count(), event_kind::game_ended);
  }

  event_log log;
  log.events = std::move(events);
  detail::sort_events(log.events);
  return log;
}

}  // namespace ctfeed
