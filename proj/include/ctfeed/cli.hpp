#pragma once

// Operator commands: validate, stats, export, repair, synth, serve.
// Exit status: 0 success, 1 input rejected (diagnostics with errors), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctfeed/analytics.hpp"
#include "ctfeed/http_server.hpp"
#include "ctfeed/service.hpp"
#include "ctfeed/snapshot.hpp"
#include "ctfeed/synth.hpp"
#include "ctfeed/views.hpp"

namespace ctfeed {

struct cli_config {
  parse_mode mode = parse_mode::lenient;
  int port = 8080;
  std::string output = "-";
};

namespace detail {

class cli_io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw cli_io_error("cannot read " + path);
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

inline void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path == "-") {
    out << data;
    out.flush();
    return;
  }
  std::ofstream file{path, std::ios::binary | std::ios::trunc};
  if (!file) throw cli_io_error("cannot write " + path);
  file << data;
  if (!file) throw cli_io_error("failed writing " + path);
}

inline void print_diagnostics(const std::vector<diagnostic>& diags, std::ostream& os) {
  std::size_t errors = 0;
  for (const auto& d : diags) {
    os << describe(d) << '\n';
    if (d.severity == severity::error) ++errors;
  }
  os << errors << " error(s), " << diags.size() - errors << " warning(s)\n";
}

inline std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

inline void print_stats(const game_snapshot& snap, std::ostream& os) {
  const auto& def = snap.definition;
  os << "game " << def.game_id;
  if (!def.title.empty()) os << " (" << def.title << ")";
  os << ": " << def.level_count() << " level(s), max " << def.total_max << " points\n\n";
  if (!snap.has_sessions()) {
    os << "no sessions\n";
    return;
  }
  auto g = game_statistics(snap.sessions);
  os << fmt("players %zu, finished %zu\n\n", g.player_count, g.finish_count);
  os << fmt("%-9s %8s %10s %10s %9s %9s\n", "scope", "players", "max time", "mean time",
            "min score", "max score");
  auto row = [&](const std::string& scope, const scope_stats& s) {
    os << fmt("%-9s %8zu %10s %10.1f %9lld %9lld\n", scope.c_str(), s.dots.size(),
              format_duration(s.max_duration).c_str(), s.mean_duration,
              static_cast<long long>(s.score_min), static_cast<long long>(s.score_max));
  };
  row("overall", g);
  for (const auto& ls : level_statistics(snap.sessions, def))
    row("level " + std::to_string(ls.level), ls);

  os << '\n' << fmt("%-5s %-12s %6s %10s %s\n", "rank", "player", "score", "time", "finished");
  for (const auto& st : scoreboard(snap.sessions))
    os << fmt("%-5d %-12llu %6lld %10s %s\n", st.rank, static_cast<unsigned long long>(st.player),
              static_cast<long long>(st.final_score), format_duration(st.total_duration).c_str(),
              st.finished ? "yes" : "no");

  auto front = pareto_front(snap.sessions);
  os << "\npareto front:";
  for (auto pid : front) os << ' ' << pid;
  os << '\n';
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ctfeed: post-game CTF analytics and feedback payloads", "ctfeed"};
  app.require_subcommand(1);

  cli_config cfg;
  std::string def_path, log_path, view_text;
  int players = 0;
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  std::string preload_game, preload_def, preload_log;

  const std::map<std::string, parse_mode> modes{{"strict", parse_mode::strict},
                                                {"lenient", parse_mode::lenient}};
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("definition", def_path, "game definition document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("log", log_path, "CSV event log")->required()->check(CLI::ExistingFile);
    sub->add_option("--mode", cfg.mode, "strict or lenient (default lenient)")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  };

  auto* validate = app.add_subcommand("validate", "report diagnostics; exit 0 iff no errors");
  add_inputs(validate);
  auto* stats = app.add_subcommand("stats", "print level/game statistics and the scoreboard");
  add_inputs(stats);
  auto* exporter = app.add_subcommand("export", "write a view payload");
  add_inputs(exporter);
  exporter->add_option("--view", view_text, "clustering | timeline | feedback:<player_id>")
      ->required();
  exporter->add_option("-o,--output", cfg.output, "output file, - for stdout")->required();
  auto* repair = app.add_subcommand("repair", "write the canonical repaired CSV");
  add_inputs(repair);
  repair->add_option("-o,--output", cfg.output, "output file, - for stdout")->required();
  auto* synth = app.add_subcommand("synth", "generate a synthetic event log");
  synth->add_option("definition", def_path, "game definition document (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--players", players, "number of players")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "generator seed")->required();
  synth->add_option("-o,--output", cfg.output, "output file, - for stdout")->required();
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--port", cfg.port, "TCP port")->required()->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "bind address");
  serve->add_option("--game", preload_game, "preload: game id");
  serve->add_option("--definition", preload_def, "preload: definition file")
      ->check(CLI::ExistingFile);
  serve->add_option("--log", preload_log, "preload: CSV log")->check(CLI::ExistingFile);

  std::vector<std::string> argv_store{"ctfeed"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*synth) {
      auto def = load_game_definition(detail::read_file(def_path));
      detail::write_output(cfg.output,
                           serialize_event_log(generate_synthetic_log(def, players, seed)), out);
      return 0;
    }
    if (*serve) {
      game_store store;
      if (!preload_def.empty()) {
        auto def_text = detail::read_file(preload_def);
        std::string game =
            preload_game.empty() ? load_game_definition(def_text).game_id : preload_game;
        if (preload_log.empty())
          store.put_definition(game, def_text);
        else
          store.ingest(game, def_text, detail::read_file(preload_log), cfg.mode);
        err << "preloaded game " << game << '\n';
      }
      http_server server{store};
      err << "listening on " << host << ':' << cfg.port << '\n';
      if (!server.listen(host, cfg.port)) {
        err << "cannot bind " << host << ':' << cfg.port << '\n';
        return 1;
      }
      return 0;
    }

    auto def = load_game_definition(detail::read_file(def_path));
    auto log_text = detail::read_file(log_path);

    if (*validate) {
      auto parsed = parse_event_log(log_text, def, cfg.mode);
      auto diags = parsed.source_diagnostics;
      auto checks = validate_log(parsed, def);
      diags.insert(diags.end(), checks.begin(), checks.end());
      detail::print_diagnostics(diags, out);
      return has_errors(diags) ? 1 : 0;
    }
    if (*repair) {
      auto parsed = parse_event_log(log_text, def, cfg.mode);
      auto repaired = repair_log(parsed, def);
      auto diags = parsed.source_diagnostics;
      diags.insert(diags.end(), repaired.diagnostics.begin(), repaired.diagnostics.end());
      detail::print_diagnostics(diags, err);
      detail::write_output(cfg.output, serialize_event_log(repaired.log), out);
      return 0;
    }

    auto snap = make_snapshot(def.game_id, std::move(def), log_text, cfg.mode);
    if (*stats) {
      if (!snap.diagnostics.empty())
        err << snap.diagnostics.size() << " warning(s); run validate for details\n";
      detail::print_stats(snap, out);
      return 0;
    }
    if (*exporter) {
      auto request = parse_view_request(view_text);
      if (!request) {
        err << "--view must be clustering, timeline or feedback:<player_id>\n";
        return 2;
      }
      detail::write_output(cfg.output, render_view(snap, *request), out);
      return 0;
    }
  } catch (const definition_error& e) {
    err << "definition error: " << e.what() << '\n';
    return 1;
  } catch (const log_error& e) {
    detail::print_diagnostics(e.diagnostics(), err);
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace ctfeed
