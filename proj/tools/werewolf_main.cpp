// Command-line front end: single games, Monte Carlo estimation, tournaments,
// and log analytics. Exit codes: 0 success, 1 user/config error, 2 internal
// error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "werewolf/werewolf.hpp"
#include "werewolf/transport_httplib.hpp"

namespace fs = std::filesystem;
using namespace werewolf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

// --agents grammar: "random" | "heuristic" | "llm:<profile>" applied to both
// sides, or "villagers=<spec>,werewolves=<spec>" for a split assignment.
AgentAssignment parse_agents_flag(const std::string& text) {
  AgentAssignment a;
  if (text.find('=') == std::string::npos) {
    a.villagers = text;
    a.werewolves = text;
    return a;
  }
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t comma = text.find(',', pos);
    const std::string part =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--agents: expected key=value in '" + part + "'");
    const std::string key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "villagers") a.villagers = value;
    else if (key == "werewolves") a.werewolves = value;
    else throw ConfigError("--agents: unknown side '" + key + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return a;
}

bool needs_llm(const std::string& spec) { return spec.rfind("llm:", 0) == 0; }

std::shared_ptr<Completer> make_completer() {
  return std::make_shared<Completer>(std::make_shared<HttplibTransport>());
}

int run_game_cmd(const std::string& config_path, bool seed_set, uint64_t seed,
                 const std::string& agents_flag, const std::string& out_flag,
                 const std::string& synthetic_flag) {
  RunConfig rc;
  if (!config_path.empty()) rc = load_run_config(config_path);
  if (!agents_flag.empty()) {
    rc.agents = parse_agents_flag(agents_flag);
    validate_agent_spec(rc.agents.villagers, rc.providers, "agents.villagers");
    validate_agent_spec(rc.agents.werewolves, rc.providers, "agents.werewolves");
  }
  if (seed_set) rc.game.seed = seed;
  if (!out_flag.empty()) rc.out_log = out_flag;
  if (!synthetic_flag.empty()) {
    if (synthetic_flag != "on" && synthetic_flag != "off")
      throw ConfigError("--synthetic-votes takes on or off");
    rc.game.synthetic_votes = synthetic_flag == "on";
  }

  std::shared_ptr<Completer> completer;
  if (needs_llm(rc.agents.villagers) || needs_llm(rc.agents.werewolves))
    completer = make_completer();

  std::vector<std::shared_ptr<LlmPolicy>> llm_policies;
  GameMaster gm(
      rc.game,
      [&](const PlayerInfo& p) {
        const auto& spec = p.role == Role::Werewolf ? rc.agents.werewolves : rc.agents.villagers;
        PolicyPtr policy = make_policy(spec, rc.providers, completer);
        if (auto llm = std::dynamic_pointer_cast<LlmPolicy>(policy)) llm_policies.push_back(llm);
        return policy;
      },
      {{"villager_model", rc.agents.villagers}, {"werewolf_model", rc.agents.werewolves}});

  const GameState& final_state = gm.run();
  save_log(gm.log(), rc.out_log);

  size_t fallbacks = 0;
  for (const auto& p : llm_policies) fallbacks += p->fallbacks().size();

  std::cout << "winner: " << to_string(*final_state.winner) << "\n"
            << "rounds: " << final_state.round + 1 << "\n"
            << "events: " << final_state.history.size() << "\n"
            << "log: " << rc.out_log << "\n";
  if (!llm_policies.empty()) std::cout << "llm fallbacks: " << fallbacks << "\n";
  return kExitOk;
}

int mc_cmd(int games, const std::string& seer_flag, uint64_t seed, bool as_json) {
  if (seer_flag != "on" && seer_flag != "off") throw ConfigError("--seer takes on or off");
  const bool with_seer = seer_flag == "on";
  const auto est = mc::estimate_win_rate(games, with_seer, seed);
  char rate[32], ci[32];
  snprintf(rate, sizeof rate, "%.6f", est.villager_rate());
  snprintf(ci, sizeof ci, "%.6f", est.ci95());
  if (as_json) {
    json j;
    j["games"] = est.games;
    j["seer"] = with_seer;
    j["rate"] = est.villager_rate();
    j["ci95"] = est.ci95();
    j["villager_wins"] = est.villager_wins;
    j["seed"] = seed;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "games: " << est.games << " (seer " << seer_flag << ", seed " << seed << ")\n"
              << "villager win rate: " << rate << " +/- " << ci << " (95% CI)\n";
  }
  return kExitOk;
}

int tournament_cmd(const std::string& config_path) {
  const RunConfig rc = load_run_config(config_path);
  if (rc.tournament.models.empty())
    throw ConfigError("tournament.models: at least one agent spec is required");

  const Schedule schedule =
      schedule_round_robin(rc.tournament.models, rc.tournament.games_per_pair,
                           rc.tournament.selfplay_games, rc.tournament.seed);

  std::shared_ptr<Completer> completer;
  for (const auto& m : rc.tournament.models)
    if (needs_llm(m)) completer = make_completer();

  const TournamentSummary summary = run_tournament(
      schedule, rc.game,
      [&](const std::string& model, const PlayerInfo&) {
        return make_policy(model, rc.providers, completer);
      },
      rc.tournament.out_dir, rc.tournament.workers);

  std::cout << "matchups: " << schedule.matchups.size() << "\n"
            << "games completed: " << summary.completed << ", resumed: " << summary.resumed
            << ", failed: " << summary.failed << "\n"
            << "output: " << rc.tournament.out_dir << "\n";
  for (const auto& r : summary.results)
    if (r.status == TaskResult::Status::Failed)
      std::cerr << "failed: " << r.task.path << ": " << r.error << "\n";
  if (summary.failed > 0 && summary.completed == 0 && summary.resumed == 0) return kExitInternal;
  return kExitOk;
}

int analyze_cmd(const std::string& logs_dir, const std::string& metrics_flag,
                const std::string& out_dir) {
  std::set<std::string> wanted;
  {
    size_t pos = 0;
    while (pos <= metrics_flag.size()) {
      const size_t comma = metrics_flag.find(',', pos);
      const std::string m =
          metrics_flag.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!m.empty()) {
        if (m != "entropy" && m != "bids" && m != "seer" && m != "winmatrix")
          throw ConfigError("--metrics: unknown metric '" + m + "'");
        wanted.insert(m);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (wanted.empty()) throw ConfigError("--metrics: nothing selected");

  std::vector<fs::path> files;
  if (!fs::exists(logs_dir)) throw IoError("log directory '" + logs_dir + "' does not exist");
  for (const auto& entry : fs::recursive_directory_iterator(logs_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .jsonl logs under '" + logs_dir + "'");

  std::vector<GameLog> logs;
  size_t failed_files = 0;
  for (const auto& f : files) {
    std::vector<std::string> warnings;
    try {
      logs.push_back(load_log_lenient(f.string(), warnings));
    } catch (const std::exception& ex) {
      std::cerr << "warning: skipping " << f.string() << ": " << ex.what() << "\n";
      ++failed_files;
      continue;
    }
    for (const auto& w : warnings)
      std::cerr << "warning: " << f.string() << ": " << w << "\n";
  }
  if (logs.empty()) {
    std::cerr << "all " << failed_files << " log files were unusable\n";
    return kExitUser;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

  auto open_out = [&](const char* name) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open output CSV '") + name + "'");
    return out;
  };

  if (wanted.count("entropy")) {
    auto out = open_out("entropy.csv");
    write_entropy_csv(average_entropy(logs), out);
    std::cout << "wrote " << (fs::path(out_dir) / "entropy.csv").string() << "\n";
  }
  if (wanted.count("bids")) {
    auto out = open_out("bids.csv");
    write_bids_csv(bid_distribution(logs), out);
    std::cout << "wrote " << (fs::path(out_dir) / "bids.csv").string() << "\n";
  }
  if (wanted.count("seer")) {
    StructuredRevealDetector detector;
    std::map<std::string, std::vector<RevealEvent>> events_by_model;
    std::map<std::string, int> games_by_model;
    for (size_t i = 0; i < logs.size(); ++i) {
      const auto model = logs[i].labels.count("villager_model")
                             ? logs[i].labels.at("villager_model")
                             : std::string("unlabeled");
      games_by_model[model] += 1;
      for (auto& ev : detect_reveals(logs[i], static_cast<int>(i), detector))
        events_by_model[model].push_back(ev);
    }
    std::map<std::string, SeerRevealMetrics> by_model;
    for (const auto& [model, games] : games_by_model)
      by_model[model] = seer_metrics(events_by_model[model], games);
    auto out = open_out("seer_metrics.csv");
    write_seer_csv(by_model, out);
    std::cout << "wrote " << (fs::path(out_dir) / "seer_metrics.csv").string() << "\n";
  }
  if (wanted.count("winmatrix")) {
    auto out = open_out("win_matrix.csv");
    write_win_matrix_csv(win_matrix(logs), out);
    std::cout << "wrote " << (fs::path(out_dir) / "win_matrix.csv").string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Werewolf arena: deterministic engine, Monte Carlo baseline, tournaments, "
               "and log analytics"};
  app.require_subcommand(1);

  // run-game
  auto* run = app.add_subcommand("run-game", "Play one full game and write its JSONL log");
  std::string rg_config, rg_agents, rg_out, rg_synthetic;
  uint64_t rg_seed = 0;
  bool rg_seed_set = false;
  run->add_option("--config", rg_config, "Run-config JSON file");
  run->add_option("--seed", rg_seed, "Game seed (overrides config)")
      ->each([&](const std::string&) { rg_seed_set = true; });
  run->add_option("--agents", rg_agents,
                  "Agent spec: random | heuristic | llm:<profile> | "
                  "villagers=<spec>,werewolves=<spec>");
  run->add_option("--out", rg_out, "Log output path (overrides config)");
  run->add_option("--synthetic-votes", rg_synthetic, "on|off (overrides config)");

  // mc
  auto* mc_cmd_app = app.add_subcommand("mc", "Estimate baseline win rates by Monte Carlo");
  int mc_games = 100000;
  std::string mc_seer = "off";
  uint64_t mc_seed = 0;
  bool mc_json = false;
  mc_cmd_app->add_option("--games", mc_games, "Number of simulated games")
      ->check(CLI::PositiveNumber);
  mc_cmd_app->add_option("--seer", mc_seer, "on|off: include the auto-believed seer");
  mc_cmd_app->add_option("--seed", mc_seed, "Simulation seed");
  mc_cmd_app->add_flag("--json", mc_json, "Emit a single JSON object");

  // tournament
  auto* tour = app.add_subcommand("tournament", "Run the round-robin schedule from a config");
  std::string t_config;
  tour->add_option("--config", t_config, "Run-config JSON file with a tournament section")
      ->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "Compute CSV metrics from a directory of logs");
  std::string a_logs, a_metrics = "entropy,bids,seer,winmatrix", a_out = "analysis";
  ana->add_option("--logs", a_logs, "Directory scanned recursively for .jsonl logs")->required();
  ana->add_option("--metrics", a_metrics, "Comma list: entropy,bids,seer,winmatrix");
  ana->add_option("--out", a_out, "Output directory for CSV files");

  try {
    app.parse(argc, argv);
    if (run->parsed())
      return run_game_cmd(rg_config, rg_seed_set, rg_seed, rg_agents, rg_out, rg_synthetic);
    if (mc_cmd_app->parsed()) return mc_cmd(mc_games, mc_seer, mc_seed, mc_json);
    if (tour->parsed()) return tournament_cmd(t_config);
    if (ana->parsed()) return analyze_cmd(a_logs, a_metrics, a_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUser;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUser;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitUser;
  } catch (const ReplayError& e) {
    std::cerr << "log error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUser;
}
