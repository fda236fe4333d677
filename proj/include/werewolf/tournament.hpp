#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "werewolf/analytics.hpp"
#include "werewolf/core.hpp"
#include "werewolf/engine.hpp"
#include "werewolf/error.hpp"
#include "werewolf/log.hpp"

namespace werewolf {

// One scheduled pairing: `villager_model` powers every non-werewolf seat,
// `werewolf_model` powers the wolves. Self-play uses the same name twice.
struct Matchup {
  std::string villager_model;
  std::string werewolf_model;
  int games = 0;
  uint64_t base_seed = 0;
};

struct Schedule {
  std::vector<Matchup> matchups;
};

// Round-robin with role alternation: every unordered model pair plays
// games_per_pair games, half with each side assignment, plus selfplay_games
// of self-play per model. Matchup seeds derive from (seed, position), so the
// schedule is a pure function of its inputs.
inline Schedule schedule_round_robin(const std::vector<std::string>& models, int games_per_pair,
                                     int selfplay_games, uint64_t seed) {
  if (models.empty()) throw ConfigError("tournament: no models listed");
  for (size_t i = 0; i < models.size(); ++i) {
    if (models[i].empty()) throw ConfigError("tournament: empty model name");
    for (size_t j = i + 1; j < models.size(); ++j)
      if (models[i] == models[j])
        throw ConfigError("tournament: duplicate model name '" + models[i] + "'");
  }
  if (games_per_pair < 0 || games_per_pair % 2 != 0)
    throw ConfigError("tournament: games_per_pair must be even (split across role assignments)");
  if (selfplay_games < 0) throw ConfigError("tournament: selfplay_games must be >= 0");

  Schedule schedule;
  auto add = [&](const std::string& v, const std::string& w, int games) {
    if (games < 1) return;
    const auto ordinal = static_cast<uint64_t>(schedule.matchups.size());
    schedule.matchups.push_back({v, w, games, derive_seed(seed, {ordinal})});
  };
  for (size_t i = 0; i < models.size(); ++i)
    for (size_t j = i + 1; j < models.size(); ++j) {
      add(models[i], models[j], games_per_pair / 2);
      add(models[j], models[i], games_per_pair / 2);
    }
  for (const auto& m : models) add(m, m, selfplay_games);
  return schedule;
}

namespace detail {

inline std::string sanitize_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out += ok ? c : '-';
  }
  return out.empty() ? "model" : out;
}

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

inline std::string matchup_dirname(const Matchup& m) {
  return detail::sanitize_name(m.villager_model) + "_vs_" + detail::sanitize_name(m.werewolf_model);
}

struct GameTask {
  size_t matchup = 0;
  int index = 0;  // within the matchup
  uint64_t seed = 0;
  std::string path;  // log file
};

struct TaskResult {
  GameTask task;
  enum class Status { Completed, Resumed, Failed } status = Status::Completed;
  std::string error;
};

struct TournamentSummary {
  std::vector<TaskResult> results;
  WinMatrix matrix;  // recounted from the raw logs on disk
  int completed = 0;
  int resumed = 0;
  int failed = 0;
};

// Produces a policy for a seat; `model` is the profile/model name from the
// schedule. A fresh policy per seat keeps per-agent state (memory of
// fallbacks etc.) isolated.
using AgentFactory = std::function<PolicyPtr(const std::string& model, const PlayerInfo& seat)>;

// Executes every scheduled game, one JSONL log per game under
// out_dir/logs/<matchup>/<index>_<seed>.jsonl. Game i of a matchup runs with
// seed derive_seed(matchup.base_seed, {i}); logs that already exist are
// skipped (resume). Game failures are recorded in the summary and the
// manifest, never silently dropped. Games run on `workers` threads; results
// are order-independent.
inline TournamentSummary run_tournament(const Schedule& schedule, const GameConfig& base_config,
                                        const AgentFactory& factory, const std::string& out_dir,
                                        int workers = 1) {
  namespace fs = std::filesystem;
  if (schedule.matchups.empty()) throw ConfigError("tournament: empty schedule");
  if (workers < 1) workers = 1;

  const fs::path root(out_dir);
  const fs::path logs_dir = root / "logs";
  const fs::path summary_dir = root / "summary";
  std::error_code ec;
  fs::create_directories(summary_dir, ec);
  if (ec) throw IoError("cannot create '" + summary_dir.string() + "': " + ec.message());

  std::vector<GameTask> tasks;
  for (size_t mi = 0; mi < schedule.matchups.size(); ++mi) {
    const auto& m = schedule.matchups[mi];
    const fs::path dir = logs_dir / matchup_dirname(m);
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    for (int i = 0; i < m.games; ++i) {
      const uint64_t game_seed = derive_seed(m.base_seed, {static_cast<uint64_t>(i)});
      const std::string file = std::to_string(i) + "_" + std::to_string(game_seed) + ".jsonl";
      tasks.push_back({mi, i, game_seed, (dir / file).string()});
    }
  }

  std::vector<TaskResult> results(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const GameTask& task = tasks[k];
      TaskResult& res = results[k];
      res.task = task;
      if (fs::exists(task.path)) {
        res.status = TaskResult::Status::Resumed;
        continue;
      }
      const auto& m = schedule.matchups[task.matchup];
      try {
        GameConfig config = base_config;
        config.seed = task.seed;
        GameMaster gm(
            config,
            [&](const PlayerInfo& p) {
              return factory(p.role == Role::Werewolf ? m.werewolf_model : m.villager_model, p);
            },
            {{"villager_model", m.villager_model}, {"werewolf_model", m.werewolf_model}});
        gm.run();
        save_log(gm.log(), task.path);
        res.status = TaskResult::Status::Completed;
      } catch (const std::exception& ex) {
        res.status = TaskResult::Status::Failed;
        res.error = ex.what();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  TournamentSummary summary;
  summary.results = std::move(results);
  for (const auto& r : summary.results) {
    if (r.status == TaskResult::Status::Completed) summary.completed += 1;
    if (r.status == TaskResult::Status::Resumed) summary.resumed += 1;
    if (r.status == TaskResult::Status::Failed) summary.failed += 1;
  }

  // The matrix is recounted from what is actually on disk, so it reflects
  // resumed games too and stays correct across interrupted runs.
  std::vector<GameLog> logs;
  for (const auto& r : summary.results)
    if (r.status != TaskResult::Status::Failed && fs::exists(r.task.path))
      logs.push_back(load_log(r.task.path));
  summary.matrix = win_matrix(logs);

  {
    std::ofstream csv(summary_dir / "win_matrix.csv", std::ios::binary);
    if (!csv) throw IoError("cannot open '" + (summary_dir / "win_matrix.csv").string() + "'");
    write_win_matrix_csv(summary.matrix, csv);
  }

  json manifest;
  manifest["config_digest"] = detail::fnv1a(config_to_json(base_config).dump());
  manifest["schedule"] = json::array();
  for (const auto& m : schedule.matchups)
    manifest["schedule"].push_back({{"villager_model", m.villager_model},
                                    {"werewolf_model", m.werewolf_model},
                                    {"games", m.games},
                                    {"base_seed", m.base_seed},
                                    {"dir", matchup_dirname(m)}});
  manifest["games"] = json::array();
  for (const auto& r : summary.results) {
    json g;
    g["matchup"] = matchup_dirname(schedule.matchups[r.task.matchup]);
    g["index"] = r.task.index;
    g["seed"] = r.task.seed;
    g["file"] = r.task.path;
    g["status"] = r.status == TaskResult::Status::Completed ? "completed"
                  : r.status == TaskResult::Status::Resumed ? "resumed"
                                                            : "failed";
    if (!r.error.empty()) g["error"] = r.error;
    manifest["games"].push_back(std::move(g));
  }
  {
    std::ofstream mf(summary_dir / "run_manifest.json", std::ios::binary);
    if (!mf) throw IoError("cannot open '" + (summary_dir / "run_manifest.json").string() + "'");
    mf << manifest.dump(2) << '\n';
  }

  return summary;
}

}  // namespace werewolf
