#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "werewolf/client.hpp"
#include "werewolf/core.hpp"
#include "werewolf/error.hpp"
#include "werewolf/llm_policy.hpp"
#include "werewolf/log.hpp"
#include "werewolf/scripted.hpp"

namespace werewolf {

struct AgentAssignment {
  std::string villagers = "random";   // agent spec for the non-werewolf seats
  std::string werewolves = "random";  // agent spec for the werewolf seats
};

struct TournamentConfig {
  std::vector<std::string> models;  // agent specs; each doubles as the model label
  int games_per_pair = 10;
  int selfplay_games = 5;
  uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "tournament_out";
};

// The whole tool configuration, loaded from one JSON document. Every field
// has a default; validation errors name the offending field path.
struct RunConfig {
  GameConfig game;
  std::map<std::string, ProviderProfile> providers;
  AgentAssignment agents;
  TournamentConfig tournament;
  std::string out_log = "game.jsonl";
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

inline void check_known_fields(const json& j, const std::string& path,
                               const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) config_fail(path + "." + key, "unknown field");
}

inline int get_int(const json& j, const std::string& path, const char* field, int fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number_integer()) config_fail(path + "." + field, "expected an integer");
  return j[field].get<int>();
}

inline uint64_t get_u64(const json& j, const std::string& path, const char* field,
                        uint64_t fallback) {
  if (!j.contains(field)) return fallback;
  const bool ok = j[field].is_number_unsigned() ||
                  (j[field].is_number_integer() && j[field].get<int64_t>() >= 0);
  if (!ok) config_fail(path + "." + field, "expected a non-negative integer");
  return j[field].get<uint64_t>();
}

inline bool get_bool(const json& j, const std::string& path, const char* field, bool fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_boolean()) config_fail(path + "." + field, "expected true or false");
  return j[field].get<bool>();
}

inline double get_double(const json& j, const std::string& path, const char* field,
                         double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number()) config_fail(path + "." + field, "expected a number");
  return j[field].get<double>();
}

inline std::string get_string(const json& j, const std::string& path, const char* field,
                              const std::string& fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_string()) config_fail(path + "." + field, "expected a string");
  return j[field].get<std::string>();
}

}  // namespace detail

inline GameConfig parse_game_config(const json& j, const std::string& path = "game") {
  using namespace detail;
  if (!j.is_object()) config_fail(path, "expected an object");
  check_known_fields(j, path,
                     {"villagers", "werewolves", "seers", "doctors", "debate_cap", "name_pool",
                      "seed", "synthetic_votes", "mention_tiebreak_weight",
                      "end_debate_on_consensus"});
  GameConfig c;
  c.villagers = get_int(j, path, "villagers", c.villagers);
  c.werewolves = get_int(j, path, "werewolves", c.werewolves);
  c.seers = get_int(j, path, "seers", c.seers);
  c.doctors = get_int(j, path, "doctors", c.doctors);
  c.debate_cap = get_int(j, path, "debate_cap", c.debate_cap);
  c.seed = get_u64(j, path, "seed", c.seed);
  c.synthetic_votes = get_bool(j, path, "synthetic_votes", c.synthetic_votes);
  c.mention_tiebreak_weight =
      get_int(j, path, "mention_tiebreak_weight", c.mention_tiebreak_weight);
  c.end_debate_on_consensus =
      get_bool(j, path, "end_debate_on_consensus", c.end_debate_on_consensus);
  if (j.contains("name_pool")) {
    if (!j["name_pool"].is_array()) config_fail(path + ".name_pool", "expected an array");
    c.name_pool.clear();
    for (const auto& n : j["name_pool"]) {
      if (!n.is_string()) config_fail(path + ".name_pool", "expected an array of strings");
      c.name_pool.push_back(n.get<std::string>());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& ex) {
    config_fail(path, ex.what());
  }
  return c;
}

inline ProviderProfile parse_provider(const std::string& name, const json& j,
                                      const std::string& path) {
  using namespace detail;
  if (!j.is_object()) config_fail(path, "expected an object");
  check_known_fields(j, path,
                     {"endpoint", "model", "auth_header", "auth_prefix", "credential_env",
                      "temperature", "max_tokens"});
  ProviderProfile p;
  p.name = name;
  p.endpoint = get_string(j, path, "endpoint", "");
  if (p.endpoint.empty()) config_fail(path + ".endpoint", "required");
  p.model = get_string(j, path, "model", "");
  if (p.model.empty()) config_fail(path + ".model", "required");
  p.auth_header = get_string(j, path, "auth_header", p.auth_header);
  p.auth_prefix = get_string(j, path, "auth_prefix", p.auth_prefix);
  p.credential_env = get_string(j, path, "credential_env", p.credential_env);
  p.temperature = get_double(j, path, "temperature", p.temperature);
  if (p.temperature < 0) config_fail(path + ".temperature", "must be >= 0");
  p.max_tokens = get_int(j, path, "max_tokens", p.max_tokens);
  if (p.max_tokens < 1) config_fail(path + ".max_tokens", "must be >= 1");
  return p;
}

// Agent spec grammar: "random" | "heuristic" | "llm:<provider profile>".
inline void validate_agent_spec(const std::string& spec,
                                const std::map<std::string, ProviderProfile>& providers,
                                const std::string& path) {
  if (spec == "random" || spec == "heuristic") return;
  if (spec.rfind("llm:", 0) == 0) {
    const std::string profile = spec.substr(4);
    if (profile.empty()) detail::config_fail(path, "llm: spec needs a profile name");
    if (!providers.count(profile))
      detail::config_fail(path, "unknown provider profile '" + profile + "'");
    return;
  }
  detail::config_fail(path, "unknown agent spec '" + spec +
                                "' (expected random, heuristic, or llm:<profile>)");
}

inline RunConfig parse_run_config(const json& j) {
  using namespace detail;
  if (!j.is_object()) config_fail("config", "expected a JSON object");
  check_known_fields(j, "config", {"game", "providers", "agents", "tournament", "output"});

  RunConfig rc;
  if (j.contains("game")) rc.game = parse_game_config(j["game"]);

  if (j.contains("providers")) {
    if (!j["providers"].is_object()) config_fail("providers", "expected an object");
    for (const auto& [name, pj] : j["providers"].items())
      rc.providers.emplace(name, parse_provider(name, pj, "providers." + name));
  }

  if (j.contains("agents")) {
    const auto& a = j["agents"];
    if (!a.is_object()) config_fail("agents", "expected an object");
    check_known_fields(a, "agents", {"villagers", "werewolves"});
    rc.agents.villagers = get_string(a, "agents", "villagers", rc.agents.villagers);
    rc.agents.werewolves = get_string(a, "agents", "werewolves", rc.agents.werewolves);
    validate_agent_spec(rc.agents.villagers, rc.providers, "agents.villagers");
    validate_agent_spec(rc.agents.werewolves, rc.providers, "agents.werewolves");
  }

  if (j.contains("tournament")) {
    const auto& t = j["tournament"];
    if (!t.is_object()) config_fail("tournament", "expected an object");
    check_known_fields(t, "tournament",
                       {"models", "games_per_pair", "selfplay_games", "seed", "workers",
                        "out_dir"});
    if (t.contains("models")) {
      if (!t["models"].is_array()) config_fail("tournament.models", "expected an array");
      rc.tournament.models.clear();
      for (size_t i = 0; i < t["models"].size(); ++i) {
        const auto& m = t["models"][i];
        const std::string path = "tournament.models[" + std::to_string(i) + "]";
        if (!m.is_string()) config_fail(path, "expected a string");
        validate_agent_spec(m.get<std::string>(), rc.providers, path);
        rc.tournament.models.push_back(m.get<std::string>());
      }
    }
    rc.tournament.games_per_pair =
        get_int(t, "tournament", "games_per_pair", rc.tournament.games_per_pair);
    rc.tournament.selfplay_games =
        get_int(t, "tournament", "selfplay_games", rc.tournament.selfplay_games);
    rc.tournament.seed = get_u64(t, "tournament", "seed", rc.tournament.seed);
    rc.tournament.workers = get_int(t, "tournament", "workers", rc.tournament.workers);
    if (rc.tournament.workers < 1) config_fail("tournament.workers", "must be >= 1");
    rc.tournament.out_dir = get_string(t, "tournament", "out_dir", rc.tournament.out_dir);
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) config_fail("output", "expected an object");
    check_known_fields(o, "output", {"log"});
    rc.out_log = get_string(o, "output", "log", rc.out_log);
  }
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + ex.what());
  }
  return parse_run_config(j);
}

// Builds a fresh policy for one seat from an agent spec. LLM specs share the
// given completer (one request budget across the run).
inline PolicyPtr make_policy(const std::string& spec,
                             const std::map<std::string, ProviderProfile>& providers,
                             const std::shared_ptr<Completer>& completer) {
  if (spec == "random") return std::make_shared<RandomPolicy>();
  if (spec == "heuristic") return std::make_shared<HeuristicPolicy>();
  if (spec.rfind("llm:", 0) == 0) {
    const std::string profile = spec.substr(4);
    const auto it = providers.find(profile);
    if (it == providers.end())
      throw ConfigError("unknown provider profile '" + profile + "'");
    if (!completer) throw ConfigError("llm agents need an HTTP completer");
    return std::make_shared<LlmPolicy>(completer, it->second);
  }
  throw ConfigError("unknown agent spec '" + spec + "'");
}

}  // namespace werewolf
