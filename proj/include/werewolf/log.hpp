#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "werewolf/core.hpp"
#include "werewolf/error.hpp"

namespace werewolf {

// Field order in emitted JSON is part of the format: logs are compared
// byte-for-byte in replay checks, so we always serialize with ordered_json
// and never include wall-clock data.
using json = nlohmann::ordered_json;

inline Role parse_role(const std::string& s) {
  if (s == "villager") return Role::Villager;
  if (s == "werewolf") return Role::Werewolf;
  if (s == "seer") return Role::Seer;
  if (s == "doctor") return Role::Doctor;
  throw ReplayError("unknown role '" + s + "'");
}

inline Phase parse_phase(const std::string& s) {
  if (s == "night") return Phase::Night;
  if (s == "debate") return Phase::Debate;
  if (s == "vote") return Phase::Vote;
  if (s == "ended") return Phase::Ended;
  throw ReplayError("unknown phase '" + s + "'");
}

inline Winner parse_winner(const std::string& s) {
  if (s == "villagers") return Winner::Villagers;
  if (s == "werewolves") return Winner::Werewolves;
  throw ReplayError("unknown winner '" + s + "'");
}

namespace detail {

inline json seat_map_to_json(const std::map<int, int>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

inline std::map<int, int> seat_map_from_json(const json& j) {
  std::map<int, int> out;
  for (const auto& [k, v] : j.items()) out[std::stoi(k)] = v.get<int>();
  return out;
}

}  // namespace detail

inline json config_to_json(const GameConfig& c) {
  json j;
  j["villagers"] = c.villagers;
  j["werewolves"] = c.werewolves;
  j["seers"] = c.seers;
  j["doctors"] = c.doctors;
  j["debate_cap"] = c.debate_cap;
  j["name_pool"] = c.name_pool;
  j["seed"] = c.seed;
  j["synthetic_votes"] = c.synthetic_votes;
  j["mention_tiebreak_weight"] = c.mention_tiebreak_weight;
  j["end_debate_on_consensus"] = c.end_debate_on_consensus;
  return j;
}

inline GameConfig config_from_json(const json& j) {
  GameConfig c;
  c.villagers = j.at("villagers").get<int>();
  c.werewolves = j.at("werewolves").get<int>();
  c.seers = j.at("seers").get<int>();
  c.doctors = j.at("doctors").get<int>();
  c.debate_cap = j.at("debate_cap").get<int>();
  c.name_pool = j.at("name_pool").get<std::vector<std::string>>();
  c.seed = j.at("seed").get<uint64_t>();
  c.synthetic_votes = j.at("synthetic_votes").get<bool>();
  c.mention_tiebreak_weight = j.at("mention_tiebreak_weight").get<int>();
  c.end_debate_on_consensus = j.value("end_debate_on_consensus", false);
  return c;
}

inline json event_to_json(const GameEvent& e) {
  json j;
  j["type"] = event_type_name(e.payload);
  j["round"] = e.round;
  j["phase"] = to_string(e.phase);
  j["visibility"] = e.visibility == Visibility::Public ? "public" : "private";
  j["recipients"] = e.recipients;

  struct V {
    json& j;
    void operator()(const GameStarted& p) {
      json players = json::array();
      for (const auto& pl : p.players)
        players.push_back({{"seat", pl.seat}, {"name", pl.name}, {"role", to_string(pl.role)}});
      j["players"] = std::move(players);
    }
    void operator()(const NightElimination& p) {
      j["victim"] = p.victim.seat;
      j["saved"] = p.saved;
    }
    void operator()(const SeerResult& p) {
      j["seer"] = p.seer.seat;
      j["target"] = p.target.seat;
      j["role"] = to_string(p.role);
    }
    void operator()(const DebateTurn& p) {
      j["speaker"] = p.speaker.seat;
      j["utterance"] = p.utterance;
      j["bids"] = detail::seat_map_to_json(p.bids);
    }
    void operator()(const SyntheticTally& p) { j["votes"] = detail::seat_map_to_json(p.votes); }
    void operator()(const VoteCast& p) {
      j["voter"] = p.voter.seat;
      j["target"] = p.target.seat;
    }
    void operator()(const Exile& p) { j["target"] = p.target.seat; }
    void operator()(const NoExile&) {}
    void operator()(const RoundSummary& p) {
      j["player"] = p.player.seat;
      j["text"] = p.text;
    }
    void operator()(const GameEnded& p) { j["winner"] = to_string(p.winner); }
  };
  std::visit(V{j}, e.payload);
  return j;
}

inline GameEvent event_from_json(const json& j) {
  GameEvent e;
  e.round = j.at("round").get<int>();
  e.phase = parse_phase(j.at("phase").get<std::string>());
  const auto vis = j.at("visibility").get<std::string>();
  if (vis != "public" && vis != "private") throw ReplayError("unknown visibility '" + vis + "'");
  e.visibility = vis == "public" ? Visibility::Public : Visibility::Private;
  e.recipients = j.at("recipients").get<std::vector<int>>();

  const auto type = j.at("type").get<std::string>();
  if (type == "game_started") {
    GameStarted p;
    for (const auto& pl : j.at("players"))
      p.players.push_back({pl.at("seat").get<int>(), pl.at("name").get<std::string>(),
                           parse_role(pl.at("role").get<std::string>())});
    e.payload = std::move(p);
  } else if (type == "night_elimination") {
    e.payload = NightElimination{PlayerId{j.at("victim").get<int>()}, j.at("saved").get<bool>()};
  } else if (type == "seer_result") {
    e.payload = SeerResult{PlayerId{j.at("seer").get<int>()}, PlayerId{j.at("target").get<int>()},
                           parse_role(j.at("role").get<std::string>())};
  } else if (type == "debate_turn") {
    e.payload = DebateTurn{PlayerId{j.at("speaker").get<int>()},
                           j.at("utterance").get<std::string>(),
                           detail::seat_map_from_json(j.at("bids"))};
  } else if (type == "synthetic_tally") {
    e.payload = SyntheticTally{detail::seat_map_from_json(j.at("votes"))};
  } else if (type == "vote_cast") {
    e.payload = VoteCast{PlayerId{j.at("voter").get<int>()}, PlayerId{j.at("target").get<int>()}};
  } else if (type == "exile") {
    e.payload = Exile{PlayerId{j.at("target").get<int>()}};
  } else if (type == "no_exile") {
    e.payload = NoExile{};
  } else if (type == "round_summary") {
    e.payload = RoundSummary{PlayerId{j.at("player").get<int>()}, j.at("text").get<std::string>()};
  } else if (type == "game_ended") {
    e.payload = GameEnded{parse_winner(j.at("winner").get<std::string>())};
  } else {
    throw ReplayError("unknown event type '" + type + "'");
  }
  return e;
}

// A complete persisted game: the config line plus every event, in order.
// `labels` carries free-form run metadata (e.g. which model played which
// side); analytics reads it, the engine ignores it.
struct GameLog {
  GameConfig config;
  std::map<std::string, std::string> labels;
  std::vector<GameEvent> events;
};

inline std::string to_jsonl(const GameLog& log) {
  std::ostringstream out;
  json header;
  header["type"] = "config";
  header["config"] = config_to_json(log.config);
  header["labels"] = json::object();
  for (const auto& [k, v] : log.labels) header["labels"][k] = v;
  out << header.dump() << '\n';
  for (const auto& e : log.events) out << event_to_json(e).dump() << '\n';
  return out.str();
}

inline GameLog parse_jsonl(const std::string& text) {
  GameLog log;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ReplayError("line " + std::to_string(line_no) + ": invalid JSON: " + ex.what());
    }
    try {
      if (!saw_header) {
        if (j.at("type").get<std::string>() != "config")
          throw ReplayError("first line must be the config header");
        log.config = config_from_json(j.at("config"));
        for (const auto& [k, v] : j.at("labels").items())
          log.labels[k] = v.get<std::string>();
        saw_header = true;
      } else {
        log.events.push_back(event_from_json(j));
      }
    } catch (const json::exception& ex) {
      throw ReplayError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!saw_header) throw ReplayError("empty log: missing config header");
  return log;
}

inline void save_log(const GameLog& log, const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);  // failure surfaces on open below
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_jsonl(log);
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline GameLog load_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str());
}

// Tolerant variant for analytics: malformed event lines are skipped with a
// warning ("line N: reason") instead of aborting the file. The header line
// must still parse — without a config there is nothing to analyze.
inline GameLog load_log_lenient(const std::string& path, std::vector<std::string>& warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  GameLog log;
  std::string line;
  bool saw_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (!saw_header) {
        if (j.at("type").get<std::string>() != "config")
          throw ReplayError("first line must be the config header");
        log.config = config_from_json(j.at("config"));
        for (const auto& [k, v] : j.at("labels").items())
          log.labels[k] = v.get<std::string>();
        saw_header = true;
      } else {
        log.events.push_back(event_from_json(j));
      }
    } catch (const std::exception& ex) {
      if (!saw_header)
        throw ReplayError("line " + std::to_string(line_no) +
                          ": unusable config header: " + ex.what());
      warnings.push_back("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!saw_header) throw ReplayError("empty log: missing config header");
  return log;
}

// Rebuilds the final state by folding every event over the initial state.
inline GameState replay(const GameLog& log) {
  GameState state = initial_state(log.config);
  for (const auto& e : log.events) apply_event(state, e);
  return state;
}

// Order-stable fingerprint of everything gameplay-visible in a state. The
// generator is deliberately excluded: a replayed state has consumed different
// draws than a live one.
inline std::string state_digest(const GameState& s) {
  json j;
  j["round"] = s.round;
  j["phase"] = to_string(s.phase);
  json players = json::array();
  for (const auto& p : s.players)
    players.push_back({{"seat", p.seat}, {"name", p.name}, {"role", to_string(p.role)}});
  j["players"] = std::move(players);
  json alive = json::array();
  for (bool a : s.alive) alive.push_back(a);
  j["alive"] = std::move(alive);
  j["winner"] = s.winner ? to_string(*s.winner) : "none";
  j["night_done"] = s.night_done;
  j["seer_done"] = s.seer_done;
  j["debate_turns"] = s.debate_turns;
  j["votes"] = detail::seat_map_to_json(s.votes);
  j["vote_done"] = s.vote_done;
  j["summarized"] = std::vector<int>(s.summarized.begin(), s.summarized.end());
  j["events"] = s.history.size();

  const std::string text = j.dump();
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace werewolf
