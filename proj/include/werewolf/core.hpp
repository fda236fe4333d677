#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "werewolf/error.hpp"
#include "werewolf/rng.hpp"

namespace werewolf {

enum class Role { Villager, Werewolf, Seer, Doctor };
enum class Phase { Night, Debate, Vote, Ended };
enum class Winner { Villagers, Werewolves };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::Villager: return "villager";
    case Role::Werewolf: return "werewolf";
    case Role::Seer: return "seer";
    case Role::Doctor: return "doctor";
  }
  return "?";
}

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Night: return "night";
    case Phase::Debate: return "debate";
    case Phase::Vote: return "vote";
    case Phase::Ended: return "ended";
  }
  return "?";
}

inline const char* to_string(Winner w) {
  return w == Winner::Villagers ? "villagers" : "werewolves";
}

// Seat index into the game roster. Seats are contiguous 0..N-1; display names
// live in the roster (GameState::players).
struct PlayerId {
  int seat = -1;
  auto operator<=>(const PlayerId&) const = default;
};

struct PlayerInfo {
  int seat = -1;
  std::string name;
  Role role = Role::Villager;
};

inline std::vector<std::string> default_name_pool() {
  return {"Alice", "Bruno", "Carla", "Diego", "Elena", "Felix",
          "Greta", "Hugo",  "Isla",  "Jonas", "Kira",  "Liam",
          "Mona",  "Nadia", "Oscar", "Priya", "Quinn"};
}

struct GameConfig {
  int villagers = 4;
  int werewolves = 2;
  int seers = 1;
  int doctors = 1;
  int debate_cap = 8;
  std::vector<std::string> name_pool = default_name_pool();
  uint64_t seed = 0;
  bool synthetic_votes = true;
  int mention_tiebreak_weight = 2;
  // Reserved: end the debate early once a synthetic-vote majority forms.
  // Parsed and carried but currently ignored by the engine.
  bool end_debate_on_consensus = false;

  int total_players() const { return villagers + werewolves + seers + doctors; }

  void validate() const {
    if (villagers < 0 || werewolves < 0 || seers < 0 || doctors < 0)
      throw ConfigError("role counts must be non-negative");
    if (werewolves < 1) throw ConfigError("at least one werewolf is required");
    if (seers > 1) throw ConfigError("at most one seer is supported");
    if (doctors > 1) throw ConfigError("at most one doctor is supported");
    if (villagers + seers + doctors <= werewolves)
      throw ConfigError("werewolves must start outnumbered or the game is over at setup");
    if (debate_cap < 1) throw ConfigError("debate_cap must be >= 1");
    if (mention_tiebreak_weight < 1)
      throw ConfigError("mention_tiebreak_weight must be a positive integer");
    if (static_cast<int>(name_pool.size()) < total_players())
      throw ConfigError("name_pool has " + std::to_string(name_pool.size()) +
                        " names; need at least " + std::to_string(total_players()));
    std::set<std::string> uniq(name_pool.begin(), name_pool.end());
    if (uniq.size() != name_pool.size()) throw ConfigError("name_pool contains duplicates");
    for (const auto& n : name_pool)
      if (n.empty()) throw ConfigError("name_pool contains an empty name");
  }
};

// ---------------------------------------------------------------------------
// Events

struct GameStarted {
  std::vector<PlayerInfo> players;
};

// The werewolves' chosen victim, and whether the doctor's protection landed.
// When saved, nobody dies; the victim identity stays in the game-master record
// and is never rendered into agent observations.
struct NightElimination {
  PlayerId victim;
  bool saved = false;
};

struct SeerResult {
  PlayerId seer;
  PlayerId target;
  Role role = Role::Villager;
};

struct DebateTurn {
  PlayerId speaker;
  std::string utterance;
  std::map<int, int> bids;  // seat -> level, one entry per living player
};

// Non-binding poll taken after an utterance. Invisible to agents; kept for
// analytics only.
struct SyntheticTally {
  std::map<int, int> votes;  // voter seat -> target seat
};

struct VoteCast {
  PlayerId voter;
  PlayerId target;
};

struct Exile {
  PlayerId target;
};

struct NoExile {};

struct RoundSummary {
  PlayerId player;
  std::string text;
};

struct GameEnded {
  Winner winner = Winner::Villagers;
};

using EventPayload =
    std::variant<GameStarted, NightElimination, SeerResult, DebateTurn, SyntheticTally,
                 VoteCast, Exile, NoExile, RoundSummary, GameEnded>;

enum class Visibility { Public, Private };

struct GameEvent {
  int round = 0;
  Phase phase = Phase::Night;
  Visibility visibility = Visibility::Public;
  std::vector<int> recipients;  // seats; meaningful when visibility == Private
  EventPayload payload;
};

inline const char* event_type_name(const EventPayload& p) {
  struct V {
    const char* operator()(const GameStarted&) { return "game_started"; }
    const char* operator()(const NightElimination&) { return "night_elimination"; }
    const char* operator()(const SeerResult&) { return "seer_result"; }
    const char* operator()(const DebateTurn&) { return "debate_turn"; }
    const char* operator()(const SyntheticTally&) { return "synthetic_tally"; }
    const char* operator()(const VoteCast&) { return "vote_cast"; }
    const char* operator()(const Exile&) { return "exile"; }
    const char* operator()(const NoExile&) { return "no_exile"; }
    const char* operator()(const RoundSummary&) { return "round_summary"; }
    const char* operator()(const GameEnded&) { return "game_ended"; }
  };
  return std::visit(V{}, p);
}

// ---------------------------------------------------------------------------
// State

struct GameState {
  GameConfig config;
  int round = 0;
  Phase phase = Phase::Night;
  std::vector<PlayerInfo> players;  // seat-indexed; immutable after GameStarted
  std::vector<bool> alive;
  std::vector<GameEvent> history;
  std::optional<Winner> winner;
  Rng rng;  // engine draws; not part of the replayed record

  // Per-round progress, all reconstructible from the event history.
  bool night_done = false;
  bool seer_done = false;
  int debate_turns = 0;
  std::map<int, int> votes;  // voter seat -> target seat, current round
  bool vote_done = false;
  std::set<int> summarized;

  bool is_alive(PlayerId p) const {
    return p.seat >= 0 && p.seat < static_cast<int>(alive.size()) && alive[p.seat];
  }
  Role role_of(PlayerId p) const { return players.at(static_cast<size_t>(p.seat)).role; }
  const std::string& name_of(PlayerId p) const {
    return players.at(static_cast<size_t>(p.seat)).name;
  }
  std::optional<PlayerId> seat_of_name(const std::string& name) const {
    for (const auto& p : players)
      if (p.name == name) return PlayerId{p.seat};
    return std::nullopt;
  }

  std::vector<PlayerId> living() const {
    std::vector<PlayerId> out;
    for (const auto& p : players)
      if (alive[static_cast<size_t>(p.seat)]) out.push_back(PlayerId{p.seat});
    return out;
  }
  int living_count() const {
    return static_cast<int>(std::count(alive.begin(), alive.end(), true));
  }
  int living_with_role(Role r) const {
    int n = 0;
    for (const auto& p : players)
      if (alive[static_cast<size_t>(p.seat)] && p.role == r) ++n;
    return n;
  }
  int living_werewolves() const { return living_with_role(Role::Werewolf); }
  int living_non_werewolves() const { return living_count() - living_werewolves(); }
};

// Villagers win once no werewolf lives; werewolves win once they match or
// outnumber everyone else.
inline std::optional<Winner> check_win(const GameState& state) {
  const int wolves = state.living_werewolves();
  if (wolves == 0) return Winner::Villagers;
  if (wolves >= state.living_non_werewolves()) return Winner::Werewolves;
  return std::nullopt;
}

// Majority vote resolution: the unique target with strictly more than half of
// the votes cast, if any.
inline std::optional<PlayerId> tally_votes(const std::map<int, int>& votes, int living_count) {
  if (static_cast<int>(votes.size()) != living_count)
    throw InternalError("tally_votes: expected one vote per living player");
  std::map<int, int> counts;
  for (const auto& [voter, target] : votes) counts[target]++;
  const int cast = static_cast<int>(votes.size());
  for (const auto& [target, count] : counts)
    if (2 * count > cast) return PlayerId{target};
  return std::nullopt;
}

namespace detail {

inline void fail_replay(const GameEvent& e, const std::string& why) {
  throw ReplayError(std::string(event_type_name(e.payload)) + " (round " +
                    std::to_string(e.round) + ", " + to_string(e.phase) + "): " + why);
}

inline void require_tag(const GameState& s, const GameEvent& e, Phase expected) {
  if (e.round != s.round) fail_replay(e, "event round does not match state round");
  if (e.phase != expected) fail_replay(e, "event phase tag is wrong for its type");
}

inline std::map<Role, int> role_counts(const GameConfig& c) {
  return {{Role::Villager, c.villagers},
          {Role::Werewolf, c.werewolves},
          {Role::Seer, c.seers},
          {Role::Doctor, c.doctors}};
}

}  // namespace detail

// Empty pre-setup state: validated config, seeded generator, no roster yet.
// Folding a complete event log (starting with GameStarted) over this state
// reproduces the live run.
inline GameState initial_state(const GameConfig& config) {
  config.validate();
  GameState s;
  s.config = config;
  s.rng = Rng(config.seed);
  return s;
}

// Applies one event to the state, enforcing phase legality and the rules'
// bookkeeping. Throws ReplayError for anything illegal in the current state.
inline void apply_event(GameState& state, const GameEvent& event) {
  using detail::fail_replay;
  using detail::require_tag;

  if (state.phase == Phase::Ended) fail_replay(event, "game already ended");

  const bool starts_next_round =
      (std::holds_alternative<NightElimination>(event.payload) ||
       std::holds_alternative<SeerResult>(event.payload)) &&
      event.round == state.round + 1 && state.phase == Phase::Vote && state.vote_done;
  if (starts_next_round) {
    state.round += 1;
    state.phase = Phase::Night;
    state.night_done = false;
    state.seer_done = false;
    state.debate_turns = 0;
    state.votes.clear();
    state.vote_done = false;
    state.summarized.clear();
  }

  // Once a win condition holds, the only legal continuation is GameEnded.
  if (!std::holds_alternative<GameEnded>(event.payload) && !state.players.empty() &&
      check_win(state))
    fail_replay(event, "win condition already met; expected game_ended");

  if (std::holds_alternative<GameStarted>(event.payload)) {
    const auto& start = std::get<GameStarted>(event.payload);
    if (!state.history.empty()) fail_replay(event, "game_started must be the first event");
    require_tag(state, event, Phase::Night);
    const int total = state.config.total_players();
    if (static_cast<int>(start.players.size()) != total)
      fail_replay(event, "roster size does not match config");
    std::set<std::string> names;
    std::map<Role, int> counts;
    for (int i = 0; i < total; ++i) {
      const auto& p = start.players[static_cast<size_t>(i)];
      if (p.seat != i) fail_replay(event, "seats must be contiguous from 0");
      if (!names.insert(p.name).second) fail_replay(event, "duplicate display name");
      if (std::find(state.config.name_pool.begin(), state.config.name_pool.end(), p.name) ==
          state.config.name_pool.end())
        fail_replay(event, "name '" + p.name + "' is not in the configured pool");
      counts[p.role]++;
    }
    if (counts != detail::role_counts(state.config))
      fail_replay(event, "role multiset does not match config counts");
    if (!state.players.empty()) {
      // Already set up (live run records its own start event): must agree.
      for (int i = 0; i < total; ++i) {
        const auto& a = state.players[static_cast<size_t>(i)];
        const auto& b = start.players[static_cast<size_t>(i)];
        if (a.name != b.name || a.role != b.role)
          fail_replay(event, "roster does not match existing setup");
      }
    } else {
      state.players = start.players;
      state.alive.assign(static_cast<size_t>(total), true);
    }
    state.history.push_back(event);
    return;
  }

  if (state.players.empty()) fail_replay(event, "no game_started event yet");

  if (const auto* sr = std::get_if<SeerResult>(&event.payload)) {
    require_tag(state, event, Phase::Night);
    if (state.phase != Phase::Night) fail_replay(event, "not in night phase");
    if (state.seer_done) fail_replay(event, "seer already investigated this round");
    if (!state.is_alive(sr->seer)) fail_replay(event, "seer is not alive");
    if (state.role_of(sr->seer) != Role::Seer) fail_replay(event, "investigator is not the seer");
    if (!state.is_alive(sr->target)) fail_replay(event, "investigation target is not alive");
    if (state.role_of(sr->target) != sr->role)
      fail_replay(event, "recorded role does not match the target's true role");
    state.seer_done = true;
  } else if (const auto* ne = std::get_if<NightElimination>(&event.payload)) {
    require_tag(state, event, Phase::Night);
    if (state.phase != Phase::Night) fail_replay(event, "not in night phase");
    if (state.night_done) fail_replay(event, "night already resolved this round");
    if (!state.is_alive(ne->victim)) fail_replay(event, "victim is not alive");
    if (state.role_of(ne->victim) == Role::Werewolf)
      fail_replay(event, "werewolves cannot target a werewolf");
    if (!ne->saved) state.alive[static_cast<size_t>(ne->victim.seat)] = false;
    state.night_done = true;
    if (!check_win(state)) {
      state.phase = Phase::Debate;
      state.debate_turns = 0;
    }
  } else if (const auto* dt = std::get_if<DebateTurn>(&event.payload)) {
    require_tag(state, event, Phase::Debate);
    if (state.phase != Phase::Debate) fail_replay(event, "not in debate phase");
    if (state.debate_turns >= state.config.debate_cap)
      fail_replay(event, "debate cap already reached");
    if (!state.is_alive(dt->speaker)) fail_replay(event, "speaker is not alive");
    const auto living = state.living();
    if (dt->bids.size() != living.size())
      fail_replay(event, "expected exactly one bid per living player");
    int max_level = -1;
    for (const auto& [seat, level] : dt->bids) {
      if (!state.is_alive(PlayerId{seat})) fail_replay(event, "bid from a dead player");
      if (level < 0 || level > 4) fail_replay(event, "bid level out of range 0..4");
      max_level = std::max(max_level, level);
    }
    if (dt->bids.at(dt->speaker.seat) != max_level)
      fail_replay(event, "speaker does not hold a maximal bid");
    state.debate_turns += 1;
  } else if (const auto* st = std::get_if<SyntheticTally>(&event.payload)) {
    require_tag(state, event, Phase::Debate);
    if (state.phase != Phase::Debate) fail_replay(event, "not in debate phase");
    if (state.debate_turns == 0) fail_replay(event, "tally before any utterance");
    for (const auto& [voter, target] : st->votes) {
      if (!state.is_alive(PlayerId{voter})) fail_replay(event, "synthetic vote from a dead player");
      if (!state.is_alive(PlayerId{target})) fail_replay(event, "synthetic vote for a dead player");
      if (voter == target) fail_replay(event, "synthetic self-vote");
    }
    // No gameplay effect by design.
  } else if (const auto* vc = std::get_if<VoteCast>(&event.payload)) {
    require_tag(state, event, Phase::Vote);
    if (state.phase == Phase::Debate) {
      if (state.debate_turns != state.config.debate_cap)
        fail_replay(event, "voting before the debate cap was reached");
      state.phase = Phase::Vote;
      state.votes.clear();
    } else if (state.phase != Phase::Vote || state.vote_done) {
      fail_replay(event, "not in voting phase");
    }
    if (!state.is_alive(vc->voter)) fail_replay(event, "vote from a dead player");
    if (!state.is_alive(vc->target)) fail_replay(event, "vote for a dead player");
    if (vc->voter == vc->target) fail_replay(event, "self-votes are forbidden");
    if (state.votes.count(vc->voter.seat)) fail_replay(event, "player already voted");
    state.votes[vc->voter.seat] = vc->target.seat;
  } else if (const auto* ex = std::get_if<Exile>(&event.payload)) {
    require_tag(state, event, Phase::Vote);
    if (state.phase != Phase::Vote || state.vote_done) fail_replay(event, "not in voting phase");
    if (static_cast<int>(state.votes.size()) != state.living_count())
      fail_replay(event, "exile before all living players voted");
    auto majority = tally_votes(state.votes, state.living_count());
    if (!majority) fail_replay(event, "exile without a strict majority");
    if (*majority != ex->target) fail_replay(event, "exile target does not match the tally");
    state.alive[static_cast<size_t>(ex->target.seat)] = false;
    state.vote_done = true;
  } else if (std::holds_alternative<NoExile>(event.payload)) {
    require_tag(state, event, Phase::Vote);
    if (state.phase != Phase::Vote || state.vote_done) fail_replay(event, "not in voting phase");
    if (static_cast<int>(state.votes.size()) != state.living_count())
      fail_replay(event, "vote resolution before all living players voted");
    if (tally_votes(state.votes, state.living_count()))
      fail_replay(event, "a strict majority exists; no_exile is wrong");
    state.vote_done = true;
  } else if (const auto* rs = std::get_if<RoundSummary>(&event.payload)) {
    require_tag(state, event, Phase::Vote);
    if (state.phase != Phase::Vote || !state.vote_done)
      fail_replay(event, "summaries come after the vote is resolved");
    if (!state.is_alive(rs->player)) fail_replay(event, "summary from a dead player");
    if (state.summarized.count(rs->player.seat))
      fail_replay(event, "player already summarized this round");
    state.summarized.insert(rs->player.seat);
  } else if (const auto* ge = std::get_if<GameEnded>(&event.payload)) {
    if (event.round != state.round) fail_replay(event, "event round does not match state round");
    auto w = check_win(state);
    if (!w) fail_replay(event, "no win condition holds");
    if (*w != ge->winner) fail_replay(event, "recorded winner does not match the rules");
    state.winner = *w;
    state.phase = Phase::Ended;
  }

  state.history.push_back(event);
}

// Sets up a fresh game: roles assigned uniformly at random, display names
// sampled from the pool without replacement, both from the config seed.
//
// Draw order is fixed (names first, then roles) so that logs replay across
// platforms and versions.
inline GameState new_game(const GameConfig& config) {
  GameState state = initial_state(config);
  const int total = config.total_players();

  std::vector<std::string> pool = config.name_pool;
  for (int i = 0; i < total; ++i) {
    const auto j = static_cast<size_t>(i) +
                   static_cast<size_t>(state.rng.below(pool.size() - static_cast<size_t>(i)));
    std::swap(pool[static_cast<size_t>(i)], pool[j]);
  }

  std::vector<Role> roles;
  roles.insert(roles.end(), static_cast<size_t>(config.villagers), Role::Villager);
  roles.insert(roles.end(), static_cast<size_t>(config.werewolves), Role::Werewolf);
  roles.insert(roles.end(), static_cast<size_t>(config.seers), Role::Seer);
  roles.insert(roles.end(), static_cast<size_t>(config.doctors), Role::Doctor);
  state.rng.shuffle(roles);

  GameStarted start;
  for (int i = 0; i < total; ++i)
    start.players.push_back(
        {i, pool[static_cast<size_t>(i)], roles[static_cast<size_t>(i)]});

  apply_event(state, GameEvent{0, Phase::Night, Visibility::Public, {}, std::move(start)});
  return state;
}

}  // namespace werewolf
