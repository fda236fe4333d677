#pragma once

// Shared test utilities. The centerpiece is an independent log-grammar
// validator: it re-derives aliveness, phase structure, and win conditions
// from raw events with its own bookkeeping (no GameState, no apply_event),
// so engine bugs cannot hide behind their own replay logic.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "werewolf/werewolf.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// Closed-form Shannon entropy of a count vector, written independently of
// the library implementation: H = log2(T) - (sum_i c_i log2 c_i) / T.
inline double entropy_oracle(const std::vector<int>& counts) {
  long long total = 0;
  for (int c : counts) total += c;
  double weighted = 0.0;
  for (int c : counts)
    if (c > 0) weighted += static_cast<double>(c) * std::log2(static_cast<double>(c));
  return std::log2(static_cast<double>(total)) - weighted / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Independent grammar validation of a finished (or prefix) game log.

struct GrammarReport {
  std::vector<std::string> errors;
  bool finished = false;
  int rounds_seen = 0;  // nights processed

  bool ok() const { return errors.empty(); }
  std::string joined() const {
    std::string out;
    for (const auto& e : errors) {
      out += e;
      out += '\n';
    }
    return out;
  }
};

inline GrammarReport validate_log_grammar(const werewolf::GameLog& log) {
  using namespace werewolf;
  GrammarReport rep;
  auto fail = [&](size_t idx, const std::string& what) {
    rep.errors.push_back("event " + std::to_string(idx) + ": " + what);
  };

  enum class Sect { ExpectStart, Night, Debate, Vote, AfterVote, ExpectEnd, Done };
  Sect sect = Sect::ExpectStart;

  std::vector<std::string> names;
  std::vector<Role> roles;
  std::vector<bool> alive;
  int round = 0;
  bool seer_seen = false;
  int turns = 0;
  bool tally_due = false;  // a synthetic tally must follow the last utterance
  std::map<int, int> votes;
  std::set<int> summarizers;

  auto living_seats = [&]() {
    std::vector<int> out;
    for (size_t i = 0; i < alive.size(); ++i)
      if (alive[i]) out.push_back(static_cast<int>(i));
    return out;
  };
  auto wolves_alive = [&]() {
    int n = 0;
    for (size_t i = 0; i < alive.size(); ++i)
      if (alive[i] && roles[i] == Role::Werewolf) ++n;
    return n;
  };
  auto others_alive = [&]() {
    int n = 0;
    for (size_t i = 0; i < alive.size(); ++i)
      if (alive[i] && roles[i] != Role::Werewolf) ++n;
    return n;
  };
  auto win_now = [&]() { return wolves_alive() == 0 || wolves_alive() >= others_alive(); };
  auto seat_ok = [&](PlayerId p) {
    return p.seat >= 0 && p.seat < static_cast<int>(alive.size());
  };

  for (size_t idx = 0; idx < log.events.size(); ++idx) {
    const GameEvent& e = log.events[idx];

    if (sect == Sect::Done) {
      fail(idx, "event after game_ended");
      break;
    }

    if (sect == Sect::ExpectStart) {
      const auto* gs = std::get_if<GameStarted>(&e.payload);
      if (!gs) {
        fail(idx, "first event must be game_started");
        break;
      }
      if (e.round != 0) fail(idx, "game_started must carry round 0");
      if (e.visibility != Visibility::Public) fail(idx, "game_started must be public");
      int v = 0, w = 0, s = 0, d = 0;
      std::set<std::string> uniq;
      for (size_t i = 0; i < gs->players.size(); ++i) {
        const auto& p = gs->players[i];
        if (p.seat != static_cast<int>(i)) fail(idx, "seats not contiguous from 0");
        if (!uniq.insert(p.name).second) fail(idx, "duplicate player name " + p.name);
        switch (p.role) {
          case Role::Villager: ++v; break;
          case Role::Werewolf: ++w; break;
          case Role::Seer: ++s; break;
          case Role::Doctor: ++d; break;
        }
        names.push_back(p.name);
        roles.push_back(p.role);
        alive.push_back(true);
      }
      if (v != log.config.villagers || w != log.config.werewolves || s != log.config.seers ||
          d != log.config.doctors)
        fail(idx, "role counts do not match the config");
      sect = Sect::Night;
      round = 0;
      seer_seen = false;
      continue;
    }

    if (sect == Sect::ExpectEnd) {
      const auto* ge = std::get_if<GameEnded>(&e.payload);
      if (!ge) {
        fail(idx, "win condition holds; expected game_ended, got " +
                      std::string(event_type_name(e.payload)));
        break;
      }
      if (e.round != round) fail(idx, "game_ended round tag mismatch");
      const Winner expect = wolves_alive() == 0 ? Winner::Villagers : Winner::Werewolves;
      if (!win_now()) fail(idx, "game_ended without a win condition");
      if (ge->winner != expect) fail(idx, "recorded winner contradicts the living roster");
      rep.finished = true;
      sect = Sect::Done;
      continue;
    }

    switch (sect) {
      case Sect::Night: {
        if (const auto* sr = std::get_if<SeerResult>(&e.payload)) {
          if (e.round != round) fail(idx, "seer_result round tag mismatch");
          if (e.phase != Phase::Night) fail(idx, "seer_result must be tagged night");
          if (seer_seen) fail(idx, "two seer results in one night");
          seer_seen = true;
          if (!seat_ok(sr->seer) || !alive[static_cast<size_t>(sr->seer.seat)])
            fail(idx, "seer not alive");
          else if (roles[static_cast<size_t>(sr->seer.seat)] != Role::Seer)
            fail(idx, "investigator is not the seer");
          if (!seat_ok(sr->target) || !alive[static_cast<size_t>(sr->target.seat)])
            fail(idx, "investigated target not alive");
          else if (roles[static_cast<size_t>(sr->target.seat)] != sr->role)
            fail(idx, "seer_result records the wrong role");
          if (sr->seer == sr->target) fail(idx, "seer investigated themself");
          if (e.visibility != Visibility::Private ||
              e.recipients != std::vector<int>{sr->seer.seat})
            fail(idx, "seer_result must be private to the seer");
        } else if (const auto* ne = std::get_if<NightElimination>(&e.payload)) {
          if (e.round != round) fail(idx, "night_elimination round tag mismatch");
          if (e.phase != Phase::Night) fail(idx, "night_elimination must be tagged night");
          if (!seat_ok(ne->victim) || !alive[static_cast<size_t>(ne->victim.seat)])
            fail(idx, "victim not alive");
          else if (roles[static_cast<size_t>(ne->victim.seat)] == Role::Werewolf)
            fail(idx, "werewolves targeted a werewolf");
          if (e.visibility != Visibility::Private) fail(idx, "night_elimination must be private");
          std::vector<int> wolves;
          for (size_t i = 0; i < roles.size(); ++i)
            if (alive[i] && roles[i] == Role::Werewolf) wolves.push_back(static_cast<int>(i));
          if (e.recipients != wolves) fail(idx, "night_elimination recipients are not the pack");
          if (!ne->saved) alive[static_cast<size_t>(ne->victim.seat)] = false;
          rep.rounds_seen += 1;
          if (win_now()) {
            sect = Sect::ExpectEnd;
          } else {
            sect = Sect::Debate;
            turns = 0;
            tally_due = false;
          }
        } else {
          fail(idx, std::string("night section cannot contain ") + event_type_name(e.payload));
          return rep;
        }
        break;
      }

      case Sect::Debate: {
        if (const auto* dt = std::get_if<DebateTurn>(&e.payload)) {
          if (tally_due) fail(idx, "utterance before the straw poll of the previous turn");
          if (e.round != round) fail(idx, "debate_turn round tag mismatch");
          if (e.phase != Phase::Debate) fail(idx, "debate_turn must be tagged debate");
          if (e.visibility != Visibility::Public) fail(idx, "debate_turn must be public");
          if (turns >= log.config.debate_cap) fail(idx, "debate cap exceeded");
          if (!seat_ok(dt->speaker) || !alive[static_cast<size_t>(dt->speaker.seat)])
            fail(idx, "dead speaker");
          std::set<int> expect_bidders;
          for (int s_ : living_seats()) expect_bidders.insert(s_);
          std::set<int> got_bidders;
          int max_level = -1;
          for (const auto& [seat, level] : dt->bids) {
            got_bidders.insert(seat);
            if (level < 0 || level > 4) fail(idx, "bid level out of range");
            if (level > max_level) max_level = level;
          }
          if (got_bidders != expect_bidders)
            fail(idx, "bid set is not exactly the living players");
          const auto it = dt->bids.find(dt->speaker.seat);
          if (it == dt->bids.end() || it->second != max_level)
            fail(idx, "speaker does not hold the maximal bid");
          turns += 1;
          tally_due = log.config.synthetic_votes;
        } else if (const auto* st = std::get_if<SyntheticTally>(&e.payload)) {
          if (!log.config.synthetic_votes) fail(idx, "synthetic tally while straw polls are off");
          if (!tally_due) fail(idx, "straw poll without a preceding utterance");
          if (e.round != round) fail(idx, "synthetic_tally round tag mismatch");
          if (e.visibility != Visibility::Private) fail(idx, "synthetic_tally must be private");
          std::set<int> voters;
          for (const auto& [voter, target] : st->votes) {
            voters.insert(voter);
            if (voter < 0 || voter >= static_cast<int>(alive.size()) ||
                !alive[static_cast<size_t>(voter)])
              fail(idx, "straw vote from a dead player");
            if (target < 0 || target >= static_cast<int>(alive.size()) ||
                !alive[static_cast<size_t>(target)])
              fail(idx, "straw vote for a dead player");
            if (voter == target) fail(idx, "straw self-vote");
          }
          std::set<int> expect;
          for (int s_ : living_seats()) expect.insert(s_);
          if (voters != expect) fail(idx, "straw poll is not exactly the living players");
          tally_due = false;
        } else if (std::holds_alternative<VoteCast>(e.payload)) {
          if (tally_due) fail(idx, "vote before the straw poll of the last utterance");
          if (turns != log.config.debate_cap)
            fail(idx, "voting started before the debate cap was reached");
          sect = Sect::Vote;
          votes.clear();
          idx -= 1;  // reprocess this event in the vote section
        } else {
          fail(idx, std::string("debate section cannot contain ") + event_type_name(e.payload));
          return rep;
        }
        break;
      }

      case Sect::Vote: {
        if (const auto* vc = std::get_if<VoteCast>(&e.payload)) {
          if (e.round != round) fail(idx, "vote_cast round tag mismatch");
          if (e.phase != Phase::Vote) fail(idx, "vote_cast must be tagged vote");
          if (e.visibility != Visibility::Public) fail(idx, "vote_cast must be public");
          if (!seat_ok(vc->voter) || !alive[static_cast<size_t>(vc->voter.seat)])
            fail(idx, "vote from a dead player");
          if (!seat_ok(vc->target) || !alive[static_cast<size_t>(vc->target.seat)])
            fail(idx, "vote for a dead player");
          if (vc->voter == vc->target) fail(idx, "self-vote");
          if (votes.count(vc->voter.seat)) fail(idx, "double vote");
          votes[vc->voter.seat] = vc->target.seat;
        } else if (std::holds_alternative<Exile>(e.payload) ||
                   std::holds_alternative<NoExile>(e.payload)) {
          if (e.round != round) fail(idx, "vote resolution round tag mismatch");
          if (votes.size() != living_seats().size())
            fail(idx, "vote resolved before every living player voted");
          std::map<int, int> counts;
          for (const auto& [voter, target] : votes) counts[target] += 1;
          int majority = -1;
          for (const auto& [target, count] : counts)
            if (2 * count > static_cast<int>(votes.size())) majority = target;
          if (const auto* ex = std::get_if<Exile>(&e.payload)) {
            if (majority < 0) fail(idx, "exile without a strict majority");
            else if (ex->target.seat != majority) fail(idx, "exile target contradicts the tally");
            if (seat_ok(ex->target)) alive[static_cast<size_t>(ex->target.seat)] = false;
          } else if (majority >= 0) {
            fail(idx, "no_exile despite a strict majority");
          }
          summarizers.clear();
          if (win_now()) sect = Sect::ExpectEnd;
          else sect = Sect::AfterVote;
        } else {
          fail(idx, std::string("vote section cannot contain ") + event_type_name(e.payload));
          return rep;
        }
        break;
      }

      case Sect::AfterVote: {
        if (const auto* rs = std::get_if<RoundSummary>(&e.payload)) {
          if (e.round != round) fail(idx, "round_summary round tag mismatch");
          if (!seat_ok(rs->player) || !alive[static_cast<size_t>(rs->player.seat)])
            fail(idx, "summary from a dead player");
          if (!summarizers.insert(rs->player.seat).second) fail(idx, "duplicate summary");
          if (e.visibility != Visibility::Private ||
              e.recipients != std::vector<int>{rs->player.seat})
            fail(idx, "round_summary must be private to its author");
          if (rs->text.empty()) fail(idx, "empty summary recorded");
        } else if (std::holds_alternative<SeerResult>(e.payload) ||
                   std::holds_alternative<NightElimination>(e.payload)) {
          if (e.round != round + 1) {
            fail(idx, "next night must carry round " + std::to_string(round + 1));
            return rep;
          }
          round += 1;
          seer_seen = false;
          sect = Sect::Night;
          idx -= 1;  // reprocess in the night section
        } else {
          fail(idx, std::string("between rounds the log cannot contain ") +
                        event_type_name(e.payload));
          return rep;
        }
        break;
      }

      default: break;
    }
  }

  if (sect != Sect::Done && rep.finished)
    rep.errors.push_back("internal validator inconsistency");
  return rep;
}

// ---------------------------------------------------------------------------
// A fully scriptable policy: tests supply lambdas per action family.

struct PuppetPolicy : werewolf::Policy {
  std::function<int(const werewolf::AgentView&)> on_bid = [](const werewolf::AgentView&) {
    return 0;
  };
  std::function<std::string(const werewolf::AgentView&)> on_speak =
      [](const werewolf::AgentView&) { return std::string("I observe quietly."); };
  std::function<std::string(const werewolf::AgentView&)> on_vote =
      [](const werewolf::AgentView& v) { return v.request.candidates.front(); };
  std::function<std::string(const werewolf::AgentView&)> on_night =
      [](const werewolf::AgentView& v) { return v.request.candidates.front(); };
  std::function<std::string(const werewolf::AgentView&)> on_summarize =
      [](const werewolf::AgentView&) { return std::string(); };

  int bid(const werewolf::AgentView& v) override { return on_bid(v); }
  std::string speak(const werewolf::AgentView& v) override { return on_speak(v); }
  std::string vote(const werewolf::AgentView& v) override { return on_vote(v); }
  std::string night_action(const werewolf::AgentView& v) override { return on_night(v); }
  std::string summarize(const werewolf::AgentView& v) override { return on_summarize(v); }
};

// ---------------------------------------------------------------------------
// Self-cleaning scratch directory.

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("werewolf_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Canned games.

inline werewolf::GameLog run_random_game(uint64_t seed,
                                         std::function<void(werewolf::GameConfig&)> tweak = {}) {
  werewolf::GameConfig config;
  config.seed = seed;
  if (tweak) tweak(config);
  werewolf::GameMaster gm(config, [](const werewolf::PlayerInfo&) {
    return std::make_shared<werewolf::RandomPolicy>();
  });
  gm.run();
  return gm.log();
}

inline werewolf::GameLog run_heuristic_game(uint64_t seed,
                                            std::function<void(werewolf::GameConfig&)> tweak = {}) {
  werewolf::GameConfig config;
  config.seed = seed;
  if (tweak) tweak(config);
  werewolf::GameMaster gm(config, [](const werewolf::PlayerInfo&) {
    return std::make_shared<werewolf::HeuristicPolicy>();
  });
  gm.run();
  return gm.log();
}

// Strips the header and any straw-poll lines from a serialized log; what is
// left is the gameplay-event subsequence used by the non-interference check.
inline std::vector<std::string> gameplay_lines(const std::string& jsonl) {
  std::vector<std::string> out;
  size_t pos = 0;
  bool first = true;
  while (pos < jsonl.size()) {
    size_t nl = jsonl.find('\n', pos);
    if (nl == std::string::npos) nl = jsonl.size();
    std::string line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    if (first) {
      first = false;  // config header
      continue;
    }
    if (line.find("\"type\":\"synthetic_tally\"") != std::string::npos) continue;
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace testutil
